//! `hibireg`: regularity of Hibi rings from the command line.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 usage or input
//! error.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "hibireg", version, about = "Regularity of Hibi rings of finite distributive lattices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Regularity report with value, bounds, certificates and blocks.
    Reg {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
        /// Recompute closed forms independently and fail on disagreement.
        #[arg(long)]
        check: bool,
    },
    /// h-vector from linear extensions and from the order complex.
    Hvector {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Planarity, EL-labeling and regularity cross-checks.
    Verify {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Write a computer-algebra script and a Graphviz file.
    Export {
        #[command(flatten)]
        input: InputArgs,
        /// Script dialect: generic, macaulay2 or singular.
        #[arg(long, default_value = "generic")]
        dialect: String,
        /// Output directory.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Check every poset up to the given size.
    Sweep {
        #[arg(long, default_value_t = 4)]
        size: usize,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct InputArgs {
    /// Poset file, or `-` for standard input.
    #[arg(short, long)]
    input: Option<String>,
    /// Named poset: `antichain N`, `chain N`, `boolean N`, `grid AxB`,
    /// `cyclic R[,K]`, `example`.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Cap on enumerated linear extensions or chain pairs.
    #[arg(long)]
    budget: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Records,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
