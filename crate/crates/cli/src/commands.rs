use std::fmt::Write as _;
use std::fs;
use std::io::Read as _;
use std::path::Path;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use hibireg_core::engine::{nonplanar_bounds, regularity, Budget, Method, Mode};
use hibireg_core::export::{export_cas_script, export_hasse_graph, file_name, Dialect};
use hibireg_core::hilbert::{
    beta_via_chains, count_maximal_chains, f_vector, flag_beta, h_from_beta, h_from_f, regularity_from_h,
};
use hibireg_core::planar::{
    build_labeling, chain_descents, max_cyclic_squares, max_descent_cardinality, saturated_chains, try_embed,
    upper_chain, verify_el, Planarity,
};
use hibireg_core::sweep::{sweep_corpus, MAX_SWEEP_SIZE};
use hibireg_core::{fixtures, parse_poset, DescentSet, DistLattice, Poset};

use crate::{Command, CommonArgs, Format, InputArgs};

/// Lattices up to this size get an exhaustive chain listing in `verify`.
const EXHAUSTIVE_CHAIN_LIMIT: usize = 60;

pub fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Reg { input, common, check } => reg(&input, &common, check),
        Command::Hvector { input, common } => hvector(&input, &common),
        Command::Verify { input, common } => verify(&input, &common),
        Command::Export { input, dialect, out } => export(&input, &dialect, &out),
        Command::Sweep { size, common } => sweep(size, &common),
    }
}

fn budget(common: &CommonArgs) -> Result<Budget> {
    let mut b = Budget::default();
    if let Some(n) = common.budget {
        if n == 0 {
            bail!("--budget must be positive");
        }
        b.max_enumeration = n;
    }
    Ok(b)
}

/// The poset and a file-name stem describing where it came from.
fn load(input: &InputArgs) -> Result<(Poset, String)> {
    if let Some(name) = &input.builtin {
        let p = fixtures::builtin(name).with_context(|| format!("builtin `{name}`"))?;
        let stem: String = name
            .trim()
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c.to_ascii_lowercase() } else { '-' })
            .collect();
        return Ok((p, stem));
    }
    let path = input.input.as_deref().expect("clap requires one input");
    let (text, stem) = if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).context("reading standard input")?;
        (s, "stdin".to_string())
    } else {
        let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
        let stem = Path::new(path).file_stem().map_or("poset".into(), |s| s.to_string_lossy().into_owned());
        (text, stem)
    };
    let p = parse_poset(&text).with_context(|| format!("parsing {path}"))?;
    Ok((p, stem))
}

fn lattice(p: &Poset, budget: &Budget) -> Result<DistLattice> {
    Ok(DistLattice::birkhoff_with_cap(p, budget.max_lattice)?)
}

fn reg(input: &InputArgs, common: &CommonArgs, check: bool) -> Result<ExitCode> {
    let (p, _) = load(input)?;
    let budget = budget(common)?;
    let mode = if check { Mode::Verify } else { Mode::Production };
    let report = hibireg_core::regularity_of_poset(&p, &budget, mode);
    match common.format {
        Format::Text => {
            if report.method == Method::BoundsOnly {
                println!("bounds-only: budget exhausted, exact value unavailable");
            }
            print!("{}", report.to_text());
        }
        Format::Records => print!("{}", report.to_records()),
    }
    Ok(if report.all_checks_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn hvector(input: &InputArgs, common: &CommonArgs) -> Result<ExitCode> {
    let (p, _) = load(input)?;
    let budget = budget(common)?;
    let l = lattice(&p, &budget)?;
    let beta = flag_beta(&p, budget.max_enumeration)?;
    let hb = h_from_beta(&beta);
    let hf = h_from_f(&f_vector(&l, budget.max_enumeration)?)?;
    let agree = hb == hf;
    let mut out = String::new();
    match common.format {
        Format::Text => {
            if agree {
                writeln!(out, "{hb} (both paths agree)")?;
            } else {
                writeln!(out, "{hb} (linear extensions)")?;
                writeln!(out, "{hf} (order complex)")?;
                writeln!(out, "MISMATCH between the two h-vector paths")?;
            }
            writeln!(out, "deg h: {}", regularity_from_h(&hb))?;
            for line in beta.report_lines() {
                writeln!(out, "{line}")?;
            }
        }
        Format::Records => {
            let join = |h: &hibireg_core::HVector| {
                h.coefficients().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" ")
            };
            writeln!(out, "h_extensions={}", join(&hb))?;
            writeln!(out, "h_order_complex={}", join(&hf))?;
            writeln!(out, "agree={agree}")?;
            writeln!(out, "degree={}", regularity_from_h(&hb))?;
            for (s, c) in beta.iter() {
                writeln!(out, "beta.{s}={c}")?;
            }
        }
    }
    print!("{out}");
    Ok(if agree { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

struct Verdicts {
    lines: Vec<(String, bool, String)>,
}

impl Verdicts {
    fn push(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.lines.push((name.to_string(), passed, detail.into()));
    }

    fn all_pass(&self) -> bool {
        self.lines.iter().all(|(_, p, _)| *p)
    }
}

fn verify(input: &InputArgs, common: &CommonArgs) -> Result<ExitCode> {
    let (p, _) = load(input)?;
    let budget = budget(common)?;
    let l = lattice(&p, &budget)?;
    let emb = match try_embed(&l) {
        Planarity::NotPlanar { witness } => {
            let (lo, hi) = nonplanar_bounds(&p);
            match common.format {
                Format::Text => {
                    println!("not planar; witness antichain {}; bounds ({lo},{hi})", p.format_set(witness))
                }
                Format::Records => {
                    println!("planar=false\nwitness={}\nlower_bound={lo}\nupper_bound={hi}", p.format_set(witness))
                }
            }
            return Ok(ExitCode::SUCCESS);
        }
        Planarity::Planar(emb) => emb,
    };

    let mut v = Verdicts { lines: Vec::new() };
    v.push("embedding", emb.validate(&l).is_ok(), format!("{} elements", l.len()));
    let lam = build_labeling(&l, &emb)?;
    let el = verify_el(&l, &lam);
    v.push("el-labeling", el.is_ok(), el.err().map_or("every interval".into(), |f| format!("{f:?}")));

    let c0 = upper_chain(&l, &emb);
    let increasing = if l.len() <= EXHAUSTIVE_CHAIN_LIMIT {
        saturated_chains(&l, l.bottom(), l.top(), budget.max_enumeration)?
            .iter()
            .filter(|c| chain_descents(c, &lam).is_empty())
            .map(|c| c.as_slice() == c0.vertices())
            .collect::<Vec<_>>()
    } else {
        let beta = beta_via_chains(&l, &lam, budget.max_enumeration)?;
        let n = beta.get(&DescentSet::default());
        vec![true; usize::try_from(n.to_u64_digits().first().copied().unwrap_or(0))?]
    };
    v.push(
        "upper-chain-unique",
        increasing == [true],
        format!("increasing: {}, maximal chains: {}", increasing.len(), count_maximal_chains(&l)),
    );

    let (squares, _) = max_cyclic_squares(&l, &emb)?;
    let (descents, _) = max_descent_cardinality(&l, &lam);
    match flag_beta(&p, budget.max_enumeration) {
        Ok(beta) => {
            let deg = regularity_from_h(&h_from_beta(&beta));
            v.push(
                "three-way",
                squares == descents && descents == deg,
                format!("squares {squares}, descents {descents}, deg h {deg}"),
            );
            let by_chains = beta_via_chains(&l, &lam, budget.max_enumeration)?;
            v.push("chain-flag-vector", by_chains == beta, "descent sets of chains and extensions");
        }
        Err(e) => v.push("three-way", squares == descents, format!("squares {squares}, descents {descents}; {e}")),
    }
    let report = regularity(&l, &budget, Mode::Production);

    let mut out = String::new();
    match common.format {
        Format::Text => {
            writeln!(
                out,
                "planar; chains {} and {}",
                p.format_set(emb.horizontal_chain().iter().copied().collect()),
                p.format_set(emb.vertical_chain().iter().copied().collect())
            )?;
            for (name, passed, detail) in &v.lines {
                writeln!(out, "check {name}: {} ({detail})", if *passed { "pass" } else { "FAIL" })?;
            }
            writeln!(out, "max descents: {descents}")?;
            writeln!(out, "max squares: {squares}")?;
            if let Some(r) = report.value {
                writeln!(out, "regularity: {r}")?;
            }
            writeln!(out, "verdict: {}", if v.all_pass() { "pass" } else { "FAIL" })?;
        }
        Format::Records => {
            writeln!(out, "planar=true")?;
            for (name, passed, _) in &v.lines {
                writeln!(out, "check.{name}={passed}")?;
            }
            writeln!(out, "max_descents={descents}")?;
            writeln!(out, "max_squares={squares}")?;
            writeln!(out, "verdict={}", v.all_pass())?;
        }
    }
    print!("{out}");
    Ok(if v.all_pass() { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

fn export(input: &InputArgs, dialect: &str, out: &Path) -> Result<ExitCode> {
    let (p, stem) = load(input)?;
    let dialect: Dialect = dialect.parse()?;
    let l = lattice(&p, &Budget::default())?;
    let planarity = try_embed(&l);
    let emb = planarity.embedding();
    let lam = emb.map(|e| build_labeling(&l, e)).transpose()?;
    fs::create_dir_all(out).with_context(|| format!("creating {}", out.display()))?;
    let script = out.join(file_name(&l, &stem, dialect.extension()));
    let graph = out.join(file_name(&l, &stem, "dot"));
    fs::write(&script, export_cas_script(&l, dialect)).with_context(|| format!("writing {}", script.display()))?;
    fs::write(&graph, export_hasse_graph(&l, emb, lam.as_ref()))
        .with_context(|| format!("writing {}", graph.display()))?;
    println!("{}", script.display());
    println!("{}", graph.display());
    Ok(ExitCode::SUCCESS)
}

fn sweep(size: usize, common: &CommonArgs) -> Result<ExitCode> {
    if size == 0 || size > MAX_SWEEP_SIZE {
        bail!("--size must be between 1 and {MAX_SWEEP_SIZE}");
    }
    let summary = sweep_corpus(size, &budget(common)?);
    match common.format {
        Format::Text => print!("{}", summary.to_text()),
        Format::Records => print!("{}", summary.to_records()),
    }
    Ok(if summary.total_failures() == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
}
