use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

fn hibireg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hibireg")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn reg_boolean_uses_closed_form() {
    let o = hibireg(&["reg", "--builtin", "antichain 4"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("value: 3 (boolean-closed-form)\n"));
}

#[test]
fn reg_example_value_and_bounds() {
    let o = hibireg(&["reg", "--builtin", "example", "--check"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("value: 3 (h-vector)\n"));
    assert!(s.contains("bounds: [2, 4]\n"));
}

#[test]
fn reg_chain_is_zero() {
    let o = hibireg(&["reg", "--builtin", "chain 4", "--format", "records"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\nvalue=0\n"));
}

#[test]
fn reg_budget_exhaustion_prints_banner() {
    let o = hibireg(&["reg", "--builtin", "example", "--budget", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.starts_with("bounds-only"));
    assert!(s.contains("bounds: [2, 4]"));
}

#[test]
fn reg_reads_files_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ex.poset");
    fs::write(&path, "p1<p4; p2<p4; p2<p5; p3<p5\n").unwrap();
    let o = hibireg(&["reg", "-i", path.to_str().unwrap()]);
    assert!(stdout(&o).contains("value: 3"));

    let mut child = Command::new(env!("CARGO_BIN_EXE_hibireg"))
        .args(["reg", "--input", "-"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"a\nb\nc\n").unwrap();
    let o = child.wait_with_output().unwrap();
    assert!(stdout(&o).contains("value: 2 (boolean-closed-form)"));
}

#[test]
fn parse_and_usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cycle.poset");
    fs::write(&path, "a<b<a\n").unwrap();
    assert_eq!(hibireg(&["reg", "-i", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(hibireg(&["reg", "--builtin", "torus 3"]).status.code(), Some(2));
    assert_eq!(hibireg(&["reg"]).status.code(), Some(2));
    assert_eq!(hibireg(&["sweep", "--size", "9"]).status.code(), Some(2));
    assert_eq!(hibireg(&["export", "--builtin", "chain 2", "--dialect", "maple"]).status.code(), Some(2));
}

#[test]
fn hvector_paths_agree() {
    let o = hibireg(&["hvector", "--builtin", "boolean 3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("h: 1 4 1 (both paths agree)\n"));
    assert!(stdout(&hibireg(&["hvector", "--builtin", "chain 3"])).starts_with("h: 1 (both paths agree)\n"));
    assert!(stdout(&hibireg(&["hvector", "--builtin", "example"])).contains("deg h: 3\n"));
}

#[test]
fn verify_outputs() {
    let o = hibireg(&["verify", "--builtin", "boolean 3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "not planar; witness antichain {p1,p2,p3}; bounds (2,2)\n");

    let o = hibireg(&["verify", "--builtin", "grid 2x3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.ends_with("verdict: pass\n"));
    assert!(!s.contains("FAIL"));

    let s = stdout(&hibireg(&["verify", "--builtin", "antichain 2"]));
    assert!(s.contains("max descents: 1\n"));
    assert!(s.ends_with("verdict: pass\n"));
}

#[test]
fn sweep_counts() {
    let o = hibireg(&["sweep", "--size", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("total: 24 posets, 0 failures"));
    assert!(s.lines().any(|l| l.split_whitespace().take(2).eq(["4", "16"])));
    assert!(stdout(&hibireg(&["sweep", "--size", "1"])).contains("total: 1 posets, 0 failures"));
}

#[test]
fn sweep_records_are_reproducible() {
    let a = hibireg(&["sweep", "--size", "5", "--format", "records"]);
    let b = hibireg(&["sweep", "--size", "5", "--format", "records"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).contains("total_posets=87\n"));
}

#[test]
fn export_writes_script_and_graph() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = hibireg(&["export", "--builtin", "antichain 2", "--out", out]);
    assert_eq!(o.status.code(), Some(0));
    let paths: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(paths.len(), 2);
    let script = fs::read_to_string(&paths[0]).unwrap();
    assert!(script.contains("variables: x_bot, x_0, x_1, x_0_1\n"));
    let graph = fs::read_to_string(&paths[1]).unwrap();
    assert_eq!(graph.matches(" -> ").count(), 4);

    let o = hibireg(&["export", "--builtin", "example", "--out", out, "--dialect", "macaulay2"]);
    let script = fs::read_to_string(stdout(&o).lines().next().unwrap()).unwrap();
    let vars = script.lines().find(|l| l.starts_with("R = QQ[")).unwrap();
    assert_eq!(vars.matches(", ").count(), 13);

    let o = hibireg(&["export", "--builtin", "example", "--out", out]);
    let script = fs::read_to_string(stdout(&o).lines().next().unwrap()).unwrap();
    let binomials = script.lines().filter(|l| l.starts_with("  ") && l.contains(" - ")).count();
    let initial = script.lines().skip_while(|l| *l != "initial:").skip(1).take_while(|l| l.starts_with("  ")).count();
    assert!(binomials > 0);
    assert_eq!(binomials, initial);

    let o = hibireg(&["export", "--builtin", "chain 2", "--out", out]);
    let script = fs::read_to_string(stdout(&o).lines().next().unwrap()).unwrap();
    assert!(script.contains("# zero ideal"));

    let again = hibireg(&["export", "--builtin", "chain 2", "--out", out]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn export_to_unwritable_directory_fails() {
    let file = tempfile::NamedTempFile::new().unwrap();
    let o = hibireg(&["export", "--builtin", "chain 2", "--out", file.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}
