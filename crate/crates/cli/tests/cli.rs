use std::io::Write;
use std::process::{Command, Output, Stdio};

fn factorcrit(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_factorcrit"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("binary runs");
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn analyze_complete_graph_with_k() {
    let o = factorcrit(&["analyze", "--k", "2", "--format", "record"], "C~\n");
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("rho=3.000000000000"), "{out}");
    assert!(out.contains("q=6.000000000000"));
    assert!(out.contains("verdict_matching=true verdict_tutte=true"));
}

#[test]
fn analyze_empty_input_prints_nothing() {
    let o = factorcrit(&["analyze"], "");
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
}

#[test]
fn analyze_reports_bad_lines_and_continues() {
    let o = factorcrit(&["analyze", "--format", "record"], "C~\nD~\nBw\n");
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2);
    let err = stderr(&o);
    assert!(err.contains("line 2:"), "{err}");
    assert!(err.contains("warning: 1 line(s) skipped"));
}

#[test]
fn threshold_prints_three_matching_values() {
    let o = factorcrit(&["threshold", "8", "1", "0", "rho", "--format", "record"], "");
    assert!(o.status.success());
    let out = stdout(&o);
    for key in ["rho_root", "rho_quotient", "rho_dense"] {
        assert!(out.contains(&format!("{key}=5.069517991916")), "{out}");
    }
    assert!(!out.contains("q_root"));
}

#[test]
fn threshold_q_for_twelve_two_zero() {
    let o = factorcrit(&["threshold", "12", "2", "0", "q", "--format", "record"], "");
    assert!(o.status.success());
    let out = stdout(&o);
    let values: Vec<&str> = out
        .split_whitespace()
        .filter(|f| f.starts_with("q_"))
        .map(|f| f.split_once('=').unwrap().1)
        .collect();
    assert_eq!(values.len(), 3);
    assert!(values.iter().all(|v| *v == values[0]), "{out}");
}

#[test]
fn invalid_parameters_are_usage_errors() {
    let o = factorcrit(&["threshold", "5", "3", "0"], "");
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("hint:"));
    assert_eq!(factorcrit(&["extremal", "5", "3", "0"], "").status.code(), Some(2));
    assert_eq!(factorcrit(&["verify"], "").status.code(), Some(2));
}

#[test]
fn impossible_tolerance_is_an_inconsistency() {
    let o = factorcrit(&["threshold", "8", "1", "0", "--tolerance", "0"], "");
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn extremal_output_feeds_analyze() {
    let h = factorcrit(&["extremal", "8", "1", "0"], "");
    assert!(h.status.success());
    let o = factorcrit(&["analyze", "--k", "0", "--format", "record"], &stdout(&h));
    let out = stdout(&o);
    assert!(out.contains("verdict_matching=false verdict_tutte=false"), "{out}");
    assert!(out.contains("witness_tutte=tutte:{0}"));
}

#[test]
fn verify_lemma_grid_passes() {
    let o = factorcrit(&["verify", "--lemma", "h1", "--delta", "1..2"], "");
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("status=pass\n"));
}

#[test]
fn verify_theorem_is_deterministic() {
    let args = [
        "verify", "--theorem", "rho", "--n", "8", "--delta", "1", "--k", "0", "--corpus", "random",
        "--count", "200", "--seed", "1",
    ];
    let a = factorcrit(&args, "");
    assert_eq!(a.status.code(), Some(0));
    let mut with_jobs = args.to_vec();
    with_jobs.extend(["--jobs", "2"]);
    let b = factorcrit(&with_jobs, "");
    assert_eq!(stdout(&a), stdout(&b));
    assert!(stdout(&a).contains("graphs_tested=200"));
}

#[test]
fn verify_sharpness_passes() {
    let o = factorcrit(&["verify", "--sharpness", "--n", "8", "--delta", "1", "--k", "0"], "");
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("witness={0}"));
}

#[test]
fn counterexamples_exit_with_one() {
    // below the order bound the q statement has ties with other graphs
    let o = factorcrit(
        &["verify", "--theorem", "q", "--n", "6", "--delta", "1", "--k", "0", "--mode", "exploratory", "--corpus", "exhaustive"],
        "",
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("counterexample E?^w"));
}

#[test]
fn verify_rejects_orders_below_the_bound() {
    let o = factorcrit(&["verify", "--theorem", "q", "--n", "8", "--delta", "1", "--k", "0"], "");
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_reads_graph6_corpus_from_stdin() {
    let h = stdout(&factorcrit(&["extremal", "8", "1", "0"], ""));
    let o = factorcrit(
        &["verify", "--theorem", "rho", "--n", "8", "--delta", "1", "--k", "0", "--corpus", "graph6", "--input", "-"],
        &h,
    );
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("extremal_hits=1"));
}
