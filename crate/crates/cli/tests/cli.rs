//! End-to-end runs of the `gln-voronoi` binary.

use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gln-voronoi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<serde_json::Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).expect("json line")).collect()
}

fn config(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn lemma_all_passes_every_degree_and_slot() {
    let o = run(&["lemma", "--all", "--nmax", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 28);
    assert!(lines.iter().all(|v| v["verdict"] == "pass" && v["check"] == "dual_hecke_identity"));
}

#[test]
fn kl_methods_agree() {
    let o = run(&["kl", "--k", "2", "--m", "1", "--q", "5", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let v = &json_lines(&o)[0];
    assert_eq!(v["params"]["q"], 5);
    assert!(v["abs_err"].as_f64().unwrap() < 1e-12);
}

#[test]
fn chars_gauss_sums() {
    let o = run(&["chars", "--q", "7", "--format", "text"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(out.lines().count(), 6);
    assert!(out.lines().all(|l| l.starts_with("PASS character")));
}

#[test]
fn verify_odd_part_passes() {
    let o = run(&[
        "verify", "--n", "3", "--k", "1", "--q", "5", "--a", "2", "--part", "odd", "--alphas", "0,1.3;0,-0.4;0,-0.9",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = &json_lines(&o)[0];
    assert_eq!(v["check"], "voronoi_odd");
    assert_eq!(v["verdict"], "pass");
}

#[test]
fn coefficient_file_without_unit_row_is_rejected() {
    let alphas = [0.8, -0.8];
    let f = config(&format!("n=2\nlambda=0,{};0,{}\n", alphas[0], alphas[1]));
    let o = run(&["verify", "--coeff-file", f.path().to_str().unwrap(), "--k", "1", "--q", "3", "--a", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn invalid_inputs_exit_two() {
    let cases: &[&[&str]] = &[
        &["kl", "--k", "2", "--m", "1", "--q", "6"],
        &["fe", "--n", "3", "--k", "3", "--q", "5"],
        &["verify", "--n", "3", "--k", "1", "--q", "5", "--a", "5", "--part", "odd"],
        &["verify", "--n", "3", "--k", "1", "--q", "5", "--a", "1", "--omega-center", "10", "--omega-radius", "10"],
        &["verify", "--n", "3", "--k", "1", "--q", "5", "--a", "1", "--sigma", "1"],
        &["kl", "--bogus"],
        &["coeffs", "--alphas", "0,1;0,1;"],
    ];
    for args in cases {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn failing_verdict_exits_one() {
    let o = run(&["kl", "--k", "3", "--m", "2", "--q", "7", "--tol", "1e-30"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json_lines(&o)[0]["verdict"], "fail");
}

#[test]
fn config_values_yield_to_flags() {
    let f = config("# kl defaults\nk = 3\nm = 2\nq = 7\n");
    let path = f.path().to_str().unwrap();
    let from_file = json_lines(&run(&["kl", "--config", path]));
    assert_eq!(from_file[0]["params"]["q"], 7);
    assert_eq!(from_file[0]["params"]["k"], 3);
    let overridden = json_lines(&run(&["kl", "--config", path, "--q", "5"]));
    assert_eq!(overridden[0]["params"]["q"], 5);
    assert_eq!(overridden[0]["params"]["m"], 2);
}

#[test]
fn empty_config_keeps_defaults() {
    let f = config("");
    let path = f.path().to_str().unwrap();
    let a = run(&["kl", "--config", path, "--k", "1", "--m", "1", "--q", "3"]);
    let b = run(&["kl", "--k", "1", "--m", "1", "--q", "3"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn config_errors_name_the_line() {
    let unknown = config("q = 5\nbogus = 1\n");
    let o = run(&["kl", "--config", unknown.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains(":2:") && err.contains("bogus"), "{err}");

    let malformed = config("k = 1\n\nq 5\n");
    let o = run(&["kl", "--config", malformed.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":3:"));
}

#[test]
fn output_is_deterministic_for_a_seed() {
    let args = ["--seed", "7", "fe", "--n", "3", "--kind", "all", "--q", "5", "--points", "3"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["--seed", "8", "fe", "--n", "3", "--kind", "all", "--q", "5", "--points", "3"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn output_file_receives_reports() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.jsonl");
    let o = run(&["--output", path.to_str().unwrap(), "lemma", "--n", "4", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(path).unwrap();
    assert_eq!(text.lines().count(), 1);
}
