use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SYSTEM: &str = r#"{"field": {"kind": "eisenstein", "p": 3}, "truncation": 18, "order": 9,
  "polynomials": ["x' - 3*zeta*t^2*x"]}"#;

fn tropdiff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropdiff"))
        .args(args)
        .env_remove("TROPDIFF_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn put(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Writes the tropicalized exponential solution and a copy with `a_3 = 3/2`.
fn solution_files(dir: &TempDir) -> (PathBuf, PathBuf) {
    let sol = dir.path().join("sol.json");
    let o = tropdiff(&["solve-linear", "--p", "3", "--tropical", "--out", s(&sol)]);
    assert_eq!(o.status.code(), Some(0));
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&sol).unwrap()).unwrap();
    for c in v["coeffs"].as_array_mut().unwrap() {
        if c["n"] == 3 {
            c["val"] = "3/2".into();
        }
    }
    let bad = put(dir, "bad.json", &v.to_string());
    (sol, bad)
}

#[test]
fn selftest_passes() {
    for p in ["2", "3", "5"] {
        let o = tropdiff(&["selftest", "--p", p]);
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).ends_with("ALL PASS\n"));
    }
}

#[test]
fn check_accepts_solution_and_names_failure() {
    let dir = TempDir::new().unwrap();
    let sys = put(&dir, "sys.json", SYSTEM);
    let (sol, bad) = solution_files(&dir);

    let good = tropdiff(&["check", "--system", s(&sys), "--candidate", s(&sol)]);
    assert_eq!(good.status.code(), Some(0));
    assert!(stdout(&good).contains("solution up to order 9"));

    let o = tropdiff(&["check", "--system", s(&sys), "--candidate", s(&bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("not a solution: equation 1 fails at order 0"));

    let o = tropdiff(&["--json", "check", "--system", s(&sys), "--candidate", s(&bad)]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["failure"]["equation"], 1);
    assert_eq!(v["failure"]["order"], 0);
    assert_eq!(v["solves"], false);
}

#[test]
fn tropicalize_and_initial() {
    let dir = TempDir::new().unwrap();
    let sys = put(&dir, "sys.json", SYSTEM);
    let o = tropdiff(&["tropicalize", "--system", s(&sys), "--order", "0"]);
    assert_eq!(stdout(&o), "f1 d^0: x' + (2, 3/2)*x\n");

    let (sol, bad) = solution_files(&dir);
    let o = tropdiff(&["initial", "--system", s(&sys), "--candidate", s(&sol), "--order", "9"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("in_S(f1) = x' + x\n"));
    let o = tropdiff(&["initial", "--system", s(&sys), "--candidate", s(&bad), "--order", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("monomial: in_S(d^0 f1) = x"));
}

#[test]
fn radius_output() {
    let dir = TempDir::new().unwrap();
    let (sol, _) = solution_files(&dir);
    let o = tropdiff(&["radius", "--series", s(&sol), "--rule", "p,auto"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "log_r = 0, r = 1 (base 3)\n");

    let o = tropdiff(&["radius", "--rule", "1,1,0,0", "--p", "3", "--to-base", "9"]);
    assert_eq!(stdout(&o), "log_r = 1, r = 3 (base 3)\nlog_9 r = 1/2 (log_3 9 = 2/1)\n");

    let o = tropdiff(&["radius", "--series", s(&sol), "--rule", "3,1,0,0"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("series disagrees with the rule at n = 3"));
}

#[test]
fn usage_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(tropdiff(&["radius", "--series", "missing.json"]).status.code(), Some(2));
    assert_eq!(tropdiff(&["selftest", "--p", "4"]).status.code(), Some(2));
    assert_eq!(tropdiff(&["frobnicate"]).status.code(), Some(2));
    let sys = put(&dir, "sys.json", r#"{"field": {"kind": "rational-padic", "p": 3}, "polynomials": ["x' - zeta*x"]}"#);
    let o = tropdiff(&["tropicalize", "--system", s(&sys)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zeta"));
    assert_eq!(tropdiff(&["radius", "--rule", "1,1,0,x", "--p", "3"]).status.code(), Some(2));
}

#[test]
fn solve_linear_with_custom_g() {
    let o = tropdiff(&["solve-linear", "--p", "3", "--field", "rational-padic", "--g", "3", "--truncation", "6"]);
    assert_eq!(o.status.code(), Some(0));
    // exp(3t): c_k = 3^k/k!, so v_3(c_k) = k − v_3(k!).
    assert!(stdout(&o).contains("trop(x) = {0:0/1, 1:1/1, 2:2/1, 3:2/1, 4:3/1, 5:4/1, 6:4/1}"));
}

#[test]
fn reports_are_deterministic_and_seeded() {
    let dir = TempDir::new().unwrap();
    let (a, b, c) = (dir.path().join("a.json"), dir.path().join("b.json"), dir.path().join("c.json"));
    let run = |out: &Path, seed: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_tropdiff"));
        cmd.args(["verify-ft", "--p", "3", "--random", "5", "--seed", "11", "--out", s(out)]);
        match seed {
            Some(v) => cmd.env("TROPDIFF_SEED", v),
            None => cmd.env_remove("TROPDIFF_SEED"),
        };
        cmd.output().unwrap()
    };
    assert_eq!(run(&a, None).status.code(), Some(0));
    assert_eq!(run(&b, None).status.code(), Some(0));
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert_eq!(run(&c, Some("12")).status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&c).unwrap()).unwrap();
    assert_eq!(v["random"]["seed"], 12);
    assert_eq!(v["schema"], "tropdiff.report/1");
    assert_eq!(v["truncation"], 18);
    assert_eq!(v["order"], 9);
}
