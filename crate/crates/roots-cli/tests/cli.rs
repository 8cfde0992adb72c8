//! End-to-end tests of the `roots` binary: subcommands, output formats,
//! exit codes, and the digit-cap environment override.

use std::process::{Command, Output};

fn roots(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_roots"))
        .args(args)
        .env_remove("ROOTS_DIGITS_CAP")
        .output()
        .expect("binary runs")
}

#[test]
fn list_shows_methods_and_problems() {
    let out = roots(&["list"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for m in ["psi2_2", "psi2_4", "psi3_3", "psi3_5", "psi3_6", "psi4_4", "psi4_6", "psi4_7", "psi4_8"]
    {
        assert!(text.contains(m), "missing {m}");
    }
    for p in ["f1", "f2", "f3", "f4", "f5", "f6", "f7"] {
        assert!(text.contains(p), "missing {p}");
    }
}

#[test]
fn run_json_has_stable_schema() {
    let out = roots(&[
        "run", "--method", "psi2_4", "--problem", "f1", "--eta", "120", "--output", "json",
    ]);
    assert!(out.status.success(), "exit: {:?}", out.status);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["method"], "psi2_4");
    assert_eq!(v["problem"], "f1");
    assert_eq!(v["converged"], true);
    for field in ["iters", "iter_count", "tnfe", "coc", "converged"] {
        assert!(v.get(field).is_some(), "missing {field}");
    }
    let iters = v["iters"].as_array().unwrap();
    assert!(iters.len() >= 2);
    for field in ["k", "err", "digits", "evals"] {
        assert!(iters[1].get(field).is_some(), "missing iters.{field}");
    }
    // evaluation accounting: tnfe = iter_count * 3 for psi2_4
    let tnfe = v["tnfe"].as_u64().unwrap();
    let iter_count = v["iter_count"].as_u64().unwrap();
    assert_eq!(tnfe, iter_count * 3);
}

#[test]
fn run_csv_and_table_outputs() {
    let out = roots(&[
        "run", "--method", "psi3_3", "--problem", "f3", "--eta", "100", "--output", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,err,digits,evals\n"));

    let out = roots(&["run", "--method", "psi3_3", "--problem", "f3", "--eta", "100"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("converged: true"));
    assert!(text.contains("root (first ~50 digits): 2.380061273139339017"));
}

#[test]
fn table4_small_eta_csv() {
    let out = roots(&["table4", "--eta", "60", "--output", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "problem,psi2_2,psi2_4,psi3_3,psi3_5,psi3_6,psi4_4,psi4_6,psi4_7,psi4_8"
    );
    assert_eq!(text.lines().count(), 10, "7 problems + header + Iter + TNFE");
    let tnfe_line = text.lines().last().unwrap();
    assert!(tnfe_line.starts_with("TNFE,"));
}

#[test]
fn table4_json_consistency() {
    let out = roots(&["table4", "--eta", "60", "--output", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["eta"], 60);
    let methods = v["methods"].as_array().unwrap();
    assert_eq!(methods.len(), 9);
    let iterations = v["iterations"].as_array().unwrap();
    assert_eq!(iterations.len(), 7);
    // TNFE = Iter * r per column
    let iter_totals = v["iter_totals"].as_array().unwrap();
    let tnfe_totals = v["tnfe_totals"].as_array().unwrap();
    let rs = [2u64, 3, 3, 4, 4, 4, 5, 5, 5];
    for j in 0..9 {
        assert_eq!(
            tnfe_totals[j].as_u64().unwrap(),
            iter_totals[j].as_u64().unwrap() * rs[j]
        );
    }
    assert_eq!(v["diverged"].as_array().unwrap().len(), 0);
}

#[test]
fn analyze_prints_constants() {
    let out = roots(&["analyze", "--problem", "f1", "--digits", "40"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("A_2"));
    assert!(text.contains("A_5"));
    assert!(text.contains("q = 4"));
    assert!(text.contains("efficiency indices"));
    // f2 has derivatives only to order 3: q = 3, 4 unavailable
    let out = roots(&["analyze", "--problem", "f2", "--digits", "40"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("q = 3: needs A_4"));
}

#[test]
fn parallel_grid_matches_sequential() {
    let parallel = roots_cli::table4_parallel(60, 16000, 50).unwrap();
    let sequential = roots_core::bench::table4(60, 16000, 50).unwrap();
    assert_eq!(parallel.iter_totals(), sequential.iter_totals());
    assert_eq!(parallel.tnfe_totals(), sequential.tnfe_totals());
    for (a, b) in parallel.runs.iter().zip(&sequential.runs) {
        assert_eq!(a.problem_id, b.problem_id);
        assert_eq!(a.method, b.method);
        assert_eq!(a.iter_count, b.iter_count);
        assert_eq!(a.coc, b.coc);
        for (x, y) in a.iterations.iter().zip(&b.iterations) {
            assert!(x.x.bit_eq(&y.x), "iterates must be bit-identical");
        }
    }
}

#[test]
fn analyze_with_method_reports_coc() {
    let out = roots(&[
        "analyze", "--problem", "f1", "--digits", "40", "--method", "psi2_4", "--eta", "150",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("COC:"));
    assert!(text.contains("run of psi2_4"));
}

#[test]
fn unknown_names_fail_with_code_1() {
    let out = roots(&["run", "--method", "psi9_9", "--problem", "f1"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown method"));

    let out = roots(&["run", "--method", "psi2_2", "--problem", "f9"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn digit_cap_env_override() {
    // a cap below eta is rejected up front
    let out = Command::new(env!("CARGO_BIN_EXE_roots"))
        .args(["run", "--method", "psi2_2", "--problem", "f1", "--eta", "100"])
        .env("ROOTS_DIGITS_CAP", "50")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cap_digits"), "stderr: {err}");

    // a generous cap leaves behavior unchanged
    let out = Command::new(env!("CARGO_BIN_EXE_roots"))
        .args(["run", "--method", "psi2_2", "--problem", "f1", "--eta", "100", "--output", "json"])
        .env("ROOTS_DIGITS_CAP", "900")
        .output()
        .unwrap();
    assert!(out.status.success());

    let out = Command::new(env!("CARGO_BIN_EXE_roots"))
        .args(["table4", "--eta", "60"])
        .env("ROOTS_DIGITS_CAP", "not-a-number")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn max_iter_exhaustion_exits_2() {
    let out = roots(&[
        "run", "--method", "psi2_2", "--problem", "f1", "--eta", "3000", "--max-iter", "3",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("converged: false"));
    assert!(text.contains("no convergence within 3 iterations"));
}
