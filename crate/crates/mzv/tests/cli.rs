//! End-to-end checks of the mzv binary: documented output shapes, exit
//! codes, cache wiring and process-level sweep determinism.

use std::path::Path;
use std::process::{Command, Output};

fn mzv_in(dir: Option<&Path>, envs: &[(&str, &str)], args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_mzv"));
    cmd.args(args).env_remove("MZV_CACHE_DIR");
    if let Some(d) = dir {
        cmd.current_dir(d);
    }
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("binary runs")
}

fn mzv(args: &[&str]) -> Output {
    mzv_in(None, &[], args)
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    let text = String::from_utf8_lossy(&out.stdout);
    serde_json::from_str(text.trim()).unwrap_or_else(|e| panic!("bad JSON ({e}): {text}"))
}

#[test]
fn solve_prints_the_documented_example() {
    let out = mzv(&["solve", "-p", "5", "-a", "2", "-b", "30"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["q"], 5);
    assert_eq!(v["weight"], 32);
    assert_eq!(v["certified"], "bivariate");
    let pairs: Vec<(u64, u64)> = v["pairs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| (p["c"].as_u64().unwrap(), p["aj"].as_u64().unwrap()))
        .collect();
    assert_eq!(
        pairs,
        vec![(3, 4), (2, 8), (1, 12), (4, 20), (3, 24), (2, 28)]
    );
}

#[test]
fn prove_prints_the_proved_verdict() {
    let out = mzv(&["prove", "-p", "5", "-a", "2", "-b", "30"]);
    assert_eq!(code(&out), 0);
    assert_eq!(
        String::from_utf8_lossy(&out.stdout).trim(),
        r#"{"checked_d":[0,1,2,3],"status":"proved"}"#
    );
}

#[test]
fn predict_emits_the_full_recipe_terms() {
    let out = mzv(&["predict", "-p", "2", "-a", "3", "-b", "5"]);
    assert_eq!(code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["recipe"], "full");
    assert_eq!(v["partial"], false);
    assert_eq!(v["pairs"].as_array().unwrap().len(), 4);
}

#[test]
fn verify_accepts_solved_relations_and_rejects_tampered_ones() {
    let dir = tempfile::tempdir().unwrap();
    let out = mzv(&["solve", "-p", "3", "-a", "2", "-b", "2"]);
    assert_eq!(code(&out), 0);
    let mut v = stdout_json(&out);
    let rel = dir.path().join("relation.json");
    std::fs::write(&rel, serde_json::to_string(&v).unwrap()).unwrap();

    let ok = mzv(&["verify", "-p", "3", "--relation", rel.to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    let verdict = stdout_json(&ok);
    assert_eq!(verdict["verified"], true);
    assert_eq!(verdict["first_failing_d"], serde_json::Value::Null);

    let c = v["pairs"][0]["c"].as_u64().unwrap();
    v["pairs"][0]["c"] = serde_json::json!(3 - c);
    std::fs::write(&rel, serde_json::to_string(&v).unwrap()).unwrap();
    let bad = mzv(&["verify", "-p", "3", "--relation", rel.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    let verdict = stdout_json(&bad);
    assert_eq!(verdict["verified"], false);
    assert_eq!(verdict["first_failing_d"], 1);
}

#[test]
fn prove_refutes_a_tampered_relation_with_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    let out = mzv(&["solve", "-p", "2", "-a", "3", "-b", "5"]);
    assert_eq!(code(&out), 0);
    let mut v = stdout_json(&out);
    let c = v["pairs"][0]["c"].as_u64().unwrap();
    assert_eq!(c, 1, "q=2 coefficients are 1");
    v["pairs"].as_array_mut().unwrap().remove(0);
    let rel = dir.path().join("tampered.json");
    std::fs::write(&rel, serde_json::to_string(&v).unwrap()).unwrap();

    let bad = mzv(&["prove", "-p", "2", "--relation", rel.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    let verdict = stdout_json(&bad);
    assert_eq!(verdict["status"], "refuted");
}

#[test]
fn usage_errors_exit_2() {
    let missing = mzv(&["solve", "-p", "5", "-a", "2"]);
    assert_eq!(code(&missing), 2);
    let bad_recipe = mzv(&["predict", "-p", "2", "-a", "2", "-b", "2", "--recipe", "bogus"]);
    assert_eq!(code(&bad_recipe), 2);
    let modulus_on_sweep = mzv(&[
        "sweep", "-p", "2", "-n", "2", "--modulus", "1,1,1", "--a-list", "2", "--b-max", "3",
    ]);
    assert_eq!(code(&modulus_on_sweep), 2);
}

#[test]
fn sweep_writes_identical_csv_across_jobs() {
    let dir = tempfile::tempdir().unwrap();
    let f1 = dir.path().join("one.csv");
    let f2 = dir.path().join("two.csv");
    for (jobs, path) in [("1", &f1), ("3", &f2)] {
        let out = mzv(&[
            "sweep", "-p", "3", "--a-list", "2,3", "--b-min", "1", "--b-max", "8",
            "--jobs", jobs, "--out", path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        let summary = stdout_json(&out);
        assert_eq!(summary["cells"], 16);
        assert_eq!(summary["mismatched"], 0);
    }
    let b1 = std::fs::read(&f1).unwrap();
    let b2 = std::fs::read(&f2).unwrap();
    assert_eq!(b1, b2, "CSV bytes differ between --jobs 1 and --jobs 3");
    let text = String::from_utf8(b1).unwrap();
    assert!(text.starts_with("q,p,n,a,b,recipe,match,n_terms,time_ms,warnings\n"));
}

#[test]
fn sweep_reports_error_cells_with_exit_1() {
    let out = mzv(&[
        "sweep", "-p", "5", "--a-list", "7", "--b-min", "2", "--b-max", "3",
        "--recipe", "large-index",
    ]);
    assert_eq!(code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("ERROR"), "expected ERROR rows, got: {text}");
}

#[test]
fn cache_is_wired_through_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let envs = [("MZV_CACHE_DIR", dir.path().to_str().unwrap())];

    let no_dir = mzv(&["cache", "stats"]);
    assert_eq!(code(&no_dir), 2, "stats without a directory is an error");

    let prove = mzv_in(None, &envs, &["prove", "-p", "2", "-a", "2", "-b", "6"]);
    assert_eq!(code(&prove), 0);

    let stats = mzv_in(None, &envs, &["cache", "stats"]);
    assert_eq!(code(&stats), 0);
    let v = stdout_json(&stats);
    let entries = v["entries"].as_u64().unwrap();
    assert!(entries > 0, "prove should have populated the cache");

    let clear = mzv_in(None, &envs, &["cache", "clear"]);
    assert_eq!(code(&clear), 0);
    assert_eq!(stdout_json(&clear)["removed"], entries);

    let stats = mzv_in(None, &envs, &["cache", "stats"]);
    assert_eq!(stdout_json(&stats)["entries"], 0);
}

#[test]
fn selftest_passes_every_suite() {
    let out = mzv(&["selftest"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    let passes = text.lines().filter(|l| l.ends_with(": pass")).count();
    assert_eq!(passes, 5, "expected 5 suites, got: {text}");
}
