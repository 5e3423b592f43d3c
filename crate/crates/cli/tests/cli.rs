use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn bjorth(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bjorth"))
        .args(args)
        .env_remove("BJORTH_SEED")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}):\n{}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

/// Compares against `tests/golden/<name>.json`; `BLESS=1` rewrites it.
fn golden(name: &str, actual: &Value) {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/golden")
        .join(format!("{name}.json"));
    if std::env::var_os("BLESS").is_some() {
        std::fs::write(&path, serde_json::to_string_pretty(actual).unwrap() + "\n").unwrap();
        return;
    }
    let expected: Value =
        serde_json::from_str(&std::fs::read_to_string(&path).expect("golden file exists")).unwrap();
    assert_eq!(&expected, actual, "golden mismatch for {name}");
}

#[test]
fn check_orthogonal_diagonal_pair() {
    let out = bjorth(&["check", &data("diag10.json"), &data("diag01.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "ORTHOGONAL");
    assert_eq!(v["schema_version"], 1);
    golden("check_diag10_diag01", &v);
}

#[test]
fn check_identity_against_itself() {
    let out = bjorth(&["check", &data("identity.json"), &data("identity.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["status"], "NOT_ORTHOGONAL");
    golden("check_identity_identity", &v);
}

#[test]
fn distance_diag_minus_identity() {
    let out = bjorth(&["distance", &data("diag21.json"), &data("identity.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-7);
    assert!((v["lambda"][0].as_f64().unwrap() + 1.5).abs() < 1e-6);
    assert_eq!(v["lambda"][1].as_f64().unwrap(), 0.0);
    golden("distance_diag21_identity", &v);
}

#[test]
fn every_check_method_gives_the_same_exit_code() {
    for method in ["def", "witness", "both"] {
        let orth = bjorth(&["check", &data("diag10.json"), &data("diag01.json"), "--method", method]);
        assert_eq!(orth.status.code(), Some(0), "{method}");
        let not = bjorth(&["check", &data("identity.json"), &data("identity.json"), "--method", method]);
        assert_eq!(not.status.code(), Some(1), "{method}");
        assert_eq!(stdout_json(&not)["status"], "NOT_ORTHOGONAL");
    }
}

#[test]
fn norm_reports_subspace_dimension() {
    let out = bjorth(&["norm", &data("identity.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    assert_eq!(v["op_norm"].as_f64().unwrap(), 1.0);
    assert_eq!(v["top_subspace_dim"], 2);
}

#[test]
fn input_errors_exit_2() {
    let cases: Vec<Vec<String>> = vec![
        vec!["bogus".into()],
        vec!["check".into(), data("diag10.json")],
        vec!["norm".into(), data("missing.json")],
        vec!["norm".into(), data("short.json")],
        vec!["check".into(), data("rect.json"), data("rect.json")],
        vec!["check".into(), data("diag10.json"), data("diag01.json"), "--tol".into(), "0".into(), "--method".into(), "def".into()],
        vec!["witness".into(), data("diag10.json"), data("diag01.json"), "--eps".into(), "-1".into()],
        vec!["gen".into(), "--kind".into(), "orthopair".into(), "--n".into(), "1".into()],
        vec!["check".into(), data("diag10.json"), data("diag01.json"), "--frobnicate".into()],
    ];
    for args in cases {
        let refs: Vec<&str> = args.iter().map(String::as_str).collect();
        let out = bjorth(&refs);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?} should explain on stderr");
    }
}

#[test]
fn gen_round_trip_feeds_every_subcommand() {
    let dir = tempfile::tempdir().unwrap();
    for field in ["c", "r"] {
        let pair = dir.path().join(format!("pair_{field}.json"));
        let single = dir.path().join(format!("g_{field}.json"));
        let pair_s = pair.to_str().unwrap();
        let single_s = single.to_str().unwrap();
        let out = bjorth(&["gen", "--kind", "orthopair", "--n", "3", "--seed", "5", "--field", field, "--out", pair_s]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty(), "--out keeps stdout empty");
        let out = bjorth(&["gen", "--kind", "ginibre", "--n", "3", "--seed", "5", "--field", field, "--out", single_s]);
        assert_eq!(out.status.code(), Some(0));

        let a = format!("{pair_s}#A");
        let b = format!("{pair_s}#B");
        for args in [
            vec!["norm", single_s],
            vec!["norm", &a],
            vec!["distance", &a, &b],
            vec!["distance", single_s, &b],
            vec!["minimax", &a, &b],
            vec!["witness", &a, &b],
            vec!["witness", &a, &b, "--eps", "1e-4", "--sequence"],
        ] {
            let out = bjorth(&args);
            assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
            assert_eq!(stdout_json(&out)["schema_version"], 1);
        }
        let out = bjorth(&["check", &a, &b]);
        assert_eq!(out.status.code(), Some(0));
        assert_eq!(stdout_json(&out)["status"], "ORTHOGONAL");
    }
}

#[test]
fn gen_is_seeded_by_flag_and_env() {
    let a = bjorth(&["gen", "--kind", "ginibre", "--n", "2", "--seed", "11"]);
    let b = Command::new(env!("CARGO_BIN_EXE_bjorth"))
        .args(["gen", "--kind", "ginibre", "--n", "2"])
        .env("BJORTH_SEED", "11")
        .output()
        .unwrap();
    let c = bjorth(&["gen", "--kind", "ginibre", "--n", "2", "--seed", "12"]);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn summary_goes_to_stderr_only() {
    let out = bjorth(&["distance", &data("diag21.json"), &data("identity.json"), "--summary"]);
    assert_eq!(out.status.code(), Some(0));
    stdout_json(&out);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("distance:"));
}

#[test]
fn suite_writes_json_and_csv() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"dims": [2], "trials_per_dim": 1, "seed": 1}"#).unwrap();
    let csv = dir.path().join("rows.csv");
    let out = bjorth(&["suite", "--config", cfg.to_str().unwrap(), "--csv", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["records"].as_array().unwrap().len(), 3);
    assert!(v.get("runtimes").is_some());
    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 4);

    std::fs::write(&cfg, r#"{"dims": [1]}"#).unwrap();
    let out = bjorth(&["suite", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}
