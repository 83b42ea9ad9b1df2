use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn superball(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superball"))
        .args(args)
        .env_remove("SUPERBALL_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("superball-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn exit_code_contract() {
    let ok: &[&[&str]] = &[
        &["bound", "--p", "2", "--method", "new"],
        &["bound", "--p", "4", "--method", "vdcs", "--format", "json"],
        &["bound", "--p", "1"],
        &["curve", "--p-min", "1", "--p-max", "3", "--samples", "5"],
        &["figure", "--p-min", "2", "--p-max", "2.0001", "--samples", "3"],
        &["codes", "--n", "2", "--p", "2", "--d", "1", "--trials", "100"],
        &["verify"],
        &["--help"],
    ];
    for args in ok {
        assert_eq!(code(&superball(args)), 0, "{args:?}");
    }
    let usage: &[&[&str]] = &[
        &["bound", "--p", "1", "--method", "new"],
        &["bound", "--p", "3", "--method", "rankin"],
        &["bound", "--p", "0.5"],
        &["bound", "--p", "2e6"],
        &["bound", "--p", "two"],
        &["bound", "--p", "2", "--method", "best"],
        &["curve", "--p-min", "3", "--p-max", "2"],
        &["curve", "--samples", "1"],
        &["curve", "--out", "/nonexistent-dir/curve.csv"],
        &["figure", "--out", "/nonexistent-dir/fig.svg"],
        &["codes", "--n", "1", "--p", "2", "--d", "0.5"],
        &["codes", "--n", "17", "--p", "2", "--d", "0.5"],
        &["codes", "--n", "2", "--p", "2", "--d", "0"],
        &["codes", "--n", "2", "--p", "2", "--d", "1.1"],
        &["codes", "--n", "2", "--p", "2"],
        &["verify", "--level", "exhaustive"],
        &["frobnicate"],
        &[],
    ];
    for args in usage {
        assert_eq!(code(&superball(args)), 2, "{args:?}");
    }
    let failed = superball(&["verify", "--inject-fault", "transfer-exponent"]);
    assert_eq!(code(&failed), 1);
}

#[test]
fn regime_error_names_the_regime() {
    let out = superball(&["bound", "--p", "1", "--method", "new"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("p in [2, 1e6]"), "{err}");
}

#[test]
fn bound_output() {
    let out = superball(&["bound", "--p", "2", "--method", "new", "--format", "json"]);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["method"], "new");
    assert!((v["value"].as_f64().unwrap() + 0.5990).abs() < 5e-4);
    assert!((v["theta"].as_f64().unwrap() - 1.0995).abs() < 1e-3);

    let text = stdout(&superball(&["bound", "--p", "4", "--method", "vdcs"]));
    assert!(text.contains("value  -0.25\n"), "{text}");
}

#[test]
fn curve_is_byte_deterministic() {
    let a = scratch("a.csv");
    let b = scratch("b.csv");
    for path in [&a, &b] {
        let out = superball(&["curve", "--p-min", "1", "--p-max", "8", "--samples", "141", "--out", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0);
    }
    let (a, b) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(text.starts_with("p,vdcs,new_bound,theta_star,rankin,q_star,kl_transfer,best,best_method\n"));
    assert_eq!(text.lines().count(), 142);
    assert_eq!(stdout(&superball(&["curve", "--samples", "141"])), text);
}

#[test]
fn curve_rows_agree_with_bound() {
    let csv = stdout(&superball(&["curve", "--p-min", "1", "--p-max", "4", "--samples", "7"]));
    for line in csv.lines().skip(1) {
        let cols: Vec<&str> = line.split(',').collect();
        let p = cols[0];
        for (col, method) in [(1, "vdcs"), (2, "new"), (4, "rankin"), (6, "kl_transfer"), (7, "composite")] {
            let out = superball(&["bound", "--p", p, "--method", method, "--format", "json"]);
            if cols[col].is_empty() {
                assert_eq!(code(&out), 2, "p={p} {method}");
                continue;
            }
            let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
            let want: f64 = cols[col].parse().unwrap();
            assert!((v["value"].as_f64().unwrap() - want).abs() <= 1e-12, "p={p} {method}");
        }
        if !cols[5].is_empty() {
            let v: Value =
                serde_json::from_str(&stdout(&superball(&["bound", "--p", p, "--method", "rankin", "--format", "json"])))
                    .unwrap();
            assert!((v["q"].as_f64().unwrap() - cols[5].parse::<f64>().unwrap()).abs() <= 1e-12);
        }
    }
}

#[test]
fn codes_examples() {
    let hexagon = stdout(&superball(&["codes", "--n", "2", "--p", "2", "--d", "0.5", "--seed", "1"]));
    let v: Value = serde_json::from_str(&hexagon).unwrap();
    assert_eq!((v["count"].as_u64(), v["oracle"].as_u64(), v["chain_pass"].as_bool()), (Some(6), Some(6), Some(true)));
    assert_eq!(v["points"].as_array().unwrap().len(), 6);
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    for k in ["n", "p", "d", "count", "seed", "oracle", "chain_pass", "points"] {
        assert!(keys.contains(&k), "{k}");
    }

    let v: Value = serde_json::from_str(&stdout(&superball(&["codes", "--n", "2", "--p", "4", "--d", "0.9", "--seed", "1"])))
        .unwrap();
    assert!(v["count"].as_u64().unwrap() <= v["oracle"].as_u64().unwrap());
    assert_eq!(v["chain_pass"], true);

    let v: Value = serde_json::from_str(&stdout(&superball(&["codes", "--n", "5", "--p", "3", "--d", "1", "--trials", "1000"])))
        .unwrap();
    assert_eq!(v["count"], 2);
    assert!(v["oracle"].is_null() && v["chain_pass"].is_null());
}

#[test]
fn seed_from_environment_and_flag_precedence() {
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_superball"));
        cmd.args(["codes", "--n", "3", "--p", "3", "--d", "0.4", "--trials", "500"]);
        cmd.env_remove("SUPERBALL_SEED");
        if let Some(s) = env {
            cmd.env("SUPERBALL_SEED", s);
        }
        if let Some(s) = flag {
            cmd.args(["--seed", s]);
        }
        let v: Value = serde_json::from_slice(&cmd.output().unwrap().stdout).unwrap();
        v["seed"].as_u64().unwrap()
    };
    assert_eq!(run(None, None), 0x5EED);
    assert_eq!(run(Some("42"), None), 42);
    assert_eq!(run(Some("42"), Some("7")), 7);
}

#[test]
fn verify_reports() {
    let out = superball(&["verify", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    let suites = v["suites"].as_array().unwrap();
    assert!(suites.len() >= 20);
    assert!(suites.iter().all(|s| s["failures"] == 0 && s["first_counterexample"].is_null()));
    assert_eq!(v["seed"], 0x5EED);

    let out = superball(&["verify", "--inject-fault", "transfer-exponent"]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("geometry.transfer_inequality") && err.contains("x=") && err.contains("p="), "{err}");
}

#[test]
fn figure_is_standalone_svg() {
    let path = scratch("fig.svg");
    let out = superball(&["figure", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(path).unwrap();
    assert!(svg.starts_with("<svg xmlns=\"http://www.w3.org/2000/svg\""));
    assert_eq!(svg.matches("<polyline").count(), 4);
    assert!(!svg.contains("href"));
}
