use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracefn-lab"))
        .args(args)
        .env_remove("TRACEFN_LAB_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

#[test]
fn identities_pass_at_101() {
    let out = run(&["identities", "--q", "101"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    let checks = v["result"]["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["passed"], true, "{c}");
        if c["relation"] == "at_most" && c["limit"].as_f64() == Some(1e-8) {
            assert!(c["observed"].as_f64().unwrap() < 1e-8);
        }
    }
}

#[test]
fn kloosterman_angles_csv_has_one_row_per_unit() {
    let out = run(&["--out", "csv", "satotate", "--family", "kl2", "--q", "10007"]);
    assert_eq!(out.status.code(), Some(0));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert!(headers.iter().any(|h| h == "re"));
    assert!(headers.iter().any(|h| h == "im"));
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 10006);
    for r in rows.iter().take(50) {
        for field in r.iter() {
            assert!(!field.contains(','), "decimal separator in {field}");
        }
    }
}

#[test]
fn divisor_discrepancy_report() {
    let out = run(&["dap", "--k", "3", "--X", "1000000", "--q", "1009", "--a", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json(&out)["result"];
    for key in ["x", "q", "a", "k", "progression_sum", "coprime_sum", "phi_q", "discrepancy", "ratio"] {
        assert!(!r[key].is_null(), "missing {key}");
    }
    let e = r["progression_sum"].as_f64().unwrap() - r["coprime_sum"].as_f64().unwrap() / r["phi_q"].as_f64().unwrap();
    assert!((e - r["discrepancy"].as_f64().unwrap()).abs() < 1e-6);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<_> = ["a.json", "b.json"].iter().map(|n| dir.path().join(n)).collect();
    for (p, threads) in paths.iter().zip(["1", "3"]) {
        let out = run(&[
            "--threads", threads, "--seed", "0x1234", "--output", p.to_str().unwrap(),
            "bounds", "--q", "211",
        ]);
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let a = std::fs::read(&paths[0]).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, std::fs::read(&paths[1]).unwrap());

    let csv1 = run(&["--out", "csv", "satotate", "--family", "birch", "--q", "101"]).stdout;
    let csv2 = run(&["--out", "csv", "satotate", "--family", "birch", "--q", "101"]).stdout;
    assert_eq!(csv1, csv2);
}

#[test]
fn thread_count_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_tracefn-lab"))
        .args(["identities", "--q", "31"])
        .env("TRACEFN_LAB_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["identities"]).status.code(), Some(2));
    let out = run(&["identities", "--q", "100"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
}

#[test]
fn capacity_errors_exit_4() {
    let out = run(&["dap", "--k", "3", "--X", "200000000", "--q", "1009", "--a", "1"]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn calibration_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("manifest.json");
    let out = run(&[
        "calibrate", "--suite", "pv_legendre", "--q-grid", "101,211", "--manifest", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let m: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    let entry = m["entries"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["suite"] == "pv_legendre")
        .unwrap();
    assert_eq!(entry["q_grid"], serde_json::json!([101, 211]));
    let observed = entry["observed_max"].as_f64().unwrap();
    assert!((entry["frozen"].as_f64().unwrap() - 2.0 * observed).abs() < 1e-12);
}

#[test]
fn other_commands_report() {
    for args in [
        vec!["vdc", "--p", "11", "--q", "101"],
        vec!["burgess", "--q", "31", "--B", "3"],
        vec!["abshift", "--q", "1009", "--M", "10", "--N", "100"],
        vec!["primesum", "--q", "1009", "--X", "1009"],
        vec!["satotate", "--family", "gauss", "--q", "1009"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(json(&out)["result"].is_object() || json(&out)["result"].is_array(), "{args:?}");
    }
}
