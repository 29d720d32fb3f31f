use std::process::{Command, Output};

use serde_json::Value;

fn susyxxz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_susyxxz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

/// Data rows of a CSV document, skipping the `#` header lines and the
/// column names.
fn csv_rows(out: &Output) -> Vec<Vec<String>> {
    let text = String::from_utf8(out.stdout.clone()).unwrap();
    let body: String = text
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect();
    csv::Reader::from_reader(body.as_bytes())
        .records()
        .map(|r| r.unwrap().iter().map(str::to_string).collect())
        .collect()
}

#[test]
fn default_verify_passes() {
    let out = susyxxz(&["verify"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["header"]["version"], susyxxz::VERSION);
    let ids = doc["result"]["identities"].as_array().unwrap();
    assert!(ids.len() >= 12);
    for id in ids {
        assert!(id["residual"].as_f64().unwrap() < 1e-11, "{id}");
    }
}

#[test]
fn corrupted_coefficient_is_reported() {
    let out = susyxxz(&["verify", "--ell", "2", "--inject-fault", "--samples", "3", "--lmax", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let failed = json_of(&out)["result"]["failed"].clone();
    assert!(failed.as_array().unwrap().iter().any(|f| f == "coassociativity"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("coassociativity"));
}

#[test]
fn verify_at_a_given_y() {
    let out = susyxxz(&["verify", "--ell", "3", "--y", "0.5+0.5i", "--lmax", "4"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn tolerance_override_can_fail_the_run() {
    let out = susyxxz(&["verify", "--samples", "2", "--lmax", "3", "--tol-hamiltonian", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn rho_scan_table() {
    let out = susyxxz(&["scan", "--L", "3", "--j", "1", "--k", "2", "--from", "0", "--to", "2", "--steps", "50"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert_eq!(rows.len(), 50);
    // rho, 8 levels at L = 3, 16 at L = 4, zero counts, unpaired
    assert_eq!(rows[0].len(), 1 + 8 + 16 + 3);
    for (i, row) in rows.iter().enumerate() {
        let zeros = (&row[25], &row[26]);
        if i == 0 {
            assert_eq!(zeros, (&"1".to_string(), &"1".to_string()));
        } else {
            assert_eq!(zeros, (&"0".to_string(), &"0".to_string()), "row {i}");
        }
    }
}

#[test]
fn polar_and_rectangular_y_agree() {
    let a = susyxxz(&["cohomology", "--y", "0.5:1.0", "--j", "1", "--k", "2", "--Lmax", "4"]);
    let z = num_complex::Complex64::from_polar(0.5, 1.0);
    let rect = format!("{}{:+}i", z.re, z.im);
    let b = susyxxz(&["cohomology", "--y", &rect, "--j", "1", "--k", "2", "--Lmax", "4"]);
    assert_eq!(a.status.code(), Some(0));
    let (da, db) = (json_of(&a), json_of(&b));
    let ya = da["header"]["config"]["chain"]["y"].as_array().unwrap().clone();
    let yb = db["header"]["config"]["chain"]["y"].as_array().unwrap().clone();
    for (u, v) in ya.iter().zip(&yb) {
        assert!((u.as_f64().unwrap() - v.as_f64().unwrap()).abs() < 1e-15);
    }
    let betti: Vec<i64> = da["result"]["cohomology"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["betti"].as_i64().unwrap())
        .collect();
    assert_eq!(betti, vec![0, 0, 0, 0]);
}

#[test]
fn output_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p1 = dir.path().join("a.csv");
    let p2 = dir.path().join("b.csv");
    for p in [&p1, &p2] {
        let out = susyxxz(&["verify", "--ell", "1,2", "--samples", "4", "--lmax", "4", "--format", "csv", "-o", p.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let (a, b) = (std::fs::read(&p1).unwrap(), std::fs::read(&p2).unwrap());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn report_bundles() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = susyxxz(&["report", "--ell", "1", "--Lmax", "8", "-o", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&std::fs::read(&path).unwrap()).unwrap();
    for s in ["betti", "ground_states", "conjecture", "overlaps", "fidelity_scan"] {
        assert_eq!(doc["result"][s]["status"], "ok", "{s}");
    }

    let out = susyxxz(&["report", "--ell", "2", "--Lmax", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let doc = json_of(&out);
    assert_eq!(doc["result"]["conjecture"]["status"], "not applicable");
    assert_eq!(doc["result"]["fidelity_scan"]["status"], "not applicable");
    assert_eq!(doc["result"]["betti"]["status"], "ok");
}

#[test]
fn overlap_and_fidelity() {
    let out = susyxxz(&["overlap", "--kind", "Ztilde", "--parts", "3,0,5", "--ell", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let r = &json_of(&out)["result"]["overlap"];
    assert!(r["residual"].as_f64().unwrap() < 1e-9);

    let out = susyxxz(&["fidelity", "--L1", "1000", "--L2", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let dev = json_of(&out)["result"]["fidelity"]["deviation"].as_f64().unwrap();
    assert!(dev.abs() < 1e-3);

    let out = susyxxz(&["fidelity-scan", "--L", "60", "--x-steps", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&out);
    assert!(rows.len() >= 5);
    assert!(rows.iter().all(|r| r.len() == 5));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["spectrum", "--L"][..],
        &["spectrum", "--L", "3", "--y", "1+"],
        &["spectrum", "--L", "3", "--j", "7"],
        &["cohomology", "--ell", "0"],
        &["overlap", "--kind", "W", "--parts", "2"],
        &["fidelity", "--L1", "3", "--L2", "5"],
        &["verify", "--inject-fault"],
        &["report", "--format", "csv"],
        &["frobnicate"],
    ] {
        assert_eq!(susyxxz(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn thread_variable_is_validated() {
    let out = Command::new(env!("CARGO_BIN_EXE_susyxxz"))
        .args(["spectrum", "--L", "2"])
        .env("SUSYXXZ_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = Command::new(env!("CARGO_BIN_EXE_susyxxz"))
        .args(["spectrum", "--L", "2"])
        .env("SUSYXXZ_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["header"]["threads"], 1);
}
