use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn pyent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pyent")).args(args).output().expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn profile(name: &str) -> String {
    format!("{}/../../profiles/{name}", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn estimate_reports_baselines() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "y.txt", "2\n\n1\n1\n");
    let file = file.to_str().unwrap();

    let v = json(&pyent(&["estimate", file, "--method", "mle"]));
    assert_eq!(v["entropy"].as_f64().unwrap(), 1.03972077083992);
    assert_eq!((v["sample_size"].as_u64(), v["observed_species"].as_u64(), v["singletons"].as_u64()), (Some(4), Some(3), Some(2)));
    assert_eq!(v["unit"], "nats");

    let v = json(&pyent(&["estimate", file, "--method", "miller-madow"]));
    assert_eq!(v["entropy"].as_f64().unwrap(), 1.28972077083992);

    let bits = json(&pyent(&["estimate", file, "--method", "mle", "--bits"]));
    assert_eq!(bits["unit"], "bits");
    assert!((bits["entropy"].as_f64().unwrap() - 1.03972077083992 / std::f64::consts::LN_2).abs() < 1e-13);
}

#[test]
fn estimate_proposed_includes_selection() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "y.txt", "1\n1\n2\n");
    let v = json(&pyent(&["estimate", file.to_str().unwrap()]));
    assert_eq!(v["method"], "proposed");
    assert!((v["entropy"].as_f64().unwrap() - 2.1681905492384129).abs() < 1e-6);
    assert_eq!(v["d"].as_f64(), Some(0.0));
    assert!((v["alpha"].as_f64().unwrap() - 2.71221445044903).abs() < 1e-12);
    assert_eq!(v["selection"]["chosen"]["label"], "boundary_d0");
}

#[test]
fn estimate_reads_csv() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "y.csv", "species,count\nfox,2\nowl,1\nbat,1\nelk,0\n");
    let v = json(&pyent(&["estimate", file.to_str().unwrap(), "--input-format", "csv", "--method", "mle"]));
    assert_eq!(v["entropy"].as_f64().unwrap(), 1.03972077083992);
    assert_eq!(v["observed_species"].as_u64(), Some(3));
}

#[test]
fn dpym_needs_parameters() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "y.txt", "3\n1\n");
    let file = file.to_str().unwrap();
    assert_eq!(pyent(&["estimate", file, "--method", "dpym"]).status.code(), Some(3));
    let v = json(&pyent(&["estimate", file, "--method", "dpym", "--d", "0.5", "--alpha", "1"]));
    assert_eq!((v["d"].as_f64(), v["alpha"].as_f64()), (Some(0.5), Some(1.0)));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "3\nx\n");
    let dup = write(dir.path(), "dup.csv", "species,count\na,2\na,1\n");
    let good = write(dir.path(), "good.txt", "3\n1\n");
    assert_eq!(pyent(&["estimate", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(pyent(&["estimate", dup.to_str().unwrap(), "--input-format", "csv"]).status.code(), Some(2));
    assert_eq!(pyent(&["estimate", "/nonexistent/counts.txt"]).status.code(), Some(2));
    assert_eq!(pyent(&["estimate", good.to_str().unwrap(), "--method", "bogus"]).status.code(), Some(3));
    assert_eq!(pyent(&["pmf", "--d", "1.5", "--alpha", "1", "--k-max", "3"]).status.code(), Some(3));
}

#[test]
fn select_lists_candidates() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "y.txt", "1\n1\n2\n");
    let v = json(&pyent(&["select", file.to_str().unwrap()]));
    let candidates = v["candidates"].as_array().unwrap();
    let labels: Vec<&str> = candidates.iter().map(|c| c["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["boundary_d0", "clamped", "boundary_face"]);
    let chosen = v["chosen"]["objective"].as_f64().unwrap();
    assert!(candidates.iter().all(|c| chosen <= c["objective"].as_f64().unwrap()));

    let text = pyent(&["--format", "text", "select", file.to_str().unwrap()]);
    let text = String::from_utf8(text.stdout).unwrap();
    assert!(text.contains("candidate argmin") && text.contains("boundary_d0"));
}

#[test]
fn pmf_rows() {
    let out = pyent(&["pmf", "--d", "0", "--alpha", "1", "--k-max", "3"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines, ["k,pmf", "1,0.5", "2,0.25", "3,0.125"]);
}

#[test]
fn simulate_dry_run_validates_profiles() {
    for name in ["desk.json", "full.json"] {
        let out = pyent(&["simulate", &profile(name), "--dry-run"]);
        assert!(out.status.success(), "{name}");
        let said = [out.stdout, out.stderr].concat();
        assert!(String::from_utf8_lossy(&said).contains("5 scenarios"));
    }
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "c.json", r#"{"scenarios": [{"id": "x"}]}"#);
    assert_ne!(pyent(&["simulate", broken.to_str().unwrap(), "--dry-run"]).status.code(), Some(0));
}

#[test]
fn simulate_writes_csv_and_honours_seed() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "c.json",
        r#"{"scenarios": [{
            "id": "tiny",
            "population": {"kind": "dirichlet_symmetric", "a": 0.5, "K": 50},
            "sample_sizes": [20, 40],
            "replications": 5,
            "master_seed": 7,
            "estimators": ["mle", "proposed", {"dpym_fixed": {"d": 0.5, "alpha": 0}}]
        }]}"#,
    );
    let cfg = cfg.to_str().unwrap();
    let run = |extra: &[&str]| {
        let out = dir.path().join("out.csv");
        let mut args = extra.to_vec();
        args.extend(["simulate", cfg, "--out", out.to_str().unwrap()]);
        assert!(pyent(&args).status.success());
        fs::read_to_string(out).unwrap()
    };
    let plain = run(&[]);
    let lines: Vec<&str> = plain.split("\r\n").filter(|l| !l.is_empty()).collect();
    assert_eq!(lines[0], "scenario,N,method,mse,bias,variance,reps,seed");
    assert_eq!(lines.len(), 1 + 2 * 3);
    assert!(lines[1].starts_with("tiny,20,mle,"));
    assert!(lines[3].starts_with("tiny,20,\"dpym_fixed(d=0.5,alpha=0)\"") || lines[3].starts_with("tiny,20,dpym_fixed(d=0.5,alpha=0)"));
    assert!(lines[1].ends_with(",5,7"));

    let reseeded = run(&["--seed", "8"]);
    assert_ne!(plain, reseeded);
    assert!(reseeded.lines().nth(1).unwrap().ends_with(",5,8"));
    assert_eq!(run(&["--threads", "1"]), plain);
}

#[test]
fn curves_emit_csv() {
    let out = pyent(&["--seed", "3", "curves", "--k", "40", "--n", "30", "--points", "5"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("alpha,kl,bound_minus_entropy"));
    let rows: Vec<Vec<f64>> = lines.map(|l| l.split(',').map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 5);
    for r in rows {
        // The bound dominates the cross entropy, so f - H >= KL.
        assert!(r[1] >= 0.0 && r[2] >= r[1] - 1e-9, "{r:?}");
    }
}
