use std::path::{Path, PathBuf};
use std::process::Command;

use core::f64::consts::{FRAC_PI_2, FRAC_PI_8, SQRT_2};
use extremal::docs::{BehaviorDoc, CorrelationDoc, FunctionalDoc};
use extremal_core::behavior::{chsh_functional, Behavior, Scenario};
use extremal_core::cert222::{RepParams222, Sign};
use serde_json::Value;
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn extremal(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_extremal")).args(args).output().expect("binary runs");
    Run {
        code: out.status.code().expect("exit code"),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut all = args.to_vec();
    all.extend(["--format", "json"]);
    let r = extremal(&all);
    let v = serde_json::from_str(&r.stdout).unwrap_or_else(|e| panic!("{e}: {} / {}", r.stdout, r.stderr));
    (r.code, v)
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, text).unwrap();
    path
}

fn write_behavior(dir: &TempDir, name: &str, b: &Behavior) -> PathBuf {
    write(dir, name, &serde_json::to_string(&BehaviorDoc::from(b)).unwrap())
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn chsh_point() -> Behavior {
    RepParams222::new(FRAC_PI_8, Sign::Plus, FRAC_PI_2, FRAC_PI_2).unwrap().behavior()
}

#[test]
fn validate_exit_codes() {
    let dir = TempDir::new().unwrap();
    let uniform = write_behavior(&dir, "u.json", &Behavior::uniform(Scenario::chsh()));
    let r = extremal(&["validate", s(&uniform)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.starts_with("valid"));

    let broken = write(&dir, "bad.json", "{ not json");
    assert_eq!(extremal(&["validate", s(&broken)]).code, 2);
    assert_eq!(extremal(&["validate", "/nonexistent/file.json"]).code, 2);

    let mut p = Behavior::uniform(Scenario::chsh()).probabilities().to_vec();
    p[0] += 0.1;
    p[1] -= 0.1;
    let signaling = write(&dir, "sig.json", &format!(r#"{{"scenario":{{"N":2,"M":2,"K":2}},"p":{p:?}}}"#));
    let r = extremal(&["validate", s(&signaling)]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("signaling_defect=0.1"), "{}", r.stdout);
}

#[test]
fn lhv_reports() {
    let dir = TempDir::new().unwrap();
    let uniform = write_behavior(&dir, "u.json", &Behavior::uniform(Scenario::chsh()));
    let (code, v) = json(&["lhv", s(&uniform)]);
    assert_eq!(code, 0);
    assert_eq!(v["inside"], true);

    let opt = write_behavior(&dir, "opt.json", &chsh_point());
    let (code, v) = json(&["lhv", s(&opt)]);
    assert_eq!(code, 1);
    assert!((v["witness_ratio"].as_f64().unwrap() - SQRT_2).abs() < 1e-6);
    assert!(v["vertex_max"].as_f64().unwrap() <= 1.0 + 1e-9);
    let doc: FunctionalDoc = serde_json::from_value(v["separating"].clone()).unwrap();
    assert!(doc.to_functional().is_ok());

    let pr = write_behavior(&dir, "pr.json", &Behavior::pr_box());
    let (code, v) = json(&["lhv", s(&pr)]);
    assert_eq!(code, 1);
    assert!((v["witness_ratio"].as_f64().unwrap() - 2.0).abs() < 1e-6);
}

#[test]
fn bounds_builtins_and_files() {
    let (code, v) = json(&["bounds", "chsh"]);
    assert_eq!(code, 0);
    assert_eq!(v["classical"].as_f64().unwrap(), 2.0);
    assert!((v["quantum"].as_f64().unwrap() - 2.0 * SQRT_2).abs() < 1e-6);
    assert_eq!(v["unique"], true);

    let dir = TempDir::new().unwrap();
    let zero = FunctionalDoc { scenario: Scenario::chsh().into(), c: vec![0.0; 16], label: None };
    let path = write(&dir, "zero.json", &serde_json::to_string(&zero).unwrap());
    let (code, v) = json(&["bounds", s(&path), "--grid", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["classical"].as_f64().unwrap(), 0.0);
    assert_eq!(v["quantum"].as_f64().unwrap(), 0.0);
    assert!(v["ratio"].is_null());

    let chsh = write(&dir, "chsh.json", &serde_json::to_string(&FunctionalDoc::from(&chsh_functional())).unwrap());
    let (_, v) = json(&["bounds", s(&chsh)]);
    assert_eq!(v["classical"].as_f64().unwrap(), 2.0);
    assert_eq!(extremal(&["bounds", "nosuch"]).code, 2);
}

#[test]
fn certify222_outcomes() {
    let (code, v) = json(&["certify222", "pi/8", "plus", "pi/2", "pi/2"]);
    assert_eq!(code, 0);
    assert!((v["bound"].as_f64().unwrap() - 4.0).abs() < 1e-9);
    assert!((v["lambda_squared"].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert_eq!(v["chsh_equivalent"], true);
    assert_eq!(v["verification"]["passed"], true);

    let r = extremal(&["certify222", "pi/8", "plus", "pi/2", "pi/2"]);
    assert!(r.stdout.contains("CHSH-equivalent"));

    let r = extremal(&["certify222", "0", "plus", "pi/2", "pi/2"]);
    assert_eq!(r.code, 1);
    assert!(r.stdout.contains("not applicable"));

    let r = extremal(&["certify222", "0.5", "minus", "1", "pi/3"]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("degenerate"), "{}", r.stderr);

    assert_eq!(extremal(&["certify222", "pi/8", "plus", "pi/2", "sideways"]).code, 2);
    assert_eq!(extremal(&["certify222", "pi/8", "up", "pi/2", "pi/2"]).code, 2);
    assert_eq!(extremal(&["certify222", "pi/8", "plus", "0", "pi/2"]).code, 2);
}

#[test]
fn scan_csv_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("scan.csv");
    let r = extremal(&["scan", "--grid", "8", "--out", s(&out)]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,theta_B,applicable,quantum_bound,classical_max,ratio"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 64);
    let mut last = (-1.0, -1.0);
    let mut peak: f64 = 0.0;
    for row in &rows {
        assert_eq!(row.len(), 6);
        let key = (row[0].parse::<f64>().unwrap(), row[1].parse::<f64>().unwrap());
        assert!(key > last);
        last = key;
        if row[2] == "true" {
            let ratio: f64 = row[5].parse().unwrap();
            assert!(ratio >= 1.0 - 1e-9);
            peak = peak.max(ratio);
        } else {
            assert!(row[3].is_empty() && row[5].is_empty());
        }
    }
    assert!((peak - SQRT_2).abs() < 1e-9);
    assert_eq!(extremal(&["scan", "--grid", "1"]).code, 2);
}

#[test]
fn csystem_sources() {
    let (code, v) = json(&["csystem"]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["parity"], "AlgebraicallySecure");

    let dir = TempDir::new().unwrap();
    let h = core::f64::consts::FRAC_1_SQRT_2;
    let chsh = CorrelationDoc { settings: 2, c: vec![vec![h, h], vec![h, -h]], a: None, b: None };
    let path = write(&dir, "chsh.json", &serde_json::to_string(&chsh).unwrap());
    let (code, v) = json(&["csystem", "--table", s(&path)]);
    assert_eq!(code, 0);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["rank_bounds"]["triangular"], true);
    let round: CorrelationDoc = serde_json::from_value(serde_json::json!({"M": v["M"], "c": v["c"]})).unwrap();
    for (u, w) in round.flat().unwrap().iter().zip(chsh.flat().unwrap()) {
        assert!((u - w).abs() < 1e-9);
    }

    let identity = write(&dir, "id.json", r#"{"M":3,"c":[[1,0,0],[0,1,0],[0,0,1]]}"#);
    let (code, v) = json(&["csystem", "--table", s(&identity)]);
    assert_eq!(code, 1);
    assert_eq!(v["rank"], 3);
    assert!(v["parity"].is_null());

    let pr = write(&dir, "pr.json", r#"{"M":2,"c":[[1,1],[1,-1]]}"#);
    let (code, v) = json(&["csystem", "--table", s(&pr)]);
    assert_eq!(code, 1);
    assert_eq!(v["completed"], false);
    assert!(v["psd_defect"].as_f64().unwrap() > 1e-3);

    let r = extremal(&["csystem", "--alice", "0,pi/3,2pi/3", "--bob", "pi/6,pi/2,5pi/6", "--state-x", "0"]);
    assert!(r.stdout.contains("rank=2"), "{}", r.stdout);
}

#[test]
fn classify_pipeline() {
    let dir = TempDir::new().unwrap();
    let uniform = write_behavior(&dir, "u.json", &Behavior::uniform(Scenario::chsh()));
    let (code, v) = json(&["classify", s(&uniform)]);
    assert_eq!(code, 0);
    assert_eq!(v["class"], "Classical");

    let opt = write_behavior(&dir, "opt.json", &chsh_point());
    let (code, v) = json(&["classify", s(&opt)]);
    assert_eq!(code, 0);
    assert_eq!(v["class"], "AlgebraicallySecureCandidate", "{v}");
    let trail = v["trail"].to_string();
    assert!(trail.contains("certificate verified") && trail.contains("even rank"), "{trail}");

    let noisy = Behavior::mixture(&[(0.85, &chsh_point()), (0.15, &Behavior::uniform(Scenario::chsh()))]).unwrap();
    let path = write_behavior(&dir, "noisy.json", &noisy);
    let (code, v) = json(&["classify", s(&path)]);
    assert_eq!(code, 1);
    assert_eq!(v["class"], "Unknown");
    assert!(!v["trail"].as_array().unwrap().is_empty());
}

#[test]
fn usage_errors() {
    assert_eq!(extremal(&[]).code, 2);
    assert_eq!(extremal(&["bounds", "chsh", "--tol", "-1"]).code, 2);
    assert_eq!(extremal(&["bounds", "chsh", "--format", "csv"]).code, 2);
    assert_eq!(extremal(&["frobnicate"]).code, 2);
}

#[test]
fn deterministic_for_fixed_seed() {
    let a = extremal(&["certify222", "pi/8", "minus", "pi/3", "2pi/3", "--seed", "7", "--format", "json"]);
    let b = extremal(&["certify222", "pi/8", "minus", "pi/3", "2pi/3", "--seed", "7", "--format", "json"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.code, b.code);
}
