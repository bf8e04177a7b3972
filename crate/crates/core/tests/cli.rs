use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn mpdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mpdist")).args(args).output().expect("spawn mpdist")
}

fn stdout(o: &Output) -> String {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, body: &str) -> String {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

const IDENTITY: &str = r#"{"n":3,"units":[
  {"weights":["1","0","0"],"theta":"1"},
  {"weights":["0","1","0"],"theta":"1"},
  {"weights":["0","0","1"],"theta":"1"}]}"#;

const SWAP: &str = r#"{"n":2,"units":[
  {"weights":["0","1"],"theta":"1"},
  {"weights":["1","0"],"theta":"1"}]}"#;

#[test]
fn generate_identity_and_swap() {
    let d = TempDir::new().unwrap();
    let id = write(&d, "id.json", IDENTITY);
    let out = path(&d, "y.txt");
    stdout(&mpdist(&["generate", "--system", &id, "--seed-state", "101", "--t", "6", "--out", &out]));
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), "101101");

    let sw = write(&d, "swap.json", SWAP);
    stdout(&mpdist(&["generate", "--system", &sw, "--seed-state", "10", "--t", "6", "--out", &out]));
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), "100110");

    stdout(&mpdist(&["generate", "--system", &sw, "--seed-state", "01", "--t", "2", "--out", &out]));
    assert_eq!(fs::read_to_string(&out).unwrap().trim(), "01");
}

#[test]
fn generate_rejects_wrong_seed_length() {
    let d = TempDir::new().unwrap();
    let id = write(&d, "id.json", IDENTITY);
    let o = mpdist(&["generate", "--system", &id, "--seed-state", "10", "--t", "6", "--out", &path(&d, "y")]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error:"));
}

#[test]
fn distinguish_single_round_trip_with_witness() {
    let d = TempDir::new().unwrap();
    let sw = write(&d, "swap.json", SWAP);
    let y = path(&d, "y.txt");
    stdout(&mpdist(&["generate", "--system", &sw, "--seed-state", "10", "--t", "12", "--out", &y]));
    let w = path(&d, "w.json");
    let out = stdout(&mpdist(&["distinguish", "single", "--n", "2", "--stream", &y, "--witness", &w]));
    assert_eq!(out.trim(), "McCulloch-Pitts");
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&w).unwrap()).unwrap();
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
}

#[test]
fn distinguish_single_random_and_short() {
    let d = TempDir::new().unwrap();
    let y = write(&d, "y.txt", "001101011100\n");
    let w = path(&d, "w.json");
    let out = stdout(&mpdist(&["distinguish", "single", "--n", "2", "--stream", &y, "--witness", &w]));
    assert_eq!(out.trim(), "random");
    assert!(!Path::new(&w).exists());

    let o = mpdist(&["distinguish", "single", "--n", "12", "--stream", &y]);
    assert!(!o.status.success());
}

#[test]
fn distinguish_packed_stream() {
    let d = TempDir::new().unwrap();
    let sw = write(&d, "swap.json", SWAP);
    let y = path(&d, "y.bin");
    stdout(&mpdist(&[
        "generate", "--system", &sw, "--seed-state", "11", "--t", "20", "--out", &y, "--format", "packed",
    ]));
    assert_eq!(fs::read(&y).unwrap().len(), 8 + 3);
    let out = stdout(&mpdist(&["distinguish", "single", "--n", "2", "--stream", &y, "--format", "packed"]));
    assert_eq!(out.trim(), "McCulloch-Pitts");
}

#[test]
fn distinguish_multi() {
    let d = TempDir::new().unwrap();
    let s = write(&d, "s.txt", "000\n011\n101\n110\n");
    assert_eq!(stdout(&mpdist(&["distinguish", "multi", "--n", "2", "--samples", &s])).trim(), "random");
    let s = write(&d, "s.txt", "000\n010\n111\n\n");
    assert_eq!(
        stdout(&mpdist(&["distinguish", "multi", "--n", "2", "--samples", &s])).trim(),
        "McCulloch-Pitts"
    );
    let s = write(&d, "s.txt", "000\n01\n");
    assert!(!mpdist(&["distinguish", "multi", "--n", "2", "--samples", &s]).status.success());
}

#[test]
fn separable_command() {
    let d = TempDir::new().unwrap();
    let x = write(&d, "xor.json", r#"{"n":2,"positive":["01","10"],"negative":["00","11"]}"#);
    assert_eq!(stdout(&mpdist(&["separable", "--dichotomy", &x])).trim(), "inseparable");
    let a = write(&d, "and.json", r#"{"n":2,"positive":["11"],"negative":["00","01","10"]}"#);
    let w = path(&d, "w.json");
    assert_eq!(stdout(&mpdist(&["separable", "--dichotomy", &a, "--witness", &w])).trim(), "separable");
    assert!(Path::new(&w).exists());
}

#[test]
fn count_commands() {
    assert_eq!(stdout(&mpdist(&["count", "bound", "--m", "4", "--n", "2"])).trim(), "14");
    assert_eq!(stdout(&mpdist(&["count", "bound", "--m", "8", "--n", "3"])).trim(), "128");

    let csv = stdout(&mpdist(&["count", "table", "--m-max", "3", "--n-max", "2"]));
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "m,n,regions");
    assert!(lines.contains(&"3,2,6"));
    let json = stdout(&mpdist(&["count", "table", "--m-max", "3", "--n-max", "2", "--format", "json"]));
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["rows"][2][1], "6");

    let d = TempDir::new().unwrap();
    let p = write(&d, "p.txt", "00\n01\n10\n11\n");
    let v: serde_json::Value =
        serde_json::from_str(&stdout(&mpdist(&["count", "enumerate", "--points", &p]))).unwrap();
    assert_eq!(v["separable_count"], 14);
    assert_eq!(v["bound"], "14");
    assert_eq!(v["attained"], true);
}

#[test]
fn cycle_command() {
    let d = TempDir::new().unwrap();
    let sw = write(&d, "swap.json", SWAP);
    let out = stdout(&mpdist(&["cycle", "--system", &sw, "--seed-state", "10"]));
    assert_eq!(out, "tail_length 0\ncycle_length 2\n");
}

#[test]
fn experiment_json_report_and_sweep() {
    let d = TempDir::new().unwrap();
    let cfg = write(&d, "c.json", r#"{"n":4,"trials":20,"rng_seed":3}"#);
    let r = path(&d, "r.json");
    let out = stdout(&mpdist(&["experiment", "soundness", "--config", &cfg, "--json", "--report", &r]));
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["verdicts"]["random"], 0);
    assert_eq!(v["soundness_failure"], false);
    assert_eq!(fs::read_to_string(&r).unwrap().trim(), out.trim());

    let csv = stdout(&mpdist(&["experiment", "completeness-single", "--config", &cfg, "--sweep", "10:20:5"]));
    assert_eq!(csv.lines().count(), 4);
    assert_eq!(csv.lines().next().unwrap(), "length,trials,random,rate");

    let summary = stdout(&mpdist(&["experiment", "collision", "--config", &cfg]));
    assert!(!summary.is_empty());
}

#[test]
fn experiment_rejects_unknown_fields() {
    let d = TempDir::new().unwrap();
    let cfg = write(&d, "c.json", r#"{"n":4,"trials":20,"rng_seed":3,"bogus":1}"#);
    let o = mpdist(&["experiment", "soundness", "--config", &cfg]);
    assert!(!o.status.success());
}
