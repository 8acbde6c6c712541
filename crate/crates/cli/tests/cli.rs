use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

use hyptile::hypgeo::TileIndex;
use hyptile::subshift::SubshiftSpec;
use hyptile_cli::{build, fmt_num, tile_path, Command as Job, JobConfig};

fn write_spec(dir: &TempDir, name: &str, json: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, json).unwrap();
    p
}

fn hyptile(args: &[&str], spec: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyptile"))
        .args(args)
        .arg("--spec")
        .arg(spec)
        .env("HYPTILE_THREADS", "2")
        .output()
        .unwrap()
}

fn result_of(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice::<Value>(&out.stdout).unwrap()["result"].clone()
}

#[test]
fn kgroups_of_period_two() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "p12.json", r#"{"type": "periodic", "word": "12"}"#);
    let r = result_of(&hyptile(&["kgroups"], &spec));
    assert_eq!(r["K0"]["rank"], 1);
    assert_eq!(r["K0"]["torsion"], serde_json::json!([3]));
    assert_eq!(r["K1"]["rank"], 1);
    assert_eq!(r["stabilized"], true);
}

#[test]
fn gaplabels_of_period_three() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "p112.json", r#"{"type": "periodic", "word": "112"}"#);
    let r = result_of(&hyptile(&["gaplabels", "--nmax", "4"], &spec));
    assert_eq!(r["field"]["kind"], "rational");
    assert_eq!(r["generators"][0]["value"], "1/3");
}

#[test]
fn stochastic_output_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tm.json", r#"{"type": "substitution", "rules": {"1": "12", "2": "21"}}"#);
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = hyptile(&["cocycle", "--samples", "20000", "--seed", "4", "--out", out.to_str().unwrap()], &spec);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        assert!(o.stdout.is_empty());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // thread count does not change the numbers
    let single = Command::new(env!("CARGO_BIN_EXE_hyptile"))
        .args(["cocycle", "--samples", "20000", "--seed", "4", "--spec"])
        .arg(&spec)
        .env("HYPTILE_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(single.stdout, std::fs::read(&a).unwrap());
}

#[test]
fn missing_seed_is_a_config_error() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tm.json", r#"{"type": "substitution", "rules": {"1": "12", "2": "21"}}"#);
    let out = hyptile(&["hullcheck"], &spec);
    assert_eq!(out.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "config");
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_spec_reports_json_error() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "bad.json", r#"{"type": "periodic"}"#);
    let out = hyptile(&["measures"], &spec);
    assert_eq!(out.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(err["error"]["message"].as_str().unwrap().contains("spec"));
    let missing = hyptile(&["measures"], &dir.path().join("nope.json"));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "io");
}

#[test]
fn failed_write_leaves_no_file() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "p1.json", r#"{"type": "periodic", "word": "1"}"#);
    let target = dir.path().join("missing_dir").join("out.csv");
    let out = hyptile(&["measures", "--out", target.to_str().unwrap()], &spec);
    assert!(!out.status.success());
    assert!(!target.exists());
}

#[test]
fn measures_csv_for_thue_morse() {
    let dir = TempDir::new().unwrap();
    let spec = write_spec(&dir, "tm.json", r#"{"type": "substitution", "rules": {"1": "12", "2": "21"}}"#);
    let out = hyptile(&["measures", "--nmax", "2"], &spec);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[0].starts_with("# "));
    assert_eq!(lines[1], "n,word,measure,approx");
    assert!(lines.contains(&"2,11,1/6,0.16666666666666666"));
    assert!(lines.contains(&"2,12,1/3,0.3333333333333333"));
}

#[test]
fn base_tile_path() {
    let r = fmt_num(17f64.sqrt() / 4.0);
    let big = fmt_num(17f64.sqrt() / 2.0);
    let want = format!("M 0 -1 A {r} {r} 0 0 1 0.5 -1 A {r} {r} 0 0 1 1 -1 L 1 -2 A {big} {big} 0 0 0 0 -2 L 0 -1 Z");
    assert_eq!(tile_path(&TileIndex::new(0, 0)), want);
}

#[test]
fn glued_edges_trace_the_same_arc() {
    // the top of (0, 0) is the first bottom edge of (1, 0), walked backwards
    let below = tile_path(&TileIndex::new(0, 0));
    let above = tile_path(&TileIndex::new(1, 0));
    let big = fmt_num(17f64.sqrt() / 2.0);
    assert!(below.contains(&format!("L 1 -2 A {big} {big} 0 0 0 0 -2")));
    assert!(above.starts_with(&format!("M 0 -2 A {big} {big} 0 0 1 1 -2")));
}

#[test]
fn render_is_deterministic_and_clipped() {
    let spec = SubshiftSpec::periodic("12").unwrap();
    let mut config = JobConfig::new(Job::Render, spec);
    config.radius = 1.5;
    let a = build(&config).unwrap();
    assert_eq!(a, build(&config).unwrap());
    assert_eq!(a.extension, "svg");
    assert!(a.contents.contains("<clipPath"));
    assert!(a.contents.contains("<metadata>"));
    assert!(a.contents.contains(&config.palette[0]) && a.contents.contains(&config.palette[1]));
}
