use std::path::Path;
use std::process::{Command, Output};

use cokfluct::cli::{RunConfig, HISTOGRAM_CSV, HOM_MOMENTS_CSV, L_MOMENTS_CSV, REPORT_FILE, TRIALS_CSV};
use cokfluct::ensembles::{EnsembleSpec, EntryDistribution, Layout};
use cokfluct::experiments::ExperimentConfig;
use cokfluct::Partition;

fn cokfluct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cokfluct")).args(args).output().expect("binary runs")
}

fn small_config(dir: &Path, layout: Layout, seed: u64) -> std::path::PathBuf {
    let spec = EnsembleSpec::new(2, layout, seed);
    let exp = ExperimentConfig::new(60)
        .with_groups(vec![Partition::new(vec![1]).unwrap()])
        .with_lambdas(vec![Partition::new(vec![1]).unwrap()])
        .with_d(2);
    let path = dir.join(format!("config_{seed}.json"));
    std::fs::write(&path, RunConfig::new(spec, exp).to_json().unwrap()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn simulate_is_reproducible_across_worker_counts() {
    let tmp = tempfile::tempdir().unwrap();
    let config = small_config(tmp.path(), Layout::constant_blocks(4, 5), 3);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    let out = cokfluct(&["simulate", "-c", s(&config), "-o", s(&a), "--workers", "1", "--reproducible"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let out = cokfluct(&["simulate", "-c", s(&config), "-o", s(&b), "--workers", "4", "--reproducible"]);
    assert!(out.status.success());
    for file in [REPORT_FILE, TRIALS_CSV, HISTOGRAM_CSV, HOM_MOMENTS_CSV, L_MOMENTS_CSV] {
        assert_eq!(std::fs::read(a.join(file)).unwrap(), std::fs::read(b.join(file)).unwrap(), "{file}");
    }
    let header = std::fs::read_to_string(a.join(HISTOGRAM_CSV)).unwrap();
    assert!(header.starts_with("c1,c2,count,mass\n"));
}

#[test]
fn unbalanced_entries_are_a_config_error() {
    let tmp = tempfile::tempdir().unwrap();
    let mut config = RunConfig::new(
        EnsembleSpec::new(2, Layout::constant_blocks(3, 3), 1).with_a(EntryDistribution::Constant { value: 0 }),
        ExperimentConfig::new(10),
    );
    config.output_dir = Some(tmp.path().join("out"));
    let path = tmp.path().join("bad.json");
    std::fs::write(&path, config.to_json().unwrap()).unwrap();
    let out = cokfluct(&["simulate", "-c", s(&path)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("A.3"));
    assert!(!tmp.path().join("out").exists());
}

#[test]
fn malformed_and_missing_configs_exit_two() {
    let tmp = tempfile::tempdir().unwrap();
    let path = tmp.path().join("junk.json");
    std::fs::write(&path, "{\"schema_version\": 1}").unwrap();
    assert_eq!(cokfluct(&["simulate", "-c", s(&path), "-o", "x"]).status.code(), Some(2));
    assert_eq!(cokfluct(&["simulate", "-c", "/nonexistent.json", "-o", "x"]).status.code(), Some(2));
}

#[test]
fn theory_prints_limits() {
    let out = cokfluct(&["theory", "-g", "1,1", "-g", "2", "-l", "1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("c = (1,4,3), c(G,l)/l! = 3/2"), "{text}");
    assert!(text.contains("c = (1,2,1), c(G,l)/l! = 1/2"), "{text}");

    let out = cokfluct(&["theory", "--json", "-g", "1"]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["groups"][0]["limit"], "1");
}

#[test]
fn compare_two_runs() {
    let tmp = tempfile::tempdir().unwrap();
    let ca = small_config(tmp.path(), Layout::MatrixProduct { n: 6, k: 4 }, 1);
    let cb = small_config(tmp.path(), Layout::constant_blocks(4, 4), 2);
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    assert!(cokfluct(&["simulate", "-c", s(&ca), "-o", s(&a)]).status.success());
    assert!(cokfluct(&["simulate", "-c", s(&cb), "-o", s(&b)]).status.success());
    let json = tmp.path().join("cmp.json");
    let out = cokfluct(&["compare", s(&a), s(&b), "--json", s(&json)]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("total variation distance"));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    let tv = doc["tv_distance"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&tv));

    assert_eq!(cokfluct(&["compare", s(&a), "/nonexistent"]).status.code(), Some(2));
}

#[test]
fn verify_suite_passes() {
    let out = cokfluct(&["verify", "cok"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("all checks passed"));
}
