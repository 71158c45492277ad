use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("resnf-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn resnf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_resnf")).args(args).output().unwrap()
}

fn with_config(dir: &Path, toml: &str, extra: &[&str]) -> Output {
    let cfg = dir.join("run.toml");
    fs::write(&cfg, toml).unwrap();
    let out = dir.join("out");
    let mut args = vec!["--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    args.extend_from_slice(extra);
    resnf(&args)
}

fn manifest(dir: &Path) -> toml::Table {
    fs::read_to_string(dir.join("out/manifest.toml")).unwrap().parse().unwrap()
}

fn failures(m: &toml::Table) -> Vec<String> {
    m["failures"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap().to_string())
        .collect()
}

fn csv_rows(path: &Path) -> Vec<csv::StringRecord> {
    csv::Reader::from_path(path).unwrap().records().map(Result::unwrap).collect()
}

#[test]
fn config_errors_exit_with_two() {
    let dir = scratch("config");
    for bad in [
        "scenario = \"seagull-order1\"\neps = []",
        "scenario = \"seagull-order1\"\neps = [1e-3, 1e-4]",
        "scenario = \"seagull-order1\"\nr_max = 0",
        "scenario = \"seagull-order1\"\nunknown = 1",
        "eps = [1e-4, 1e-3]",
        "scenario = \"seagull-order9\"",
        "not toml",
    ] {
        let o = with_config(&dir, bad, &[]);
        assert_eq!(o.status.code(), Some(2), "{bad}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(String::from_utf8_lossy(&o.stderr).contains("config error"));
    }
    assert_eq!(resnf(&["--config", "/nonexistent/run.toml"]).status.code(), Some(2));
    assert!(!dir.join("out").exists());
}

#[test]
fn first_order_scenario_passes_and_writes_every_artifact() {
    let dir = scratch("order1");
    let o = with_config(&dir, "scenario = \"seagull-order1\"", &["--strict"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["summary.txt", "orbits.csv", "stability.csv", "ledger.csv", "slopes.csv", "manifest.toml"] {
        assert!(dir.join("out").join(f).exists(), "{f}");
    }
    let m = manifest(&dir);
    assert_eq!(m["status"].as_str(), Some("pass"));
    assert!(failures(&m).is_empty());
    let orbits = csv_rows(&dir.join("out/orbits.csv"));
    assert_eq!(orbits.len(), 8 * 5);
    let slopes = csv_rows(&dir.join("out/slopes.csv"));
    let residual = slopes.iter().find(|r| &r[0] == "max residual").unwrap();
    assert!((residual[1].parse::<f64>().unwrap() - 2.0).abs() < 0.15);
    let ledger = csv_rows(&dir.join("out/ledger.csv"));
    assert_eq!(ledger.len(), 1);
}

#[test]
fn second_order_scenario_continues_every_orbit() {
    let dir = scratch("order2");
    let o = with_config(&dir, "scenario = \"seagull-order2\"", &[]);
    // the orbit distance scales one order better than the bound predicts
    assert_eq!(o.status.code(), Some(1));
    let m = manifest(&dir);
    assert_eq!(failures(&m), vec!["slope: max distance".to_string()]);
    let orbits = csv_rows(&dir.join("out/orbits.csv"));
    assert_eq!(orbits.len(), 8 * 10);
    for r in &orbits {
        assert_eq!(&r[10], "", "error in {r:?}");
        assert!(r[7].parse::<f64>().unwrap() <= 1e-10);
    }
    let slopes = csv_rows(&dir.join("out/slopes.csv"));
    let d = slopes.iter().find(|r| &r[0] == "max distance").unwrap();
    assert!((d[1].parse::<f64>().unwrap() - 3.0).abs() < 0.2);
    assert_eq!(csv_rows(&dir.join("out/ledger.csv")).len(), 2);
}

#[test]
fn stability_scenario_finds_one_stable_orbit_per_sign() {
    for (gamma, istar, want) in [(1.0, 1.0, "(pi,pi,pi)"), (-1.0, 2.0, "(0,pi,0)")] {
        let dir = scratch(&format!("stability{gamma}"));
        let toml = format!("scenario = \"seagull-stability\"\ngamma = {gamma:?}\nistar = {istar:?}");
        let o = with_config(&dir, &toml, &[]);
        // sigma_min(N11) scales as eps^2, not eps
        assert_eq!(o.status.code(), Some(1));
        assert_eq!(failures(&manifest(&dir)), vec!["slope: sigma_min(N11)".to_string()]);
        let summary = fs::read_to_string(dir.join("out/summary.txt")).unwrap();
        assert!(summary.contains(&format!("stable configurations: {want}\n")), "{summary}");
        let rows = csv_rows(&dir.join("out/stability.csv"));
        assert_eq!(rows.len(), 8 * 5);
        assert_eq!(rows.iter().filter(|r| &r[8] == "true").count(), 5);
        assert!(rows.iter().all(|r| r[12] == r[13]));
    }
}

#[test]
fn resonant_parameters_are_reported_not_fatal() {
    // omega + Omega vanishes at gamma = -1, I* = 1
    let dir = scratch("resonant");
    let toml = "scenario = \"seagull-stability\"\ngamma = -1.0\neps = [1e-4, 1e-3]";
    let o = with_config(&dir, toml, &[]);
    assert_eq!(o.status.code(), Some(1));
    let f = failures(&manifest(&dir));
    assert!(f.contains(&"multiplier pattern".to_string()), "{f:?}");
    let rows = csv_rows(&dir.join("out/stability.csv"));
    assert!(rows.iter().any(|r| !r[14].is_empty()));
}

#[test]
fn appendix_scenario_is_deterministic() {
    let dir = scratch("appendix");
    let toml = "scenario = \"appendix-spectral\"\nfamilies = 30";
    let a = with_config(&dir, toml, &["--seed", "5", "--jobs", "1"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    let first: Vec<Vec<u8>> = ["families.csv", "slopes.csv", "summary.txt", "manifest.toml"]
        .iter()
        .map(|f| fs::read(dir.join("out").join(f)).unwrap())
        .collect();
    let b = with_config(&dir, toml, &["--seed", "5", "--jobs", "3"]);
    assert_eq!(b.status.code(), Some(0));
    let second: Vec<Vec<u8>> = ["families.csv", "slopes.csv", "summary.txt", "manifest.toml"]
        .iter()
        .map(|f| fs::read(dir.join("out").join(f)).unwrap())
        .collect();
    assert_eq!(first, second);
    let rows = csv_rows(&dir.join("out/families.csv"));
    assert_eq!(rows.len(), 60);
    assert!(rows.iter().all(|r| &r[4] == "true"));
    assert_eq!(manifest(&dir)["seed"].as_integer(), Some(5));
}

#[test]
fn flags_override_the_config() {
    let dir = scratch("flags");
    let o = with_config(&dir, "scenario = \"seagull-order2\"\nr_max = 1", &["--scenario", "seagull-order1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(manifest(&dir)["scenario"].as_str(), Some("seagull-order1"));
}
