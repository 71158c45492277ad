//! Batch driver: normalize, locate critical points, continue periodic orbits
//! and classify their stability for the named scenarios, writing CSV tables
//! and a pass/fail manifest.

mod config;
mod families;
mod report;
mod scenario;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::Parser;

use config::{RunConfig, Scenario};

#[derive(Debug, Parser)]
#[command(name = "resnf", version, about = "Resonant normal forms and periodic orbit continuation")]
struct Args {
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    scenario: Option<Scenario>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads for the eps sweeps; 0 uses all cores.
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    /// Count report-only checks as failures.
    #[arg(long)]
    strict: bool,
}

const EXIT_FAILED_CHECKS: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

fn load(args: &Args) -> Result<RunConfig> {
    let mut cfg = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if args.scenario.is_some() {
        cfg.scenario = args.scenario;
    }
    if args.out.is_some() {
        cfg.out = args.out.clone();
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn main() -> ExitCode {
    let args = Args::parse();
    let cfg = match load(&args) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config error: {e:#}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    if args.jobs > 0 {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(args.jobs).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_RUNTIME);
        }
    }
    let scenario = cfg.scenario.expect("validated");
    let out = cfg.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let run = || -> Result<bool> {
        let a = scenario::run(&cfg, scenario)?;
        a.write(&out, args.strict)?;
        for c in a.failures(args.strict) {
            eprintln!("FAIL {}: {}", c.name, c.detail);
        }
        Ok(a.passed(args.strict))
    };
    match run() {
        Ok(true) => {
            println!("{}: all checks pass, artifacts in {}", scenario.name(), out.display());
            ExitCode::SUCCESS
        }
        Ok(false) => {
            println!("{}: checks failed, see {}", scenario.name(), out.join("manifest.toml").display());
            ExitCode::from(EXIT_FAILED_CHECKS)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
