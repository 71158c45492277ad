use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use resnf::fit::SlopeFit;
use serde::Serialize;

/// Whether a failed entry counts against the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Check,
    /// Informational unless `--strict`.
    Report,
}

#[derive(Clone, Debug)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub kind: Kind,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.to_string(),
            pass,
            kind: Kind::Check,
            detail: detail.into(),
        }
    }

    pub fn report(name: &str, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            kind: Kind::Report,
            ..Check::new(name, pass, detail)
        }
    }

    pub fn from_fit(fit: &SlopeFit) -> Self {
        Check::new(
            &format!("slope: {}", fit.name),
            fit.pass,
            format!("slope {:.4}, expected {} +- {}", fit.slope, fit.expected, fit.tol),
        )
    }

    pub fn counts(&self, strict: bool) -> bool {
        self.kind == Kind::Check || strict
    }

    fn status(&self, strict: bool) -> &'static str {
        match (self.pass, self.counts(strict)) {
            (true, _) => "pass",
            (false, true) => "fail",
            (false, false) => "warn",
        }
    }
}

/// A table kept as CSV records, header first.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&'static str]) -> Self {
        Table {
            header: header.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv::Writer::from_path(path).with_context(|| format!("creating {}", path.display()))?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Number formatting for tables: shortest round-trip representation.
pub fn num(x: f64) -> String {
    format!("{x:e}")
}

pub fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// Everything a scenario produces.
#[derive(Debug)]
pub struct Artifacts {
    pub scenario: &'static str,
    pub seed: u64,
    pub summary: Vec<String>,
    pub orbits: Table,
    pub stability: Table,
    pub ledger: Option<String>,
    pub slopes: Vec<SlopeFit>,
    pub extra: Vec<(&'static str, Table)>,
    pub checks: Vec<Check>,
}

impl Artifacts {
    pub fn new(scenario: &'static str, seed: u64) -> Self {
        Artifacts {
            scenario,
            seed,
            summary: Vec::new(),
            orbits: Table::new(&ORBIT_HEADER),
            stability: Table::new(&STABILITY_HEADER),
            ledger: None,
            slopes: Vec::new(),
            extra: Vec::new(),
            checks: Vec::new(),
        }
    }

    pub fn fit(&mut self, fit: SlopeFit) {
        self.checks.push(Check::from_fit(&fit));
        self.slopes.push(fit);
    }

    pub fn passed(&self, strict: bool) -> bool {
        self.checks.iter().all(|c| c.pass || !c.counts(strict))
    }

    pub fn failures(&self, strict: bool) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.pass && c.counts(strict)).collect()
    }

    pub fn write(&self, dir: &Path, strict: bool) -> Result<()> {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        fs::write(dir.join("summary.txt"), self.summary_text(strict))?;
        self.orbits.write(&dir.join("orbits.csv"))?;
        self.stability.write(&dir.join("stability.csv"))?;
        fs::write(dir.join("ledger.csv"), self.ledger.as_deref().unwrap_or(LEDGER_HEADER))?;
        self.slope_table().write(&dir.join("slopes.csv"))?;
        for (name, t) in &self.extra {
            t.write(&dir.join(name))?;
        }
        fs::write(dir.join("manifest.toml"), self.manifest(strict)?)?;
        Ok(())
    }

    fn slope_table(&self) -> Table {
        let mut t = Table::new(&SLOPE_HEADER);
        for f in &self.slopes {
            let lo = f.points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
            let hi = f.points.iter().map(|p| p.0).fold(0.0, f64::max);
            t.push(vec![
                f.name.clone(),
                num(f.slope),
                num(f.expected),
                num(f.tol),
                f.pass.to_string(),
                f.points.len().to_string(),
                num(lo),
                num(hi),
                num(f.coefficient()),
            ]);
        }
        t
    }

    fn summary_text(&self, strict: bool) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario: {}", self.scenario);
        let _ = writeln!(s, "seed: {}", self.seed);
        let _ = writeln!(s);
        for line in &self.summary {
            let _ = writeln!(s, "{line}");
        }
        let _ = writeln!(s);
        for c in &self.checks {
            let _ = writeln!(s, "[{}] {}: {}", c.status(strict).to_uppercase(), c.name, c.detail);
        }
        let _ = writeln!(
            s,
            "\n{}",
            if self.passed(strict) { "all checks pass" } else { "some checks fail" }
        );
        s
    }

    fn manifest(&self, strict: bool) -> Result<String> {
        #[derive(Serialize)]
        struct Entry<'a> {
            name: &'a str,
            status: &'static str,
            counts: bool,
            detail: &'a str,
        }
        #[derive(Serialize)]
        struct Manifest<'a> {
            scenario: &'a str,
            seed: u64,
            strict: bool,
            status: &'static str,
            failures: Vec<&'a str>,
            check: Vec<Entry<'a>>,
        }
        let m = Manifest {
            scenario: self.scenario,
            seed: self.seed,
            strict,
            status: if self.passed(strict) { "pass" } else { "fail" },
            failures: self.failures(strict).iter().map(|c| c.name.as_str()).collect(),
            check: self
                .checks
                .iter()
                .map(|c| Entry {
                    name: &c.name,
                    status: c.status(strict),
                    counts: c.counts(strict),
                    detail: &c.detail,
                })
                .collect(),
        };
        Ok(toml::to_string(&m)?)
    }
}

pub const ORBIT_HEADER: [&str; 11] = [
    "q2",
    "q3",
    "q4",
    "eps",
    "r",
    "approx_residual",
    "iterations",
    "final_residual",
    "distance",
    "symplectic_defect",
    "error",
];

pub const STABILITY_HEADER: [&str; 15] = [
    "q2",
    "q3",
    "q4",
    "eps",
    "label_q2",
    "label_q3",
    "label_q4",
    "verdict",
    "stable",
    "min_gap",
    "sigma_min_n11",
    "lambda_min_n11",
    "off_circle_approx",
    "off_circle_true",
    "error",
];

const SLOPE_HEADER: [&str; 9] = ["quantity", "slope", "expected", "tol", "pass", "points", "eps_min", "eps_max", "coefficient"];

const LEDGER_HEADER: &str = "r,delta_r,d_r,Xi_r,nu_rr,nu_bound,X0,zeta,chi1,chi2,chi3,chi4,X0_bound,zeta_bound,chi1_bound,chi2_bound,chi3_bound,chi4_bound,eps_star,c1\n";
