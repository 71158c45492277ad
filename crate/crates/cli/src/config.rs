use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::ValueEnum;
use resnf::fit::log_grid;
use resnf::model::ExpandOptions;
use serde::Deserialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scenario {
    SeagullOrder1,
    SeagullOrder2,
    SeagullStability,
    AppendixSpectral,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::SeagullOrder1 => "seagull-order1",
            Scenario::SeagullOrder2 => "seagull-order2",
            Scenario::SeagullStability => "seagull-stability",
            Scenario::AppendixSpectral => "appendix-spectral",
        }
    }

    /// Normalization order the scenario needs.
    pub fn order(self) -> usize {
        match self {
            Scenario::SeagullOrder1 => 1,
            _ => 2,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Truncation {
    pub ell_max: usize,
    pub s_max: usize,
    pub max_harmonic: i32,
    pub drop_tol: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        let d = ExpandOptions::default();
        Truncation {
            ell_max: d.ell_max,
            s_max: d.s_max,
            max_harmonic: d.max_harmonic,
            drop_tol: d.drop_tol,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    /// Local error tolerance of the period map.
    pub integration: f64,
    /// Final residual of the Newton continuation.
    pub newton: f64,
    pub residual_slope: f64,
    pub distance_slope: f64,
    pub spectral_slope: f64,
    /// Distance from the unit circle below which a multiplier counts as on it.
    pub circle: f64,
    pub symplectic: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            integration: 1e-13,
            newton: 1e-10,
            residual_slope: 0.15,
            distance_slope: 0.2,
            spectral_slope: 0.1,
            circle: 1e-4,
            symplectic: 1e-8,
        }
    }
}

/// Contents of the TOML run configuration. Command-line flags override the
/// scenario, output directory and seed.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RunConfig {
    pub scenario: Option<Scenario>,
    pub out: Option<PathBuf>,
    pub seed: u64,
    pub gamma: f64,
    pub istar: f64,
    pub eps: Vec<f64>,
    /// Sweep for the orbit distance, which needs larger `eps` to resolve.
    pub distance_eps: Vec<f64>,
    pub r_max: usize,
    /// Random matrix families per appendix check.
    pub families: usize,
    pub truncation: Truncation,
    pub tolerances: Tolerances,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: None,
            out: None,
            seed: 0,
            gamma: 1.0,
            istar: 1.0,
            eps: log_grid(1e-4, 1e-3, 5),
            distance_eps: log_grid(4e-3, 4e-2, 5),
            r_max: 2,
            families: 100,
            truncation: Truncation::default(),
            tolerances: Tolerances::default(),
        }
    }
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn scenario(&self) -> Result<Scenario> {
        self.scenario.context("no scenario given (use --scenario or `scenario` in the config)")
    }

    pub fn expand_options(&self) -> ExpandOptions {
        ExpandOptions {
            ell_max: self.truncation.ell_max,
            s_max: self.truncation.s_max,
            max_harmonic: self.truncation.max_harmonic,
            drop_tol: self.truncation.drop_tol,
            ..ExpandOptions::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let scenario = self.scenario()?;
        check_sweep("eps", &self.eps)?;
        check_sweep("distance_eps", &self.distance_eps)?;
        if self.r_max < 1 {
            bail!("r_max must be at least 1");
        }
        if self.r_max < scenario.order() {
            bail!("scenario {} needs r_max >= {}", scenario.name(), scenario.order());
        }
        if !(self.gamma.is_finite() && self.gamma != 0.0) {
            bail!("gamma must be finite and nonzero");
        }
        if !(self.istar.is_finite() && self.istar > 0.0) {
            bail!("istar must be positive");
        }
        if self.families == 0 {
            bail!("families must be positive");
        }
        let t = &self.tolerances;
        for (name, v) in [
            ("integration", t.integration),
            ("newton", t.newton),
            ("residual_slope", t.residual_slope),
            ("distance_slope", t.distance_slope),
            ("spectral_slope", t.spectral_slope),
            ("circle", t.circle),
            ("symplectic", t.symplectic),
            ("drop_tol", self.truncation.drop_tol),
        ] {
            if !(v.is_finite() && v > 0.0) {
                bail!("tolerance {name} must be positive");
            }
        }
        Ok(())
    }
}

fn check_sweep(name: &str, eps: &[f64]) -> Result<()> {
    if eps.is_empty() {
        bail!("{name} list is empty");
    }
    if let Some(e) = eps.iter().find(|e| !(e.is_finite() && **e > 0.0)) {
        bail!("{name} entries must be positive, found {e}");
    }
    if eps.windows(2).any(|w| w[0] >= w[1]) {
        bail!("{name} list must be strictly increasing");
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parsed(text: &str) -> Result<RunConfig> {
        let c = RunConfig::parse(text)?;
        c.validate()?;
        Ok(c)
    }

    #[test]
    fn defaults_are_valid() {
        let c = parsed("scenario = \"seagull-order2\"").unwrap();
        assert_eq!(c.scenario, Some(Scenario::SeagullOrder2));
        assert_eq!(c.eps.len(), 5);
        assert_eq!(c.r_max, 2);
    }

    #[test]
    fn sweeps_must_be_positive_and_sorted() {
        assert!(parsed("scenario = \"seagull-order1\"\neps = []").is_err());
        assert!(parsed("scenario = \"seagull-order1\"\neps = [1e-3, 1e-4]").is_err());
        assert!(parsed("scenario = \"seagull-order1\"\neps = [0.0, 1e-4]").is_err());
        assert!(parsed("scenario = \"seagull-order1\"\neps = [1e-4, 1e-4]").is_err());
    }

    #[test]
    fn order_and_fields_are_checked() {
        assert!(parsed("scenario = \"seagull-order1\"\nr_max = 0").is_err());
        assert!(parsed("scenario = \"seagull-order2\"\nr_max = 1").is_err());
        assert!(parsed("scenario = \"seagull-order1\"\nr_max = 1").is_ok());
        assert!(parsed("scenario = \"seagull-order1\"\nlambda = 1").is_err());
        assert!(parsed("scenario = \"seagull-order3\"").is_err());
        assert!(parsed("gamma = 1.0").is_err());
        assert!(parsed("scenario = \"seagull-order1\"\n[tolerances]\nnewton = -1.0").is_err());
    }
}
