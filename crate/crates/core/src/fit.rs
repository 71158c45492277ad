//! Log-log slope fits for convergence-order checks.

use crate::error::{Error, Result};

/// A least-squares fit of `log value` against `log eps`.
#[derive(Clone, Debug, PartialEq)]
pub struct SlopeFit {
    pub name: String,
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    /// `log value` at `log eps = 0`.
    pub intercept: f64,
    pub expected: f64,
    pub tol: f64,
    pub pass: bool,
}

impl SlopeFit {
    /// Ratio between the largest and smallest abscissa.
    pub fn span(&self) -> f64 {
        let lo = self.points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hi = self.points.iter().map(|p| p.0).fold(0.0, f64::max);
        hi / lo
    }

    /// `exp(intercept)`, the coefficient of the fitted power law.
    pub fn coefficient(&self) -> f64 {
        self.intercept.exp()
    }
}

/// Fit a power law to positive `(eps, value)` pairs. The verdict requires at
/// least four points spanning a decade and `|slope - expected| <= tol`.
pub fn fit_slope(name: &str, pairs: &[(f64, f64)], expected: f64, tol: f64) -> Result<SlopeFit> {
    if pairs.len() < 2 {
        return Err(Error::InvalidInput(format!("{name}: a slope needs at least two points")));
    }
    if let Some(p) = pairs.iter().find(|p| !(p.0 > 0.0 && p.1 > 0.0 && p.0.is_finite() && p.1.is_finite())) {
        return Err(Error::InvalidInput(format!("{name}: non-positive pair ({:e}, {:e})", p.0, p.1)));
    }
    let n = pairs.len() as f64;
    let xs: Vec<f64> = pairs.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput(format!("{name}: all abscissae coincide")));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = sxy / sxx;
    let mut fit = SlopeFit {
        name: name.to_string(),
        points: pairs.to_vec(),
        slope,
        intercept: my - slope * mx,
        expected,
        tol,
        pass: false,
    };
    fit.pass = pairs.len() >= 4 && fit.span() >= 10.0 * (1.0 - 1e-12) && (slope - expected).abs() <= tol;
    Ok(fit)
}

/// Coefficient `c` of `value ~ c eps^k` for a fixed exponent, as the
/// geometric mean of `value / eps^k`.
pub fn power_coefficient(pairs: &[(f64, f64)], k: f64) -> f64 {
    let n = pairs.len() as f64;
    (pairs.iter().map(|p| p.1.ln() - k * p.0.ln()).sum::<f64>() / n).exp()
}

/// `count` logarithmically spaced points from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if count == 1 {
        return vec![lo];
    }
    (0..count)
        .map(|i| (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / (count - 1) as f64).exp())
        .collect()
}
