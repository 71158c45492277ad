use nalgebra::DMatrix;
use num_complex::Complex64;

use super::linear::LinearVectorField;
use super::spectral::{complex_eigenvalues, eigenvalues, match_spectra, MatchedPair};
use crate::error::{Error, Result};

/// Floquet multipliers of a monodromy matrix split by proximity to
/// `Sigma(exp(L11 T))` and `Sigma(exp(L22 T))`.
#[derive(Clone, Debug)]
pub struct FloquetReport {
    pub period: f64,
    pub multipliers: Vec<Complex64>,
    pub sigma11: Vec<Complex64>,
    pub sigma22: Vec<Complex64>,
    pub reference11: Vec<Complex64>,
    pub reference22: Vec<Complex64>,
    /// Half the smallest distance between the two reference spectra.
    pub split_tol: f64,
    /// Multipliers of `Sigma11` within `unit_tol` of `1`.
    pub unit_count: usize,
    /// `|mu| - 1` for the members of `Sigma22`.
    pub circle_distance22: Vec<f64>,
    /// Largest distance between the multiset and its image under
    /// `mu -> 1 / conj(mu)`.
    pub reciprocity_defect: f64,
    /// Largest distance between the multiset and its conjugate.
    pub conjugation_defect: f64,
}

impl FloquetReport {
    /// Number of multipliers with `||mu| - 1| > tol`.
    pub fn off_circle(&self, tol: f64) -> usize {
        self.multipliers.iter().filter(|m| (m.norm() - 1.0).abs() > tol).count()
    }

    /// Largest distance of any multiplier from the unit circle.
    pub fn max_circle_distance(&self) -> f64 {
        self.multipliers.iter().map(|m| (m.norm() - 1.0).abs()).fold(0.0, f64::max)
    }

    /// `Sigma11` without the two multipliers closest to `1`.
    pub fn sigma11_nontrivial(&self) -> Vec<Complex64> {
        let mut v = self.sigma11.clone();
        v.sort_by(|a, b| (a - 1.0).norm().total_cmp(&(b - 1.0).norm()));
        v.split_off(2.min(v.len()))
    }
}

fn multiset_defect(a: &[Complex64], b: &[Complex64]) -> f64 {
    match match_spectra(a, b) {
        Ok(m) => m.iter().map(|p| p.distance).fold(0.0, f64::max),
        Err(_) => f64::INFINITY,
    }
}

/// Split the multipliers of `monodromy` against the linear field `l`.
pub fn floquet_split(
    monodromy: &DMatrix<f64>,
    l: &LinearVectorField,
    period: f64,
    unit_tol: f64,
) -> Result<FloquetReport> {
    let (a, b) = (l.l11.nrows(), l.l22.nrows());
    if monodromy.nrows() != a + b || !monodromy.is_square() {
        return Err(Error::DimensionMismatch {
            left: monodromy.shape(),
            right: (a + b, a + b),
        });
    }
    let reference11 = eigenvalues(&(&l.l11 * period).exp());
    let reference22 = complex_eigenvalues(&(&l.l22 * Complex64::new(period, 0.0)).exp())?;
    let mut gap = f64::INFINITY;
    for x in &reference11 {
        for y in &reference22 {
            gap = gap.min((x - y).norm());
        }
    }
    let split_tol = 0.5 * gap;
    let multipliers = eigenvalues(monodromy);
    let mut sigma11 = Vec::new();
    let mut sigma22 = Vec::new();
    for &m in &multipliers {
        let d1 = reference11.iter().map(|r| (r - m).norm()).fold(f64::INFINITY, f64::min);
        let d2 = reference22.iter().map(|r| (r - m).norm()).fold(f64::INFINITY, f64::min);
        if d1 < split_tol && d1 <= d2 {
            sigma11.push(m);
        } else if d2 < split_tol {
            sigma22.push(m);
        } else {
            return Err(Error::NotSeparable(format!(
                "multiplier {m} is {d1:.3e} / {d2:.3e} from the reference spectra, tolerance {split_tol:.3e}"
            )));
        }
    }
    if sigma11.len() != a || sigma22.len() != b {
        return Err(Error::NotSeparable(format!(
            "split {} + {} does not match the block sizes {a} + {b}",
            sigma11.len(),
            sigma22.len()
        )));
    }
    let unit_count = sigma11.iter().filter(|m| (*m - 1.0).norm() <= unit_tol).count();
    let circle_distance22 = sigma22.iter().map(|m| m.norm() - 1.0).collect();
    let recip: Vec<Complex64> = multipliers.iter().map(|m| 1.0 / m.conj()).collect();
    let conj: Vec<Complex64> = multipliers.iter().map(|m| m.conj()).collect();
    Ok(FloquetReport {
        period,
        reciprocity_defect: multiset_defect(&multipliers, &recip),
        conjugation_defect: multiset_defect(&multipliers, &conj),
        multipliers,
        sigma11,
        sigma22,
        reference11,
        reference22,
        split_tol,
        unit_count,
        circle_distance22,
    })
}

/// Match the nontrivial part of `Sigma11` against `exp(lambda T)` for the
/// nonzero exponents `lambda` of `L11`.
pub fn multiplier_localization(report: &FloquetReport, exponents: &[Complex64]) -> Result<Vec<MatchedPair>> {
    let reference: Vec<Complex64> = exponents.iter().map(|l| (l * report.period).exp()).collect();
    match_spectra(&reference, &report.sigma11_nontrivial())
}
