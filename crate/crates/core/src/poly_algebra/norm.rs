use super::coeff::Coefficient;
use super::series::TaylorFourierSeries;
use crate::error::{Error, Result};

/// Radii of the weighted Fourier norm.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormWeights {
    /// Action radius.
    pub rho: f64,
    /// Angle strip width.
    pub sigma: f64,
    /// Transverse radius.
    pub r: f64,
    /// Common shrink factor in `(0, 1]` applied to all three radii.
    pub scale: f64,
}

impl Default for NormWeights {
    fn default() -> Self {
        NormWeights {
            rho: 1.0,
            sigma: 1.0,
            r: 1.0,
            scale: 1.0,
        }
    }
}

impl NormWeights {
    pub fn new(rho: f64, sigma: f64, r: f64, scale: f64) -> Result<Self> {
        if !(rho > 0.0 && sigma > 0.0 && r > 0.0 && scale > 0.0 && scale <= 1.0) {
            return Err(Error::InvalidInput(format!(
                "norm weights must be positive with scale <= 1: ({rho}, {sigma}, {r}, {scale})"
            )));
        }
        Ok(NormWeights {
            rho,
            sigma,
            r,
            scale,
        })
    }

    /// The same radii shrunk by `1 - d`.
    pub fn shrunk(&self, d: f64) -> Self {
        NormWeights {
            scale: self.scale * (1.0 - d),
            ..*self
        }
    }
}

/// `sum |c| rho^{|l|} R^{|m1|+|m2|} exp(|k|_1 sigma)` with all radii scaled.
pub fn weighted_norm<C: Coefficient>(f: &TaylorFourierSeries<C>, w: &NormWeights) -> f64 {
    let rho = w.rho * w.scale;
    let sig = w.sigma * w.scale;
    let r = w.r * w.scale;
    f.iter()
        .map(|(idx, c)| {
            c.magnitude()
                * rho.powi(idx.action_degree())
                * r.powi(idx.transverse_degree())
                * (idx.harmonic_l1() as f64 * sig).exp()
        })
        .fold(0.0, |a, b| a + b)
}
