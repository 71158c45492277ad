use nalgebra::DMatrix;
use num_complex::Complex64;

use super::linear::{assemble_l, LinearizationBlocks, LinearVectorField};
use super::spectral::{complex_eigenvalues, eigenvalues, min_pairwise_gap};
use crate::error::{Error, Result};

/// The fast/slow split of the action block `C`.
#[derive(Clone, Debug)]
pub struct Decoupling {
    /// `c11 = C11 - C12 C22^{-1} C21`.
    pub c11: f64,
    pub c22: DMatrix<f64>,
    /// Frobenius norm of the mixed block `D`; the slow analysis applies
    /// only when it vanishes.
    pub residual_d: f64,
}

/// Schur complement of `C` on the fast action.
pub fn decouple_fast(bl: &LinearizationBlocks) -> Result<Decoupling> {
    let n = bl.c.nrows();
    if n < 2 {
        return Err(Error::InvalidInput("no slow actions to decouple".into()));
    }
    let c22 = bl.c.view((1, 1), (n - 1, n - 1)).into_owned();
    let c21 = bl.c.view((1, 0), (n - 1, 1)).into_owned();
    let c12 = bl.c.view((0, 1), (1, n - 1)).into_owned();
    let sol = c22
        .clone()
        .lu()
        .solve(&c21)
        .ok_or_else(|| Error::Singular("C22".into()))?;
    if sol.iter().any(|v| !v.is_finite()) {
        return Err(Error::Singular("C22".into()));
    }
    let c11 = bl.c[(0, 0)] - (c12 * sol)[(0, 0)];
    Ok(Decoupling {
        c11,
        c22,
        residual_d: bl.d.norm(),
    })
}

/// `[[0, C22], [-B, 0]]`.
pub fn slow_matrix(b: &DMatrix<f64>, c22: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let m = b.nrows();
    if b.shape() != (m, m) || c22.shape() != (m, m) {
        return Err(Error::DimensionMismatch {
            left: b.shape(),
            right: c22.shape(),
        });
    }
    let mut s = DMatrix::zeros(2 * m, 2 * m);
    s.view_mut((0, m), (m, m)).copy_from(c22);
    s.view_mut((m, 0), (m, m)).copy_from(&(-b));
    Ok(s)
}

/// Eigenvalues of the decoupled slow vector field.
pub fn slow_spectrum(b: &DMatrix<f64>, c22: &DMatrix<f64>) -> Result<Vec<Complex64>> {
    Ok(eigenvalues(&slow_matrix(b, c22)?))
}

/// Slow spectrum after checking that the decoupling is valid.
pub fn decoupled_slow_spectrum(bl: &LinearizationBlocks, d_tol: f64) -> Result<(Decoupling, Vec<Complex64>)> {
    let dec = decouple_fast(bl)?;
    if dec.residual_d > d_tol {
        return Err(Error::InvalidInput(format!(
            "mixed block D = {:.3e} does not vanish; the slow shortcut does not apply",
            dec.residual_d
        )));
    }
    let s = slow_spectrum(&bl.b, &dec.c22)?;
    Ok((dec, s))
}

/// Label of one slow direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    Center,
    Saddle,
    /// Curvature numerically zero: no verdict.
    Degenerate,
}

impl Label {
    pub fn as_str(&self) -> &'static str {
        match self {
            Label::Center => "center",
            Label::Saddle => "saddle",
            Label::Degenerate => "degenerate",
        }
    }
}

/// Classification of one eigendirection of `B`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DirectionClass {
    /// Index of the slow angle, `0` for `q_2`.
    pub index: usize,
    /// Eigenvalue of `B` along the direction.
    pub curvature: f64,
    pub label: Label,
    /// The curvature is only of order `eps^2`.
    pub degenerate: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassifyOptions {
    /// Largest `||D||` for which the slow shortcut is used.
    pub d_tol: f64,
    /// A curvature below `degeneracy * |eps|` marks a degenerate direction.
    pub degeneracy: f64,
    /// A curvature below this is treated as zero.
    pub zero: f64,
}

impl Default for ClassifyOptions {
    fn default() -> Self {
        ClassifyOptions {
            d_tol: 1e-10,
            degeneracy: 1e-2,
            zero: 1e-14,
        }
    }
}

/// Approximate linear stability of a relative equilibrium.
#[derive(Clone, Debug)]
pub struct StabilityReport {
    pub eps: f64,
    pub field: LinearVectorField,
    /// `Sigma(L11)`.
    pub sigma11: Vec<Complex64>,
    /// `Sigma(L11)` without the zero pair of the fast angle.
    pub sigma11_slow: Vec<Complex64>,
    /// `Sigma(L22)`.
    pub sigma22: Vec<Complex64>,
    /// Spectrum of `[[0, C22], [-B, 0]]` when the decoupling applies.
    pub slow: Option<Vec<Complex64>>,
    pub decoupling: Decoupling,
    pub directions: Vec<DirectionClass>,
    /// `+1` or `-1` for a definite `C`, `0` otherwise.
    pub c_signature: i32,
    /// All unperturbed transverse frequencies share one sign.
    pub omega_same_sign: bool,
    /// The real transverse quadratic form is definite.
    pub l22_definite: bool,
    /// Smallest pairwise gap in `Sigma(L11)` without the zero pair.
    pub min_gap: f64,
    pub stable: bool,
    pub notes: Vec<String>,
}

impl StabilityReport {
    /// Number of saddle directions.
    pub fn saddles(&self) -> usize {
        self.directions.iter().filter(|d| d.label == Label::Saddle).count()
    }

    /// Number of multipliers `exp(lambda T)` of `L11` with
    /// `||mu| - 1| > tol`.
    pub fn off_circle(&self, period: f64, tol: f64) -> usize {
        self.sigma11
            .iter()
            .filter(|l| ((l.re * period).exp() - 1.0).abs() > tol)
            .count()
    }

    pub fn verdict(&self) -> &'static str {
        if self.stable {
            "stable"
        } else {
            "unstable"
        }
    }
}

fn signature(m: &DMatrix<f64>) -> i32 {
    let ev = m.clone().symmetric_eigen().eigenvalues;
    if ev.iter().all(|&v| v > 0.0) {
        1
    } else if ev.iter().all(|&v| v < 0.0) {
        -1
    } else {
        0
    }
}

/// Classify the slow directions by the sign of `sign(C) B`, and check the
/// transverse block.
pub fn classify_stability(bl: &LinearizationBlocks, opts: &ClassifyOptions) -> Result<StabilityReport> {
    let field = assemble_l(bl)?;
    let dec = decouple_fast(bl)?;
    let sigma11 = eigenvalues(&field.l11);
    let sigma11_slow = eigenvalues(&field.slow_part());
    let sigma22 = complex_eigenvalues(&field.l22)?;
    let mut notes = Vec::new();
    let c_signature = signature(&bl.c);
    if c_signature == 0 {
        notes.push("C is indefinite: direction labels follow the sign of B only".into());
    }
    let sign = if c_signature == 0 { 1.0 } else { c_signature as f64 };
    let slow = if dec.residual_d <= opts.d_tol {
        Some(slow_spectrum(&bl.b, &dec.c22)?)
    } else {
        notes.push(format!("mixed block D = {:.3e}: slow shortcut skipped", dec.residual_d));
        None
    };
    // Sylvester: for definite C22 the inertia of C22 B is that of sign(C) B
    let eig = bl.b.clone().symmetric_eigen();
    let mut directions: Vec<DirectionClass> = (0..bl.b.nrows())
        .map(|k| {
            let v = eig.eigenvectors.column(k);
            let index = v.iamax();
            let curvature = eig.eigenvalues[k];
            let label = if curvature.abs() <= opts.zero {
                Label::Degenerate
            } else if sign * curvature > 0.0 {
                Label::Center
            } else {
                Label::Saddle
            };
            DirectionClass {
                index,
                curvature,
                label,
                degenerate: curvature.abs() < opts.degeneracy * bl.eps.abs(),
            }
        })
        .collect();
    directions.sort_by_key(|d| d.index);
    let omega_same_sign = bl.big_omega.iter().all(|&w| w > 0.0) || bl.big_omega.iter().all(|&w| w < 0.0);
    let l22_definite = field.n2() == 0 || signature(&field.transverse_hessian()) != 0;
    if !omega_same_sign {
        notes.push("transverse frequencies of opposite signs".into());
    }
    if !l22_definite {
        notes.push("transverse quadratic form is not definite".into());
    }
    let stable = directions.iter().all(|d| d.label == Label::Center) && (omega_same_sign || l22_definite);
    Ok(StabilityReport {
        eps: bl.eps,
        min_gap: min_pairwise_gap(&sigma11_slow),
        field,
        sigma11,
        sigma11_slow,
        sigma22,
        slow,
        decoupling: dec,
        directions,
        c_signature,
        omega_same_sign,
        l22_definite,
        stable,
        notes,
    })
}
