use nalgebra::DMatrix;

use super::hamiltonian::{apply_j, Hamiltonian};
use super::integrator::{integrate, GbsOptions, GbsStats};
use crate::error::{Error, Result};

/// Energy drift allowed per flow, in units of the tolerance.
pub const DRIFT_FACTOR: f64 = 100.0;

fn check_drift<H: Hamiltonian + ?Sized>(h: &H, x0: &[f64], x1: &[f64], tol: f64) -> Result<()> {
    let e0 = h.energy(x0);
    let e1 = h.energy(x1);
    let limit = DRIFT_FACTOR * tol * e0.abs().max(1.0);
    let drift = (e1 - e0).abs();
    if drift > limit {
        return Err(Error::EnergyDrift { drift, limit });
    }
    Ok(())
}

/// Flow of `H` for a signed time `t`.
pub fn flow<H: Hamiltonian + ?Sized>(h: &H, x0: &[f64], t: f64, tol: f64) -> Result<Vec<f64>> {
    Ok(flow_stats(h, x0, t, tol)?.0)
}

/// [`flow`] together with integrator statistics.
pub fn flow_stats<H: Hamiltonian + ?Sized>(h: &H, x0: &[f64], t: f64, tol: f64) -> Result<(Vec<f64>, GbsStats)> {
    if x0.len() != h.dim() {
        return Err(Error::DimensionMismatch {
            left: (h.dim(), 1),
            right: (x0.len(), 1),
        });
    }
    let (x1, st) = integrate(|x, dx| h.vector_field(x, dx), x0, t, &GbsOptions::with_tol(tol))?;
    check_drift(h, x0, &x1, tol)?;
    Ok((x1, st))
}

/// Flow together with the state transition matrix `d x(t) / d x0`, obtained
/// from the variational equations `Phi' = J Hess(H) Phi`.
pub fn flow_with_stm<H: Hamiltonian + ?Sized>(
    h: &H,
    x0: &[f64],
    t: f64,
    tol: f64,
) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let d = h.dim();
    if x0.len() != d {
        return Err(Error::DimensionMismatch {
            left: (d, 1),
            right: (x0.len(), 1),
        });
    }
    let layout = h.layout();
    let mut y0 = x0.to_vec();
    y0.extend(DMatrix::<f64>::identity(d, d).iter());
    let rhs = |y: &[f64], dy: &mut [f64]| {
        let x = &y[..d];
        h.vector_field(x, &mut dy[..d]);
        let hess = h.hessian(x);
        let phi = DMatrix::from_column_slice(d, d, &y[d..]);
        let hp = hess * phi;
        // columns of J (H Phi)
        let mut col = vec![0.0; d];
        for c in 0..d {
            apply_j(layout, hp.column(c).as_slice(), &mut col);
            dy[d + c * d..d + (c + 1) * d].copy_from_slice(&col);
        }
    };
    let (y1, _) = integrate(rhs, &y0, t, &GbsOptions::with_tol(tol))?;
    let x1 = y1[..d].to_vec();
    check_drift(h, x0, &x1, tol)?;
    Ok((x1, DMatrix::from_column_slice(d, d, &y1[d..])))
}

/// Central finite-difference differential of a map.
pub fn finite_difference_jacobian<F>(f: F, x0: &[f64], step: f64) -> Result<DMatrix<f64>>
where
    F: Fn(&[f64]) -> Result<Vec<f64>>,
{
    let n = x0.len();
    let mut cols = Vec::with_capacity(n);
    for i in 0..n {
        let mut a = x0.to_vec();
        let mut b = x0.to_vec();
        a[i] += step;
        b[i] -= step;
        let fa = f(&a)?;
        let fb = f(&b)?;
        cols.push(fa.iter().zip(&fb).map(|(u, v)| (u - v) / (2.0 * step)).collect::<Vec<f64>>());
    }
    let m = cols.first().map(|c| c.len()).unwrap_or(0);
    Ok(DMatrix::from_fn(m, n, |r, c| cols[c][r]))
}
