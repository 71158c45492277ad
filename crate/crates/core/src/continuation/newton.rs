use nalgebra::{DMatrix, DVector};

use super::shooting::{reduced_jacobian, upsilon_from, PeriodMap};
use crate::error::{Error, Result};

/// Newton settings for the shooting problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonOptions {
    /// Required final `||Upsilon||`.
    pub tol: f64,
    /// Iteration stops once a step is shorter than this.
    pub step_tol: f64,
    /// A residual at or below this counts as exactly periodic.
    pub zero_residual: f64,
    pub max_iter: usize,
    /// Smallest admissible eigenvalue modulus of the reduced Jacobian.
    pub eigen_floor: f64,
    /// Largest admissible distance from the starting point.
    pub trust_radius: f64,
}

impl NewtonOptions {
    /// Defaults for a perturbation parameter `eps`: eigenvalue floor
    /// `1e-3 |eps|`.
    pub fn for_epsilon(eps: f64) -> Self {
        NewtonOptions {
            tol: 1e-10,
            step_tol: 1e-13,
            zero_residual: 1e-15,
            max_iter: 12,
            eigen_floor: 1e-3 * eps.abs(),
            trust_radius: 0.1,
        }
    }
}

/// One Newton iteration.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NewtonStep {
    pub residual: f64,
    pub step: f64,
    pub sigma_min: f64,
    /// Smallest eigenvalue modulus of the reduced Jacobian.
    pub lambda_min: f64,
}

/// A continued periodic orbit.
#[derive(Clone, Debug)]
pub struct PeriodicOrbitSolution {
    /// Initial datum, `q_1(0)` included.
    pub x0: Vec<f64>,
    /// Starting guess.
    pub start: Vec<f64>,
    pub trace: Vec<NewtonStep>,
    pub iterations: usize,
    /// `||x_po - x*||` over the reduced unknowns.
    pub distance: f64,
    pub residual: f64,
    /// Monodromy at the final datum.
    pub monodromy: DMatrix<f64>,
    /// `M = flat(Phi - Id)` at the final datum.
    pub reduced: DMatrix<f64>,
}

/// Smallest singular value.
pub fn sigma_min(m: &DMatrix<f64>) -> f64 {
    m.clone().singular_values().min()
}

/// Smallest eigenvalue modulus.
pub fn lambda_min(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|c| c.norm())
        .fold(f64::INFINITY, f64::min)
}

/// Newton iteration on `Upsilon(u) = 0` with `q_1(0)` held at `start[0]`.
pub fn newton_continue<P: PeriodMap + ?Sized>(
    map: &P,
    start: &[f64],
    opts: &NewtonOptions,
) -> Result<PeriodicOrbitSolution> {
    let layout = map.layout();
    let n1 = layout.0;
    let wt = map.omega() * map.period();
    let mut z = start.to_vec();
    let mut trace = Vec::new();
    let mut last_step = f64::INFINITY;
    let mut last_res = f64::INFINITY;
    loop {
        let (z1, phi) = map.advance_with_monodromy(&z)?;
        let ups = upsilon_from(layout, wt, &z, &z1);
        let res = ups.norm();
        let reduced = reduced_jacobian(&phi, n1)?;
        let done = res <= opts.zero_residual
            || (!trace.is_empty() && res <= opts.tol && (last_step <= opts.step_tol || res >= 0.5 * last_res));
        if done {
            let distance = z[1..]
                .iter()
                .zip(&start[1..])
                .map(|(a, b)| (a - b).powi(2))
                .sum::<f64>()
                .sqrt();
            return Ok(PeriodicOrbitSolution {
                x0: z,
                start: start.to_vec(),
                iterations: trace.len(),
                trace,
                distance,
                residual: res,
                monodromy: phi,
                reduced,
            });
        }
        if trace.len() >= opts.max_iter {
            return Err(Error::Newton(format!(
                "no convergence in {} iterations, residual {res:e}",
                opts.max_iter
            )));
        }
        let smin = sigma_min(&reduced);
        let lmin = lambda_min(&reduced);
        if lmin < opts.eigen_floor {
            return Err(Error::Singular(format!(
                "reduced Jacobian eigenvalue {lmin:e} below {:e}",
                opts.eigen_floor
            )));
        }
        let delta = reduced
            .clone()
            .lu()
            .solve(&(-&ups))
            .ok_or_else(|| Error::Singular("reduced Jacobian".into()))?;
        for (zi, d) in z[1..].iter_mut().zip(delta.iter()) {
            *zi += d;
        }
        let dist = DVector::from_iterator(z.len() - 1, z[1..].iter().zip(&start[1..]).map(|(a, b)| a - b)).norm();
        if dist > opts.trust_radius {
            return Err(Error::Newton(format!(
                "left the trust neighbourhood: distance {dist:e} > {:e}",
                opts.trust_radius
            )));
        }
        last_step = delta.norm();
        last_res = res;
        trace.push(NewtonStep {
            residual: res,
            step: last_step,
            sigma_min: smin,
            lambda_min: lmin,
        });
    }
}
