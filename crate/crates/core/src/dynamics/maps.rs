use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::flow::{flow, flow_with_stm};
use super::hamiltonian::SeriesHamiltonian;
use crate::error::{Error, Result};
use crate::model::{LatticeModel, ResonantChart};
use crate::normal_form::GeneratingFunction;

/// Reduce an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let two_pi = 2.0 * std::f64::consts::PI;
    let r = a.rem_euclid(two_pi);
    if r > std::f64::consts::PI {
        r - two_pi
    } else {
        r
    }
}

/// Map between the resonant chart `(q, p, x_t, y_t)` and the Cartesian
/// lattice coordinates `(x_0..x_{N-1}, y_0..y_{N-1})`.
#[derive(Clone, Debug)]
pub struct LatticeChart {
    pub model: LatticeModel,
    pub chart: ResonantChart,
    u: DMatrix<f64>,
    u_inv: DMatrix<f64>,
}

impl LatticeChart {
    pub fn new(model: LatticeModel, chart: ResonantChart) -> Result<Self> {
        if chart.n1() != model.n1() {
            return Err(Error::InvalidInput("chart and model disagree on n1".into()));
        }
        let u = chart.u.to_f64();
        let u_inv = chart.u_inv.to_f64();
        Ok(LatticeChart { model, chart, u, u_inv })
    }

    pub fn n1(&self) -> usize {
        self.model.n1()
    }

    pub fn n2(&self) -> usize {
        self.model.n2()
    }

    fn split(&self, z: &[f64]) -> (DVector<f64>, DVector<f64>) {
        let n1 = self.n1();
        let q = DVector::from_column_slice(&z[..n1]);
        let p = DVector::from_column_slice(&z[n1..2 * n1]);
        let phi = &self.u_inv * q;
        let j = self.u.transpose() * p;
        let act = DVector::from_fn(n1, |a, _| self.chart.istar[a] + j[a]);
        (phi, act)
    }

    /// Chart point to Cartesian state.
    pub fn to_cartesian(&self, z: &[f64]) -> Result<Vec<f64>> {
        let n = self.model.n_sites;
        let (n1, n2) = (self.n1(), self.n2());
        let (phi, act) = self.split(z);
        let mut s = vec![0.0; 2 * n];
        for (a, &site) in self.model.excited.iter().enumerate() {
            if act[a] <= 0.0 {
                return Err(Error::InvalidInput(format!("non-positive action {} at site {site}", act[a])));
            }
            let r = (2.0 * act[a]).sqrt();
            s[site] = r * phi[a].cos();
            s[n + site] = -r * phi[a].sin();
        }
        for (c, &site) in self.model.rest.iter().enumerate() {
            s[site] = z[2 * n1 + c];
            s[n + site] = z[2 * n1 + n2 + c];
        }
        Ok(s)
    }

    /// Cartesian state to chart point; angles in `(-pi, pi]` before the
    /// unimodular change.
    pub fn from_cartesian(&self, s: &[f64]) -> Vec<f64> {
        let n = self.model.n_sites;
        let (n1, n2) = (self.n1(), self.n2());
        let mut phi = DVector::zeros(n1);
        let mut j = DVector::zeros(n1);
        for (a, &site) in self.model.excited.iter().enumerate() {
            let (x, y) = (s[site], s[n + site]);
            phi[a] = (-y).atan2(x);
            j[a] = 0.5 * (x * x + y * y) - self.chart.istar[a];
        }
        let q = &self.u * phi;
        let p = self.u_inv.transpose() * j;
        let mut z = Vec::with_capacity(2 * (n1 + n2));
        z.extend(q.iter());
        z.extend(p.iter());
        for &site in &self.model.rest {
            z.push(s[site]);
        }
        for &site in &self.model.rest {
            z.push(s[n + site]);
        }
        z
    }

    /// `d(cartesian) / d(chart)` at a chart point.
    pub fn jacobian(&self, z: &[f64]) -> Result<DMatrix<f64>> {
        let n = self.model.n_sites;
        let (n1, n2) = (self.n1(), self.n2());
        let (phi, act) = self.split(z);
        // d(x, y)/d(phi, I) per excited site, then chain with phi = U^{-1} q, I = I* + U^T p
        let mut d_aa = DMatrix::zeros(2 * n, 2 * n1);
        for (a, &site) in self.model.excited.iter().enumerate() {
            if act[a] <= 0.0 {
                return Err(Error::InvalidInput(format!("non-positive action {} at site {site}", act[a])));
            }
            let r = (2.0 * act[a]).sqrt();
            let (c, s) = (phi[a].cos(), phi[a].sin());
            d_aa[(site, a)] = -r * s;
            d_aa[(site, n1 + a)] = c / r;
            d_aa[(n + site, a)] = -r * c;
            d_aa[(n + site, n1 + a)] = -s / r;
        }
        let mut chain = DMatrix::zeros(2 * n1, 2 * n1);
        chain.view_mut((0, 0), (n1, n1)).copy_from(&self.u_inv);
        chain.view_mut((n1, n1), (n1, n1)).copy_from(&self.u.transpose());
        let mut jac = DMatrix::zeros(2 * n, 2 * (n1 + n2));
        jac.view_mut((0, 0), (2 * n, 2 * n1)).copy_from(&(d_aa * chain));
        for (c, &site) in self.model.rest.iter().enumerate() {
            jac[(site, 2 * n1 + c)] = 1.0;
            jac[(n + site, 2 * n1 + n2 + c)] = 1.0;
        }
        Ok(jac)
    }
}

/// The composed near-identity transform `Psi = phi_1 o ... o phi_N` from
/// normal-form coordinates to the original chart, with each generator of
/// order `r` scaled by `eps^r`.
#[derive(Clone, Debug)]
pub struct NormalFormTransform {
    /// Generator Hamiltonians in application order.
    generators: Vec<SeriesHamiltonian>,
    pub tol: f64,
}

impl NormalFormTransform {
    pub fn new(gens: &[GeneratingFunction<Complex64>], eps: f64, tol: f64) -> Self {
        let generators = gens
            .iter()
            .filter(|g| !g.generator.is_zero())
            .map(|g| {
                let w = eps.powi(g.r as i32);
                let chi = g.chi().scale(&Complex64::new(w, 0.0));
                let zeta = g.zeta().map(|z| z.iter().map(|c| c.re * w).collect());
                SeriesHamiltonian::new(&chi, zeta)
            })
            .collect();
        NormalFormTransform { generators, tol }
    }

    pub fn identity(tol: f64) -> Self {
        NormalFormTransform {
            generators: Vec::new(),
            tol,
        }
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    /// Normal-form point to original chart point.
    pub fn to_original(&self, z: &[f64]) -> Result<Vec<f64>> {
        let mut x = z.to_vec();
        for g in self.generators.iter().rev() {
            x = flow(g, &x, 1.0, self.tol)?;
        }
        Ok(x)
    }

    /// Original chart point to normal-form point.
    pub fn to_normal(&self, w: &[f64]) -> Result<Vec<f64>> {
        let mut x = w.to_vec();
        for g in &self.generators {
            x = flow(g, &x, -1.0, self.tol)?;
        }
        Ok(x)
    }

    /// [`Self::to_original`] with its Jacobian.
    pub fn to_original_with_jacobian(&self, z: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let d = z.len();
        let mut x = z.to_vec();
        let mut jac = DMatrix::identity(d, d);
        for g in self.generators.iter().rev() {
            let (y, phi) = flow_with_stm(g, &x, 1.0, self.tol)?;
            x = y;
            jac = phi * jac;
        }
        Ok((x, jac))
    }

    /// [`Self::to_normal`] with its Jacobian.
    pub fn to_normal_with_jacobian(&self, w: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let d = w.len();
        let mut x = w.to_vec();
        let mut jac = DMatrix::identity(d, d);
        for g in &self.generators {
            let (y, phi) = flow_with_stm(g, &x, -1.0, self.tol)?;
            x = y;
            jac = phi * jac;
        }
        Ok((x, jac))
    }
}
