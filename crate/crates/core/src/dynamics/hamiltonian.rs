use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::model::LatticeModel;
use crate::poly_algebra::{CompiledSeries, TaylorFourierSeries};

/// A real Hamiltonian on the phase space `(q, p, x, y)` with `n1` angle-action
/// pairs and `n2` real transverse pairs, ordered
/// `q_1..q_n1, p_1..p_n1, x_1..x_n2, y_1..y_n2`.
pub trait Hamiltonian: Sync {
    /// `(n1, n2)`.
    fn layout(&self) -> (usize, usize);
    fn energy(&self, x: &[f64]) -> f64;
    fn gradient(&self, x: &[f64]) -> DVector<f64>;
    fn hessian(&self, x: &[f64]) -> DMatrix<f64>;

    fn dim(&self) -> usize {
        let (a, b) = self.layout();
        2 * (a + b)
    }

    /// The canonical vector field `J grad H`.
    fn vector_field(&self, x: &[f64], out: &mut [f64]) {
        let g = self.gradient(x);
        apply_j(self.layout(), g.as_slice(), out);
    }
}

/// `out = J v` for the block-canonical layout.
pub fn apply_j((n1, n2): (usize, usize), v: &[f64], out: &mut [f64]) {
    for i in 0..n1 {
        out[i] = v[n1 + i];
        out[n1 + i] = -v[i];
    }
    let o = 2 * n1;
    for j in 0..n2 {
        out[o + j] = v[o + n2 + j];
        out[o + n2 + j] = -v[o + j];
    }
}

/// The symplectic matrix of the layout.
pub fn symplectic_j((n1, n2): (usize, usize)) -> DMatrix<f64> {
    let d = 2 * (n1 + n2);
    let mut j = DMatrix::zeros(d, d);
    for i in 0..n1 {
        j[(i, n1 + i)] = 1.0;
        j[(n1 + i, i)] = -1.0;
    }
    let o = 2 * n1;
    for k in 0..n2 {
        j[(o + k, o + n2 + k)] = 1.0;
        j[(o + n2 + k, o + k)] = -1.0;
    }
    j
}

/// `||M^T J M - J||_max`.
pub fn symplectic_defect(layout: (usize, usize), m: &DMatrix<f64>) -> f64 {
    let j = symplectic_j(layout);
    (m.transpose() * &j * m - &j).amax()
}

const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

/// `(xi, eta)` from real `(x, y)`.
pub fn complexify(x: f64, y: f64) -> (Complex64, Complex64) {
    (
        Complex64::new(x * SQRT_HALF, -y * SQRT_HALF),
        Complex64::new(y * SQRT_HALF, -x * SQRT_HALF),
    )
}

/// Real `(x, y)` from `(xi, eta)`; the inverse of [`complexify`].
pub fn realify(xi: Complex64, eta: Complex64) -> (Complex64, Complex64) {
    let i = Complex64::new(0.0, 1.0);
    ((xi + i * eta) * SQRT_HALF, (eta + i * xi) * SQRT_HALF)
}

/// Jacobian `d(q, p, xi, eta) / d(q, p, x, y)`.
pub fn complexification_jacobian((n1, n2): (usize, usize)) -> DMatrix<Complex64> {
    let d = 2 * (n1 + n2);
    let mut t = DMatrix::from_element(d, d, Complex64::new(0.0, 0.0));
    for i in 0..2 * n1 {
        t[(i, i)] = Complex64::new(1.0, 0.0);
    }
    let o = 2 * n1;
    let a = Complex64::new(SQRT_HALF, 0.0);
    let b = Complex64::new(0.0, -SQRT_HALF);
    for j in 0..n2 {
        let (xi, eta, x, y) = (o + j, o + n2 + j, o + j, o + n2 + j);
        t[(xi, x)] = a;
        t[(xi, y)] = b;
        t[(eta, x)] = b;
        t[(eta, y)] = a;
    }
    t
}

/// A series Hamiltonian evaluated in real coordinates, optionally with a
/// linear angle term `<zeta, q>`.
#[derive(Clone, Debug)]
pub struct SeriesHamiltonian {
    n1: usize,
    n2: usize,
    series: CompiledSeries,
    zeta: Option<Vec<f64>>,
    t: DMatrix<Complex64>,
}

impl SeriesHamiltonian {
    pub fn new(series: &TaylorFourierSeries<Complex64>, zeta: Option<Vec<f64>>) -> Self {
        let (n1, n2) = series.dims();
        SeriesHamiltonian {
            n1,
            n2,
            series: CompiledSeries::new(series),
            zeta,
            t: complexification_jacobian((n1, n2)),
        }
    }

    fn complex_point(&self, x: &[f64]) -> Vec<Complex64> {
        let (n1, n2) = (self.n1, self.n2);
        let mut v: Vec<Complex64> = x[..2 * n1].iter().map(|&a| Complex64::new(a, 0.0)).collect();
        let o = 2 * n1;
        let mut xi = Vec::with_capacity(n2);
        let mut eta = Vec::with_capacity(n2);
        for j in 0..n2 {
            let (a, b) = complexify(x[o + j], x[o + n2 + j]);
            xi.push(a);
            eta.push(b);
        }
        v.extend(xi);
        v.extend(eta);
        v
    }

    /// Complex gradient and Hessian in `(q, p, xi, eta)` at a real point.
    pub fn complex_derivatives(&self, x: &[f64], order: usize) -> crate::poly_algebra::Derivatives {
        self.series.eval_flat(&self.complex_point(x), order)
    }

    fn zeta_energy(&self, x: &[f64]) -> f64 {
        self.zeta
            .as_ref()
            .map(|z| z.iter().zip(x).map(|(a, b)| a * b).sum())
            .unwrap_or(0.0)
    }
}

impl Hamiltonian for SeriesHamiltonian {
    fn layout(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    fn energy(&self, x: &[f64]) -> f64 {
        self.complex_derivatives(x, 0).value.re + self.zeta_energy(x)
    }

    fn gradient(&self, x: &[f64]) -> DVector<f64> {
        let d = self.complex_derivatives(x, 1);
        let g = self.t.transpose() * d.gradient;
        let mut out = g.map(|c| c.re);
        if let Some(z) = &self.zeta {
            for (o, v) in out.iter_mut().zip(z) {
                *o += v;
            }
        }
        out
    }

    fn hessian(&self, x: &[f64]) -> DMatrix<f64> {
        let d = self.complex_derivatives(x, 2);
        let h = d.hessian.expect("order 2 requested");
        (self.t.transpose() * h * &self.t).map(|c| c.re)
    }
}

/// The lattice Hamiltonian in Cartesian coordinates
/// `(x_0..x_{N-1}, y_0..y_{N-1})`.
#[derive(Clone, Debug)]
pub struct CartesianLattice {
    pub n_sites: usize,
    pub gamma: f64,
    pub epsilon: f64,
    bonds: Vec<(usize, usize)>,
}

impl CartesianLattice {
    pub fn new(model: &LatticeModel, epsilon: f64) -> Self {
        CartesianLattice {
            n_sites: model.n_sites,
            gamma: model.gamma,
            epsilon,
            bonds: model.bonds(),
        }
    }
}

impl Hamiltonian for CartesianLattice {
    fn layout(&self) -> (usize, usize) {
        (self.n_sites, 0)
    }

    fn energy(&self, s: &[f64]) -> f64 {
        let n = self.n_sites;
        let mut e = 0.0;
        for j in 0..n {
            let rho = 0.5 * (s[j] * s[j] + s[n + j] * s[n + j]);
            e += rho + self.gamma * rho * rho;
        }
        for &(a, b) in &self.bonds {
            e += self.epsilon * (s[a] * s[b] + s[n + a] * s[n + b]);
        }
        e
    }

    fn gradient(&self, s: &[f64]) -> DVector<f64> {
        let n = self.n_sites;
        let mut g = DVector::zeros(2 * n);
        for j in 0..n {
            let rho = 0.5 * (s[j] * s[j] + s[n + j] * s[n + j]);
            let f = 1.0 + 2.0 * self.gamma * rho;
            g[j] = f * s[j];
            g[n + j] = f * s[n + j];
        }
        for &(a, b) in &self.bonds {
            g[a] += self.epsilon * s[b];
            g[b] += self.epsilon * s[a];
            g[n + a] += self.epsilon * s[n + b];
            g[n + b] += self.epsilon * s[n + a];
        }
        g
    }

    fn hessian(&self, s: &[f64]) -> DMatrix<f64> {
        let n = self.n_sites;
        let mut h = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            let (x, y) = (s[j], s[n + j]);
            let f = 1.0 + self.gamma * (x * x + y * y);
            h[(j, j)] = f + 2.0 * self.gamma * x * x;
            h[(n + j, n + j)] = f + 2.0 * self.gamma * y * y;
            h[(j, n + j)] = 2.0 * self.gamma * x * y;
            h[(n + j, j)] = 2.0 * self.gamma * x * y;
        }
        for &(a, b) in &self.bonds {
            for o in [0, n] {
                h[(o + a, o + b)] += self.epsilon;
                h[(o + b, o + a)] += self.epsilon;
            }
        }
        h
    }
}
