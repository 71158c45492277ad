use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::dynamics::{
    flow, flow_with_stm, wrap_angle, CartesianLattice, Hamiltonian, LatticeChart, NormalFormTransform,
    SeriesHamiltonian,
};
use crate::error::{Error, Result};
use crate::model::{GradedHamiltonian, LatticeModel, ResonantChart};
use crate::normal_form::NormalFormResult;

/// The time-`T` map of a Hamiltonian flow expressed in normal-form
/// coordinates `(q, p, x, y)`.
pub trait PeriodMap: Sync {
    /// `(n1, n2)`.
    fn layout(&self) -> (usize, usize);
    /// Frequency of the fast angle.
    fn omega(&self) -> f64;
    fn advance(&self, z: &[f64]) -> Result<Vec<f64>>;
    /// The image together with the monodromy matrix `d z(T) / d z(0)`.
    fn advance_with_monodromy(&self, z: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)>;

    fn period(&self) -> f64 {
        2.0 * std::f64::consts::PI / self.omega()
    }

    fn dim(&self) -> usize {
        let (a, b) = self.layout();
        2 * (a + b)
    }
}

/// The true lattice flow conjugated to normal-form coordinates:
/// `Psi^{-1} o chart^{-1} o flow_T o chart o Psi`.
#[derive(Clone, Debug)]
pub struct ConjugatedPeriodMap {
    pub transform: NormalFormTransform,
    pub chart: LatticeChart,
    pub hamiltonian: CartesianLattice,
    pub omega: f64,
    pub tol: f64,
}

impl ConjugatedPeriodMap {
    pub fn new(chart: LatticeChart, transform: NormalFormTransform, eps: f64, omega: f64, tol: f64) -> Self {
        let hamiltonian = CartesianLattice::new(&chart.model, eps);
        ConjugatedPeriodMap {
            transform,
            chart,
            hamiltonian,
            omega,
            tol,
        }
    }
}

impl ConjugatedPeriodMap {
    /// Conjugated map of a lattice model for the generators of `nf` at `eps`.
    pub fn from_normal_form(
        model: &LatticeModel,
        chart: &ResonantChart,
        nf: &NormalFormResult<Complex64>,
        eps: f64,
        tol: f64,
    ) -> Result<Self> {
        let lc = LatticeChart::new(model.clone(), chart.clone())?;
        let transform = NormalFormTransform::new(&nf.generators, eps, tol);
        Ok(Self::new(lc, transform, eps, chart.omega, tol))
    }
}

impl PeriodMap for ConjugatedPeriodMap {
    fn layout(&self) -> (usize, usize) {
        (self.chart.n1(), self.chart.n2())
    }

    fn omega(&self) -> f64 {
        self.omega
    }

    fn advance(&self, z: &[f64]) -> Result<Vec<f64>> {
        let w = self.transform.to_original(z)?;
        let s = self.chart.to_cartesian(&w)?;
        let s1 = flow(&self.hamiltonian, &s, self.period(), self.tol)?;
        let w1 = self.chart.from_cartesian(&s1);
        self.transform.to_normal(&w1)
    }

    fn advance_with_monodromy(&self, z: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
        let (w, a) = self.transform.to_original_with_jacobian(z)?;
        let jc = self.chart.jacobian(&w)?;
        let s = self.chart.to_cartesian(&w)?;
        let (s1, phi) = flow_with_stm(&self.hamiltonian, &s, self.period(), self.tol)?;
        let w1 = self.chart.from_cartesian(&s1);
        let jc1 = self.chart.jacobian(&w1)?;
        let jc1_inv = jc1
            .try_inverse()
            .ok_or_else(|| Error::Singular("chart Jacobian".into()))?;
        let (z1, b) = self.transform.to_normal_with_jacobian(&w1)?;
        Ok((z1, b * jc1_inv * phi * jc * a))
    }
}

/// The flow of a series Hamiltonian, typically the stored `H^(r)`.
#[derive(Clone, Debug)]
pub struct SeriesPeriodMap {
    pub hamiltonian: SeriesHamiltonian,
    pub omega: f64,
    pub tol: f64,
}

impl SeriesPeriodMap {
    /// Flow of `sum_{s <= s_upto} eps^s f^(s)`.
    pub fn new(h: &GradedHamiltonian<Complex64>, eps: f64, s_upto: usize, tol: f64) -> Self {
        SeriesPeriodMap {
            hamiltonian: SeriesHamiltonian::new(&h.total(eps, s_upto), None),
            omega: h.omega_f64(),
            tol,
        }
    }
}

impl PeriodMap for SeriesPeriodMap {
    fn layout(&self) -> (usize, usize) {
        self.hamiltonian.layout()
    }

    fn omega(&self) -> f64 {
        self.omega
    }

    fn advance(&self, z: &[f64]) -> Result<Vec<f64>> {
        flow(&self.hamiltonian, z, self.period(), self.tol)
    }

    fn advance_with_monodromy(&self, z: &[f64]) -> Result<(Vec<f64>, DMatrix<f64>)> {
        flow_with_stm(&self.hamiltonian, z, self.period(), self.tol)
    }
}

/// Return displacement of a full state with the `p_1` row dropped:
/// `(q_1(T) - q_1(0) - omega T, q(T) - q(0), p(T) - p(0), x(T) - x(0), y(T) - y(0))`,
/// angle differences reduced modulo `2 pi`.
pub fn upsilon_from((n1, n2): (usize, usize), omega_t: f64, z0: &[f64], z1: &[f64]) -> DVector<f64> {
    let d = 2 * (n1 + n2);
    let mut out = Vec::with_capacity(d - 1);
    for i in 0..n1 {
        let shift = if i == 0 { omega_t } else { 0.0 };
        out.push(wrap_angle(z1[i] - z0[i] - shift));
    }
    for i in n1 + 1..d {
        out.push(z1[i] - z0[i]);
    }
    DVector::from_vec(out)
}

/// Full state from the reduced unknowns `(q_2.., p, x, y)` and the phase `q_1(0)`.
pub fn embed(q1: f64, u: &[f64]) -> Vec<f64> {
    let mut z = Vec::with_capacity(u.len() + 1);
    z.push(q1);
    z.extend_from_slice(u);
    z
}

/// The shooting map `Upsilon` at a full state.
pub fn upsilon<P: PeriodMap + ?Sized>(map: &P, z0: &[f64]) -> Result<DVector<f64>> {
    let z1 = map.advance(z0)?;
    Ok(upsilon_from(map.layout(), map.omega() * map.period(), z0, &z1))
}

/// An approximate periodic orbit: the relative equilibrium
/// `x* = (q_1 = 0, q*, p = 0, x = y = 0)` of the truncated normal form.
#[derive(Clone, Debug, PartialEq)]
pub struct ApproximateOrbit {
    pub qstar: Vec<f64>,
    pub x: Vec<f64>,
    pub period: f64,
    pub eps: f64,
    /// `||Upsilon(x*)||`.
    pub residual: f64,
}

/// The full state of the relative equilibrium for slow angles `q*`.
pub fn relative_equilibrium((n1, n2): (usize, usize), qstar: &[f64]) -> Vec<f64> {
    let mut z = vec![0.0; 2 * (n1 + n2)];
    z[1..n1].copy_from_slice(qstar);
    z
}

/// Evaluate `Upsilon` at the relative equilibrium.
pub fn approximate_orbit<P: PeriodMap + ?Sized>(map: &P, qstar: &[f64], eps: f64) -> Result<ApproximateOrbit> {
    let x = relative_equilibrium(map.layout(), qstar);
    let residual = upsilon(map, &x)?.norm();
    Ok(ApproximateOrbit {
        qstar: qstar.to_vec(),
        x,
        period: map.period(),
        eps,
        residual,
    })
}

/// Remove the first column and the `(n1+1)`-th row.
pub fn reduce_matrix(m: &DMatrix<f64>, n1: usize) -> Result<DMatrix<f64>> {
    if m.nrows() != m.ncols() || m.nrows() < 2 || n1 >= m.nrows() {
        return Err(Error::InvalidInput(format!(
            "cannot reduce a {}x{} matrix at row {n1}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.clone().remove_column(0).remove_row(n1))
}

/// Flat reduction of `Phi - Id`.
pub fn reduced_jacobian(phi: &DMatrix<f64>, n1: usize) -> Result<DMatrix<f64>> {
    let d = phi.nrows();
    reduce_matrix(&(phi - DMatrix::identity(d, d)), n1)
}
