use super::chart::ResonantChart;
use super::graded::GradedHamiltonian;
use super::lattice::AaTerm;
use crate::error::{Error, Result};
use crate::poly_algebra::coeff::binomial;
use crate::poly_algebra::{Coefficient, MultiIndex, TaylorFourierSeries, TruncationPolicy};

/// Options for the expansion about the resonant torus.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ExpandOptions {
    pub ell_max: usize,
    pub s_max: usize,
    pub max_harmonic: i32,
    pub drop_tol: f64,
    /// Tolerance of the resonance and linear-part checks.
    pub resonance_tol: f64,
    /// Smallest admissible torus action.
    pub istar_floor: f64,
}

impl Default for ExpandOptions {
    fn default() -> Self {
        ExpandOptions {
            ell_max: 8,
            s_max: 3,
            max_harmonic: 8,
            drop_tol: 1e-14,
            resonance_tol: 1e-10,
            istar_floor: 1e-6,
        }
    }
}

impl ExpandOptions {
    pub fn truncation(&self) -> TruncationPolicy {
        TruncationPolicy {
            max_grade: self.ell_max,
            max_harmonic: self.max_harmonic,
            drop_tol: self.drop_tol,
        }
    }
}

/// Torus data in the coefficient field: `I*_a` and `sqrt(I*_a)`.
#[derive(Clone, Debug)]
pub struct TorusData<C: Coefficient> {
    pub istar: Vec<C>,
    pub sqrt_istar: Vec<C>,
}

fn powi<C: Coefficient>(x: &C, e: i32) -> C {
    let mut acc = C::one();
    for _ in 0..e.unsigned_abs() {
        acc = acc * x.clone();
    }
    if e < 0 {
        C::one() / acc
    } else {
        acc
    }
}

/// `J_a = sum_i U_{ia} p_i` as a series.
fn j_series<C: Coefficient>(chart: &ResonantChart, a: usize, n2: usize, t: TruncationPolicy) -> TaylorFourierSeries<C> {
    let n1 = chart.n1();
    let mut s = TaylorFourierSeries::new(n1, n2, t);
    for i in 0..n1 {
        let u = chart.u.get(i, a);
        if u != 0 {
            let mut idx = MultiIndex::zero(n1, n2);
            idx.l_mut()[i] = 1;
            s.add_term(idx, C::from_i64(u));
        }
    }
    s.canonicalize();
    s
}

/// Expand a mixed action-angle Hamiltonian about the torus `I = I*`,
/// `xi = eta = 0` in the resonant chart and split it into the graded family.
pub fn expand_around_torus<C: Coefficient>(
    terms: &[AaTerm<C>],
    chart: &ResonantChart,
    torus: &TorusData<C>,
    opts: &ExpandOptions,
) -> Result<GradedHamiltonian<C>> {
    let n1 = chart.n1();
    let n2 = terms.first().map(|t| t.m1.len()).unwrap_or(chart.n2());
    if let Some(i) = chart.istar.iter().find(|&&x| x < opts.istar_floor) {
        return Err(Error::InvalidInput(format!(
            "torus action {i} below floor {}",
            opts.istar_floor
        )));
    }
    let t = opts.truncation();
    let js: Vec<TaylorFourierSeries<C>> = (0..n1).map(|a| j_series(chart, a, n2, t)).collect();
    let one = TaylorFourierSeries::constant(n1, n2, t, C::one());
    let nmax = opts.ell_max / 2;
    // J_a^n for n <= nmax
    let jpow: Vec<Vec<TaylorFourierSeries<C>>> = js
        .iter()
        .map(|j| {
            let mut v = vec![one.clone()];
            for n in 1..=nmax {
                let next = v[n - 1].mul(j).expect("dims");
                v.push(next);
            }
            v
        })
        .collect();

    let mut parts: Vec<(usize, TaylorFourierSeries<C>)> = Vec::new();
    for term in terms {
        if term.eps_order > opts.s_max {
            continue;
        }
        let mut acc = one.scale(&term.coeff);
        for a in 0..n1 {
            let h = term.half_pow[a];
            if h == 0 {
                continue;
            }
            // I^{h/2} = sum_n binom(h/2, n) I*^{h/2 - n} J^n
            let mut ser = TaylorFourierSeries::new(n1, n2, t);
            let limit = if h % 2 == 0 && h >= 0 { (h / 2) as usize } else { nmax };
            for n in 0..=limit.min(nmax) {
                let b: C = binomial(h as i64, 2, n as u32);
                let pw = powi(&torus.sqrt_istar[a], h - 2 * n as i32);
                ser.add_scaled(&jpow[a][n], &(b * pw));
            }
            acc = acc.mul(&ser)?;
        }
        let phi: Vec<i64> = term.phi.iter().map(|&x| x as i64).collect();
        let kq = chart.harmonic_in_q(&phi);
        let mut idx = MultiIndex::zero(n1, n2);
        for (dst, src) in idx.k_mut().iter_mut().zip(&kq) {
            *dst = *src as i32;
        }
        idx.m1_mut().copy_from_slice(&term.m1);
        idx.m2_mut().copy_from_slice(&term.m2);
        let mono = TaylorFourierSeries::monomial(n1, n2, t, idx, C::one());
        acc = acc.mul(&mono)?;
        parts.push((term.eps_order, acc));
    }

    // collect by order, then read off the linear part
    let mut by_order: Vec<TaylorFourierSeries<C>> = vec![TaylorFourierSeries::new(n1, n2, t); opts.s_max + 1];
    for (s, f) in parts {
        by_order[s].add_assign(&f);
    }
    let lin0 = by_order[0].grade_decompose().remove(&2).unwrap_or_else(|| TaylorFourierSeries::new(n1, n2, t));
    let mut p1 = MultiIndex::zero(n1, n2);
    p1.l_mut()[0] = 1;
    let omega = lin0.coeff_or_zero(&p1);
    let mut big_omega = Vec::with_capacity(n2);
    for j in 0..n2 {
        let mut idx = MultiIndex::zero(n1, n2);
        idx.m1_mut()[j] = 1;
        idx.m2_mut()[j] = 1;
        big_omega.push(lin0.coeff_or_zero(&idx) / C::imag_unit());
    }
    let mut h = GradedHamiltonian::new(n1, n2, omega, big_omega, t, opts.s_max);
    let residual = lin0.sub(&h.linear_part())?;
    let res = residual.max_abs_coeff();
    if res > opts.resonance_tol {
        return Err(Error::ResonanceViolated(res));
    }
    if (h.omega_f64() - chart.omega).abs() > opts.resonance_tol {
        return Err(Error::ResonanceViolated((h.omega_f64() - chart.omega).abs()));
    }
    for (s, f) in by_order.iter().enumerate() {
        for (l, part) in f.grade_decompose() {
            if (l, s) == (2, 0) {
                continue;
            }
            h.set(l, s, part);
        }
    }
    Ok(h)
}
