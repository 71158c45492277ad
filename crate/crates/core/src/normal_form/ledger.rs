use std::f64::consts::{E as EULER, PI};

use num::{BigUint, One, ToPrimitive, Zero};

use super::step::{GeneratingFunction, Stage};
use crate::error::{Error, Result};
use crate::model::GradedHamiltonian;
use crate::poly_algebra::{weighted_norm, Coefficient, NormWeights};

/// The integer sequences counting terms of the recursions, for
/// `0 <= r <= max_r` and `0 <= s <= max_s`.
#[derive(Clone, Debug, PartialEq)]
pub struct NuTable {
    pub max_r: usize,
    pub max_s: usize,
    nu: Vec<Vec<BigUint>>,
    /// Intermediate sequences of stages I to IV, indexed `[stage][r][s]`.
    stages: [Vec<Vec<BigUint>>; 4],
}

fn pow(b: &BigUint, e: usize) -> BigUint {
    num::pow::pow(b.clone(), e)
}

fn step_sequence(prev: &[BigUint], factor: &BigUint, r: usize) -> Vec<BigUint> {
    (0..prev.len())
        .map(|s| {
            (0..=s / r)
                .map(|j| pow(factor, j) * &prev[s - j * r])
                .fold(BigUint::zero(), |a, b| a + b)
        })
        .collect()
}

impl NuTable {
    pub fn new(max_r: usize, max_s: usize) -> Self {
        let width = max_s.max(max_r) + 1;
        let ones = vec![BigUint::one(); width];
        let mut nu = vec![ones.clone()];
        let mut stages: [Vec<Vec<BigUint>>; 4] = Default::default();
        for st in stages.iter_mut() {
            st.push(ones.clone());
        }
        for r in 1..=max_r {
            let prev = &nu[r - 1];
            let s1 = step_sequence(prev, &prev[r], r);
            let s2 = step_sequence(&s1, &s1[r], r);
            let s3 = step_sequence(&s2, &(BigUint::from(2u32) * &s2[r]), r);
            let s4 = step_sequence(&s3, &s3[r], r);
            let s5 = step_sequence(&s4, &s4[r], r);
            for (st, v) in stages.iter_mut().zip([s1, s2, s3, s4]) {
                st.push(v);
            }
            nu.push(s5);
        }
        NuTable {
            max_r,
            max_s,
            nu,
            stages,
        }
    }

    pub fn nu(&self, r: usize, s: usize) -> &BigUint {
        &self.nu[r][s]
    }

    /// `nu^{(I..IV)}_{r,s}`; stage V returns the final sequence.
    pub fn stage(&self, stage: Stage, r: usize, s: usize) -> &BigUint {
        match stage {
            Stage::I => &self.stages[0][r][s],
            Stage::II => &self.stages[1][r][s],
            Stage::III => &self.stages[2][r][s],
            Stage::IV => &self.stages[3][r][s],
            Stage::V => &self.nu[r][s],
        }
    }

    pub fn nu_f64(&self, r: usize, s: usize) -> f64 {
        self.nu[r][s].to_f64().unwrap_or(f64::INFINITY)
    }

    /// Entries breaking `nu_{r,s} <= nu_{s,s} <= 2^{14 s} / 2^8` for
    /// `1 <= s <= max_s`, `r <= max_r`. The first inequality is only
    /// checked where `nu_{s,s}` is tabulated.
    pub fn lemma_violations(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for r in 0..=self.max_r {
            for s in 1..=self.max_s {
                let bound = BigUint::one() << (14 * s - 8);
                let v = &self.nu[r][s];
                let diag_ok = s > self.max_r || v <= &self.nu[s][s];
                if v > &bound || !diag_ok {
                    bad.push((r, s));
                }
            }
        }
        bad
    }
}

/// Default step sizes `delta_r = (d/5) (6/pi^2) / r^2`.
pub fn default_deltas(d: f64, max_r: usize) -> Vec<f64> {
    (1..=max_r).map(|r| d / 5.0 * 6.0 / (PI * PI) / (r * r) as f64).collect()
}

/// The factor bounding Poisson brackets at step `r`.
pub fn xi_factor(e: f64, alpha: f64, delta: f64, w: &NormWeights, m: f64) -> f64 {
    let (rho, sigma, rr) = (w.rho, w.sigma, w.r);
    let a = EULER * e / (alpha * delta * delta * rho * sigma);
    let t1 = a + EULER * e / (4.0 * m * delta * rho * rho);
    let t2 = 2.0 + a;
    let t3 = e / (alpha * delta * delta) * (2.0 * EULER / (rho * sigma) + EULER * EULER / (rr * rr));
    t1.max(t2).max(t3)
}

/// A computed norm next to its analytic bound.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundRow {
    pub r: usize,
    /// `"X0"`, `"zeta"`, `"chi1"` .. `"chi4"`, or `"f"` for Hamiltonian terms.
    pub name: String,
    pub l: usize,
    pub s: usize,
    pub computed: f64,
    pub bound: f64,
}

impl BoundRow {
    pub fn holds(&self) -> bool {
        self.computed <= self.bound
    }
}

/// Bookkeeping of the analytic estimates.
#[derive(Clone, Debug, PartialEq)]
pub struct EstimateLedger {
    pub d: f64,
    pub eps: f64,
    pub weights: NormWeights,
    /// Decay constant of the initial Hamiltonian.
    pub e_const: f64,
    /// Twist constant.
    pub m: f64,
    /// Smallest divisor.
    pub alpha: f64,
    /// `delta_1 ..= delta_R`.
    pub delta: Vec<f64>,
    /// `d_0 ..= d_R`.
    pub d_seq: Vec<f64>,
    /// `Xi_1 ..= Xi_R`.
    pub xi: Vec<f64>,
    pub nu: NuTable,
    pub eps_star: Vec<f64>,
    pub c1: Vec<f64>,
    pub generators: Vec<BoundRow>,
    pub terms: Vec<BoundRow>,
}

impl EstimateLedger {
    pub fn generator_bounds_hold(&self) -> bool {
        self.generators.iter().all(BoundRow::holds)
    }

    pub fn term_bounds_hold(&self) -> bool {
        self.terms.iter().all(BoundRow::holds)
    }

    /// CSV table, one row per step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(
            "r,delta_r,d_r,Xi_r,nu_rr,nu_bound,X0,zeta,chi1,chi2,chi3,chi4,X0_bound,zeta_bound,chi1_bound,chi2_bound,chi3_bound,chi4_bound,eps_star,c1\n",
        );
        for r in 1..=self.delta.len() {
            let g = |name: &str| {
                self.generators
                    .iter()
                    .find(|b| b.r == r && b.name == name)
                    .map_or((f64::NAN, f64::NAN), |b| (b.computed, b.bound))
            };
            let names = ["X0", "zeta", "chi1", "chi2", "chi3", "chi4"];
            let vals: Vec<(f64, f64)> = names.iter().map(|n| g(n)).collect();
            let nu_rr = if r <= self.nu.max_s { self.nu.nu_f64(r, r) } else { f64::NAN };
            out.push_str(&format!(
                "{r},{:e},{:e},{:e},{:e},{:e}",
                self.delta[r - 1],
                self.d_seq[r],
                self.xi[r - 1],
                nu_rr,
                2f64.powi(14 * r as i32 - 8)
            ));
            for v in &vals {
                out.push_str(&format!(",{:e}", v.0));
            }
            for v in &vals {
                out.push_str(&format!(",{:e}", v.1));
            }
            out.push_str(&format!(",{:e},{:e}\n", self.eps_star[r - 1], self.c1[r - 1]));
        }
        out
    }
}

/// Inputs of the ledger beyond the Hamiltonians.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LedgerParams {
    pub d: f64,
    pub weights: NormWeights,
    /// Value of epsilon at which computed norms are compared.
    pub eps: f64,
}

impl Default for LedgerParams {
    fn default() -> Self {
        LedgerParams {
            d: 0.25,
            weights: NormWeights::default(),
            eps: 1e-3,
        }
    }
}

/// Build the ledger for a normalization with the given generators.
pub fn estimate_ledger<C: Coefficient>(
    h0: &GradedHamiltonian<C>,
    hr: &GradedHamiltonian<C>,
    generators: &[GeneratingFunction<C>],
    alpha: f64,
    params: &LedgerParams,
) -> Result<EstimateLedger> {
    let d = params.d;
    if !(d > 0.0 && d <= 0.25) {
        return Err(Error::InvalidInput(format!("d must lie in (0, 1/4], got {d}")));
    }
    if !(alpha > 0.0) {
        return Err(Error::InvalidInput(format!("alpha must be positive, got {alpha}")));
    }
    let w = params.weights;
    let eps = params.eps;
    let max_r = hr.order;
    let (_, e_const) = h0.decay_profile(&w);
    let m = h0.twist_constant()?;
    let delta = default_deltas(d, max_r);
    let mut d_seq = vec![0.0];
    for dr in &delta {
        d_seq.push(d_seq.last().unwrap() + 5.0 * dr);
    }
    let xi: Vec<f64> = delta.iter().map(|&dr| xi_factor(e_const, alpha, dr, &w, m)).collect();
    let nu = NuTable::new(max_r, hr.s_max.max(max_r));
    let eps_star: Vec<f64> = xi.iter().map(|x| 1.0 / (2f64.powi(14) * x.powi(5))).collect();
    let c1: Vec<f64> = xi
        .iter()
        .enumerate()
        .map(|(i, x)| 4.0 * e_const * (2f64.powi(14) * x.powi(5)).powi(i as i32 + 2))
        .collect();

    let mut rows = Vec::new();
    for g in generators {
        let r = g.r;
        let x = xi[r - 1];
        let dr = delta[r - 1];
        let base = d_seq[r - 1];
        let er = eps.powi(r as i32);
        let ri = r as i32;
        let nu_f = |v: &BigUint| v.to_f64().unwrap_or(f64::INFINITY);
        let norm = |k: f64| weighted_norm(&g.generator.chi, &w.shrunk(base + k * dr)) * er;
        match g.stage {
            Stage::I => {
                let nu0 = nu_f(nu.nu(r - 1, r));
                rows.push(BoundRow {
                    r,
                    name: "X0".into(),
                    l: 0,
                    s: r,
                    computed: norm(0.0),
                    bound: nu0 * x.powi(5 * ri - 5) * e_const * er / alpha,
                });
                let z = g
                    .zeta()
                    .map(|z| z.iter().map(|c| c.magnitude().powi(2)).sum::<f64>().sqrt())
                    .unwrap_or(0.0);
                rows.push(BoundRow {
                    r,
                    name: "zeta".into(),
                    l: 0,
                    s: r,
                    computed: z * er,
                    bound: nu0 * x.powi(5 * ri - 3) * e_const * er / (4.0 * m * w.rho),
                });
            }
            st => {
                let (k, prev, mult, pw, div) = match st {
                    Stage::II => (1.0, Stage::I, 1.0, 5 * ri - 4, 2.0),
                    Stage::III => (2.0, Stage::II, 2.0, 5 * ri - 3, 4.0),
                    Stage::IV => (3.0, Stage::III, 1.0, 5 * ri - 2, 8.0),
                    _ => (4.0, Stage::IV, 1.0, 5 * ri - 1, 16.0),
                };
                rows.push(BoundRow {
                    r,
                    name: format!("chi{}", st.grade()),
                    l: st.grade(),
                    s: r,
                    computed: norm(k),
                    bound: mult * nu_f(nu.stage(prev, r, r)) * x.powi(pw) * e_const / div * er / alpha,
                });
            }
        }
    }

    let mut terms = Vec::new();
    if max_r >= 1 {
        let x = xi[max_r - 1];
        let wr = w.shrunk(d_seq[max_r]);
        for (&(l, s), f) in hr.iter() {
            if s == 0 || (l == 0 && s == 0) {
                continue;
            }
            let f = f.filter(|i| !(i.grade() == 0 && i.k().iter().all(|&k| k == 0)));
            terms.push(BoundRow {
                r: max_r,
                name: "f".into(),
                l,
                s,
                computed: weighted_norm(&f, &wr) * eps.powi(s as i32),
                bound: nu.nu_f64(max_r, s) * x.powi(5 * s as i32) * e_const / 2f64.powi(l as i32) * eps.powi(s as i32),
            });
        }
    }

    Ok(EstimateLedger {
        d,
        eps,
        weights: w,
        e_const,
        m,
        alpha,
        delta,
        d_seq,
        xi,
        nu,
        eps_star,
        c1,
        generators: rows,
        terms,
    })
}
