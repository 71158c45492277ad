//! Poisson brackets, Lie derivatives and Lie transforms.
//!
//! The bracket is the canonical one with `{q_j, p_j} = {xi_j, eta_j} = 1`:
//!
//! `{f,g} = sum_j (df/dq_j dg/dp_j - df/dp_j dg/dq_j) + sum_j (df/dxi_j dg/deta_j - df/deta_j dg/dxi_j)`.
//!
//! The Lie derivative generated by `chi` is `L_chi f = {f, chi}`, so that
//! `exp(L_chi) f = f o phi_chi` where `phi_chi` is the time-one flow of the
//! Hamiltonian `chi`.

use std::collections::BTreeMap;

use super::coeff::{factorial, Coefficient};
use super::series::{TaylorFourierSeries, Var};
use crate::error::Result;

/// Poisson bracket `{f, g}`.
pub fn poisson_bracket<C: Coefficient>(
    f: &TaylorFourierSeries<C>,
    g: &TaylorFourierSeries<C>,
) -> Result<TaylorFourierSeries<C>> {
    f.check_dims(g)?;
    let (n1, n2) = f.dims();
    let mut out = f.empty_like(g);
    let i = C::imag_unit();
    for (ia, ca) in f.iter() {
        for (ib, cb) in g.iter() {
            let prod = ca.clone() * cb.clone();
            let base = ia.combine(ib);
            for j in 0..n1 {
                // i (kA_j lB_j - lA_j kB_j) p^{lA+lB-e_j}
                let w = ia.k()[j] as i64 * ib.l()[j] as i64 - ia.l()[j] as i64 * ib.k()[j] as i64;
                if w == 0 {
                    continue;
                }
                let mut idx = base.clone();
                idx.l_mut()[j] -= 1;
                out.add_term(idx, prod.clone() * i.clone() * C::from_i64(w));
            }
            for j in 0..n2 {
                // (m1A_j m2B_j - m2A_j m1B_j) xi^{.. - e_j} eta^{.. - e_j}
                let w = ia.m1()[j] as i64 * ib.m2()[j] as i64 - ia.m2()[j] as i64 * ib.m1()[j] as i64;
                if w == 0 {
                    continue;
                }
                let mut idx = base.clone();
                idx.m1_mut()[j] -= 1;
                idx.m2_mut()[j] -= 1;
                out.add_term(idx, prod.clone() * C::from_i64(w));
            }
        }
    }
    out.canonicalize();
    Ok(out)
}

/// A generating function: a periodic series plus an optional linear angle
/// term `<zeta, q>`.
#[derive(Clone, Debug, PartialEq)]
pub struct LieGenerator<C: Coefficient> {
    pub chi: TaylorFourierSeries<C>,
    pub zeta: Option<Vec<C>>,
}

impl<C: Coefficient> LieGenerator<C> {
    pub fn new(chi: TaylorFourierSeries<C>) -> Self {
        LieGenerator { chi, zeta: None }
    }

    pub fn with_translation(chi: TaylorFourierSeries<C>, zeta: Vec<C>) -> Self {
        LieGenerator {
            chi,
            zeta: Some(zeta),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.chi.is_empty()
            && self
                .zeta
                .as_ref()
                .is_none_or(|z| z.iter().all(|c| c.is_exact_zero()))
    }

    /// `L_chi f = {f, chi}`; the linear term contributes `-sum_j zeta_j df/dp_j`.
    pub fn apply(&self, f: &TaylorFourierSeries<C>) -> Result<TaylorFourierSeries<C>> {
        let mut out = poisson_bracket(f, &self.chi)?;
        if let Some(zeta) = &self.zeta {
            for (j, z) in zeta.iter().enumerate() {
                if z.is_exact_zero() {
                    continue;
                }
                let d = f.derivative(Var::P(j));
                out.add_scaled(&d, &(-z.clone()));
            }
        }
        Ok(out)
    }

    /// `L_chi^j f` for `j = 0..=n`.
    pub fn iterates(&self, f: &TaylorFourierSeries<C>, n: usize) -> Result<Vec<TaylorFourierSeries<C>>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(f.clone());
        for j in 0..n {
            let next = if out[j].is_empty() {
                out[j].clone()
            } else {
                self.apply(&out[j])?
            };
            out.push(next);
        }
        Ok(out)
    }
}

/// Lie transform `exp(L_chi) f` organised by perturbation order.
///
/// `f` is taken to be of uniform order `f_order` and `chi` of order
/// `chi_order >= 1`; the term `L_chi^j f / j!` has order
/// `f_order + j * chi_order` and only orders up to `max_order` are kept.
pub fn lie_transform_graded<C: Coefficient>(
    f: &TaylorFourierSeries<C>,
    chi: &LieGenerator<C>,
    chi_order: usize,
    f_order: usize,
    max_order: usize,
) -> Result<BTreeMap<usize, TaylorFourierSeries<C>>> {
    assert!(chi_order >= 1, "generator order must be positive");
    let mut out = BTreeMap::new();
    if f_order > max_order {
        return Ok(out);
    }
    let n = (max_order - f_order) / chi_order;
    let its = chi.iterates(f, n)?;
    for (j, t) in its.into_iter().enumerate() {
        if t.is_empty() {
            continue;
        }
        let w = C::one() / factorial::<C>(j as u32);
        out.insert(f_order + j * chi_order, t.scale(&w));
    }
    Ok(out)
}

/// `exp(L_chi) f` summed over all retained orders.
pub fn lie_transform<C: Coefficient>(
    f: &TaylorFourierSeries<C>,
    chi: &LieGenerator<C>,
    chi_order: usize,
    max_order: usize,
) -> Result<TaylorFourierSeries<C>> {
    let parts = lie_transform_graded(f, chi, chi_order, 0, max_order)?;
    let mut out = TaylorFourierSeries::new(f.n1(), f.n2(), *f.truncation());
    for s in parts.values() {
        out.add_assign(s);
    }
    Ok(out)
}
