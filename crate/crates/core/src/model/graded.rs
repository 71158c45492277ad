use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::poly_algebra::{
    weighted_norm, Coefficient, CompiledSeries, MultiIndex, NormWeights, PhasePoint,
    TaylorFourierSeries, TruncationPolicy,
};

/// A Hamiltonian stored as the family `f_l^{(r,s)}` of pure-grade series,
/// indexed by grade `l` and perturbation order `s`.
///
/// Coefficients are those of the formal expansion with `eps = 1`; the term
/// of order `s` is multiplied by `epsilon^s` on evaluation. The linear part
/// `omega p_1 + sum_j i Omega_j xi_j eta_j` is stored at `(2, 0)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedHamiltonian<C: Coefficient = Complex64> {
    pub n1: usize,
    pub n2: usize,
    pub omega: C,
    pub big_omega: Vec<C>,
    pub trunc: TruncationPolicy,
    /// Highest perturbation order represented.
    pub s_max: usize,
    /// Normalization order `r`.
    pub order: usize,
    terms: BTreeMap<(usize, usize), TaylorFourierSeries<C>>,
}

/// Alias used by the model builders.
pub type ExpandedHamiltonian<C = Complex64> = GradedHamiltonian<C>;

impl<C: Coefficient> GradedHamiltonian<C> {
    pub fn new(
        n1: usize,
        n2: usize,
        omega: C,
        big_omega: Vec<C>,
        trunc: TruncationPolicy,
        s_max: usize,
    ) -> Self {
        let mut h = GradedHamiltonian {
            n1,
            n2,
            omega,
            big_omega,
            trunc,
            s_max,
            order: 0,
            terms: BTreeMap::new(),
        };
        let lin = h.linear_part();
        h.terms.insert((2, 0), lin);
        h
    }

    /// `omega p_1 + sum_j i Omega_j xi_j eta_j`.
    pub fn linear_part(&self) -> TaylorFourierSeries<C> {
        let mut s = TaylorFourierSeries::new(self.n1, self.n2, self.trunc);
        let mut idx = MultiIndex::zero(self.n1, self.n2);
        idx.l_mut()[0] = 1;
        s.add_term(idx, self.omega.clone());
        for j in 0..self.n2 {
            let mut idx = MultiIndex::zero(self.n1, self.n2);
            idx.m1_mut()[j] = 1;
            idx.m2_mut()[j] = 1;
            s.add_term(idx, C::imag_unit() * self.big_omega[j].clone());
        }
        s.canonicalize();
        s
    }

    pub fn zero_series(&self) -> TaylorFourierSeries<C> {
        TaylorFourierSeries::new(self.n1, self.n2, self.trunc)
    }

    /// `f_l^{(s)}`, or the zero series.
    pub fn get(&self, l: usize, s: usize) -> TaylorFourierSeries<C> {
        self.terms
            .get(&(l, s))
            .cloned()
            .unwrap_or_else(|| self.zero_series())
    }

    pub fn get_ref(&self, l: usize, s: usize) -> Option<&TaylorFourierSeries<C>> {
        self.terms.get(&(l, s))
    }

    /// Store a component, dropping it when empty. Panics if not pure grade.
    pub fn set(&mut self, l: usize, s: usize, f: TaylorFourierSeries<C>) {
        assert!(f.is_pure_grade(l), "component ({l},{s}) is not of pure grade");
        if f.is_empty() {
            self.terms.remove(&(l, s));
        } else {
            self.terms.insert((l, s), f);
        }
    }

    /// Add a series of mixed grade to order `s`.
    pub fn add_mixed(&mut self, s: usize, f: &TaylorFourierSeries<C>) {
        for (l, part) in f.grade_decompose() {
            let mut cur = self.get(l, s);
            cur.add_assign(&part);
            self.set(l, s, cur);
        }
    }

    /// Keys `(l, s)` present.
    pub fn keys(&self) -> Vec<(usize, usize)> {
        self.terms.keys().copied().collect()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, usize), &TaylorFourierSeries<C>)> {
        self.terms.iter()
    }

    pub fn max_grade_present(&self) -> usize {
        self.terms.keys().map(|k| k.0).max().unwrap_or(0)
    }

    /// Sum of all components with `s <= s_upto`, each scaled by `eps^s`.
    pub fn total(&self, eps: f64, s_upto: usize) -> TaylorFourierSeries<Complex64> {
        let mut out = TaylorFourierSeries::new(self.n1, self.n2, self.trunc);
        for (&(_, s), f) in &self.terms {
            if s <= s_upto {
                let w = Complex64::new(eps.powi(s as i32), 0.0);
                out.add_scaled(&f.to_float(), &w);
            }
        }
        out
    }

    /// Sum of the order-`s` components, unscaled.
    pub fn order_component(&self, s: usize) -> TaylorFourierSeries<C> {
        let mut out = self.zero_series();
        for (&(_, t), f) in &self.terms {
            if t == s {
                out.add_assign(f);
            }
        }
        out
    }

    /// Evaluate the truncated sum at a point.
    pub fn evaluate(&self, pt: &PhasePoint, eps: f64, s_upto: usize) -> Result<Complex64> {
        Ok(CompiledSeries::new(&self.total(eps, s_upto)).eval(pt, 0)?.value)
    }

    /// Floating-point copy.
    pub fn to_float(&self) -> GradedHamiltonian<Complex64> {
        GradedHamiltonian {
            n1: self.n1,
            n2: self.n2,
            omega: self.omega.to_c64(),
            big_omega: self.big_omega.iter().map(|c| c.to_c64()).collect(),
            trunc: self.trunc,
            s_max: self.s_max,
            order: self.order,
            terms: self
                .terms
                .iter()
                .map(|(k, f)| (*k, f.to_float()))
                .collect(),
        }
    }

    pub fn omega_f64(&self) -> f64 {
        self.omega.to_c64().re
    }

    pub fn big_omega_f64(&self) -> Vec<f64> {
        self.big_omega.iter().map(|c| c.to_c64().re).collect()
    }

    /// Action Hessian `C_0` of `f_4^{(0,0)}` restricted to `xi = eta = 0`.
    pub fn twist_matrix(&self) -> DMatrix<C> {
        let n = self.n1;
        let f4 = self.get(4, 0).at_zero_transverse().average_fast_angle();
        let mut c = DMatrix::from_element(n, n, C::zero());
        for (idx, v) in f4.iter() {
            if idx.k().iter().any(|&k| k != 0) || idx.action_degree() != 2 {
                continue;
            }
            let nz: Vec<usize> = (0..n).filter(|&j| idx.l()[j] > 0).collect();
            if nz.len() == 1 {
                let i = nz[0];
                c[(i, i)] = c[(i, i)].clone() + v.clone() * C::from_i64(2);
            } else {
                let (i, j) = (nz[0], nz[1]);
                c[(i, j)] = c[(i, j)].clone() + v.clone();
                c[(j, i)] = c[(j, i)].clone() + v.clone();
            }
        }
        c
    }

    /// Twist constant `m = 1 / ||C_0^{-1}||_1`, the smallest l1 gain of `C_0`.
    pub fn twist_constant(&self) -> Result<f64> {
        let c = self.twist_matrix().map(|v| v.to_c64().re);
        let inv = c
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Singular("twist matrix C0".into()))?;
        let norm1 = (0..inv.ncols())
            .map(|j| inv.column(j).iter().map(|x| x.abs()).sum::<f64>())
            .fold(0.0, f64::max);
        Ok(1.0 / norm1)
    }

    /// Decay profile `||f_l^{(0,s)}|| 2^l` of the stored family, excluding the
    /// linear part and constants. Returns the entries and their maximum `E`.
    pub fn decay_profile(&self, w: &NormWeights) -> (Vec<((usize, usize), f64)>, f64) {
        let mut rows = Vec::new();
        let mut e = 0.0f64;
        for (&(l, s), f) in &self.terms {
            let f = if (l, s) == (2, 0) {
                f.sub(&self.linear_part()).unwrap_or_else(|_| f.clone())
            } else if l == 0 && s == 0 {
                continue;
            } else {
                f.clone()
            };
            let v = weighted_norm(&f, w) * 2f64.powi(l as i32);
            e = e.max(v);
            rows.push(((l, s), v));
        }
        (rows, e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_part_shape() {
        let h = GradedHamiltonian::new(
            2,
            1,
            Complex64::new(3.0, 0.0),
            vec![Complex64::new(1.0, 0.0)],
            TruncationPolicy::default(),
            2,
        );
        let lin = h.get(2, 0);
        assert_eq!(lin.len(), 2);
        let pt = PhasePoint {
            q: vec![Complex64::new(0.0, 0.0); 2],
            p: vec![Complex64::new(2.0, 0.0), Complex64::new(5.0, 0.0)],
            xi: vec![Complex64::new(1.0, 0.0)],
            eta: vec![Complex64::new(1.0, 0.0)],
        };
        let v = h.evaluate(&pt, 0.1, 2).unwrap();
        assert!((v - Complex64::new(6.0, 1.0)).norm() < 1e-15);
    }

    #[test]
    #[should_panic]
    fn set_rejects_mixed_grade() {
        let t = TruncationPolicy::default();
        let mut h = GradedHamiltonian::new(1, 1, Complex64::new(1.0, 0.0), vec![Complex64::new(1.0, 0.0)], t, 1);
        let f = TaylorFourierSeries::action(1, 1, t, 0)
            .add(&TaylorFourierSeries::xi(1, 1, t, 0))
            .unwrap();
        h.set(2, 1, f);
    }
}
