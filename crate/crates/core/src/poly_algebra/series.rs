use std::collections::btree_map::{self, BTreeMap};
use std::collections::BTreeSet;

use num_complex::Complex64;

use super::coeff::Coefficient;
use super::index::MultiIndex;
use crate::error::{Error, Result};

/// Finite-representation cutoffs for a series.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TruncationPolicy {
    /// Terms with grade above this are discarded.
    pub max_grade: usize,
    /// Terms with any `|k_j|` above this are discarded.
    pub max_harmonic: i32,
    /// Coefficients with modulus below this are purged.
    pub drop_tol: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            max_grade: 8,
            max_harmonic: 8,
            drop_tol: 1e-14,
        }
    }
}

impl TruncationPolicy {
    pub fn new(max_grade: usize, max_harmonic: i32, drop_tol: f64) -> Result<Self> {
        if max_harmonic < 0 || !(drop_tol >= 0.0) {
            return Err(Error::InvalidInput(format!(
                "invalid truncation policy: K={max_harmonic}, drop_tol={drop_tol}"
            )));
        }
        Ok(TruncationPolicy {
            max_grade,
            max_harmonic,
            drop_tol,
        })
    }

    /// A policy that keeps everything up to the given grade, with no
    /// coefficient purging. Used for exact arithmetic.
    pub fn exact(max_grade: usize, max_harmonic: i32) -> Self {
        TruncationPolicy {
            max_grade,
            max_harmonic,
            drop_tol: 0.0,
        }
    }

    pub fn admits(&self, idx: &MultiIndex) -> bool {
        idx.grade() <= self.max_grade && idx.max_harmonic() <= self.max_harmonic
    }

    /// The policy that admits only what both admit.
    pub fn stricter(&self, other: &TruncationPolicy) -> TruncationPolicy {
        TruncationPolicy {
            max_grade: self.max_grade.min(other.max_grade),
            max_harmonic: self.max_harmonic.min(other.max_harmonic),
            drop_tol: self.drop_tol.max(other.drop_tol),
        }
    }
}

/// Variables a series can be differentiated with respect to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    P(usize),
    Q(usize),
    Xi(usize),
    Eta(usize),
}

/// Sparse Taylor-Fourier series in actions `p`, angles `q` and transverse
/// variables `(xi, eta)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaylorFourierSeries<C: Coefficient = Complex64> {
    n1: usize,
    n2: usize,
    trunc: TruncationPolicy,
    terms: BTreeMap<MultiIndex, C>,
}

/// Floating-point series.
pub type Series = TaylorFourierSeries<Complex64>;

impl<C: Coefficient> TaylorFourierSeries<C> {
    /// The zero series.
    pub fn new(n1: usize, n2: usize, trunc: TruncationPolicy) -> Self {
        TaylorFourierSeries {
            n1,
            n2,
            trunc,
            terms: BTreeMap::new(),
        }
    }

    /// A constant series.
    pub fn constant(n1: usize, n2: usize, trunc: TruncationPolicy, c: C) -> Self {
        let mut s = Self::new(n1, n2, trunc);
        s.add_term(MultiIndex::zero(n1, n2), c);
        s.canonicalize();
        s
    }

    /// A single monomial.
    pub fn monomial(n1: usize, n2: usize, trunc: TruncationPolicy, idx: MultiIndex, c: C) -> Self {
        assert_eq!((idx.n1(), idx.n2()), (n1, n2), "index dims mismatch");
        let mut s = Self::new(n1, n2, trunc);
        s.add_term(idx, c);
        s.canonicalize();
        s
    }

    /// The action `p_j`.
    pub fn action(n1: usize, n2: usize, trunc: TruncationPolicy, j: usize) -> Self {
        let mut idx = MultiIndex::zero(n1, n2);
        idx.l_mut()[j] = 1;
        Self::monomial(n1, n2, trunc, idx, C::one())
    }

    /// `exp(i <k, q>)`.
    pub fn harmonic(n1: usize, n2: usize, trunc: TruncationPolicy, k: &[i32]) -> Self {
        let mut idx = MultiIndex::zero(n1, n2);
        idx.k_mut().copy_from_slice(k);
        Self::monomial(n1, n2, trunc, idx, C::one())
    }

    /// `cos <k, q>`.
    pub fn cosine(n1: usize, n2: usize, trunc: TruncationPolicy, k: &[i32]) -> Self {
        let neg: Vec<i32> = k.iter().map(|x| -x).collect();
        let half = C::from_ratio(1, 2);
        let mut s = Self::harmonic(n1, n2, trunc, k).scale(&half);
        s.add_assign(&Self::harmonic(n1, n2, trunc, &neg).scale(&half));
        s
    }

    /// `sin <k, q>`.
    pub fn sine(n1: usize, n2: usize, trunc: TruncationPolicy, k: &[i32]) -> Self {
        let neg: Vec<i32> = k.iter().map(|x| -x).collect();
        let c = C::imag_unit() * C::from_ratio(-1, 2);
        let mut s = Self::harmonic(n1, n2, trunc, k).scale(&c);
        s.add_assign(&Self::harmonic(n1, n2, trunc, &neg).scale(&(-c)));
        s
    }

    /// `xi_j`.
    pub fn xi(n1: usize, n2: usize, trunc: TruncationPolicy, j: usize) -> Self {
        let mut idx = MultiIndex::zero(n1, n2);
        idx.m1_mut()[j] = 1;
        Self::monomial(n1, n2, trunc, idx, C::one())
    }

    /// `eta_j`.
    pub fn eta(n1: usize, n2: usize, trunc: TruncationPolicy, j: usize) -> Self {
        let mut idx = MultiIndex::zero(n1, n2);
        idx.m2_mut()[j] = 1;
        Self::monomial(n1, n2, trunc, idx, C::one())
    }

    pub fn n1(&self) -> usize {
        self.n1
    }

    pub fn n2(&self) -> usize {
        self.n2
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn truncation(&self) -> &TruncationPolicy {
        &self.trunc
    }

    /// Replace the truncation policy, discarding terms it does not admit.
    pub fn with_truncation(mut self, trunc: TruncationPolicy) -> Self {
        self.trunc = trunc;
        self.canonicalize();
        self
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> btree_map::Iter<'_, MultiIndex, C> {
        self.terms.iter()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Option<&C> {
        self.terms.get(idx)
    }

    /// Coefficient of an index, zero when absent.
    pub fn coeff_or_zero(&self, idx: &MultiIndex) -> C {
        self.terms.get(idx).cloned().unwrap_or_else(C::zero)
    }

    /// Accumulate a coefficient without re-canonicalizing.
    ///
    /// Callers must invoke [`canonicalize`](Self::canonicalize) afterwards.
    pub fn add_term(&mut self, idx: MultiIndex, c: C) {
        if !self.trunc.admits(&idx) {
            return;
        }
        match self.terms.entry(idx) {
            btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                *e.get_mut() = v;
            }
            btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    /// Purge terms that are negligible or violate the truncation policy.
    pub fn canonicalize(&mut self) {
        let tol = self.trunc.drop_tol;
        let trunc = self.trunc;
        self.terms
            .retain(|idx, c| trunc.admits(idx) && !c.negligible(tol) && !c.is_exact_zero());
    }

    pub(crate) fn check_dims(&self, other: &Self) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                left: self.dims(),
                right: other.dims(),
            });
        }
        Ok(())
    }

    pub(crate) fn empty_like(&self, other: &Self) -> Self {
        Self::new(self.n1, self.n2, self.trunc.stricter(&other.trunc))
    }

    /// Coefficient-wise sum.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.empty_like(other);
        for (i, c) in self.iter().chain(other.iter()) {
            out.add_term(i.clone(), c.clone());
        }
        out.canonicalize();
        Ok(out)
    }

    /// Coefficient-wise difference.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.empty_like(other);
        for (i, c) in self.iter() {
            out.add_term(i.clone(), c.clone());
        }
        for (i, c) in other.iter() {
            out.add_term(i.clone(), -c.clone());
        }
        out.canonicalize();
        Ok(out)
    }

    /// In-place sum keeping this series' policy. Panics on dimension mismatch.
    pub fn add_assign(&mut self, other: &Self) {
        assert_eq!(self.dims(), other.dims(), "dimension mismatch");
        for (i, c) in other.iter() {
            self.add_term(i.clone(), c.clone());
        }
        self.canonicalize();
    }

    /// In-place `self += c * other`.
    pub fn add_scaled(&mut self, other: &Self, c: &C) {
        assert_eq!(self.dims(), other.dims(), "dimension mismatch");
        for (i, v) in other.iter() {
            self.add_term(i.clone(), v.clone() * c.clone());
        }
        self.canonicalize();
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::new(self.n1, self.n2, self.trunc);
        for (i, v) in self.iter() {
            out.add_term(i.clone(), v.clone() * c.clone());
        }
        out.canonicalize();
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v = -v.clone();
        }
        out
    }

    /// Cauchy product.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_dims(other)?;
        let mut out = self.empty_like(other);
        for (ia, ca) in self.iter() {
            for (ib, cb) in other.iter() {
                out.add_term(ia.combine(ib), ca.clone() * cb.clone());
            }
        }
        out.canonicalize();
        Ok(out)
    }

    /// Partial derivative.
    pub fn derivative(&self, var: Var) -> Self {
        let mut out = Self::new(self.n1, self.n2, self.trunc);
        for (idx, c) in self.iter() {
            let mut j = idx.clone();
            let factor = match var {
                Var::P(v) => {
                    let e = idx.l()[v];
                    if e == 0 {
                        continue;
                    }
                    j.l_mut()[v] -= 1;
                    C::from_i64(e as i64)
                }
                Var::Q(v) => {
                    let k = idx.k()[v];
                    if k == 0 {
                        continue;
                    }
                    C::imag_unit() * C::from_i64(k as i64)
                }
                Var::Xi(v) => {
                    let e = idx.m1()[v];
                    if e == 0 {
                        continue;
                    }
                    j.m1_mut()[v] -= 1;
                    C::from_i64(e as i64)
                }
                Var::Eta(v) => {
                    let e = idx.m2()[v];
                    if e == 0 {
                        continue;
                    }
                    j.m2_mut()[v] -= 1;
                    C::from_i64(e as i64)
                }
            };
            out.add_term(j, c.clone() * factor);
        }
        out.canonicalize();
        out
    }

    /// Keep only terms satisfying a predicate.
    pub fn filter<F: Fn(&MultiIndex) -> bool>(&self, keep: F) -> Self {
        let mut out = Self::new(self.n1, self.n2, self.trunc);
        out.terms = self
            .terms
            .iter()
            .filter(|(i, _)| keep(i))
            .map(|(i, c)| (i.clone(), c.clone()))
            .collect();
        out
    }

    /// Split into pure-grade components. The zero series maps to an empty map.
    pub fn grade_decompose(&self) -> BTreeMap<usize, Self> {
        let mut out: BTreeMap<usize, Self> = BTreeMap::new();
        for (idx, c) in self.iter() {
            out.entry(idx.grade())
                .or_insert_with(|| Self::new(self.n1, self.n2, self.trunc))
                .terms
                .insert(idx.clone(), c.clone());
        }
        out
    }

    /// Set of grades present.
    pub fn grades(&self) -> BTreeSet<usize> {
        self.terms.keys().map(|i| i.grade()).collect()
    }

    /// Whether every term has the given grade.
    pub fn is_pure_grade(&self, g: usize) -> bool {
        self.terms.keys().all(|i| i.grade() == g)
    }

    /// Average over the fast angle `q_1`: keeps the `k_1 = 0` terms.
    pub fn average_fast_angle(&self) -> Self {
        self.filter(|i| i.k()[0] == 0)
    }

    /// The part with `k_1 != 0`.
    pub fn fast_oscillating_part(&self) -> Self {
        self.filter(|i| i.k()[0] != 0)
    }

    /// Restriction to `p = 0`.
    pub fn at_zero_actions(&self) -> Self {
        self.filter(|i| i.action_degree() == 0)
    }

    /// Restriction to `xi = eta = 0`.
    pub fn at_zero_transverse(&self) -> Self {
        self.filter(|i| i.transverse_degree() == 0)
    }

    /// Substitute numerical values for the slow angles `q_2, ..., q_{n1}`,
    /// leaving `q_1` symbolic. `values[j]` is the value of `q_{j+2}`.
    ///
    /// Exact coefficient fields accept only multiples of pi/2.
    pub fn substitute_slow_angles(&self, values: &[f64]) -> Result<Self> {
        if values.len() + 1 != self.n1 {
            return Err(Error::InvalidInput(format!(
                "expected {} slow angles, got {}",
                self.n1.saturating_sub(1),
                values.len()
            )));
        }
        let mut phases = Vec::with_capacity(values.len());
        for &v in values {
            phases.push(v);
        }
        let mut out = Self::new(self.n1, self.n2, self.trunc);
        for (idx, c) in self.iter() {
            let mut j = idx.clone();
            let mut theta = 0.0;
            for (s, &v) in phases.iter().enumerate() {
                theta += idx.k()[s + 1] as f64 * v;
                j.k_mut()[s + 1] = 0;
            }
            let factor = C::cis(theta).ok_or_else(|| {
                Error::InvalidInput(format!(
                    "exact coefficients cannot represent exp(i*{theta})"
                ))
            })?;
            out.add_term(j, c.clone() * factor);
        }
        out.canonicalize();
        Ok(out)
    }

    /// Complex-conjugate coefficients with the index map dictated by a real
    /// structure is model dependent; this returns the plain coefficient
    /// conjugate with `k -> -k`, valid for series without transverse terms.
    pub fn conjugate_angles_only(&self) -> Self {
        let mut out = Self::new(self.n1, self.n2, self.trunc);
        for (idx, c) in self.iter() {
            let mut j = idx.clone();
            for k in j.k_mut() {
                *k = -*k;
            }
            out.add_term(j, c.conj());
        }
        out.canonicalize();
        out
    }

    /// Largest coefficient modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut keys: BTreeSet<&MultiIndex> = self.terms.keys().collect();
        keys.extend(other.terms.keys());
        keys.into_iter()
            .map(|k| (self.coeff_or_zero(k) - other.coeff_or_zero(k)).magnitude())
            .fold(0.0, f64::max)
    }

    /// Largest coefficient modulus.
    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    /// Convert coefficients to floating point.
    pub fn to_float(&self) -> Series {
        let mut out = Series::new(self.n1, self.n2, self.trunc);
        for (idx, c) in self.iter() {
            out.add_term(idx.clone(), c.to_c64());
        }
        out.canonicalize();
        out
    }

    /// Map every coefficient through a function.
    pub fn map_coeffs<F: Fn(&MultiIndex, &C) -> C>(&self, f: F) -> Self {
        let mut out = Self::new(self.n1, self.n2, self.trunc);
        for (idx, c) in self.iter() {
            out.add_term(idx.clone(), f(idx, c));
        }
        out.canonicalize();
        out
    }
}

impl<'a, C: Coefficient> IntoIterator for &'a TaylorFourierSeries<C> {
    type Item = (&'a MultiIndex, &'a C);
    type IntoIter = btree_map::Iter<'a, MultiIndex, C>;
    fn into_iter(self) -> Self::IntoIter {
        self.terms.iter()
    }
}
