//! Random series and norm weights for property tests.

use num_complex::Complex64;
use proptest::prelude::*;
use resnf::poly_algebra::*;

pub const MAX_DEG: i32 = 2;
pub const MAX_K: i32 = 2;

pub fn policy() -> TruncationPolicy {
    TruncationPolicy::exact(40, 40)
}

pub fn build(n1: usize, n2: usize, terms: Vec<(Vec<i32>, Vec<i32>, Vec<i32>, Vec<i32>, f64, f64)>) -> Series {
    let mut s = Series::new(n1, n2, policy());
    for (l, k, m1, m2, re, im) in terms {
        s.add_term(MultiIndex::new(&l, &k, &m1, &m2), Complex64::new(re, im));
    }
    s.canonicalize();
    s
}

pub fn series(n1: usize, n2: usize, max_terms: usize) -> impl Strategy<Value = Series> {
    prop::collection::vec(
        (
            prop::collection::vec(0..=MAX_DEG, n1),
            prop::collection::vec(-MAX_K..=MAX_K, n1),
            prop::collection::vec(0..=MAX_DEG, n2),
            prop::collection::vec(0..=MAX_DEG, n2),
            -1.0..1.0f64,
            -1.0..1.0f64,
        ),
        1..=max_terms,
    )
    .prop_map(move |t| build(n1, n2, t))
}

pub fn dims() -> impl Strategy<Value = (usize, usize)> {
    (1..=4usize, 0..=2usize)
}

pub fn pair() -> impl Strategy<Value = (Series, Series)> {
    dims().prop_flat_map(|(n1, n2)| (series(n1, n2, 4), series(n1, n2, 4)))
}

pub fn triple() -> impl Strategy<Value = (Series, Series, Series)> {
    dims().prop_flat_map(|(n1, n2)| (series(n1, n2, 3), series(n1, n2, 3), series(n1, n2, 3)))
}

pub fn weights() -> impl Strategy<Value = NormWeights> {
    (0.5..2.0f64, 0.5..2.0f64, 0.5..2.0f64).prop_map(|(rho, sigma, r)| NormWeights::new(rho, sigma, r, 1.0).unwrap())
}
