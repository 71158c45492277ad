use crate::error::{Error, Result};
use crate::poly_algebra::{Coefficient, MultiIndex, TaylorFourierSeries};

/// Which divisors the homological equation uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HomologicalMode {
    /// `i k1 omega`
    ActionOnly,
    /// `i [k1 omega + <m1 - m2, Omega>]`
    Mixed,
}

/// The divisor of a single monomial.
pub fn divisor<C: Coefficient>(idx: &MultiIndex, mode: HomologicalMode, omega: &C, big_omega: &[C]) -> C {
    let mut d = C::from_i64(idx.k()[0] as i64) * omega.clone();
    if mode == HomologicalMode::Mixed {
        for (j, w) in big_omega.iter().enumerate() {
            let c = (idx.m1()[j] - idx.m2()[j]) as i64;
            if c != 0 {
                d = d + C::from_i64(c) * w.clone();
            }
        }
    }
    C::imag_unit() * d
}

/// Solve `L_chi(omega p1 + sum i Omega xi eta) + f = kept`.
///
/// With `keep_k1_zero` the terms with `k1 = 0` form the kept part and are
/// not solved for; otherwise every term is removed. Fails if a divisor
/// that must be inverted has modulus below `delta_min`.
pub fn solve_homological<C: Coefficient>(
    f: &TaylorFourierSeries<C>,
    mode: HomologicalMode,
    keep_k1_zero: bool,
    omega: &C,
    big_omega: &[C],
    delta_min: f64,
) -> Result<TaylorFourierSeries<C>> {
    let mut chi = TaylorFourierSeries::new(f.n1(), f.n2(), *f.truncation());
    for (idx, c) in f.iter() {
        if keep_k1_zero && idx.k()[0] == 0 {
            continue;
        }
        let d = divisor(idx, mode, omega, big_omega);
        let mag = d.magnitude();
        if mag < delta_min || d.is_exact_zero() {
            return Err(Error::SmallDivisor {
                divisor: mag,
                k: idx.k().to_vec(),
                m1: idx.m1().to_vec(),
                m2: idx.m2().to_vec(),
            });
        }
        chi.add_term(idx.clone(), c.clone() / d);
    }
    chi.canonicalize();
    Ok(chi)
}

/// Dense linear solve by Gaussian elimination with partial pivoting on the
/// coefficient modulus. Works over exact and floating fields.
pub fn solve_linear<C: Coefficient>(a: &[Vec<C>], b: &[C]) -> Result<Vec<C>> {
    let n = b.len();
    if a.len() != n || a.iter().any(|r| r.len() != n) {
        return Err(Error::DimensionMismatch {
            left: (a.len(), a.first().map_or(0, |r| r.len())),
            right: (n, 1),
        });
    }
    let mut m: Vec<Vec<C>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().cloned().chain(std::iter::once(bi.clone())).collect())
        .collect();
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&i, &j| m[i][col].magnitude().total_cmp(&m[j][col].magnitude()))
            .expect("nonempty range");
        if m[piv][col].is_exact_zero() || m[piv][col].magnitude() == 0.0 {
            return Err(Error::Singular("linear system".into()));
        }
        m.swap(col, piv);
        for i in col + 1..n {
            if m[i][col].is_exact_zero() {
                continue;
            }
            let f = m[i][col].clone() / m[col][col].clone();
            for j in col..=n {
                let v = m[col][j].clone();
                m[i][j] = m[i][j].clone() - f.clone() * v;
            }
        }
    }
    let mut x = vec![C::zero(); n];
    for i in (0..n).rev() {
        let mut acc = m[i][n].clone();
        for j in i + 1..n {
            acc = acc - m[i][j].clone() * x[j].clone();
        }
        x[i] = acc / m[i][i].clone();
    }
    Ok(x)
}
