use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Square integer matrix stored row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMatrix {
    n: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![0; n * n];
        for i in 0..n {
            data[i * n + i] = 1;
        }
        IntMatrix { n, data }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("integer matrix must be square".into()));
        }
        Ok(IntMatrix {
            n,
            data: rows.iter().flatten().copied().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> i64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: i64) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(i, j, self.get(j, i));
            }
        }
        out
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        let n = self.n;
        let mut out = IntMatrix {
            n,
            data: vec![0; n * n],
        };
        for i in 0..n {
            for j in 0..n {
                let s = (0..n).map(|k| self.get(i, k) * other.get(k, j)).sum();
                out.set(i, j, s);
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[i64]) -> Vec<i64> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn det(&self) -> i64 {
        let n = self.n;
        if n == 0 {
            return 1;
        }
        let mut a: Vec<i128> = self.data.iter().map(|&x| x as i128).collect();
        let mut sign = 1i128;
        let mut prev = 1i128;
        for k in 0..n - 1 {
            if a[k * n + k] == 0 {
                let Some(swap) = (k + 1..n).find(|&i| a[i * n + k] != 0) else {
                    return 0;
                };
                for j in 0..n {
                    a.swap(k * n + j, swap * n + j);
                }
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i * n + j] = (a[i * n + j] * a[k * n + k] - a[i * n + k] * a[k * n + j]) / prev;
                }
            }
            prev = a[k * n + k];
        }
        (sign * a[n * n - 1]) as i64
    }

    /// Integer inverse of a unimodular matrix.
    pub fn inverse_unimodular(&self) -> Result<IntMatrix> {
        let d = self.det();
        if d.abs() != 1 {
            return Err(Error::InvalidInput(format!("matrix is not unimodular (det = {d})")));
        }
        let f = self.to_f64();
        let inv = f
            .try_inverse()
            .ok_or_else(|| Error::Singular("unimodular inverse".into()))?;
        let n = self.n;
        let mut out = IntMatrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                out.set(i, j, inv[(i, j)].round() as i64);
            }
        }
        if self.mul(&out) != IntMatrix::identity(n) {
            return Err(Error::Singular("integer inverse check failed".into()));
        }
        Ok(out)
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j) as f64)
    }
}

/// The resonant chart `q = U phi`, `p = U^{-T} J` with `J = I - I*`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResonantChart {
    /// Resonance vector, `k[0] == 1`.
    pub k: Vec<i64>,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    /// Torus actions.
    pub istar: Vec<f64>,
    /// Orbit frequency.
    pub omega: f64,
    /// Transverse frequencies.
    pub big_omega: Vec<f64>,
}

/// Chart matrix for a resonance vector with `k_1 = 1`.
///
/// For `k = (1, ..., 1)` the consecutive-difference pattern
/// `q_1 = phi_1`, `q_j = phi_j - phi_{j-1}` is used. Otherwise
/// `q_1 = phi_1`, `q_j = k_j phi_1 - phi_j`.
pub fn chart_matrix(k: &[i64]) -> Result<IntMatrix> {
    let n = k.len();
    if n == 0 || k[0] != 1 {
        return Err(Error::InvalidInput(format!("resonance vector must have k_1 = 1, got {k:?}")));
    }
    let mut u = IntMatrix::identity(n);
    if k.iter().all(|&x| x == 1) {
        for j in 1..n {
            u.set(j, j, 1);
            u.set(j, j - 1, -1);
        }
    } else {
        for j in 1..n {
            u.set(j, 0, k[j]);
            u.set(j, j, -1);
        }
    }
    Ok(u)
}

impl ResonantChart {
    /// Build the chart from the resonance vector and the unperturbed data:
    /// `frequencies` are `dh0/dI` at `I*` and `big_omega` the transverse
    /// frequencies.
    pub fn new(
        k: &[i64],
        istar: &[f64],
        frequencies: &[f64],
        big_omega: &[f64],
        tol: f64,
    ) -> Result<Self> {
        if istar.len() != k.len() || frequencies.len() != k.len() {
            return Err(Error::InvalidInput("chart data length mismatch".into()));
        }
        let u = chart_matrix(k)?;
        let u_inv = u.inverse_unimodular()?;
        let omega = frequencies[0];
        let res = frequencies
            .iter()
            .zip(k)
            .map(|(f, &kj)| (f - omega * kj as f64).abs())
            .fold(0.0, f64::max);
        if res > tol {
            return Err(Error::ResonanceViolated(res));
        }
        Ok(ResonantChart {
            k: k.to_vec(),
            u,
            u_inv,
            istar: istar.to_vec(),
            omega,
            big_omega: big_omega.to_vec(),
        })
    }

    pub fn n1(&self) -> usize {
        self.k.len()
    }

    pub fn n2(&self) -> usize {
        self.big_omega.len()
    }

    /// `q = U phi`.
    pub fn angles_from_phi(&self, phi: &[f64]) -> Vec<f64> {
        let u = self.u.to_f64();
        (u * DVector::from_column_slice(phi)).as_slice().to_vec()
    }

    /// `phi = U^{-1} q`.
    pub fn phi_from_angles(&self, q: &[f64]) -> Vec<f64> {
        let ui = self.u_inv.to_f64();
        (ui * DVector::from_column_slice(q)).as_slice().to_vec()
    }

    /// `p = U^{-T} J`.
    pub fn actions_from_j(&self, j: &[f64]) -> Vec<f64> {
        let uit = self.u_inv.transpose().to_f64();
        (uit * DVector::from_column_slice(j)).as_slice().to_vec()
    }

    /// `J = U^T p`.
    pub fn j_from_actions(&self, p: &[f64]) -> Vec<f64> {
        let ut = self.u.transpose().to_f64();
        (ut * DVector::from_column_slice(p)).as_slice().to_vec()
    }

    /// Harmonic in `q` of `exp(i <m, phi>)`: `U^{-T} m`.
    pub fn harmonic_in_q(&self, m: &[i64]) -> Vec<i64> {
        self.u_inv.transpose().mul_vec(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seagull_pattern() {
        let u = chart_matrix(&[1, 1, 1, 1]).unwrap();
        let expect = IntMatrix::from_rows(&[
            vec![1, 0, 0, 0],
            vec![-1, 1, 0, 0],
            vec![0, -1, 1, 0],
            vec![0, 0, -1, 1],
        ])
        .unwrap();
        assert_eq!(u, expect);
        assert_eq!(u.det(), 1);
        let c = ResonantChart::new(&[1, 1, 1, 1], &[1.0; 4], &[3.0; 4], &[1.0], 1e-12).unwrap();
        // p1 = sum J
        let p = c.actions_from_j(&[1.0, 2.0, 3.0, 4.0]);
        assert_eq!(p, vec![10.0, 9.0, 7.0, 4.0]);
    }

    #[test]
    fn general_k_is_unimodular() {
        let k = [1, 2, -1, 3];
        let u = chart_matrix(&k).unwrap();
        assert_eq!(u.det().abs(), 1);
        let c = ResonantChart::new(&k, &[1.0; 4], &[2.0, 4.0, -2.0, 6.0], &[], 1e-12).unwrap();
        // p1 = <k, J>
        let j = [0.3, -0.2, 0.5, 0.1];
        let p = c.actions_from_j(&j);
        let kj: f64 = k.iter().zip(&j).map(|(a, b)| *a as f64 * b).sum();
        assert!((p[0] - kj).abs() < 1e-14);
        // q = U phi moves with frequency omega e_1
        let w = c.angles_from_phi(&[2.0, 4.0, -2.0, 6.0]);
        assert!((w[0] - 2.0).abs() < 1e-14 && w[1..].iter().all(|x| x.abs() < 1e-14));
    }

    #[test]
    fn trivial_chart() {
        let c = ResonantChart::new(&[1], &[1.0], &[1.5], &[], 1e-12).unwrap();
        assert_eq!(c.u, IntMatrix::identity(1));
    }

    #[test]
    fn round_trip() {
        let c = ResonantChart::new(&[1, 1, 1, 1], &[1.0; 4], &[3.0; 4], &[1.0], 1e-12).unwrap();
        let q = [0.1, -0.4, 2.0, 0.7];
        let back = c.angles_from_phi(&c.phi_from_angles(&q));
        let p = [0.01, 0.2, -0.3, 0.05];
        let pb = c.actions_from_j(&c.j_from_actions(&p));
        for i in 0..4 {
            assert!((back[i] - q[i]).abs() < 1e-14);
            assert!((pb[i] - p[i]).abs() < 1e-14);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(chart_matrix(&[2, 1]).is_err());
        assert!(matches!(
            ResonantChart::new(&[1, 1], &[1.0, 1.0], &[1.0, 1.1], &[], 1e-12),
            Err(Error::ResonanceViolated(_))
        ));
    }
}
