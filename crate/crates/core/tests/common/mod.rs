#![allow(dead_code)]

pub mod matrices;
pub mod strategies;

use num_complex::Complex64;
use std::f64::consts::PI;

/// The eight configurations `{0, pi}^3`.
pub fn configurations() -> Vec<[f64; 3]> {
    (0..8u32)
        .map(|m| [0, 1, 2].map(|i| if m >> i & 1 == 1 { PI } else { 0.0 }))
        .collect()
}

/// Fixed-step RK4 for `i psi_j' = -(1 + 2 gamma |psi_j|^2) psi_j - eps (psi_{j-1} + psi_{j+1})`,
/// the chain with fixed ends written in `psi = (x - i y) / sqrt 2`.
/// Input and output use the Cartesian layout `(x_0..x_{N-1}, y_0..y_{N-1})`.
pub fn chain_rk4(gamma: f64, eps: f64, s0: &[f64], t: f64, steps: usize) -> Vec<f64> {
    let n = s0.len() / 2;
    let r2 = std::f64::consts::SQRT_2;
    let mut psi: Vec<Complex64> = (0..n).map(|j| Complex64::new(s0[j], -s0[n + j]) / r2).collect();
    let rhs = |p: &[Complex64]| -> Vec<Complex64> {
        (0..n)
            .map(|j| {
                let mut v = p[j] * (1.0 + 2.0 * gamma * p[j].norm_sqr());
                if j > 0 {
                    v += p[j - 1] * eps;
                }
                if j + 1 < n {
                    v += p[j + 1] * eps;
                }
                v * Complex64::i()
            })
            .collect()
    };
    let h = t / steps as f64;
    let axpy = |a: &[Complex64], k: &[Complex64], c: f64| -> Vec<Complex64> {
        a.iter().zip(k).map(|(x, y)| x + y * c).collect()
    };
    for _ in 0..steps {
        let k1 = rhs(&psi);
        let k2 = rhs(&axpy(&psi, &k1, 0.5 * h));
        let k3 = rhs(&axpy(&psi, &k2, 0.5 * h));
        let k4 = rhs(&axpy(&psi, &k3, h));
        for j in 0..n {
            psi[j] += (k1[j] + k2[j] * 2.0 + k3[j] * 2.0 + k4[j]) * (h / 6.0);
        }
    }
    let mut out = vec![0.0; 2 * n];
    for j in 0..n {
        out[j] = psi[j].re * r2;
        out[n + j] = -psi[j].im * r2;
    }
    out
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
