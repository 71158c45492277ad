use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Diagonal similarity `D^{-1} A D` with power-of-two scalings that
/// equalizes row and column norms.
pub fn balance(a: &DMatrix<f64>) -> DMatrix<f64> {
    let n = a.nrows();
    let mut m = a.clone();
    let radix = 2.0_f64;
    let mut done = false;
    while !done {
        done = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += m[(j, i)].abs();
                    r += m[(i, j)].abs();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut cc = c;
            while cc < r / radix {
                f *= radix;
                cc *= radix * radix;
            }
            while cc > r * radix {
                f /= radix;
                cc /= radix * radix;
            }
            if (c * f + r / f) < 0.95 * s {
                done = false;
                for j in 0..n {
                    m[(i, j)] /= f;
                    m[(j, i)] *= f;
                }
            }
        }
    }
    m
}

/// Eigenvalues of a real matrix after balancing, sorted by real then
/// imaginary part.
pub fn eigenvalues(a: &DMatrix<f64>) -> Vec<Complex64> {
    let mut v: Vec<Complex64> = balance(a).complex_eigenvalues().iter().copied().collect();
    sort_spectrum(&mut v);
    v
}

/// Eigenvalues of a complex matrix from its Schur form.
pub fn complex_eigenvalues(a: &DMatrix<Complex64>) -> Result<Vec<Complex64>> {
    let mut v: Vec<Complex64> = Schur::new(a.clone())
        .eigenvalues()
        .ok_or_else(|| Error::Numerical("complex Schur decomposition failed".into()))?
        .iter()
        .copied()
        .collect();
    sort_spectrum(&mut v);
    Ok(v)
}

pub fn sort_spectrum(v: &mut [Complex64]) {
    v.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
}

/// Smallest pairwise distance within a spectrum.
pub fn min_pairwise_gap(v: &[Complex64]) -> f64 {
    let mut g = f64::INFINITY;
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            g = g.min((v[i] - v[j]).norm());
        }
    }
    g
}

/// Unit eigenvector for each eigenvalue, from the smallest right singular
/// vector of `A - lambda I`.
pub fn eigenvectors(a: &DMatrix<f64>, lambdas: &[Complex64]) -> DMatrix<Complex64> {
    let n = a.nrows();
    let ac = a.map(|x| Complex64::new(x, 0.0));
    let mut v = DMatrix::zeros(n, lambdas.len());
    for (k, &l) in lambdas.iter().enumerate() {
        let shifted = &ac - DMatrix::from_diagonal_element(n, n, l);
        let svd = shifted.svd(false, true);
        let vt = svd.v_t.expect("right singular vectors requested");
        let (imin, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (i, &s)| if s < acc.1 { (i, s) } else { acc });
        let row = vt.row(imin);
        for i in 0..n {
            v[(i, k)] = row[i].conj();
        }
    }
    v
}

/// Eigenvector condition number `kappa(V) = ||V|| ||V^{-1}||` with unit
/// columns; infinite for a defective matrix.
pub fn eigenvector_condition(a: &DMatrix<f64>) -> f64 {
    let lambdas = eigenvalues(a);
    let v = eigenvectors(a, &lambdas);
    let s = v.singular_values();
    let smin = s.min();
    if smin <= f64::EPSILON * s.max() {
        f64::INFINITY
    } else {
        s.max() / smin
    }
}

/// Operator-norm constant of a matrix: `kappa(V)` and a sampled lower
/// estimate of `sup_z ||R(z)|| dist(z, Sigma)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorConstant {
    pub kappa: f64,
    pub sampled: f64,
}

impl OperatorConstant {
    /// The constant used in the bounds, never below 1.
    pub fn value(&self) -> f64 {
        self.kappa.max(self.sampled).max(1.0)
    }
}

/// Spectral norm.
pub fn op_norm(a: &DMatrix<f64>) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    a.clone().singular_values().max()
}

fn resolvent_ratio(a: &DMatrix<f64>, spec: &[Complex64], z: Complex64) -> Option<f64> {
    let n = a.nrows();
    let d = spec.iter().map(|l| (l - z).norm()).fold(f64::INFINITY, f64::min);
    if d == 0.0 {
        return None;
    }
    let shifted = a.map(|x| Complex64::new(x, 0.0)) - DMatrix::from_diagonal_element(n, n, z);
    let s = shifted.singular_values();
    let smin = s.min();
    if smin == 0.0 {
        return None;
    }
    Some(d / smin)
}

/// Estimate the operator-norm constant of `a` with `samples` random probe
/// points around its spectrum.
pub fn operator_constant(a: &DMatrix<f64>, samples: usize, seed: u64) -> OperatorConstant {
    let spec = eigenvalues(a);
    let kappa = eigenvector_condition(a);
    let scale = spec.iter().map(|l| l.norm()).fold(0.0, f64::max).max(op_norm(a)).max(1e-300);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: f64 = 1.0;
    for _ in 0..samples {
        let centre = spec[rng.gen_range(0..spec.len())];
        let r = scale * 10f64.powf(rng.gen_range(-4.0..0.5));
        let t = rng.gen_range(0.0..std::f64::consts::TAU);
        let z = centre + Complex64::from_polar(r, t);
        if let Some(v) = resolvent_ratio(a, &spec, z) {
            best = best.max(v);
        }
    }
    OperatorConstant { kappa, sampled: best }
}

/// A matching between a reference and a perturbed spectrum.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MatchedPair {
    pub reference: Complex64,
    pub perturbed: Complex64,
    pub distance: f64,
}

/// Greedy nearest-neighbour matching, closest pairs first. Both spectra
/// must have the same length.
pub fn match_spectra(reference: &[Complex64], perturbed: &[Complex64]) -> Result<Vec<MatchedPair>> {
    if reference.len() != perturbed.len() {
        return Err(Error::DimensionMismatch {
            left: (reference.len(), 1),
            right: (perturbed.len(), 1),
        });
    }
    let mut cand = Vec::with_capacity(reference.len() * perturbed.len());
    for (i, a) in reference.iter().enumerate() {
        for (j, b) in perturbed.iter().enumerate() {
            cand.push(((a - b).norm(), i, j));
        }
    }
    cand.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)).then(x.2.cmp(&y.2)));
    let mut used_i = vec![false; reference.len()];
    let mut used_j = vec![false; perturbed.len()];
    let mut out = vec![None; reference.len()];
    for (d, i, j) in cand {
        if !used_i[i] && !used_j[j] {
            used_i[i] = true;
            used_j[j] = true;
            out[i] = Some(MatchedPair {
                reference: reference[i],
                perturbed: perturbed[j],
                distance: d,
            });
        }
    }
    Ok(out.into_iter().map(|p| p.expect("square matching")).collect())
}
