//! Random perturbed-matrix families `N(eps) + mu(eps) P`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use resnf::stability::PerturbedMatrix;

/// Diagonal of `N / eps^a`, the perturbation `P` and the amplitude of
/// `mu / eps^b`.
pub struct Family {
    pub diag: Vec<f64>,
    pub p: DMatrix<f64>,
    pub amp: f64,
}

impl Family {
    pub fn member(&self, eps: f64, a: f64, b: f64) -> PerturbedMatrix {
        let n = DMatrix::from_diagonal(&DVector::from_iterator(
            self.diag.len(),
            self.diag.iter().map(|d| d * eps.powf(a)),
        ));
        PerturbedMatrix {
            n,
            p: self.p.clone(),
            mu: self.amp * eps.powf(b),
        }
    }
}

/// Entries of either sign with modulus in `[0.5, 2)`, any perturbation amplitude.
pub fn signed_family<R: Rng>(rng: &mut R) -> Family {
    let dim = rng.gen_range(2..=6);
    Family {
        diag: (0..dim)
            .map(|_| {
                let s = if rng.gen_bool(0.5) { 1.0 } else { -1.0 };
                s * rng.gen_range(0.5..2.0)
            })
            .collect(),
        p: DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0)),
        amp: rng.gen_range(-1.0..1.0),
    }
}

/// Well separated entries `j + 1 + u`, `u` in `[0, 0.5)`, of a common sign.
pub fn separated_family<R: Rng>(rng: &mut R) -> Family {
    let dim = rng.gen_range(2..=6);
    let mut diag: Vec<f64> = (0..dim).map(|j| j as f64 + 1.0 + rng.gen_range(0.0..0.5)).collect();
    if rng.gen_bool(0.5) {
        diag.iter_mut().for_each(|d| *d = -*d);
    }
    Family {
        diag,
        p: DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0)),
        amp: rng.gen_range(0.2..1.0),
    }
}

/// Smallest eigenvalue modulus from an unbalanced dense solve.
pub fn oracle_min_modulus(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .complex_eigenvalues()
        .iter()
        .map(|l| l.norm())
        .fold(f64::INFINITY, f64::min)
}
