//! Random perturbed-matrix families `N(eps) + mu(eps) P` with diagonal `N`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use resnf::stability::PerturbedMatrix;

#[derive(Clone, Debug)]
pub struct Family {
    /// Diagonal of `N / eps^a`.
    pub diag: Vec<f64>,
    pub p: DMatrix<f64>,
    /// `mu / eps^b`.
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

    pub fn dim(&self) -> usize {
        self.diag.len()
    }
}

/// Entries of either sign with modulus in `[0.5, 2)`.
pub fn signed<R: Rng>(rng: &mut R) -> Family {
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

/// Entries `j + 1 + u`, `u` in `[0, 0.5)`, of a common sign.
pub fn separated<R: Rng>(rng: &mut R) -> Family {
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

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn members_scale_as_requested() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let f = separated(&mut rng);
        let m = f.member(1e-2, 1.0, 2.0);
        for (j, d) in f.diag.iter().enumerate() {
            assert!((m.n[(j, j)] - d * 1e-2).abs() < 1e-15);
            assert!(d.abs() >= j as f64 + 1.0);
        }
        assert!((m.mu - f.amp * 1e-4).abs() < 1e-18);
    }

    #[test]
    fn draws_are_reproducible() {
        let a = signed(&mut ChaCha8Rng::seed_from_u64(9));
        let b = signed(&mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a.diag, b.diag);
        assert_eq!(a.p, b.p);
        assert!((2..=6).contains(&a.dim()));
    }
}
