use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::poly_algebra::Coefficient;

/// Nearest-neighbour chain of anharmonic oscillators
///
/// `H = sum_j [ (x_j^2 + y_j^2)/2 + gamma ((x_j^2 + y_j^2)/2)^2 ] + eps sum_j (x_{j+1} x_j + y_{j+1} y_j)`
///
/// with fixed ends. Sites in `excited` are written in action-angle
/// variables `(x, y) = (sqrt(2I) cos phi, -sqrt(2I) sin phi)`, sites in `rest`
/// in the complex coordinates `x = (xi + i eta)/sqrt 2`, `y = i (xi - i eta)/sqrt 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeModel {
    pub n_sites: usize,
    pub gamma: f64,
    pub epsilon: f64,
    pub fixed_ends: bool,
    pub excited: Vec<usize>,
    pub rest: Vec<usize>,
}

impl LatticeModel {
    pub fn new(
        n_sites: usize,
        gamma: f64,
        epsilon: f64,
        excited: Vec<usize>,
        rest: Vec<usize>,
    ) -> Result<Self> {
        if gamma == 0.0 || !gamma.is_finite() {
            return Err(Error::InvalidInput("gamma must be finite and nonzero".into()));
        }
        let mut all: Vec<usize> = excited.iter().chain(&rest).copied().collect();
        all.sort_unstable();
        if all != (0..n_sites).collect::<Vec<_>>() {
            return Err(Error::InvalidInput(
                "excited and rest sets must partition the sites".into(),
            ));
        }
        if excited.is_empty() {
            return Err(Error::InvalidInput("at least one excited site is required".into()));
        }
        Ok(LatticeModel {
            n_sites,
            gamma,
            epsilon,
            fixed_ends: true,
            excited,
            rest,
        })
    }

    /// The five-site chain with the four outer sites excited and the central
    /// one at rest. Sites are numbered `0..5` for `-2..=2`.
    pub fn seagull(gamma: f64, epsilon: f64) -> Result<Self> {
        LatticeModel::new(5, gamma, epsilon, vec![0, 1, 3, 4], vec![2])
    }

    pub fn n1(&self) -> usize {
        self.excited.len()
    }

    pub fn n2(&self) -> usize {
        self.rest.len()
    }

    /// Neighbouring pairs `(j, j+1)`.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        (0..self.n_sites.saturating_sub(1)).map(|j| (j, j + 1)).collect()
    }

    /// Unperturbed frequency `dh0/dI = 1 + 2 gamma I` of an excited site.
    pub fn frequency(&self, istar: f64) -> f64 {
        1.0 + 2.0 * self.gamma * istar
    }

    /// The Hamiltonian as a sum of mixed action-angle monomials.
    pub fn action_angle_terms<C: Coefficient>(&self, gamma: &C) -> Vec<AaTerm<C>> {
        let n1 = self.n1();
        let n2 = self.n2();
        let mut acc: BTreeMap<AaKey, C> = BTreeMap::new();
        let mut push = |key: AaKey, c: C| {
            let e = acc.entry(key).or_insert_with(C::zero);
            *e = e.clone() + c;
        };
        for a in 0..n1 {
            let mut k = AaKey::zero(n1, n2, 0);
            k.half_pow[a] = 2;
            push(k.clone(), C::one());
            k.half_pow[a] = 4;
            push(k, gamma.clone());
        }
        for c in 0..n2 {
            let mut k = AaKey::zero(n1, n2, 0);
            k.m1[c] = 1;
            k.m2[c] = 1;
            push(k.clone(), C::imag_unit());
            k.m1[c] = 2;
            k.m2[c] = 2;
            push(k, -gamma.clone());
        }
        for (s, t) in self.bonds() {
            let xs = self.atoms_x::<C>(s);
            let xt = self.atoms_x::<C>(t);
            let ys = self.atoms_y::<C>(s);
            let yt = self.atoms_y::<C>(t);
            let n_exc = [s, t].iter().filter(|j| self.excited.contains(j)).count();
            let scale = match n_exc {
                2 => C::from_i64(2),
                1 => C::one(),
                _ => C::from_ratio(1, 2),
            };
            for (u, v) in [(&xs, &xt), (&ys, &yt)] {
                for (ka, ca) in u {
                    for (kb, cb) in v {
                        let mut key = AaKey::zero(n1, n2, 1);
                        key.absorb(ka);
                        key.absorb(kb);
                        push(key, scale.clone() * ca.clone() * cb.clone());
                    }
                }
            }
        }
        acc.into_iter()
            .filter(|(_, c)| !c.is_exact_zero())
            .map(|(k, c)| AaTerm {
                coeff: c,
                eps_order: k.eps,
                half_pow: k.half_pow,
                phi: k.phi,
                m1: k.m1,
                m2: k.m2,
            })
            .collect()
    }

    fn atom_key(&self) -> AaKey {
        AaKey::zero(self.n1(), self.n2(), 0)
    }

    // x_j without its sqrt 2 (excited) or 1/sqrt 2 (rest) prefactor.
    fn atoms_x<C: Coefficient>(&self, j: usize) -> Vec<(AaKey, C)> {
        if let Some(a) = self.excited.iter().position(|&e| e == j) {
            let mut p = self.atom_key();
            p.half_pow[a] = 1;
            p.phi[a] = 1;
            let mut m = p.clone();
            m.phi[a] = -1;
            vec![(p, C::from_ratio(1, 2)), (m, C::from_ratio(1, 2))]
        } else {
            let c = self.rest.iter().position(|&e| e == j).expect("site in partition");
            let mut xi = self.atom_key();
            xi.m1[c] = 1;
            let mut eta = self.atom_key();
            eta.m2[c] = 1;
            vec![(xi, C::one()), (eta, C::imag_unit())]
        }
    }

    fn atoms_y<C: Coefficient>(&self, j: usize) -> Vec<(AaKey, C)> {
        if let Some(a) = self.excited.iter().position(|&e| e == j) {
            let mut p = self.atom_key();
            p.half_pow[a] = 1;
            p.phi[a] = 1;
            let mut m = p.clone();
            m.phi[a] = -1;
            let h = C::imag_unit() * C::from_ratio(1, 2);
            vec![(p, h.clone()), (m, -h)]
        } else {
            let c = self.rest.iter().position(|&e| e == j).expect("site in partition");
            let mut xi = self.atom_key();
            xi.m1[c] = 1;
            let mut eta = self.atom_key();
            eta.m2[c] = 1;
            vec![(xi, C::imag_unit()), (eta, C::one())]
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct AaKey {
    eps: usize,
    half_pow: Vec<i32>,
    phi: Vec<i32>,
    m1: Vec<i32>,
    m2: Vec<i32>,
}

impl AaKey {
    fn zero(n1: usize, n2: usize, eps: usize) -> Self {
        AaKey {
            eps,
            half_pow: vec![0; n1],
            phi: vec![0; n1],
            m1: vec![0; n2],
            m2: vec![0; n2],
        }
    }

    fn absorb(&mut self, o: &AaKey) {
        for (a, b) in self.half_pow.iter_mut().zip(&o.half_pow) {
            *a += b;
        }
        for (a, b) in self.phi.iter_mut().zip(&o.phi) {
            *a += b;
        }
        for (a, b) in self.m1.iter_mut().zip(&o.m1) {
            *a += b;
        }
        for (a, b) in self.m2.iter_mut().zip(&o.m2) {
            *a += b;
        }
    }
}

/// One monomial `c eps^s prod_a I_a^{h_a/2} exp(i <m, phi>) xi^m1 eta^m2`.
#[derive(Clone, Debug, PartialEq)]
pub struct AaTerm<C: Coefficient> {
    pub coeff: C,
    pub eps_order: usize,
    /// Exponents of the actions, doubled.
    pub half_pow: Vec<i32>,
    /// Harmonics in the original angles.
    pub phi: Vec<i32>,
    pub m1: Vec<i32>,
    pub m2: Vec<i32>,
}
