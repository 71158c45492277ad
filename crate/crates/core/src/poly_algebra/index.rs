use std::fmt;

use smallvec::SmallVec;

/// Exponents and harmonics of one Taylor-Fourier monomial
/// `p^l exp(i<k,q>) xi^m1 eta^m2`.
///
/// Storage is a single flat vector laid out as `[l | k | m1 | m2]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MultiIndex {
    n1: u8,
    n2: u8,
    data: SmallVec<[i32; 12]>,
}

impl MultiIndex {
    /// The index of the constant monomial.
    pub fn zero(n1: usize, n2: usize) -> Self {
        let mut data = SmallVec::new();
        data.resize(2 * n1 + 2 * n2, 0);
        MultiIndex {
            n1: n1 as u8,
            n2: n2 as u8,
            data,
        }
    }

    /// Build from the four component vectors.
    ///
    /// Panics if a length is wrong or an exponent is negative.
    pub fn new(l: &[i32], k: &[i32], m1: &[i32], m2: &[i32]) -> Self {
        assert_eq!(l.len(), k.len(), "l and k must have length n1");
        assert_eq!(m1.len(), m2.len(), "m1 and m2 must have length n2");
        assert!(
            l.iter().chain(m1).chain(m2).all(|&e| e >= 0),
            "exponents must be non-negative"
        );
        let mut data = SmallVec::new();
        data.extend_from_slice(l);
        data.extend_from_slice(k);
        data.extend_from_slice(m1);
        data.extend_from_slice(m2);
        MultiIndex {
            n1: l.len() as u8,
            n2: m1.len() as u8,
            data,
        }
    }

    pub fn n1(&self) -> usize {
        self.n1 as usize
    }

    pub fn n2(&self) -> usize {
        self.n2 as usize
    }

    pub fn l(&self) -> &[i32] {
        &self.data[..self.n1()]
    }

    pub fn k(&self) -> &[i32] {
        &self.data[self.n1()..2 * self.n1()]
    }

    pub fn m1(&self) -> &[i32] {
        let o = 2 * self.n1();
        &self.data[o..o + self.n2()]
    }

    pub fn m2(&self) -> &[i32] {
        let o = 2 * self.n1() + self.n2();
        &self.data[o..o + self.n2()]
    }

    pub fn l_mut(&mut self) -> &mut [i32] {
        let n1 = self.n1();
        &mut self.data[..n1]
    }

    pub fn k_mut(&mut self) -> &mut [i32] {
        let n1 = self.n1();
        &mut self.data[n1..2 * n1]
    }

    pub fn m1_mut(&mut self) -> &mut [i32] {
        let o = 2 * self.n1();
        let n2 = self.n2();
        &mut self.data[o..o + n2]
    }

    pub fn m2_mut(&mut self) -> &mut [i32] {
        let o = 2 * self.n1() + self.n2();
        let n2 = self.n2();
        &mut self.data[o..o + n2]
    }

    /// Total action degree `|l|`.
    pub fn action_degree(&self) -> i32 {
        self.l().iter().sum()
    }

    /// Total transverse degree `|m1| + |m2|`.
    pub fn transverse_degree(&self) -> i32 {
        self.m1().iter().sum::<i32>() + self.m2().iter().sum::<i32>()
    }

    /// Grade `2|l| + |m1| + |m2|`.
    pub fn grade(&self) -> usize {
        (2 * self.action_degree() + self.transverse_degree()) as usize
    }

    /// Largest absolute harmonic.
    pub fn max_harmonic(&self) -> i32 {
        self.k().iter().map(|k| k.abs()).max().unwrap_or(0)
    }

    /// `|k|_1`.
    pub fn harmonic_l1(&self) -> i32 {
        self.k().iter().map(|k| k.abs()).sum()
    }

    /// Componentwise sum of two indices (monomial product).
    pub fn combine(&self, other: &MultiIndex) -> MultiIndex {
        debug_assert_eq!((self.n1, self.n2), (other.n1, other.n2));
        let mut out = self.clone();
        for (a, b) in out.data.iter_mut().zip(other.data.iter()) {
            *a += *b;
        }
        out
    }
}

fn join(v: &[i32]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

impl fmt::Debug for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[l {} | k {} | m1 {} | m2 {}]",
            join(self.l()),
            join(self.k()),
            join(self.m1()),
            join(self.m2())
        )
    }
}
