//! Pointwise evaluation of series with first and second derivatives.
//!
//! Derivative vectors and matrices use the variable order
//! `(q_1..q_n1, p_1..p_n1, xi_1..xi_n2, eta_1..eta_n2)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::coeff::Coefficient;
use super::series::TaylorFourierSeries;
use crate::error::{Error, Result};

/// A point of the complex phase space.
#[derive(Clone, Debug, PartialEq)]
pub struct PhasePoint {
    pub q: Vec<Complex64>,
    pub p: Vec<Complex64>,
    pub xi: Vec<Complex64>,
    pub eta: Vec<Complex64>,
}

impl PhasePoint {
    pub fn zeros(n1: usize, n2: usize) -> Self {
        let z = Complex64::new(0.0, 0.0);
        PhasePoint {
            q: vec![z; n1],
            p: vec![z; n1],
            xi: vec![z; n2],
            eta: vec![z; n2],
        }
    }

    /// Build from real angles and actions and complex transverse values.
    pub fn from_real(q: &[f64], p: &[f64], xi: &[Complex64], eta: &[Complex64]) -> Self {
        PhasePoint {
            q: q.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            p: p.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
            xi: xi.to_vec(),
            eta: eta.to_vec(),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.q.len(), self.xi.len())
    }
}

/// Value, gradient and (optionally) Hessian at a point.
#[derive(Clone, Debug)]
pub struct Derivatives {
    pub value: Complex64,
    pub gradient: DVector<Complex64>,
    pub hessian: Option<DMatrix<Complex64>>,
}

#[derive(Clone, Copy, Debug)]
enum Kind {
    Power,
    Angle,
}

#[derive(Clone, Debug)]
struct Factor {
    var: usize,
    kind: Kind,
    exp: i32,
}

/// A series flattened for repeated evaluation.
#[derive(Clone, Debug)]
pub struct CompiledSeries {
    n1: usize,
    n2: usize,
    coeffs: Vec<Complex64>,
    factors: Vec<Vec<Factor>>,
    max_pow: Vec<i32>,
    max_harm: Vec<i32>,
}

impl CompiledSeries {
    pub fn new<C: Coefficient>(f: &TaylorFourierSeries<C>) -> Self {
        let (n1, n2) = f.dims();
        let nv = 2 * n1 + 2 * n2;
        let mut coeffs = Vec::with_capacity(f.len());
        let mut factors = Vec::with_capacity(f.len());
        let mut max_pow = vec![0; nv];
        let mut max_harm = vec![0; n1];
        for (idx, c) in f.iter() {
            coeffs.push(c.to_c64());
            let mut fs = Vec::new();
            for j in 0..n1 {
                let k = idx.k()[j];
                if k != 0 {
                    fs.push(Factor {
                        var: j,
                        kind: Kind::Angle,
                        exp: k,
                    });
                    max_harm[j] = max_harm[j].max(k.abs());
                }
                let e = idx.l()[j];
                if e != 0 {
                    fs.push(Factor {
                        var: n1 + j,
                        kind: Kind::Power,
                        exp: e,
                    });
                }
            }
            for j in 0..n2 {
                let e = idx.m1()[j];
                if e != 0 {
                    fs.push(Factor {
                        var: 2 * n1 + j,
                        kind: Kind::Power,
                        exp: e,
                    });
                }
                let e = idx.m2()[j];
                if e != 0 {
                    fs.push(Factor {
                        var: 2 * n1 + n2 + j,
                        kind: Kind::Power,
                        exp: e,
                    });
                }
            }
            for fa in &fs {
                if let Kind::Power = fa.kind {
                    max_pow[fa.var] = max_pow[fa.var].max(fa.exp);
                }
            }
            factors.push(fs);
        }
        CompiledSeries {
            n1,
            n2,
            coeffs,
            factors,
            max_pow,
            max_harm,
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n1, self.n2)
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn flat_point(&self, pt: &PhasePoint) -> Result<Vec<Complex64>> {
        if pt.dims() != (self.n1, self.n2) || pt.p.len() != self.n1 || pt.eta.len() != self.n2 {
            return Err(Error::DimensionMismatch {
                left: (self.n1, self.n2),
                right: pt.dims(),
            });
        }
        let mut v = Vec::with_capacity(2 * self.n1 + 2 * self.n2);
        v.extend_from_slice(&pt.q);
        v.extend_from_slice(&pt.p);
        v.extend_from_slice(&pt.xi);
        v.extend_from_slice(&pt.eta);
        Ok(v)
    }

    /// Evaluate with derivatives up to `order` (0, 1 or 2).
    pub fn eval(&self, pt: &PhasePoint, order: usize) -> Result<Derivatives> {
        let x = self.flat_point(pt)?;
        Ok(self.eval_flat(&x, order))
    }

    /// Evaluate at a flat point `(q, p, xi, eta)`.
    pub fn eval_flat(&self, x: &[Complex64], order: usize) -> Derivatives {
        let nv = 2 * self.n1 + 2 * self.n2;
        let one = Complex64::new(1.0, 0.0);
        // power tables
        let pows: Vec<Vec<Complex64>> = (0..nv)
            .map(|v| {
                let m = self.max_pow[v].max(0) as usize;
                let mut t = Vec::with_capacity(m + 1);
                t.push(one);
                for e in 1..=m {
                    t.push(t[e - 1] * x[v]);
                }
                t
            })
            .collect();
        let harms: Vec<Vec<Complex64>> = (0..self.n1)
            .map(|j| {
                let m = self.max_harm[j] as usize;
                let e = (Complex64::new(0.0, 1.0) * x[j]).exp();
                let mut t = Vec::with_capacity(2 * m + 1);
                let mut pos = vec![one; m + 1];
                for a in 1..=m {
                    pos[a] = pos[a - 1] * e;
                }
                let ei = one / e;
                let mut neg = vec![one; m + 1];
                for a in 1..=m {
                    neg[a] = neg[a - 1] * ei;
                }
                for a in (1..=m).rev() {
                    t.push(neg[a]);
                }
                t.extend_from_slice(&pos);
                t
            })
            .collect();
        let mut value = Complex64::new(0.0, 0.0);
        let mut grad = DVector::from_element(nv, Complex64::new(0.0, 0.0));
        let mut hess = if order >= 2 {
            Some(DMatrix::from_element(nv, nv, Complex64::new(0.0, 0.0)))
        } else {
            None
        };
        let mut f = Vec::new();
        let mut d = Vec::new();
        let mut d2 = Vec::new();
        for (c, fs) in self.coeffs.iter().zip(&self.factors) {
            f.clear();
            d.clear();
            d2.clear();
            for fa in fs {
                match fa.kind {
                    Kind::Power => {
                        let t = &pows[fa.var];
                        let e = fa.exp as usize;
                        f.push(t[e]);
                        d.push(if e >= 1 { t[e - 1] * e as f64 } else { Complex64::new(0.0, 0.0) });
                        d2.push(if e >= 2 {
                            t[e - 2] * (e * (e - 1)) as f64
                        } else {
                            Complex64::new(0.0, 0.0)
                        });
                    }
                    Kind::Angle => {
                        let t = &harms[fa.var];
                        let m = self.max_harm[fa.var];
                        let v = t[(fa.exp + m) as usize];
                        let k = fa.exp as f64;
                        f.push(v);
                        d.push(v * Complex64::new(0.0, k));
                        d2.push(v * (-k * k));
                    }
                }
            }
            let a = fs.len();
            let prod = f.iter().fold(*c, |acc, v| acc * v);
            value += prod;
            if order == 0 {
                continue;
            }
            for u in 0..a {
                let mut g = *c * d[u];
                for w in 0..a {
                    if w != u {
                        g *= f[w];
                    }
                }
                grad[fs[u].var] += g;
            }
            if let Some(h) = hess.as_mut() {
                for u in 0..a {
                    for v in u..a {
                        let mut g = *c;
                        if u == v {
                            g *= d2[u];
                        } else {
                            g *= d[u] * d[v];
                        }
                        for w in 0..a {
                            if w != u && w != v {
                                g *= f[w];
                            }
                        }
                        let (i, j) = (fs[u].var, fs[v].var);
                        h[(i, j)] += g;
                        if i != j {
                            h[(j, i)] += g;
                        }
                    }
                }
            }
        }
        Derivatives {
            value,
            gradient: grad,
            hessian: hess,
        }
    }
}

/// Evaluate a series at a point.
pub fn evaluate<C: Coefficient>(f: &TaylorFourierSeries<C>, pt: &PhasePoint) -> Result<Complex64> {
    Ok(CompiledSeries::new(f).eval(pt, 0)?.value)
}
