use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::dynamics::wrap_angle;
use crate::error::{Error, Result};
use crate::model::GradedHamiltonian;
use crate::normal_form::{normalize, NormalFormResult, NormalizeOptions};
use crate::poly_algebra::{CompiledSeries, PhasePoint};

/// `F(q; eps) = sum_{s=1}^r eps^{s-1} grad_q f_0^{(r,s)}(q)` over the slow
/// angles `q = (q_2, ..., q_n1)`.
#[derive(Clone, Debug)]
pub struct CriticalPointProblem {
    pub n1: usize,
    pub n2: usize,
    pub eps: f64,
    pub r: usize,
    /// Parameter used by the normalization.
    pub qstar: Vec<f64>,
    terms: Vec<(usize, CompiledSeries)>,
}

impl CriticalPointProblem {
    /// Build from a normalized Hamiltonian of order `r`.
    pub fn new(h: &GradedHamiltonian<Complex64>, qstar: &[f64], eps: f64) -> Self {
        let r = h.order;
        let terms = (1..=r)
            .filter_map(|s| h.get_ref(0, s).map(|f| (s, CompiledSeries::new(f))))
            .collect();
        CriticalPointProblem {
            n1: h.n1,
            n2: h.n2,
            eps,
            r,
            qstar: qstar.to_vec(),
            terms,
        }
    }

    pub fn from_normal_form(nf: &NormalFormResult<Complex64>, eps: f64) -> Self {
        Self::new(&nf.hamiltonian, &nf.qstar, eps)
    }

    /// Number of slow angles.
    pub fn dim(&self) -> usize {
        self.n1 - 1
    }

    fn point(&self, q: &[f64]) -> PhasePoint {
        let mut full = vec![0.0; self.n1];
        full[1..].copy_from_slice(q);
        let z = Complex64::new(0.0, 0.0);
        PhasePoint::from_real(&full, &vec![0.0; self.n1], &vec![z; self.n2], &vec![z; self.n2])
    }

    fn weight(&self, s: usize) -> f64 {
        self.eps.powi(s as i32 - 1)
    }

    /// `sum_s eps^{s-1} f_0^{(r,s)}(q)`.
    pub fn potential(&self, q: &[f64]) -> f64 {
        let pt = self.point(q);
        self.terms
            .iter()
            .map(|(s, f)| self.weight(*s) * f.eval(&pt, 0).expect("dims").value.re)
            .sum()
    }

    /// Gradient of a single order `s` (unweighted), or zero if absent.
    pub fn order_gradient(&self, s: usize, q: &[f64]) -> DVector<f64> {
        let pt = self.point(q);
        let n = self.dim();
        self.terms
            .iter()
            .find(|(t, _)| *t == s)
            .map(|(_, f)| {
                let d = f.eval(&pt, 1).expect("dims");
                DVector::from_fn(n, |i, _| d.gradient[1 + i].re)
            })
            .unwrap_or_else(|| DVector::zeros(n))
    }

    /// `F(q)` and its Jacobian.
    pub fn evaluate(&self, q: &[f64]) -> (DVector<f64>, DMatrix<f64>) {
        let pt = self.point(q);
        let n = self.dim();
        let mut g = DVector::zeros(n);
        let mut jac = DMatrix::zeros(n, n);
        for (s, f) in &self.terms {
            let w = self.weight(*s);
            let d = f.eval(&pt, 2).expect("dims");
            let h = d.hessian.expect("order 2");
            for i in 0..n {
                g[i] += w * d.gradient[1 + i].re;
                for j in 0..n {
                    jac[(i, j)] += w * h[(1 + i, 1 + j)].re;
                }
            }
        }
        (g, jac)
    }
}

/// Settings of the critical point search.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CriticalOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Singular values below `rcond * sigma_max` are treated as zero in the
    /// pseudo-inverse.
    pub rcond: f64,
    /// Degenerate when `sigma_min < degeneracy * |eps|`.
    pub degeneracy: f64,
    /// Roots closer than this (modulo `2 pi`) are merged.
    pub merge: f64,
}

impl Default for CriticalOptions {
    fn default() -> Self {
        CriticalOptions {
            tol: 1e-12,
            max_iter: 60,
            rcond: 1e-9,
            degeneracy: 1e-2,
            merge: 1e-6,
        }
    }
}

/// A root of `F`.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalPoint {
    pub q: Vec<f64>,
    pub residual: f64,
    pub singular_values: Vec<f64>,
    pub sigma_min: f64,
    pub degenerate: bool,
    /// `||J - J^T||_max`.
    pub asymmetry: f64,
    /// Right singular vector of the smallest singular value.
    pub kernel: Vec<f64>,
}

/// All roots found plus the seeds that failed.
#[derive(Clone, Debug, Default)]
pub struct CriticalPointReport {
    pub roots: Vec<CriticalPoint>,
    pub failures: Vec<(Vec<f64>, String)>,
}

/// The grid `{0, pi}^n`.
pub fn corner_seeds(n: usize) -> Vec<Vec<f64>> {
    (0..1usize << n)
        .map(|mask| {
            (0..n)
                .map(|i| if mask >> i & 1 == 1 { std::f64::consts::PI } else { 0.0 })
                .collect()
        })
        .collect()
}

/// `count` uniformly random seeds in `[-pi, pi)^n`.
pub fn random_seeds(n: usize, count: usize, seed: u64) -> Vec<Vec<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pi = std::f64::consts::PI;
    (0..count)
        .map(|_| (0..n).map(|_| rng.gen_range(-pi..pi)).collect())
        .collect()
}

fn angle_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| wrap_angle(x - y).abs())
        .fold(0.0, f64::max)
}

fn refine(problem: &CriticalPointProblem, seed: &[f64], opts: &CriticalOptions) -> Result<Vec<f64>> {
    let mut q = seed.to_vec();
    for _ in 0..opts.max_iter {
        let (g, jac) = problem.evaluate(&q);
        if g.amax() <= opts.tol {
            return Ok(q);
        }
        let svd = jac.svd(true, true);
        let smax = svd.singular_values.max();
        let eps = (opts.rcond * smax).max(f64::MIN_POSITIVE);
        let step = svd
            .solve(&(-&g), eps)
            .map_err(|e| Error::Newton(format!("pseudo-inverse failed: {e}")))?;
        if step.amax() == 0.0 {
            break;
        }
        for (a, d) in q.iter_mut().zip(step.iter()) {
            *a += d;
        }
    }
    let (g, _) = problem.evaluate(&q);
    if g.amax() <= opts.tol {
        Ok(q)
    } else {
        Err(Error::Newton(format!("residual {:e} after {} iterations", g.amax(), opts.max_iter)))
    }
}

/// Newton-refine every seed, merge duplicates and classify the roots.
pub fn solve_critical_points(
    problem: &CriticalPointProblem,
    seeds: &[Vec<f64>],
    opts: &CriticalOptions,
) -> CriticalPointReport {
    let mut report = CriticalPointReport::default();
    for seed in seeds {
        match refine(problem, seed, opts) {
            Ok(q) => {
                let q: Vec<f64> = q.into_iter().map(wrap_angle).collect();
                if report.roots.iter().any(|r| angle_distance(&r.q, &q) < opts.merge) {
                    continue;
                }
                let (g, jac) = problem.evaluate(&q);
                let asymmetry = (&jac - jac.transpose()).amax();
                let svd = jac.svd(false, true);
                let sv: Vec<f64> = svd.singular_values.iter().copied().collect();
                let (imin, smin) = sv
                    .iter()
                    .copied()
                    .enumerate()
                    .fold((0, f64::INFINITY), |acc, (i, v)| if v < acc.1 { (i, v) } else { acc });
                let kernel = svd
                    .v_t
                    .as_ref()
                    .map(|vt| vt.row(imin).iter().copied().collect())
                    .unwrap_or_default();
                report.roots.push(CriticalPoint {
                    q,
                    residual: g.amax(),
                    degenerate: smin < opts.degeneracy * problem.eps.abs(),
                    sigma_min: smin,
                    singular_values: sv,
                    asymmetry,
                    kernel,
                });
            }
            Err(e) => report.failures.push((seed.clone(), e.to_string())),
        }
    }
    report
        .roots
        .sort_by(|a, b| a.q.partial_cmp(&b.q).unwrap_or(std::cmp::Ordering::Equal));
    report
}

/// A one-parameter family `Q(theta) = base + theta * direction` of
/// degenerate critical points.
#[derive(Clone, Debug, PartialEq)]
pub struct CriticalFamily {
    /// Point of the family with zero component along `direction`.
    pub base: Vec<f64>,
    /// Unit direction.
    pub direction: Vec<f64>,
    pub members: Vec<Vec<f64>>,
}

impl CriticalFamily {
    pub fn point(&self, theta: f64) -> Vec<f64> {
        self.base
            .iter()
            .zip(&self.direction)
            .map(|(b, d)| wrap_angle(b + theta * d))
            .collect()
    }

    /// The tangent `dQ/dtheta`.
    pub fn tangent(&self) -> &[f64] {
        &self.direction
    }
}

/// Distance from `q` to the line `base + t dir` on the torus, over lattice
/// shifts `2 pi m` with `m` in `{-1, 0, 1}^n`.
fn line_distance(base: &[f64], dir: &[f64], q: &[f64]) -> f64 {
    let n = q.len();
    let two_pi = 2.0 * std::f64::consts::PI;
    let d0: Vec<f64> = q.iter().zip(base).map(|(a, b)| wrap_angle(a - b)).collect();
    let mut best = f64::INFINITY;
    for code in 0..3usize.pow(n as u32) {
        let mut c = code;
        let d: Vec<f64> = d0
            .iter()
            .map(|x| {
                let m = (c % 3) as f64 - 1.0;
                c /= 3;
                x + two_pi * m
            })
            .collect();
        let t: f64 = d.iter().zip(dir).map(|(a, b)| a * b).sum();
        let off = d.iter().zip(dir).map(|(a, b)| (a - t * b).abs()).fold(0.0, f64::max);
        best = best.min(off);
    }
    best
}

/// Group degenerate roots into families sharing a kernel direction.
pub fn group_families(roots: &[CriticalPoint], tol: f64) -> Vec<CriticalFamily> {
    let mut fams: Vec<CriticalFamily> = Vec::new();
    for r in roots.iter().filter(|r| r.degenerate) {
        // sign convention: largest component positive
        let imax = r
            .kernel
            .iter()
            .enumerate()
            .fold((0, 0.0), |acc, (i, v)| if v.abs() > acc.1 { (i, v.abs()) } else { acc })
            .0;
        let sgn = r.kernel[imax].signum();
        let dir: Vec<f64> = r.kernel.iter().map(|v| v * sgn).collect();
        let along: f64 = r.q.iter().zip(&dir).map(|(a, b)| a * b).sum();
        let base: Vec<f64> = r.q.iter().zip(&dir).map(|(a, d)| a - along * d).collect();
        let found = fams.iter_mut().find(|f| {
            let par: f64 = f.direction.iter().zip(&dir).map(|(a, b)| a * b).sum();
            par.abs() > 1.0 - tol && line_distance(&f.base, &f.direction, &r.q) < tol.sqrt()
        });
        match found {
            Some(f) => f.members.push(r.q.clone()),
            None => fams.push(CriticalFamily {
                base: base.into_iter().map(wrap_angle).collect(),
                direction: dir,
                members: vec![r.q.clone()],
            }),
        }
    }
    fams
}

/// `theta -> <F_1(Q(theta)), dQ/dtheta>` sampled on a grid.
pub fn family_breakdown_test<F>(f1: F, family: &CriticalFamily, thetas: &[f64]) -> Result<Vec<(f64, f64)>>
where
    F: Fn(&[f64]) -> Result<DVector<f64>>,
{
    thetas
        .iter()
        .map(|&t| {
            let g = f1(&family.point(t))?;
            let v: f64 = g.iter().zip(family.tangent()).map(|(a, b)| a * b).sum();
            Ok((t, v))
        })
        .collect()
}

/// Sign changes of sampled data, with the slope there (by linear
/// interpolation); a zero is simple when the slope is nonzero.
pub fn sampled_zeros(samples: &[(f64, f64)]) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    for w in samples.windows(2) {
        let ((t0, v0), (t1, v1)) = (w[0], w[1]);
        if v0 == 0.0 {
            out.push((t0, (v1 - v0) / (t1 - t0)));
        } else if v0 * v1 < 0.0 {
            let t = t0 - v0 * (t1 - t0) / (v1 - v0);
            out.push((t, (v1 - v0) / (t1 - t0)));
        }
    }
    out
}

/// `grad_q f_0^{(2,2)}(q*)` from a second-order normalization with
/// parameter `q*`: the first-order correction `F_1` along a family.
pub fn second_order_gradient(
    h0: &GradedHamiltonian<Complex64>,
    qstar: &[f64],
    opts: &NormalizeOptions,
) -> Result<DVector<f64>> {
    let nf = normalize(h0, 2, qstar, opts, None)?;
    let p = CriticalPointProblem::from_normal_form(&nf, 1.0);
    Ok(p.order_gradient(2, qstar))
}

/// Outcome of the `q*` self-consistency loop.
#[derive(Clone, Debug)]
pub struct QstarFixedPoint {
    pub qstar: Vec<f64>,
    pub iterations: usize,
    pub normal_form: NormalFormResult<Complex64>,
    pub root: CriticalPoint,
}

/// Iterate `normalize(q*_k) -> critical point near q*_k -> q*_{k+1}` until
/// `|q*_{k+1} - q*_k| <= tol`.
pub fn qstar_fixed_point(
    h0: &GradedHamiltonian<Complex64>,
    r: usize,
    q0: &[f64],
    eps: f64,
    nopts: &NormalizeOptions,
    copts: &CriticalOptions,
    tol: f64,
    max_iter: usize,
) -> Result<QstarFixedPoint> {
    let mut q = q0.to_vec();
    for it in 1..=max_iter {
        let nf = normalize(h0, r, &q, nopts, None)?;
        let prob = CriticalPointProblem::from_normal_form(&nf, eps);
        let rep = solve_critical_points(&prob, &[q.clone()], copts);
        let root = rep
            .roots
            .into_iter()
            .next()
            .ok_or_else(|| Error::Newton(format!("no critical point near {q:?}")))?;
        let change = angle_distance(&root.q, &q);
        q = root.q.clone();
        if change <= tol {
            return Ok(QstarFixedPoint {
                qstar: q,
                iterations: it,
                normal_form: nf,
                root,
            });
        }
    }
    Err(Error::Newton(format!("q* loop did not settle in {max_iter} iterations")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_algebra::{Series, TruncationPolicy};
    use std::f64::consts::PI;

    fn toy(k: &[i32]) -> CriticalPointProblem {
        let trunc = TruncationPolicy::default();
        let one = Complex64::new(1.0, 0.0);
        let mut h = GradedHamiltonian::new(3, 0, one, vec![], trunc, 1);
        h.set(0, 1, Series::cosine(3, 0, trunc, k));
        h.order = 1;
        CriticalPointProblem::new(&h, &[0.0, 0.0], 1e-3)
    }

    #[test]
    fn seeds() {
        let c = corner_seeds(2);
        assert_eq!(c, vec![vec![0.0, 0.0], vec![PI, 0.0], vec![0.0, PI], vec![PI, PI]]);
        let r = random_seeds(3, 50, 7);
        assert_eq!(r, random_seeds(3, 50, 7));
        assert!(r.iter().flatten().all(|x| (-PI..PI).contains(x)));
    }

    #[test]
    fn gradient_and_jacobian_of_a_cosine() {
        let p = toy(&[0, 1, 0]);
        let (g, j) = p.evaluate(&[0.4, 1.0]);
        assert!((g[0] + 0.4f64.sin()).abs() < 1e-14 && g[1].abs() < 1e-14);
        assert!((j[(0, 0)] + 0.4f64.cos()).abs() < 1e-14);
        assert!((p.potential(&[0.4, 1.0]) - 0.4f64.cos()).abs() < 1e-14);
    }

    #[test]
    fn isolated_roots_are_nondegenerate() {
        let mut p = toy(&[0, 1, 0]);
        let trunc = TruncationPolicy::default();
        let one = Complex64::new(1.0, 0.0);
        let mut h = GradedHamiltonian::new(3, 0, one, vec![], trunc, 1);
        let f = Series::cosine(3, 0, trunc, &[0, 1, 0]).add(&Series::cosine(3, 0, trunc, &[0, 0, 1])).unwrap();
        h.set(0, 1, f);
        h.order = 1;
        p = CriticalPointProblem::new(&h, &p.qstar, p.eps);
        let rep = solve_critical_points(&p, &random_seeds(2, 40, 1), &CriticalOptions::default());
        assert_eq!(rep.roots.len(), 4);
        assert!(rep.roots.iter().all(|r| !r.degenerate && r.asymmetry == 0.0));
        assert!(group_families(&rep.roots, 1e-6).is_empty());
    }

    #[test]
    fn difference_potential_has_two_families() {
        let p = toy(&[0, 1, -1]);
        let rep = solve_critical_points(&p, &random_seeds(2, 30, 3), &CriticalOptions::default());
        assert!(!rep.roots.is_empty());
        assert!(rep.roots.iter().all(|r| r.degenerate));
        let fams = group_families(&rep.roots, 1e-6);
        assert_eq!(fams.len(), 2);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        for f in &fams {
            assert!((f.direction[0] - h).abs() < 1e-8 && (f.direction[1] - h).abs() < 1e-8);
            let d = wrap_angle(f.base[0] - f.base[1]).abs();
            assert!(d < 1e-8 || (d - PI).abs() < 1e-8);
        }
    }

    #[test]
    fn zeros_of_sampled_sine() {
        let s: Vec<(f64, f64)> = (0..100).map(|k| {
            let t = -PI / 2.0 + (k as f64 + 0.5) * 2.0 * PI / 100.0;
            (t, t.sin())
        }).collect();
        let z = sampled_zeros(&s);
        assert_eq!(z.len(), 2);
        assert!(z[0].0.abs() < 1e-3 && z[0].1 > 0.99);
        assert!((z[1].0 - PI).abs() < 1e-3 && z[1].1 < -0.99);
    }
}
