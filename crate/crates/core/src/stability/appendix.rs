use nalgebra::DMatrix;
use num_complex::Complex64;

use super::spectral::{eigenvalues, match_spectra, min_pairwise_gap, op_norm, operator_constant};

/// One member `M = N + mu P` of a perturbed family at a given `eps`.
#[derive(Clone, Debug)]
pub struct PerturbedMatrix {
    pub n: DMatrix<f64>,
    pub p: DMatrix<f64>,
    pub mu: f64,
}

impl PerturbedMatrix {
    pub fn m(&self) -> DMatrix<f64> {
        &self.n + &self.p * self.mu
    }
}

/// Per-`eps` row of the minimum-eigenvalue check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinEigenRow {
    pub eps: f64,
    /// `min |nu|` over `Sigma(M)`.
    pub min_nu: f64,
    /// `min |lambda|` over `Sigma(N)`.
    pub min_lambda: f64,
    /// `||N^{-1}||`.
    pub inv_norm: f64,
    /// `|mu| ||N^{-1}|| ||P||`.
    pub smallness: f64,
    /// `|mu| c_op ||P|| / (c1' |eps|^alpha)`.
    pub smallness_variant: f64,
    pub bound: f64,
    pub bound_variant: f64,
}

/// Outcome of the minimum-eigenvalue check.
#[derive(Clone, Debug)]
pub struct MinEigenReport {
    pub alpha: f64,
    pub beta: f64,
    /// `max ||N^{-1}|| |eps|^alpha`.
    pub c1: f64,
    /// `max |mu| / |eps|^beta`.
    pub c2: f64,
    /// `1 / (2 c1)`.
    pub c3: f64,
    /// `min min|lambda| / |eps|^alpha`.
    pub c1_variant: f64,
    pub c_op: f64,
    /// `c1' / (2 c_op)`.
    pub c3_variant: f64,
    pub rows: Vec<MinEigenRow>,
    /// Hypothesis violations, if any.
    pub violations: Vec<String>,
    /// Conclusion violations, if any.
    pub failures: Vec<String>,
}

impl MinEigenReport {
    pub fn hypotheses_hold(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.failures.is_empty()
    }
}

/// Check `|nu| >= c3 |eps|^alpha` on `Sigma(N + mu P)` with the constants of
/// the proof measured on the family.
pub fn min_eig_bound_check<F>(family: F, alpha: f64, beta: f64, grid: &[f64], seed: u64) -> MinEigenReport
where
    F: Fn(f64) -> PerturbedMatrix,
{
    let mut violations = Vec::new();
    let mut failures = Vec::new();
    if beta <= alpha {
        violations.push(format!("beta = {beta} does not exceed alpha = {alpha}"));
    }
    struct Sample {
        eps: f64,
        min_nu: f64,
        min_lambda: f64,
        inv_norm: f64,
        p_norm: f64,
        mu: f64,
    }
    let mut samples = Vec::new();
    let mut c_op: f64 = 1.0;
    for (k, &eps) in grid.iter().enumerate() {
        let fm = family(eps);
        let sv = fm.n.clone().singular_values();
        let smin = sv.min();
        if smin <= 1e3 * f64::EPSILON * sv.max() {
            violations.push(format!("N is singular at eps = {eps:e}"));
            continue;
        }
        let min_lambda = eigenvalues(&fm.n).iter().map(|l| l.norm()).fold(f64::INFINITY, f64::min);
        let min_nu = eigenvalues(&fm.m()).iter().map(|l| l.norm()).fold(f64::INFINITY, f64::min);
        c_op = c_op.max(operator_constant(&fm.n, 64, seed.wrapping_add(k as u64)).value());
        samples.push(Sample {
            eps,
            min_nu,
            min_lambda,
            inv_norm: 1.0 / smin,
            p_norm: op_norm(&fm.p),
            mu: fm.mu,
        });
    }
    let pw = |e: f64, a: f64| e.abs().powf(a);
    let c1 = samples.iter().map(|s| s.inv_norm * pw(s.eps, alpha)).fold(0.0, f64::max);
    let c2 = samples.iter().map(|s| s.mu.abs() / pw(s.eps, beta)).fold(0.0, f64::max);
    let c1_variant = samples
        .iter()
        .map(|s| s.min_lambda / pw(s.eps, alpha))
        .fold(f64::INFINITY, f64::min);
    let c3 = if c1 > 0.0 { 0.5 / c1 } else { 0.0 };
    let c3_variant = 0.5 * c1_variant / c_op;
    let mut rows = Vec::new();
    for s in &samples {
        let smallness = s.mu.abs() * s.inv_norm * s.p_norm;
        let smallness_variant = s.mu.abs() * c_op * s.p_norm / (c1_variant * pw(s.eps, alpha));
        if smallness > 0.5 {
            violations.push(format!("|mu| ||N^-1|| ||P|| = {smallness:.3e} > 1/2 at eps = {:e}", s.eps));
        }
        let bound = c3 * pw(s.eps, alpha);
        let bound_variant = c3_variant * pw(s.eps, alpha);
        if s.min_nu < bound {
            failures.push(format!("min|nu| = {:.3e} < {bound:.3e} at eps = {:e}", s.min_nu, s.eps));
        }
        if smallness_variant <= 0.5 && s.min_nu < bound_variant {
            failures.push(format!(
                "min|nu| = {:.3e} < {bound_variant:.3e} (variant) at eps = {:e}",
                s.min_nu, s.eps
            ));
        }
        rows.push(MinEigenRow {
            eps: s.eps,
            min_nu: s.min_nu,
            min_lambda: s.min_lambda,
            inv_norm: s.inv_norm,
            smallness,
            smallness_variant,
            bound,
            bound_variant,
        });
    }
    MinEigenReport {
        alpha,
        beta,
        c1,
        c2,
        c3,
        c1_variant,
        c_op,
        c3_variant,
        rows,
        violations,
        failures,
    }
}

/// One matched eigenvalue pair of the localization check.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalizationRow {
    pub eps: f64,
    pub lambda: Complex64,
    pub nu: Complex64,
    pub distance: f64,
    pub bound: f64,
}

/// Outcome of the eigenvalue localization check.
#[derive(Clone, Debug)]
pub struct LocalizationReport {
    pub beta1: f64,
    pub beta2: f64,
    pub c_p: f64,
    /// `min gap(N) / |eps|^beta2`.
    pub c_n: f64,
    pub c_op: f64,
    /// `4 c_op c_P`.
    pub c: f64,
    /// `c + c_op (c + c_P)`.
    pub c_m: f64,
    pub rows: Vec<LocalizationRow>,
    pub violations: Vec<String>,
    /// Disks containing more than one perturbed eigenvalue.
    pub ambiguities: Vec<String>,
    pub failures: Vec<String>,
}

impl LocalizationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty() && self.ambiguities.is_empty() && self.failures.is_empty()
    }

    /// `(eps, max distance)` per grid point.
    pub fn max_distances(&self) -> Vec<(f64, f64)> {
        let mut out: Vec<(f64, f64)> = Vec::new();
        for r in &self.rows {
            match out.last_mut() {
                Some(last) if last.0 == r.eps => last.1 = last.1.max(r.distance),
                _ => out.push((r.eps, r.distance)),
            }
        }
        out
    }
}

/// Check that every `lambda in Sigma(N)` owns a `nu in Sigma(N + mu P)` with
/// `|nu - lambda| <= c_M |eps|^beta1`.
pub fn eigenvalue_localization_check<F>(family: F, beta1: f64, beta2: f64, grid: &[f64], seed: u64) -> LocalizationReport
where
    F: Fn(f64) -> PerturbedMatrix,
{
    let mut violations = Vec::new();
    if beta2 >= beta1 {
        violations.push(format!("beta2 = {beta2} is not below beta1 = {beta1}"));
    }
    let members: Vec<(f64, PerturbedMatrix)> = grid.iter().map(|&e| (e, family(e))).collect();
    let pw = |e: f64, a: f64| e.abs().powf(a);
    let c_p = members.iter().map(|(_, m)| op_norm(&m.p)).fold(0.0, f64::max);
    let mut c_n = f64::INFINITY;
    let mut c_op: f64 = 1.0;
    let mut spectra = Vec::new();
    for (k, (eps, fm)) in members.iter().enumerate() {
        if fm.mu.abs() > pw(*eps, beta1) * (1.0 + 1e-12) {
            violations.push(format!("|mu| = {:.3e} exceeds |eps|^beta1 at eps = {eps:e}", fm.mu.abs()));
        }
        let ln = eigenvalues(&fm.n);
        c_n = c_n.min(min_pairwise_gap(&ln) / pw(*eps, beta2));
        c_op = c_op.max(operator_constant(&fm.n, 64, seed.wrapping_add(k as u64)).value());
        spectra.push((ln, eigenvalues(&fm.m())));
    }
    let multi = members.iter().any(|(_, m)| m.n.nrows() > 1);
    if multi && !(c_n > 0.0 && c_n.is_finite()) {
        violations.push("eigenvalues of N are not separated".into());
    }
    let c = 4.0 * c_op * c_p;
    let c_m = c + c_op * (c + c_p);
    let mut rows = Vec::new();
    let mut ambiguities = Vec::new();
    let mut failures = Vec::new();
    for ((eps, _), (ln, lm)) in members.iter().zip(&spectra) {
        let bound = c_m * pw(*eps, beta1);
        for l in ln {
            let inside = lm.iter().filter(|v| (*v - l).norm() < bound).count();
            if inside > 1 {
                ambiguities.push(format!("{inside} eigenvalues within {bound:.3e} of {l} at eps = {eps:e}"));
            }
        }
        match match_spectra(ln, lm) {
            Ok(pairs) => {
                for p in pairs {
                    if p.distance > bound {
                        failures.push(format!(
                            "|nu - lambda| = {:.3e} > {bound:.3e} at eps = {eps:e}",
                            p.distance
                        ));
                    }
                    rows.push(LocalizationRow {
                        eps: *eps,
                        lambda: p.reference,
                        nu: p.perturbed,
                        distance: p.distance,
                        bound,
                    });
                }
            }
            Err(e) => failures.push(e.to_string()),
        }
    }
    LocalizationReport {
        beta1,
        beta2,
        c_p,
        c_n,
        c_op,
        c,
        c_m,
        rows,
        violations,
        ambiguities,
        failures,
    }
}
