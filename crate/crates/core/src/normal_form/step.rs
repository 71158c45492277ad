use crate::error::{Error, Result};
use crate::model::GradedHamiltonian;
use crate::poly_algebra::coeff::factorial;
use crate::poly_algebra::{Coefficient, LieGenerator, MultiIndex, TaylorFourierSeries};

use super::homological::{solve_homological, solve_linear, HomologicalMode};

/// The five stages of a normalization step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Stage {
    /// Fast-angle average of `f_0` plus the frequency-fixing translation.
    I,
    /// Removal of `f_1`.
    II,
    /// Fast-angle average of `f_2`.
    III,
    /// Removal of the action-transverse part of `f_3`.
    IV,
    /// Fast-angle average of `f_4` at `xi = eta = 0`.
    V,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::I, Stage::II, Stage::III, Stage::IV, Stage::V];

    /// Grade of the generating function.
    pub fn grade(self) -> usize {
        match self {
            Stage::I => 0,
            Stage::II => 1,
            Stage::III => 2,
            Stage::IV => 3,
            Stage::V => 4,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Stage::I => "I",
            Stage::II => "II",
            Stage::III => "III",
            Stage::IV => "IV",
            Stage::V => "V",
        }
    }
}

/// A generating function of one stage at normalization order `r`.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneratingFunction<C: Coefficient> {
    pub stage: Stage,
    pub r: usize,
    pub generator: LieGenerator<C>,
}

impl<C: Coefficient> GeneratingFunction<C> {
    pub fn chi(&self) -> &TaylorFourierSeries<C> {
        &self.generator.chi
    }

    /// The translation vector of stage I.
    pub fn zeta(&self) -> Option<&[C]> {
        self.generator.zeta.as_deref()
    }
}

/// How the transformed family is assembled.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Route {
    /// Generic Lie series followed by the simplified special cases.
    Literal,
    /// Generic Lie series only.
    Generic,
}

/// Options of the normalization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizeOptions {
    /// Small-divisor threshold relative to `|omega|`.
    pub delta_min_rel: f64,
    /// Harmonic range of the Melnikov scan.
    pub melnikov_k: i32,
    pub route: Route,
}

impl Default for NormalizeOptions {
    fn default() -> Self {
        NormalizeOptions {
            delta_min_rel: 1e-8,
            melnikov_k: 8,
            route: Route::Literal,
        }
    }
}

fn inv_factorial<C: Coefficient>(j: usize) -> C {
    C::one() / factorial::<C>(j as u32)
}

/// `sum_{j>=1} (1/j!) L^j f_l^{(s)}` added at grade `l + j (g - 2)` and
/// order `s + j r`, for every stored component.
fn push<C: Coefficient>(
    h: &GradedHamiltonian<C>,
    gen: &LieGenerator<C>,
    g: usize,
    r: usize,
) -> Result<GradedHamiltonian<C>> {
    let mut out = h.clone();
    if gen.is_zero() {
        return Ok(out);
    }
    let shift = g as i64 - 2;
    let lmax = h.trunc.max_grade as i64;
    for (&(l, s0), f) in h.iter() {
        let mut t = f.clone();
        let mut j = 1;
        loop {
            let s = s0 + j * r;
            let target = l as i64 + j as i64 * shift;
            if s > h.s_max || target < 0 || target > lmax {
                break;
            }
            t = gen.apply(&t)?;
            if t.is_empty() {
                break;
            }
            out.add_mixed(s, &t.scale(&inv_factorial(j)));
            j += 1;
        }
    }
    Ok(out)
}

fn delta_min<C: Coefficient>(h: &GradedHamiltonian<C>, opts: &NormalizeOptions) -> f64 {
    opts.delta_min_rel * h.omega_f64().abs()
}

/// Right-hand side of the translation equation:
/// `d/dp_i < f_2^{(r-1,r)} |_{xi=eta=0, q=q*} >_{q1}`.
pub fn translation_rhs<C: Coefficient>(h: &GradedHamiltonian<C>, r: usize, qstar: &[f64]) -> Result<Vec<C>> {
    let f2 = h
        .get(2, r)
        .at_zero_transverse()
        .substitute_slow_angles(qstar)?
        .average_fast_angle();
    Ok((0..h.n1)
        .map(|i| {
            let mut idx = MultiIndex::zero(h.n1, h.n2);
            idx.l_mut()[i] = 1;
            f2.coeff_or_zero(&idx)
        })
        .collect())
}

/// Solve `C_0 zeta = rhs`.
pub fn frequency_fix_translation<C: Coefficient>(
    h: &GradedHamiltonian<C>,
    r: usize,
    qstar: &[f64],
) -> Result<Vec<C>> {
    let rhs = translation_rhs(h, r, qstar)?;
    if rhs.iter().all(|c| c.is_exact_zero()) {
        return Ok(vec![C::zero(); h.n1]);
    }
    let c0 = h.twist_matrix();
    let rows: Vec<Vec<C>> = (0..h.n1).map(|i| (0..h.n1).map(|j| c0[(i, j)].clone()).collect()).collect();
    solve_linear(&rows, &rhs).map_err(|e| match e {
        Error::Singular(_) => Error::Singular("twist matrix C0".into()),
        other => other,
    })
}

fn literal(opts: &NormalizeOptions) -> bool {
    opts.route == Route::Literal
}

/// The order-`r` step: five stages taking `H^(r-1)` to `H^(r)`.
pub fn normalization_step<C: Coefficient>(
    h: &GradedHamiltonian<C>,
    r: usize,
    qstar: &[f64],
    opts: &NormalizeOptions,
) -> Result<(GradedHamiltonian<C>, Vec<GeneratingFunction<C>>)> {
    if r == 0 {
        return Err(Error::InvalidInput("normalization order must be positive".into()));
    }
    if r > h.s_max {
        return Err(Error::TruncationOverflow(format!(
            "order {r} needs terms of order {r}, expansion stops at {}",
            h.s_max
        )));
    }
    if h.trunc.max_grade < 4 {
        return Err(Error::TruncationOverflow(format!(
            "grade cutoff {} below the normalized grade 4",
            h.trunc.max_grade
        )));
    }
    if qstar.len() + 1 != h.n1 {
        return Err(Error::InvalidInput(format!(
            "q* must have {} components, got {}",
            h.n1 - 1,
            qstar.len()
        )));
    }
    let dmin = delta_min(h, opts);
    let omega = h.omega.clone();
    let big = h.big_omega.clone();
    let half = C::from_ratio(1, 2);
    let mut gens = Vec::with_capacity(5);

    // stage I
    let f0 = h.get(0, r);
    let x0 = solve_homological(&f0, HomologicalMode::ActionOnly, true, &omega, &big, dmin)?;
    let zeta = frequency_fix_translation(h, r, qstar)?;
    let g0 = LieGenerator::with_translation(x0, zeta);
    let mut h1 = push(h, &g0, 0, r)?;
    if literal(opts) {
        h1.set(0, r, f0.average_fast_angle());
    }
    gens.push(GeneratingFunction { stage: Stage::I, r, generator: g0 });

    // stage II
    let f1 = h1.get(1, r);
    let chi1 = LieGenerator::new(solve_homological(&f1, HomologicalMode::Mixed, false, &omega, &big, dmin)?);
    let mut h2 = push(&h1, &chi1, 1, r)?;
    if literal(opts) {
        h2.set(1, r, h2.zero_series());
        if 2 * r <= h.s_max {
            let mut f = h1.get(0, 2 * r);
            f.add_scaled(&chi1.apply(&f1)?, &half);
            h2.set(0, 2 * r, f);
        }
    }
    gens.push(GeneratingFunction { stage: Stage::II, r, generator: chi1 });

    // stage III
    let f2 = h2.get(2, r);
    let chi2 = LieGenerator::new(solve_homological(&f2, HomologicalMode::Mixed, true, &omega, &big, dmin)?);
    let mut h3 = push(&h2, &chi2, 2, r)?;
    if literal(opts) {
        let avg = f2.average_fast_angle();
        h3.set(2, r, avg.clone());
        let mut i = 2;
        while r * i <= h.s_max {
            let mut inner = avg.scale(&C::from_ratio(1, i as i64));
            inner.add_scaled(&f2, &C::from_ratio(i as i64 - 1, i as i64));
            let mut f = chi2.iterates(&inner, i - 1)?.pop().expect("iterates");
            f = f.scale(&inv_factorial(i - 1));
            for j in 0..=i - 2 {
                let src = h2.get(2, r * i - r * j);
                let t = chi2.iterates(&src, j)?.pop().expect("iterates");
                f.add_scaled(&t, &inv_factorial(j));
            }
            h3.set(2, r * i, f);
            i += 1;
        }
    }
    gens.push(GeneratingFunction { stage: Stage::III, r, generator: chi2 });

    // stage IV
    let f3 = h3.get(3, r);
    let f11 = f3.filter(|i| i.action_degree() == 1);
    let chi3 = LieGenerator::new(solve_homological(&f11, HomologicalMode::Mixed, false, &omega, &big, dmin)?);
    let mut h4 = push(&h3, &chi3, 3, r)?;
    if literal(opts) {
        let f3p0 = f3.at_zero_actions();
        h4.set(3, r, f3p0.clone());
        if 2 * r <= h.s_max {
            let mut f = h3.get(4, 2 * r);
            f.add_scaled(&chi3.apply(&f3)?, &half);
            f.add_scaled(&chi3.apply(&f3p0)?, &half);
            h4.set(4, 2 * r, f);
        }
    }
    gens.push(GeneratingFunction { stage: Stage::IV, r, generator: chi3 });

    // stage V
    let f4 = h4.get(4, r);
    let g4 = f4.at_zero_transverse();
    let chi4 = LieGenerator::new(solve_homological(&g4, HomologicalMode::ActionOnly, true, &omega, &big, dmin)?);
    let mut h5 = push(&h4, &chi4, 4, r)?;
    if literal(opts) {
        let mut f = g4.average_fast_angle();
        f.add_assign(&f4.sub(&g4)?);
        h5.set(4, r, f);
    }
    gens.push(GeneratingFunction { stage: Stage::V, r, generator: chi4 });

    h5.order = r;
    Ok((h5, gens))
}
