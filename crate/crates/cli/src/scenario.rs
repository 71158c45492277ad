use std::f64::consts::PI;

use anyhow::{Context, Result};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use resnf::continuation::*;
use resnf::dynamics::symplectic_defect;
use resnf::fit::fit_slope;
use resnf::model::{build_seagull, Seagull};
use resnf::normal_form::{normalize, LedgerParams, NormalFormResult, NormalizeOptions, NuTable};
use resnf::stability::*;

use crate::config::{RunConfig, Scenario};
use crate::families::{self, Family};
use crate::report::{num, opt, Artifacts, Check, Table};

type Nf = NormalFormResult<Complex64>;

const LAYOUT: (usize, usize) = (4, 1);
const LOCALIZATION_TOL: f64 = 0.2;

pub fn run(cfg: &RunConfig, scenario: Scenario) -> Result<Artifacts> {
    let mut a = Artifacts::new(scenario.name(), cfg.seed);
    match scenario {
        Scenario::SeagullOrder1 => order1(cfg, &mut a)?,
        Scenario::SeagullOrder2 => order2(cfg, &mut a)?,
        Scenario::SeagullStability => stability(cfg, &mut a)?,
        Scenario::AppendixSpectral => appendix(cfg, &mut a)?,
    }
    Ok(a)
}

/// The eight relative equilibria `q* in {0, pi}^3`.
pub fn configurations() -> Vec<[f64; 3]> {
    (0..8u32)
        .map(|m| [2, 1, 0].map(|i| if m >> i & 1 == 1 { PI } else { 0.0 }))
        .collect()
}

/// Configuration carrying the stable orbit for the sign of `gamma`.
fn stable_configuration(gamma: f64) -> [f64; 3] {
    if gamma > 0.0 {
        [PI; 3]
    } else {
        [0.0, PI, 0.0]
    }
}

fn label(q: &[f64]) -> String {
    let parts: Vec<&str> = q.iter().map(|&a| if a == 0.0 { "0" } else { "pi" }).collect();
    format!("({})", parts.join(","))
}

fn angles(q: &[f64; 3]) -> Vec<String> {
    q.iter().map(|&a| num(a)).collect()
}

fn list(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{:.4e}", if x.abs() < 1e-12 { 0.0 } else { *x })).collect();
    format!("[{}]", parts.join(", "))
}

fn seagull(cfg: &RunConfig) -> Result<Seagull> {
    build_seagull(cfg.gamma, cfg.istar, &cfg.expand_options()).context("building the seagull model")
}

fn normal_forms(s: &Seagull, r: usize, qs: &[[f64; 3]]) -> Result<Vec<Nf>> {
    qs.par_iter()
        .map(|q| {
            normalize(&s.hamiltonian, r, q, &NormalizeOptions::default(), None)
                .with_context(|| format!("normalizing to order {r} at {}", label(q)))
        })
        .collect()
}

fn header(cfg: &RunConfig, s: &Seagull, r: usize, a: &mut Artifacts) {
    let omega = s.hamiltonian.omega_f64();
    a.summary.push(format!("gamma = {}, I* = {}, order r = {r}", cfg.gamma, cfg.istar));
    a.summary.push(format!("omega = {omega}, period T = {}", 2.0 * PI / omega));
    a.summary.push(format!("eps sweep: {}", list(&cfg.eps)));
}

/// Fit and record a slope; an impossible fit is a failed check.
fn slope(a: &mut Artifacts, name: &str, pts: &[(f64, f64)], expected: f64, tol: f64) {
    match fit_slope(name, pts, expected, tol) {
        Ok(fit) => a.fit(fit),
        Err(e) => a.checks.push(Check::new(&format!("slope: {name}"), false, e.to_string())),
    }
}

/// Maximum over configurations at each `eps`, skipping failed jobs.
fn max_per_eps(eps: &[f64], values: &[(f64, Option<f64>)]) -> Vec<(f64, f64)> {
    eps.iter()
        .filter_map(|&e| {
            let v: Vec<f64> = values.iter().filter(|x| x.0 == e).filter_map(|x| x.1).collect();
            (!v.is_empty()).then(|| (e, v.iter().copied().fold(0.0, f64::max)))
        })
        .collect()
}

fn ledger(s: &Seagull, r: usize, q: &[f64], a: &mut Artifacts) {
    let nu = NuTable::new(6, 6);
    let bad = nu.lemma_violations();
    a.checks.push(Check::new(
        "counting sequences",
        bad.is_empty(),
        format!("nu(r,s) <= 2^(14s-8) for r,s <= 6: {} violations", bad.len()),
    ));
    let ledger = match normalize(&s.hamiltonian, r, q, &NormalizeOptions::default(), Some(&LedgerParams::default())) {
        Ok(nf) => nf.ledger.expect("ledger requested"),
        Err(e) => {
            a.checks.push(Check::report("generator bounds", false, format!("no ledger: {e}")));
            return;
        }
    };
    a.ledger = Some(ledger.to_csv());
    let held = ledger.generators.iter().filter(|b| b.holds()).count();
    a.checks.push(Check::report(
        "generator bounds",
        ledger.generator_bounds_hold(),
        format!("{held}/{} generator norms within their bounds at {}", ledger.generators.len(), label(q)),
    ));
}

struct OrbitJob {
    q: [f64; 3],
    eps: f64,
    approx: Option<f64>,
    solution: Option<PeriodicOrbitSolution>,
    error: Option<String>,
}

impl OrbitJob {
    fn row(&self, r: usize) -> Vec<String> {
        let sol = self.solution.as_ref();
        let mut row = angles(&self.q);
        row.extend([
            num(self.eps),
            r.to_string(),
            opt(self.approx),
            sol.map(|s| s.iterations.to_string()).unwrap_or_default(),
            opt(sol.map(|s| s.residual)),
            opt(sol.map(|s| s.distance)),
            opt(sol.map(|s| symplectic_defect(LAYOUT, &s.monodromy))),
            self.error.clone().unwrap_or_default(),
        ]);
        row
    }
}

fn orbit_job(s: &Seagull, nf: &Nf, q: [f64; 3], eps: f64, cfg: &RunConfig, newton: bool) -> OrbitJob {
    let mut job = OrbitJob {
        q,
        eps,
        approx: None,
        solution: None,
        error: None,
    };
    let run = |job: &mut OrbitJob| -> resnf::Result<()> {
        let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, nf, eps, cfg.tolerances.integration)?;
        job.approx = Some(approximate_orbit(&map, &q, eps)?.residual);
        if newton {
            let x = relative_equilibrium(LAYOUT, &q);
            job.solution = Some(newton_continue(&map, &x, &NewtonOptions::for_epsilon(eps))?);
        }
        Ok(())
    };
    if let Err(e) = run(&mut job) {
        job.error = Some(e.to_string());
    }
    job
}

fn order1(cfg: &RunConfig, a: &mut Artifacts) -> Result<()> {
    let s = seagull(cfg)?;
    header(cfg, &s, 1, a);
    let qs = configurations();
    let nfs = normal_forms(&s, 1, &qs)?;

    let prob = CriticalPointProblem::from_normal_form(&nfs[0], cfg.eps[0]);
    let mut seeds = corner_seeds(3);
    seeds.extend(random_seeds(3, 40, cfg.seed));
    let rep = solve_critical_points(&prob, &seeds, &CriticalOptions::default());
    let fams = group_families(&rep.roots, 1e-6);
    let degenerate = rep.roots.iter().all(|r| r.degenerate);
    a.summary.push(format!("first-order critical set: {} roots, {} families", rep.roots.len(), fams.len()));
    for f in &fams {
        a.summary.push(format!("  family through {} along {}", list(&f.base), list(&f.direction)));
    }
    a.checks.push(Check::new(
        "first-order critical set",
        !rep.roots.is_empty() && degenerate && fams.len() == 4,
        format!("{} families, all roots degenerate: {degenerate}", fams.len()),
    ));

    let jobs: Vec<(usize, f64)> = (0..qs.len()).flat_map(|i| cfg.eps.iter().map(move |&e| (i, e))).collect();
    let done: Vec<OrbitJob> = jobs
        .par_iter()
        .map(|&(i, e)| orbit_job(&s, &nfs[i], qs[i], e, cfg, false))
        .collect();
    for j in &done {
        a.orbits.push(j.row(1));
    }
    let failed = done.iter().filter(|j| j.error.is_some()).count();
    a.checks.push(Check::new("period maps", failed == 0, format!("{failed} failed evaluations")));
    let pts = max_per_eps(&cfg.eps, &done.iter().map(|j| (j.eps, j.approx)).collect::<Vec<_>>());
    slope(a, "max residual", &pts, 2.0, cfg.tolerances.residual_slope);
    ledger(&s, 1, &[0.0; 3], a);
    Ok(())
}

fn order2(cfg: &RunConfig, a: &mut Artifacts) -> Result<()> {
    let s = seagull(cfg)?;
    header(cfg, &s, 2, a);
    a.summary.push(format!("distance sweep: {}", list(&cfg.distance_eps)));
    let qs = configurations();
    let nfs = normal_forms(&s, 2, &qs)?;

    let prob = CriticalPointProblem::from_normal_form(&nfs[0], cfg.eps[0]);
    let mut seeds = corner_seeds(3);
    seeds.extend(random_seeds(3, 64, cfg.seed));
    let rep = solve_critical_points(&prob, &seeds, &CriticalOptions::default());
    let at_corners = rep.roots.iter().all(|r| r.q.iter().all(|x| x.sin().abs() < 1e-10));
    let nondegenerate = rep.roots.iter().all(|r| !r.degenerate);
    a.checks.push(Check::new(
        "second-order critical set",
        rep.roots.len() == 8 && at_corners && nondegenerate,
        format!(
            "{} roots, all in {{0,pi}}^3: {at_corners}, all nondegenerate: {nondegenerate}",
            rep.roots.len()
        ),
    ));

    let mut sweep: Vec<f64> = cfg.eps.iter().chain(&cfg.distance_eps).copied().collect();
    sweep.sort_by(f64::total_cmp);
    sweep.dedup();
    let jobs: Vec<(usize, f64)> = (0..qs.len()).flat_map(|i| sweep.iter().map(move |&e| (i, e))).collect();
    let done: Vec<OrbitJob> = jobs
        .par_iter()
        .map(|&(i, e)| orbit_job(&s, &nfs[i], qs[i], e, cfg, true))
        .collect();
    for j in &done {
        a.orbits.push(j.row(2));
    }

    let desk: Vec<&OrbitJob> = done.iter().filter(|j| cfg.eps.contains(&j.eps)).collect();
    let converged = desk
        .iter()
        .filter(|j| j.solution.as_ref().is_some_and(|s| s.residual <= cfg.tolerances.newton))
        .count();
    a.checks.push(Check::new(
        "continuation",
        converged == desk.len(),
        format!(
            "{converged}/{} orbits continued with final residual <= {:e}",
            desk.len(),
            cfg.tolerances.newton
        ),
    ));
    for j in desk.iter().filter(|j| j.error.is_some()) {
        a.summary.push(format!("{} at eps {:e}: {}", label(&j.q), j.eps, j.error.as_deref().unwrap_or("")));
    }
    let defect = done
        .iter()
        .filter_map(|j| j.solution.as_ref())
        .map(|s| symplectic_defect(LAYOUT, &s.monodromy))
        .fold(0.0, f64::max);
    a.checks.push(Check::new(
        "monodromy symplecticity",
        defect <= cfg.tolerances.symplectic,
        format!("max defect {defect:.3e}"),
    ));

    let residuals: Vec<(f64, Option<f64>)> = desk.iter().map(|j| (j.eps, j.approx)).collect();
    slope(a, "max residual", &max_per_eps(&cfg.eps, &residuals), 3.0, cfg.tolerances.residual_slope);
    let distances: Vec<(f64, Option<f64>)> =
        done.iter().map(|j| (j.eps, j.solution.as_ref().map(|s| s.distance))).collect();
    let pts = max_per_eps(&cfg.distance_eps, &distances);
    slope(a, "max distance", &pts, 2.0, cfg.tolerances.distance_slope);
    ledger(&s, 2, &stable_configuration(cfg.gamma), a);
    Ok(())
}

struct StabilityJob {
    q: [f64; 3],
    eps: f64,
    report: Option<StabilityReport>,
    sigma: Option<f64>,
    lambda: Option<f64>,
    approx_off: Option<usize>,
    true_off: Option<usize>,
    error: Option<String>,
}

fn stability_job(s: &Seagull, nf: &Nf, q: [f64; 3], eps: f64, cfg: &RunConfig) -> StabilityJob {
    let mut job = StabilityJob {
        q,
        eps,
        report: None,
        sigma: None,
        lambda: None,
        approx_off: None,
        true_off: None,
        error: None,
    };
    let tol = cfg.tolerances.circle;
    let run = |job: &mut StabilityJob| -> resnf::Result<()> {
        let bl = linearize_normal_form(nf, eps)?;
        let rep = classify_stability(&bl, &ClassifyOptions::default())?;
        let period = 2.0 * PI / bl.omega;
        let n = reduced_jacobian(&(rep.field.real() * period).exp(), LAYOUT.0)?;
        let k = 2 * LAYOUT.0 - 1;
        let n11: DMatrix<f64> = n.view((0, 0), (k, k)).into_owned();
        job.sigma = Some(sigma_min(&n11));
        job.lambda = Some(lambda_min(&n11));
        job.approx_off = Some(rep.off_circle(period, tol));
        let field = rep.field.clone();
        job.report = Some(rep);
        let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, nf, eps, cfg.tolerances.integration)?;
        let sol = newton_continue(&map, &relative_equilibrium(LAYOUT, &q), &NewtonOptions::for_epsilon(eps))?;
        let fl = floquet_split(&sol.monodromy, &field, map.period(), 1e-6)?;
        job.true_off = Some(fl.off_circle(tol));
        Ok(())
    };
    if let Err(e) = run(&mut job) {
        job.error = Some(e.to_string());
    }
    job
}

fn direction_label(rep: &StabilityReport, index: usize) -> String {
    rep.directions
        .iter()
        .find(|d| d.index == index)
        .map(|d| d.label.as_str().to_string())
        .unwrap_or_default()
}

fn stability(cfg: &RunConfig, a: &mut Artifacts) -> Result<()> {
    let s = seagull(cfg)?;
    header(cfg, &s, 2, a);
    let qs = configurations();
    let nfs = normal_forms(&s, 2, &qs)?;
    let jobs: Vec<(usize, f64)> = (0..qs.len()).flat_map(|i| cfg.eps.iter().map(move |&e| (i, e))).collect();
    let done: Vec<StabilityJob> = jobs
        .par_iter()
        .map(|&(i, e)| stability_job(&s, &nfs[i], qs[i], e, cfg))
        .collect();

    for j in &done {
        let rep = j.report.as_ref();
        let mut row = angles(&j.q);
        row.push(num(j.eps));
        for k in 0..3 {
            row.push(rep.map(|r| direction_label(r, k)).unwrap_or_default());
        }
        row.extend([
            rep.map(|r| r.verdict().to_string()).unwrap_or_default(),
            rep.map(|r| r.stable.to_string()).unwrap_or_default(),
            opt(rep.map(|r| r.min_gap)),
            opt(j.sigma),
            opt(j.lambda),
            j.approx_off.map(|n| n.to_string()).unwrap_or_default(),
            j.true_off.map(|n| n.to_string()).unwrap_or_default(),
            j.error.clone().unwrap_or_default(),
        ]);
        a.stability.push(row);
    }

    let want = stable_configuration(cfg.gamma);
    let mut stable_ok = true;
    for &e in &cfg.eps {
        let stable: Vec<String> = done
            .iter()
            .filter(|j| j.eps == e && j.report.as_ref().is_some_and(|r| r.stable))
            .map(|j| label(&j.q))
            .collect();
        if e == cfg.eps[0] {
            a.summary.push(format!("stable configurations: {}", stable.join(" ")));
        }
        stable_ok &= stable == vec![label(&want)];
    }
    a.checks.push(Check::new(
        "unique stable configuration",
        stable_ok,
        format!("expected only {} at every eps", label(&want)),
    ));
    let q3_ok = done.iter().all(|j| {
        let expect = if j.q[1] == 0.0 { "saddle" } else { "center" };
        j.report.as_ref().is_some_and(|r| direction_label(r, 1) == expect)
    });
    a.checks.push(Check::new(
        "q3 direction",
        q3_ok,
        "saddle at q3 = 0 and centre at q3 = pi for every configuration",
    ));
    let agree = done
        .iter()
        .filter(|j| j.true_off.is_some() && j.true_off == j.approx_off)
        .count();
    a.checks.push(Check::new(
        "multiplier pattern",
        agree == done.len(),
        format!("true and approximate off-circle counts agree for {agree}/{}", done.len()),
    ));
    for j in done.iter().filter(|j| j.error.is_some()) {
        a.summary.push(format!("{} at eps {:e}: {}", label(&j.q), j.eps, j.error.as_deref().unwrap_or("")));
    }

    let at = |f: &dyn Fn(&StabilityJob) -> Option<f64>| -> Vec<(f64, f64)> {
        done.iter()
            .filter(|j| j.q == want)
            .filter_map(|j| f(j).map(|v| (j.eps, v)))
            .collect()
    };
    let tol = cfg.tolerances.spectral_slope;
    slope(a, "sigma_min(N11)", &at(&|j| j.sigma), 1.0, tol);
    slope(a, "|lambda|_min(N11)", &at(&|j| j.lambda), 1.0, tol);
    slope(a, "min gap", &at(&|j| j.report.as_ref().map(|r| r.min_gap)), 1.5, tol);
    ledger(&s, 2, &want, a);
    Ok(())
}

fn appendix(cfg: &RunConfig, a: &mut Artifacts) -> Result<()> {
    let n = cfg.families;
    let grid = &cfg.eps;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let signed: Vec<Family> = (0..n).map(|_| families::signed(&mut rng)).collect();
    let separated: Vec<Family> = (0..n).map(|_| families::separated(&mut rng)).collect();
    a.summary.push(format!("{n} families per check, eps grid {}, seed {}", list(grid), cfg.seed));

    let mut table = Table::new(&["check", "family", "dim", "hypotheses", "pass", "worst_ratio"]);
    let min_reports: Vec<MinEigenReport> = signed
        .par_iter()
        .enumerate()
        .map(|(k, f)| min_eig_bound_check(|e| f.member(e, 1.0, 2.0), 1.0, 2.0, grid, cfg.seed + k as u64))
        .collect();
    for (k, (f, r)) in signed.iter().zip(&min_reports).enumerate() {
        // bound / min|nu|, at most 1 when the bound holds
        let worst = r.rows.iter().map(|x| x.bound / x.min_nu).fold(0.0, f64::max);
        table.push(vec![
            "min-eigenvalue".into(),
            k.to_string(),
            f.dim().to_string(),
            r.hypotheses_hold().to_string(),
            r.pass().to_string(),
            num(worst),
        ]);
    }
    let loc_reports: Vec<LocalizationReport> = separated
        .par_iter()
        .enumerate()
        .map(|(k, f)| eigenvalue_localization_check(|e| f.member(e, 1.0, 2.0), 2.0, 1.0, grid, cfg.seed + k as u64))
        .collect();
    for (k, (f, r)) in separated.iter().zip(&loc_reports).enumerate() {
        // distance / bound, at most 1 when the disks hold
        let worst = r.rows.iter().map(|x| x.distance / x.bound).fold(0.0, f64::max);
        table.push(vec![
            "localization".into(),
            k.to_string(),
            f.dim().to_string(),
            r.violations.is_empty().to_string(),
            r.pass().to_string(),
            num(worst),
        ]);
    }
    a.extra.push(("families.csv", table));
    let min_ok = min_reports.iter().filter(|r| r.hypotheses_hold() && r.pass()).count();
    let loc_ok = loc_reports.iter().filter(|r| r.pass()).count();
    a.checks.push(Check::new(
        "minimum eigenvalue bound",
        min_ok == n,
        format!("{min_ok}/{n} families satisfy the hypotheses and the bound"),
    ));
    a.checks.push(Check::new(
        "eigenvalue localization",
        loc_ok == n,
        format!("{loc_ok}/{n} families localize in their disks"),
    ));

    let s = seagull(cfg)?;
    let q = stable_configuration(cfg.gamma);
    let nf = normalize(&s.hamiltonian, 2, &q, &NormalizeOptions::default(), None).context("normalizing")?;
    let pts = grid
        .par_iter()
        .map(|&eps| -> resnf::Result<(f64, f64)> {
            let rep = classify_stability(&linearize_normal_form(&nf, eps)?, &ClassifyOptions::default())?;
            let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, &nf, eps, cfg.tolerances.integration)?;
            let sol = newton_continue(&map, &relative_equilibrium(LAYOUT, &q), &NewtonOptions::for_epsilon(eps))?;
            let fl = floquet_split(&sol.monodromy, &rep.field, map.period(), 1e-6)?;
            let m = multiplier_localization(&fl, &rep.sigma11_slow)?;
            Ok((eps, m.iter().map(|p| p.distance).fold(0.0, f64::max)))
        })
        .collect::<resnf::Result<Vec<_>>>();
    let pts = match pts {
        Ok(p) => p,
        Err(e) => {
            let detail = format!("seagull multipliers at {}: {e}", label(&q));
            a.checks.push(Check::new("slope: seagull multiplier localization", false, detail));
            return Ok(());
        }
    };
    slope(a, "seagull multiplier localization", &pts, 2.0, LOCALIZATION_TOL);
    Ok(())
}
