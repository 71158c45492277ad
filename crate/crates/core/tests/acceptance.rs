//! Acceptance report: one PASS/FAIL line per criterion.
//!
//! Runs without the test harness so the lines always reach the output.
//! The process fails when a criterion fails unexpectedly or when a known
//! failure no longer matches its recorded analysis.

mod common;

use std::f64::consts::PI;
use std::process::ExitCode;

use common::matrices::{oracle_min_modulus, separated_family, signed_family};
use common::strategies::{pair, triple, weights};
use common::{configurations, max_abs_diff};
use num_complex::Complex64;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resnf::continuation::*;
use resnf::dynamics::symplectic_defect;
use resnf::fit::{fit_slope, log_grid, power_coefficient, SlopeFit};
use resnf::model::{build_seagull, build_seagull_exact, ExpandOptions, Seagull};
use resnf::normal_form::*;
use resnf::poly_algebra::*;
use resnf::stability::*;

type Res<T> = Result<T, String>;

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

struct Outcome {
    pass: bool,
    detail: String,
    /// For a criterion that is expected to fail: whether the measurement
    /// still matches the recorded analysis.
    known_failure: Option<Res<()>>,
}

impl Outcome {
    fn plain(pass: bool, detail: String) -> Self {
        Outcome {
            pass,
            detail,
            known_failure: None,
        }
    }
}

fn c(x: f64) -> Complex64 {
    Complex64::new(x, 0.0)
}

fn seagull(gamma: f64, istar: f64) -> Res<Seagull> {
    build_seagull(gamma, istar, &ExpandOptions::default()).map_err(err)
}

fn nf(s: &Seagull, r: usize, q: &[f64]) -> Res<NormalFormResult<Complex64>> {
    normalize(&s.hamiltonian, r, q, &NormalizeOptions::default(), None).map_err(err)
}

fn drop_constant<C: Coefficient>(f: &TaylorFourierSeries<C>) -> TaylorFourierSeries<C> {
    f.filter(|i| !(i.grade() == 0 && i.k().iter().all(|&k| k == 0)))
}

fn fit_line(f: &SlopeFit) -> String {
    format!("slope {:.3} (expected {} +- {})", f.slope, f.expected, f.tol)
}

// 1. closed forms

fn closed_forms() -> Res<Outcome> {
    let mut worst: f64 = 0.0;
    for gamma in [1.0, -1.0] {
        let s = seagull(gamma, 1.0)?;
        let c0 = s.hamiltonian.twist_matrix();
        let want = [[2.0, -2.0, 0.0, 0.0], [-2.0, 4.0, -2.0, 0.0], [0.0, -2.0, 4.0, -2.0], [0.0, 0.0, -2.0, 4.0]];
        for i in 0..4 {
            for j in 0..4 {
                worst = worst.max((c0[(i, j)] - c(gamma * want[i][j])).norm());
            }
        }
        for qs in [[0.0, 0.0, 0.0], [0.4, -1.2, 2.5], [PI, 0.0, PI], [PI; 3]] {
            let n1 = nf(&s, 1, &qs)?;
            let z = n1.generator(Stage::I, 1).and_then(|g| g.zeta()).ok_or("no zeta")?.to_vec();
            let (c2, c4) = (qs[0].cos(), qs[2].cos());
            let zw = [c2 + c4, c2 / 2.0 + c4, c4, c4 / 2.0].map(|v| v / gamma);
            for (a, b) in z.iter().zip(zw) {
                worst = worst.max((a - c(b)).norm());
            }
            let n2 = nf(&s, 2, &qs)?;
            let t = TruncationPolicy::default();
            let mut f = Series::cosine(4, 1, t, &[0, 0, 1, 0]);
            f.add_scaled(&Series::cosine(4, 1, t, &[0, 1, 0, 0]), &c(-c2));
            f.add_scaled(&Series::cosine(4, 1, t, &[0, 0, 0, 1]), &c(-c4));
            worst = worst.max(drop_constant(&n2.hamiltonian.get(0, 2)).max_abs_diff(&f.scale(&c(1.0 / gamma))));
        }
    }
    for (gamma, istar) in [(1.0, 1.0), (-1.0, 2.0), (0.5, 1.5)] {
        let s = seagull(gamma, istar)?;
        let n = nf(&s, 1, &[0.0; 3])?;
        let chi = n.generator(Stage::II, 1).ok_or("no chi1")?.chi().clone();
        let a = f64::sqrt(istar) / (1.0 + 2.0 * gamma * istar - 1.0);
        let mut want = Series::new(4, 1, TruncationPolicy::default());
        for k in [[-1, -1, 0, 0], [-1, -1, -1, 0]] {
            want.add_term(MultiIndex::new(&[0; 4], &k, &[1], &[0]), Complex64::new(0.0, a));
        }
        for k in [[1, 1, 0, 0], [1, 1, 1, 0]] {
            want.add_term(MultiIndex::new(&[0; 4], &k, &[0], &[1]), c(a));
        }
        worst = worst.max(chi.max_abs_diff(&want));
    }
    // exact rational mode at q* = (pi, 0, pi), gamma = 1
    let s = build_seagull_exact(1.0, 1.0, &ExpandOptions::default()).map_err(err)?;
    let qs = [PI, 0.0, PI];
    let n = normalize(&s.hamiltonian, 2, &qs, &NormalizeOptions::default(), None).map_err(err)?;
    let z = n.generator(Stage::I, 1).and_then(|g| g.zeta()).ok_or("no zeta")?.to_vec();
    let r = ExactComplex::from_ratio;
    let exact_zeta = z == vec![r(-2, 1), r(-3, 2), r(-1, 1), r(-1, 2)];
    let f = drop_constant(&n.hamiltonian.get(0, 2));
    let mut want = TaylorFourierSeries::<ExactComplex>::new(4, 1, *f.truncation());
    for k in [1, -1] {
        for h in [[0, 0, k, 0], [0, k, 0, 0], [0, 0, 0, k]] {
            want.add_term(MultiIndex::new(&[0; 4], &h, &[0], &[0]), r(1, 2));
        }
    }
    let exact_f = f == want;
    let exact_c0 = s.hamiltonian.twist_matrix()[(1, 1)] == r(4, 1);
    let pass = worst <= 1e-10 && exact_zeta && exact_f && exact_c0;
    Ok(Outcome::plain(
        pass,
        format!("max deviation {worst:.1e} (<= 1e-10); exact mode zeta {exact_zeta}, f0(2,2) {exact_f}, C0 {exact_c0}"),
    ))
}

// 2. critical points

fn critical_points() -> Res<Outcome> {
    let mut notes = Vec::new();
    let mut pass = true;
    let h = 2.0 * PI / 100.0;
    let thetas: Vec<f64> = (0..100).map(|k| -PI / 2.0 + (k as f64 + 0.5) * h).collect();
    let mut worst: f64 = 0.0;
    for gamma in [1.0, -1.0] {
        let s = seagull(gamma, 1.0)?;
        let n1 = nf(&s, 1, &[0.0; 3])?;
        let prob = CriticalPointProblem::from_normal_form(&n1, 1e-3);
        let mut seeds = corner_seeds(3);
        seeds.extend(random_seeds(3, 40, 11));
        let rep = solve_critical_points(&prob, &seeds, &CriticalOptions::default());
        let fams = group_families(&rep.roots, 1e-6);
        let ok1 = !rep.roots.is_empty() && rep.roots.iter().all(|r| r.degenerate) && fams.len() == 4;
        let n2 = nf(&s, 2, &[0.0; 3])?;
        let prob2 = CriticalPointProblem::from_normal_form(&n2, 1e-3);
        let mut seeds2 = corner_seeds(3);
        seeds2.extend(random_seeds(3, 64, 5));
        let rep2 = solve_critical_points(&prob2, &seeds2, &CriticalOptions::default());
        let corners = rep2.roots.iter().all(|r| r.q.iter().all(|a| a.sin().abs() < 1e-10));
        let ok2 = rep2.roots.len() == 8 && corners && rep2.roots.iter().all(|r| !r.degenerate);
        let opts = NormalizeOptions::default();
        for f in &fams {
            let samples =
                family_breakdown_test(|q| second_order_gradient(&s.hamiltonian, q, &opts), f, &thetas).map_err(err)?;
            for (t, v) in samples {
                worst = worst.max((v + t.sin() / gamma).abs());
            }
        }
        pass &= ok1 && ok2;
        notes.push(format!(
            "gamma {gamma:+}: r=1 {} families, r=2 {} roots",
            fams.len(),
            rep2.roots.len()
        ));
    }
    pass &= worst <= 1e-10;
    Ok(Outcome::plain(
        pass,
        format!("{}; breakdown deviation {worst:.1e} (<= 1e-10)", notes.join(", ")),
    ))
}

// 3. residual law

fn residual_law(s: &Seagull, nfs: &[NormalFormResult<Complex64>]) -> Res<Outcome> {
    let mut pts = Vec::new();
    for eps in log_grid(1e-4, 1e-3, 5) {
        let mut worst: f64 = 0.0;
        for n in nfs {
            let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, n, eps, 1e-13).map_err(err)?;
            worst = worst.max(approximate_orbit(&map, &n.qstar, eps).map_err(err)?.residual);
        }
        pts.push((eps, worst));
    }
    let fit = fit_slope("max residual", &pts, 3.0, 0.15).map_err(err)?;
    Ok(Outcome::plain(
        fit.pass,
        format!("max ||Upsilon(x*)|| over 8 configurations: {}", fit_line(&fit)),
    ))
}

// 4. continuation law

struct Continued {
    eps: f64,
    sols: Vec<PeriodicOrbitSolution>,
}

fn continue_all(s: &Seagull, nfs: &[NormalFormResult<Complex64>], eps: f64) -> Res<Continued> {
    let mut sols = Vec::new();
    for n in nfs {
        let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, n, eps, 1e-13).map_err(err)?;
        let x = relative_equilibrium((4, 1), &n.qstar);
        sols.push(newton_continue(&map, &x, &NewtonOptions::for_epsilon(eps)).map_err(|e| format!("{:?}: {e}", n.qstar))?);
    }
    Ok(Continued { eps, sols })
}

fn continuation_law(s: &Seagull, nfs: &[NormalFormResult<Complex64>], desk: &[Continued]) -> Res<Outcome> {
    let converged = desk.iter().all(|d| d.sols.len() == 8);
    let worst_res = desk
        .iter()
        .flat_map(|d| d.sols.iter().map(|x| x.residual))
        .fold(0.0, f64::max);
    // the distance is resolvable only above the desk decade
    let mut pts = Vec::new();
    for eps in log_grid(4e-3, 4e-2, 5) {
        let c = continue_all(s, nfs, eps)?;
        pts.push((eps, c.sols.iter().map(|x| x.distance).fold(0.0, f64::max)));
    }
    let fit = fit_slope("max distance", &pts, 2.0, 0.2).map_err(err)?;
    let pass = converged && worst_res <= 1e-10 && fit.pass;
    let known = if converged && worst_res <= 1e-10 && (fit.slope - 3.0).abs() <= 0.2 {
        Ok(())
    } else {
        Err(format!("distance slope {:.3} no longer about 3", fit.slope))
    };
    Ok(Outcome {
        pass,
        detail: format!(
            "8/8 converged at eps {:?}, max final residual {worst_res:.1e} (<= 1e-10); distance on [4e-3, 4e-2]: {}",
            desk.iter().map(|d| d.eps).collect::<Vec<_>>(),
            fit_line(&fit)
        ),
        known_failure: Some(known),
    })
}

// 5. spectral scaling

fn spectral_scaling() -> Res<Outcome> {
    let s = seagull(1.0, 1.0)?;
    let n = nf(&s, 2, &[PI, PI, PI])?;
    let (mut sig, mut lam, mut gaps) = (Vec::new(), Vec::new(), Vec::new());
    let mut coeff_ok = true;
    let mut coeff_dev: f64 = 0.0;
    for eps in log_grid(1e-4, 1e-3, 5) {
        let bl = linearize_normal_form(&n, eps).map_err(err)?;
        let rep = classify_stability(&bl, &ClassifyOptions::default()).map_err(err)?;
        let t = 2.0 * PI / bl.omega;
        let nred = reduced_jacobian(&(rep.field.real() * t).exp(), 4).map_err(err)?;
        let n11 = nred.view((0, 0), (7, 7)).into_owned();
        sig.push((eps, sigma_min(&n11)));
        lam.push((eps, lambda_min(&n11)));
        gaps.push((eps, rep.min_gap));
        let mut im: Vec<f64> = rep.sigma11_slow.iter().filter(|l| l.im > 0.0).map(|l| l.im).collect();
        im.sort_by(f64::total_cmp);
        if im.len() != 3 {
            coeff_ok = false;
            continue;
        }
        let fast = 2.0 * 2f64.sqrt() * eps.sqrt();
        for d in [im[1] / fast - 1.0, im[2] / fast - 1.0, im[0] / (2f64.sqrt() * eps) - 1.0] {
            coeff_dev = coeff_dev.max(d.abs());
        }
    }
    coeff_ok &= coeff_dev <= 0.05;
    let fs = fit_slope("sigma_min(N11)", &sig, 1.0, 0.1).map_err(err)?;
    let fl = fit_slope("|lambda|_min(N11)", &lam, 1.0, 0.1).map_err(err)?;
    let fg = fit_slope("min gap", &gaps, 1.5, 0.1).map_err(err)?;
    let pass = fs.pass && coeff_ok && fg.pass;
    let known = if (fs.slope - 2.0).abs() <= 0.05
        && (power_coefficient(&sig, 2.0) - 2.094).abs() <= 0.01
        && fl.pass
        && coeff_ok
        && fg.pass
    {
        Ok(())
    } else {
        Err(format!(
            "singular-value slope {:.3}, eigenvalue slope {:.3}: analysis no longer matches",
            fs.slope, fl.slope
        ))
    };
    Ok(Outcome {
        pass,
        detail: format!(
            "sigma_min {}, coefficient {:.3}; |lambda|_min {}; leading coefficients within {:.1}% (<= 5%); gap {}",
            fit_line(&fs),
            power_coefficient(&sig, 2.0),
            fit_line(&fl),
            100.0 * coeff_dev,
            fit_line(&fg)
        ),
        known_failure: Some(known),
    })
}

// 6. stability classification

fn classification() -> Res<Outcome> {
    let mut pass = true;
    let mut notes = Vec::new();
    for (gamma, want) in [(1.0, [PI, PI, PI]), (-1.0, [0.0, PI, 0.0])] {
        let s = seagull(gamma, 1.0)?;
        for q in configurations() {
            let n = nf(&s, 2, &q)?;
            for eps in [1e-4, 1e-3, -1e-3] {
                let rep = classify_stability(&linearize_normal_form(&n, eps).map_err(err)?, &ClassifyOptions::default())
                    .map_err(err)?;
                let centres = rep.directions.iter().all(|d| d.label == Label::Center);
                if eps > 0.0 && centres != (q == want) {
                    pass = false;
                    notes.push(format!("gamma {gamma} eps {eps}: {q:?} centres {centres}"));
                }
                let q3 = rep.directions.iter().find(|d| d.index == 1).ok_or("no q3 direction")?;
                let expect = if q[1] == 0.0 { Label::Saddle } else { Label::Center };
                if q3.label != expect {
                    pass = false;
                    notes.push(format!("q3 label at {q:?}, gamma {gamma}, eps {eps}"));
                }
            }
        }
    }
    // true against approximate multiplier pattern; gamma = -1 uses I* = 2,
    // since omega + Omega = 0 at I* = 1
    let eps = 1e-3;
    let tol = 1e-4;
    let mut compared = 0;
    for (gamma, istar) in [(1.0, 1.0), (-1.0, 2.0)] {
        let s = seagull(gamma, istar)?;
        for q in configurations() {
            let n = nf(&s, 2, &q)?;
            let rep = classify_stability(&linearize_normal_form(&n, eps).map_err(err)?, &ClassifyOptions::default())
                .map_err(err)?;
            let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, &n, eps, 1e-13).map_err(err)?;
            let sol = newton_continue(&map, &relative_equilibrium((4, 1), &q), &NewtonOptions::for_epsilon(eps))
                .map_err(err)?;
            let fl = floquet_split(&sol.monodromy, &rep.field, map.period(), 1e-6).map_err(err)?;
            let (t, a) = (fl.off_circle(tol), rep.off_circle(map.period(), tol));
            if t != a {
                pass = false;
                notes.push(format!("gamma {gamma} I* {istar} {q:?}: true {t} vs approximate {a}"));
            }
            compared += 1;
        }
    }
    let detail = if notes.is_empty() {
        format!("unique all-centre configuration per sign of gamma, q3 label fixed, {compared}/16 multiplier patterns agree")
    } else {
        notes.join("; ")
    };
    Ok(Outcome::plain(pass, detail))
}

// 7. algebra properties

fn algebra_suite() -> Res<Outcome> {
    let br = |f: &Series, g: &Series| poisson_bracket(f, g).map_err(|e| TestCaseError::fail(e.to_string()));
    let check = |ok: bool, what: &str| -> Result<(), TestCaseError> {
        if ok {
            Ok(())
        } else {
            Err(TestCaseError::fail(what.to_string()))
        }
    };
    let mut failures = Vec::new();
    let mut run = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };
    let runner = || {
        let config = Config {
            cases: 1000,
            failure_persistence: None,
            ..Config::default()
        };
        TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
    };

    run(
        "grading",
        runner()
            .run(&pair(), |(f, g)| {
                for (a, fa) in f.grade_decompose() {
                    for (b, gb) in g.grade_decompose() {
                        let x = br(&fa, &gb)?;
                        check(x.is_empty() || (a + b >= 2 && x.is_pure_grade(a + b - 2)), "bracket grade")?;
                    }
                }
                Ok(())
            })
            .map_err(err),
    );
    run(
        "antisymmetry",
        runner()
            .run(&pair(), |(f, g)| {
                let s = br(&f, &g)?.add(&br(&g, &f)?).map_err(|e| TestCaseError::fail(e.to_string()))?;
                let scale = 1.0 + f.max_abs_coeff().max(g.max_abs_coeff());
                check(s.max_abs_coeff() <= 1e-12 * scale * scale, "antisymmetry")
            })
            .map_err(err),
    );
    run(
        "jacobi",
        runner()
            .run(&triple(), |(f, g, h)| {
                let (a, b, cc) = (br(&f, &br(&g, &h)?)?, br(&g, &br(&h, &f)?)?, br(&h, &br(&f, &g)?)?);
                let mut s = a.clone();
                s.add_assign(&b);
                s.add_assign(&cc);
                let tol = 1e-12 * (1.0 + a.max_abs_coeff() + b.max_abs_coeff() + cc.max_abs_coeff());
                check(s.max_abs_coeff() <= tol, "jacobi")
            })
            .map_err(err),
    );
    run(
        "leibniz",
        runner()
            .run(&triple(), |(f, g, h)| {
                let m = |a: &Series, b: &Series| a.mul(b).map_err(|e| TestCaseError::fail(e.to_string()));
                let lhs = br(&m(&f, &g)?, &h)?;
                let mut rhs = m(&f, &br(&g, &h)?)?;
                rhs.add_assign(&m(&br(&f, &h)?, &g)?);
                check(lhs.max_abs_diff(&rhs) <= 1e-12 * (1.0 + lhs.max_abs_coeff()), "leibniz")
            })
            .map_err(err),
    );
    run(
        "norm algebra",
        runner()
            .run(&(pair(), weights()), |((f, g), w)| {
                let p = f.mul(&g).map_err(|e| TestCaseError::fail(e.to_string()))?;
                check(
                    weighted_norm(&p, &w) <= weighted_norm(&f, &w) * weighted_norm(&g, &w) * (1.0 + 1e-12),
                    "product norm",
                )
            })
            .map_err(err),
    );
    run(
        "cauchy",
        runner()
            .run(&(pair(), weights(), 0.05..0.5f64), |((f, _), w, d)| {
                let nf = weighted_norm(&f, &w) * (1.0 + 1e-12);
                let ws = w.shrunk(d);
                let (n1, n2) = f.dims();
                for j in 0..n1 {
                    check(weighted_norm(&f.derivative(Var::P(j)), &ws) <= nf / (d * w.rho), "d/dp")?;
                    check(
                        weighted_norm(&f.derivative(Var::Q(j)), &ws) <= nf / (std::f64::consts::E * d * w.sigma),
                        "d/dq",
                    )?;
                }
                for j in 0..n2 {
                    check(weighted_norm(&f.derivative(Var::Xi(j)), &ws) <= nf / (d * w.r), "d/dxi")?;
                    check(weighted_norm(&f.derivative(Var::Eta(j)), &ws) <= nf / (d * w.r), "d/deta")?;
                }
                Ok(())
            })
            .map_err(err),
    );
    let pass = failures.is_empty();
    let detail = if pass {
        "grading, antisymmetry, Jacobi, Leibniz, norm algebra, Cauchy: 1000 cases each, 0 failures".to_string()
    } else {
        failures.join("; ")
    };
    Ok(Outcome::plain(pass, detail))
}

// 8. normal form structure

fn structure_suite(s: &Seagull, desk: &[Continued]) -> Res<Outcome> {
    let mut structure = true;
    for gamma in [1.0, -1.0] {
        let sg = seagull(gamma, 1.0)?;
        for q in configurations() {
            for r in [1, 2] {
                structure &= nf(&sg, r, &q)?.structure.all_hold();
            }
        }
    }
    let mut canon: f64 = 0.0;
    for q in configurations() {
        for r in [1, 2] {
            let n = nf(s, r, &q)?;
            for eps in [1e-4, 1e-3] {
                let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, &n, eps, 1e-13).map_err(err)?;
                let mut z = relative_equilibrium((4, 1), &q);
                for (i, x) in z.iter_mut().enumerate() {
                    *x += 0.01 * (i as f64 + 1.0).sin();
                }
                let (w, a) = map.transform.to_original_with_jacobian(&z).map_err(err)?;
                canon = canon.max(symplectic_defect((4, 1), &a));
                let back = map.transform.to_normal(&w).map_err(err)?;
                canon = canon.max(max_abs_diff(&back, &z));
            }
        }
    }
    let mono = desk
        .iter()
        .flat_map(|d| d.sols.iter().map(|x| symplectic_defect((4, 1), &x.monodromy)))
        .fold(0.0, f64::max);
    let pass = structure && canon <= 1e-9 && mono <= 1e-8;
    Ok(Outcome::plain(
        pass,
        format!(
            "properties 1-5 {} for gamma +-1, r 1..2, 8 configurations; canonicity defect {canon:.1e} (<= 1e-9); monodromy symplecticity {mono:.1e} (<= 1e-8)",
            if structure { "hold" } else { "fail" }
        ),
    ))
}

// 9. estimate ledger

fn ledger_suite(s: &Seagull) -> Res<Outcome> {
    let t = NuTable::new(6, 6);
    let ones = (0..=6).all(|s| t.nu_f64(0, s) == 1.0);
    let lemma = t.lemma_violations().is_empty();
    let n = normalize(
        &s.hamiltonian,
        2,
        &[PI, PI, PI],
        &NormalizeOptions::default(),
        Some(&LedgerParams::default()),
    )
    .map_err(err)?;
    let ledger = n.ledger.ok_or("no ledger")?;
    let held = ledger.generators.iter().filter(|r| r.holds()).count();
    Ok(Outcome::plain(
        ones && lemma,
        format!(
            "nu(0,s) = 1 {ones}; nu(r,s) <= 2^(14s)/2^8 for r,s <= 6 {lemma}; generator norms within bounds {held}/{} (report)",
            ledger.generators.len()
        ),
    ))
}

// 10. appendix

fn appendix_suite() -> Res<Outcome> {
    let grid = log_grid(1e-4, 1e-3, 5);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut min_ok = 0;
    for k in 0..100 {
        let fam = signed_family(&mut rng);
        let rep = min_eig_bound_check(|e| fam.member(e, 1.0, 2.0), 1.0, 2.0, &grid, k);
        let oracle_ok = rep.rows.iter().zip(&grid).all(|(row, &e)| {
            let o = oracle_min_modulus(&fam.member(e, 1.0, 2.0).m());
            (row.min_nu - o).abs() <= 1e-9 * o
        });
        if rep.hypotheses_hold() && rep.pass() && oracle_ok {
            min_ok += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let mut loc_ok = 0;
    for k in 0..100 {
        let fam = separated_family(&mut rng);
        let rep = eigenvalue_localization_check(|e| fam.member(e, 1.0, 2.0), 2.0, 1.0, &grid, k);
        let oracle_ok = grid.iter().all(|&e| {
            let spec: Vec<Complex64> = fam.member(e, 1.0, 2.0).m().complex_eigenvalues().iter().copied().collect();
            rep.rows
                .iter()
                .filter(|r| r.eps == e)
                .all(|r| spec.iter().map(|s| (s - r.nu).norm()).fold(f64::INFINITY, f64::min) < 1e-12)
        });
        let slope_ok = fit_slope("distance", &rep.max_distances(), 2.0, 0.1).is_ok_and(|f| f.slope >= 1.9);
        if rep.pass() && oracle_ok && slope_ok {
            loc_ok += 1;
        }
    }
    let s = seagull(1.0, 1.0)?;
    let q = [PI, PI, PI];
    let n = nf(&s, 2, &q)?;
    let mut pts = Vec::new();
    for eps in log_grid(1e-4, 1e-3, 4) {
        let rep = classify_stability(&linearize_normal_form(&n, eps).map_err(err)?, &ClassifyOptions::default())
            .map_err(err)?;
        let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, &n, eps, 1e-13).map_err(err)?;
        let sol = newton_continue(&map, &relative_equilibrium((4, 1), &q), &NewtonOptions::for_epsilon(eps)).map_err(err)?;
        let fl = floquet_split(&sol.monodromy, &rep.field, map.period(), 1e-6).map_err(err)?;
        let m = multiplier_localization(&fl, &rep.sigma11_slow).map_err(err)?;
        pts.push((eps, m.iter().map(|p| p.distance).fold(0.0, f64::max)));
    }
    let fit = fit_slope("seagull localization", &pts, 2.0, 0.2).map_err(err)?;
    let pass = min_ok == 100 && loc_ok == 100 && fit.slope >= 1.8;
    Ok(Outcome::plain(
        pass,
        format!(
            "min-eigenvalue {min_ok}/100, localization {loc_ok}/100 families; seagull distance slope {:.3} (>= 1.8)",
            fit.slope
        ),
    ))
}

fn main() -> ExitCode {
    let started = std::time::Instant::now();
    let setup = || -> Res<(Seagull, Vec<NormalFormResult<Complex64>>)> {
        let s = seagull(1.0, 1.0)?;
        let nfs = configurations().iter().map(|q| nf(&s, 2, q)).collect::<Res<Vec<_>>>()?;
        Ok((s, nfs))
    };
    let (s, nfs) = match setup() {
        Ok(v) => v,
        Err(e) => {
            println!("setup failed: {e}");
            return ExitCode::FAILURE;
        }
    };
    let desk: Res<Vec<Continued>> = [1e-4, 1e-3].iter().map(|&e| continue_all(&s, &nfs, e)).collect();
    let desk_err = desk.as_ref().err().cloned();
    let desk = desk.unwrap_or_default();
    let need_desk = |f: &dyn Fn() -> Res<Outcome>| -> Res<Outcome> {
        match &desk_err {
            Some(e) => Err(format!("continuation failed: {e}")),
            None => f(),
        }
    };

    let results: Vec<(u32, &str, Res<Outcome>)> = vec![
        (1, "closed-form regression", closed_forms()),
        (2, "critical-point structure", critical_points()),
        (3, "residual law", residual_law(&s, &nfs)),
        (4, "continuation law", need_desk(&|| continuation_law(&s, &nfs, &desk))),
        (5, "spectral scaling", spectral_scaling()),
        (6, "stability classification", classification()),
        (7, "algebra property suite", algebra_suite()),
        (8, "normal form structure suite", need_desk(&|| structure_suite(&s, &desk))),
        (9, "estimate ledger", ledger_suite(&s)),
        (10, "appendix suite", appendix_suite()),
    ];

    let mut ok = true;
    for (id, name, r) in &results {
        match r {
            Ok(o) => {
                println!("criterion {id:2} {}: {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
                match (&o.known_failure, o.pass) {
                    (Some(Ok(())), false) => println!("             known failure, measurement matches the recorded analysis"),
                    (Some(Err(e)), false) => {
                        println!("             known failure drifted: {e}");
                        ok = false;
                    }
                    (Some(_), true) => println!("             expected to fail; now passes"),
                    (None, false) => ok = false,
                    (None, true) => {}
                }
            }
            Err(e) => {
                println!("criterion {id:2} FAIL: {name}: error: {e}");
                ok = false;
            }
        }
    }
    let passed = results.iter().filter(|r| r.2.as_ref().is_ok_and(|o| o.pass)).count();
    println!("{passed}/{} criteria pass ({:.1} s)", results.len(), started.elapsed().as_secs_f64());
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
