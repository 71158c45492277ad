mod common;

use common::configurations;
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resnf::continuation::{newton_continue, reduced_jacobian, relative_equilibrium, ConjugatedPeriodMap, NewtonOptions, PeriodMap};
use resnf::dynamics::{symplectic_defect, symplectic_j, Hamiltonian, SeriesHamiltonian};
use resnf::fit::fit_slope;
use resnf::model::{build_seagull, ExpandOptions, Seagull};
use resnf::normal_form::{normalize, NormalFormResult, NormalizeOptions};
use resnf::stability::*;
use resnf::Error;
use std::f64::consts::PI;

fn seagull(gamma: f64, istar: f64) -> Seagull {
    build_seagull(gamma, istar, &ExpandOptions::default()).unwrap()
}

fn nf(s: &Seagull, r: usize, q: &[f64]) -> NormalFormResult<Complex64> {
    normalize(&s.hamiltonian, r, q, &NormalizeOptions::default(), None).unwrap()
}

fn report(n: &NormalFormResult<Complex64>, eps: f64) -> StabilityReport {
    classify_stability(&linearize_normal_form(n, eps).unwrap(), &ClassifyOptions::default()).unwrap()
}

fn all_centres(rep: &StabilityReport) -> bool {
    rep.directions.iter().all(|d| d.label == Label::Center)
}

#[test]
fn field_is_j_times_finite_difference_hessian() {
    let s = seagull(1.0, 1.0);
    let eps = 1e-3;
    for q in [[0.0, 0.0, 0.0], [PI, PI, PI], [0.0, PI, PI]] {
        let n = nf(&s, 2, &q);
        let bl = linearize_normal_form(&n, eps).unwrap();
        assert!(bl.asymmetry() < 1e-12);
        assert!(bl.imag_residual < 1e-12 && bl.fast_angle_residual < 1e-12);
        let z = SeriesHamiltonian::new(&n.hamiltonian.total(eps, 2), None);
        let x = relative_equilibrium((4, 1), &q);
        let h = 1e-6;
        let mut hess = DMatrix::zeros(10, 10);
        for i in 0..10 {
            let (mut a, mut b) = (x.clone(), x.clone());
            a[i] += h;
            b[i] -= h;
            hess.set_column(i, &((z.gradient(&a) - z.gradient(&b)) / (2.0 * h)));
        }
        let field = assemble_l(&bl).unwrap().real();
        let want = symplectic_j((4, 1)) * hess;
        assert!((&field - &want).amax() < 1e-7, "{q:?}: {:e}", (&field - &want).amax());
    }
}

#[test]
fn curvature_matrix_is_the_closed_form_diagonal() {
    for gamma in [1.0, -1.0] {
        let s = seagull(gamma, 1.0);
        for q in configurations() {
            let n = nf(&s, 2, &q);
            for eps in [1e-4, 1e-3] {
                let bl = linearize_normal_form(&n, eps).unwrap();
                let (c2, c3, c4) = (q[0].cos(), q[1].cos(), q[2].cos());
                let e2 = eps * eps;
                let want = [
                    -2.0 * eps * c2 + e2 * c2 * c2 / gamma,
                    -e2 * c3 / gamma,
                    -2.0 * eps * c4 + e2 * c4 * c4 / gamma,
                ];
                let off = (&bl.b - DMatrix::from_diagonal(&bl.b.diagonal())).amax();
                assert!(off < 1e-15);
                for i in 0..3 {
                    assert!((bl.b[(i, i)] - want[i]).abs() < 1e-15, "{q:?} {i}: {} vs {}", bl.b[(i, i)], want[i]);
                }
                let dec = decouple_fast(&bl).unwrap();
                assert!(dec.residual_d < 1e-15);
            }
        }
    }
}

#[test]
fn unperturbed_blocks() {
    let s = seagull(1.0, 1.0);
    let n = nf(&s, 2, &[0.0, PI, 0.0]);
    let bl = linearize_normal_form(&n, 0.0).unwrap();
    assert_eq!(bl.b.amax(), 0.0);
    assert_eq!(bl.d.amax(), 0.0);
    assert_eq!(bl.g.camax(), 0.0);
    assert_eq!(bl.f.camax(), 0.0);
    let c0 = s.hamiltonian.twist_matrix().map(|c| c.re);
    assert!((&bl.c - c0).amax() < 1e-15);
    assert!((bl.e[(0, 0)] - Complex64::new(0.0, s.chart.big_omega[0])).norm() < 1e-15);
    // nilpotent slow block plus a rotation
    let l = assemble_l(&bl).unwrap();
    assert!((&l.l11 * &l.l11).amax() < 1e-15);
    let spec = complex_eigenvalues(&l.l22).unwrap();
    assert!((spec[0] - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    assert!((spec[1] - Complex64::new(0.0, 1.0)).norm() < 1e-15);
}

#[test]
fn schur_complement_matches_dense_inverse() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let s = seagull(1.0, 1.0);
    let base = linearize_normal_form(&nf(&s, 2, &[0.0; 3]), 1e-3).unwrap();
    for _ in 0..200 {
        let a = DMatrix::from_fn(4, 4, |_, _| rng.gen_range(-1.0..1.0));
        let c = &a * a.transpose() + DMatrix::identity(4, 4) * 0.1;
        let bl = LinearizationBlocks { c: c.clone(), ..base.clone() };
        let dec = decouple_fast(&bl).unwrap();
        let inv = c.clone().try_inverse().unwrap();
        let oracle = 1.0 / inv[(0, 0)];
        assert!((dec.c11 - oracle).abs() <= 1e-12 * oracle.abs().max(1.0), "{} vs {oracle}", dec.c11);
        assert_eq!(dec.c22, c.view((1, 1), (3, 3)).into_owned());
    }
}

#[test]
fn seagull_field_shapes_and_exponential() {
    let s = seagull(1.0, 1.0);
    let eps = 1e-3;
    for q in configurations() {
        let n = nf(&s, 2, &q);
        let bl = linearize_normal_form(&n, eps).unwrap();
        let l = assemble_l(&bl).unwrap();
        assert_eq!(l.l11.shape(), (8, 8));
        assert_eq!(l.l22.shape(), (2, 2));
        let spec = complex_eigenvalues(&l.l22).unwrap();
        for z in &spec {
            assert!(z.re.abs() < 1e-12 && (z.im.abs() - 1.0).abs() < 10.0 * eps);
        }
        let t = 2.0 * PI / bl.omega;
        let e = (l.real() * t).exp();
        assert!(symplectic_defect((4, 1), &e) < 1e-10);
        // the flat reduction keeps the block split
        let nred = reduced_jacobian(&e, 4).unwrap();
        let off = nred.view((0, 7), (7, 2)).amax().max(nred.view((7, 0), (2, 7)).amax());
        assert!(off < 1e-10);
    }
}

#[test]
fn linear_prediction_of_the_reduced_jacobian_is_third_order() {
    let s = seagull(1.0, 1.0);
    let q = [PI, 0.0, PI];
    let n = nf(&s, 2, &q);
    let mut pts = Vec::new();
    for eps in [1e-4, 2e-4, 5e-4, 1e-3] {
        let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, &n, eps, 1e-13).unwrap();
        let (_, phi) = map.advance_with_monodromy(&relative_equilibrium((4, 1), &q)).unwrap();
        let m = reduced_jacobian(&phi, 4).unwrap();
        let l = assemble_l(&linearize_normal_form(&n, eps).unwrap()).unwrap();
        let nl = reduced_jacobian(&(l.real() * map.period()).exp(), 4).unwrap();
        pts.push((eps, (&m - &nl).amax()));
    }
    let fit = fit_slope("reduced Jacobian defect", &pts, 3.0, 0.2).unwrap();
    assert!(fit.slope >= 2.8, "{fit:?}");
}

#[test]
fn labels_follow_the_sign_of_gamma_eps() {
    for gamma in [1.0, -1.0] {
        let s = seagull(gamma, 1.0);
        for q in configurations() {
            let n = nf(&s, 2, &q);
            let plus = report(&n, 1e-3);
            let minus = report(&n, -1e-3);
            for (a, b) in plus.directions.iter().zip(&minus.directions) {
                assert_eq!(a.index, b.index);
                assert_eq!(a.degenerate, b.degenerate);
                if a.degenerate {
                    assert_eq!(a.label, b.label);
                } else {
                    assert_ne!(a.label, b.label);
                }
            }
            // rescaling eps inside the validity range changes nothing
            for f in [0.1, 0.5, 2.0] {
                let scaled = report(&n, 1e-3 * f);
                let la: Vec<Label> = scaled.directions.iter().map(|d| d.label).collect();
                let lb: Vec<Label> = plus.directions.iter().map(|d| d.label).collect();
                assert_eq!(la, lb);
            }
            // the q3 direction is degenerate: saddle at q3 = 0, centre at q3 = pi
            let d3 = plus.directions[1];
            assert!(d3.degenerate);
            let want = if q[1] == 0.0 { Label::Saddle } else { Label::Center };
            assert_eq!(d3.label, want);
        }
    }
}

#[test]
fn unique_stable_configuration_depends_on_gamma() {
    for (gamma, stable) in [(1.0, [PI, PI, PI]), (-1.0, [0.0, PI, 0.0])] {
        let s = seagull(gamma, 1.0);
        for eps in [1e-4, 1e-3] {
            let found: Vec<[f64; 3]> = configurations()
                .into_iter()
                .filter(|q| {
                    let rep = report(&nf(&s, 2, q), eps);
                    assert!(rep.slow.is_some());
                    rep.stable && all_centres(&rep)
                })
                .collect();
            assert_eq!(found, vec![stable], "gamma {gamma}, eps {eps}");
        }
    }
}

#[test]
fn stable_orbit_multipliers_lie_on_the_unit_circle() {
    let s = seagull(1.0, 1.0);
    let q = [PI, PI, PI];
    let eps = 1e-3;
    let n = nf(&s, 2, &q);
    let rep = report(&n, eps);
    let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, &n, eps, 1e-13).unwrap();
    let sol = newton_continue(&map, &relative_equilibrium((4, 1), &q), &NewtonOptions::for_epsilon(eps)).unwrap();
    let fl = floquet_split(&sol.monodromy, &rep.field, map.period(), 1e-6).unwrap();
    assert_eq!(fl.multipliers.len(), 10);
    assert!(fl.max_circle_distance() < 1e-4);
    assert!(fl.unit_count >= 2);
    assert!(fl.conjugation_defect < 1e-10);
    assert!(fl.reciprocity_defect < 1e-8);
    assert_eq!(fl.sigma11.len(), 8);
    assert_eq!(fl.sigma22.len(), 2);
}

#[test]
fn slow_spectrum_leading_coefficients() {
    let s = seagull(1.0, 1.0);
    let n = nf(&s, 2, &[PI, PI, PI]);
    for eps in [1e-4, 3e-4, 1e-3] {
        let rep = report(&n, eps);
        let mut im: Vec<f64> = rep.sigma11_slow.iter().filter(|l| l.im > 0.0).map(|l| l.im).collect();
        im.sort_by(f64::total_cmp);
        assert_eq!(im.len(), 3);
        assert!(rep.sigma11_slow.iter().all(|l| l.re.abs() < 1e-12));
        let fast = 2.0 * 2f64.sqrt() * eps.sqrt();
        assert!((im[1] / fast - 1.0).abs() < 0.05 && (im[2] / fast - 1.0).abs() < 0.05, "{im:?}");
        assert!((im[0] / (2f64.sqrt() * eps) - 1.0).abs() < 0.05);
        // the explicit slow matrix agrees with the full field
        let slow = rep.slow.clone().unwrap();
        let m = match_spectra(&slow, &rep.sigma11_slow).unwrap();
        assert!(m.iter().all(|p| p.distance < 1e-12));
    }
}

#[test]
fn resonant_transverse_frequency_is_refused() {
    // gamma = -1, I* = 1: omega = -1 and Omega = 1 give unit transverse multipliers
    let s = seagull(-1.0, 1.0);
    let q = [0.0, PI, 0.0];
    let n = nf(&s, 2, &q);
    assert!(!n.melnikov.pass);
    let eps = 1e-3;
    let rep = report(&n, eps);
    let map = ConjugatedPeriodMap::from_normal_form(&s.model, &s.chart, &n, eps, 1e-13).unwrap();
    let x = relative_equilibrium((4, 1), &q);
    // the transverse block of the reduced Jacobian vanishes as well
    match newton_continue(&map, &x, &NewtonOptions::for_epsilon(eps)) {
        Err(Error::Singular(_)) => {}
        other => panic!("expected a singular Jacobian, got {other:?}"),
    }
    let (_, phi) = map.advance_with_monodromy(&x).unwrap();
    match floquet_split(&phi, &rep.field, map.period(), 1e-6) {
        Err(Error::NotSeparable(_)) => {}
        other => panic!("expected a refusal, got {other:?}"),
    }
}
