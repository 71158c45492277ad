use num_complex::Complex64;

use super::chart::ResonantChart;
use super::expand::{expand_around_torus, ExpandOptions, TorusData};
use super::graded::GradedHamiltonian;
use super::lattice::LatticeModel;
use crate::error::{Error, Result};
use crate::poly_algebra::{Coefficient, ExactComplex};

/// The five-site chain expanded about the resonant torus of its four outer
/// oscillators with equal actions `I*`.
#[derive(Clone, Debug)]
pub struct Seagull<C: Coefficient = Complex64> {
    pub model: LatticeModel,
    pub chart: ResonantChart,
    pub hamiltonian: GradedHamiltonian<C>,
    pub istar: f64,
}

fn build<C: Coefficient>(gamma: f64, istar: f64, sqrt_istar: C, opts: &ExpandOptions) -> Result<Seagull<C>> {
    if !(istar > 0.0) {
        return Err(Error::InvalidInput(format!("I* must be positive, got {istar}")));
    }
    // the coupling is a formal order-one marker: eps powers are tracked by order
    let model = LatticeModel::seagull(gamma, 1.0)?;
    let n1 = model.n1();
    let w = model.frequency(istar);
    let chart = ResonantChart::new(&vec![1; n1], &vec![istar; n1], &vec![w; n1], &[1.0], opts.resonance_tol)?;
    let g = C::from_f64(gamma);
    let terms = model.action_angle_terms(&g);
    let torus = TorusData {
        istar: vec![C::from_f64(istar); n1],
        sqrt_istar: vec![sqrt_istar; n1],
    };
    let hamiltonian = expand_around_torus(&terms, &chart, &torus, opts)?;
    Ok(Seagull {
        model,
        chart,
        hamiltonian,
        istar,
    })
}

/// Build the seagull Hamiltonian with floating-point coefficients.
pub fn build_seagull(gamma: f64, istar: f64, opts: &ExpandOptions) -> Result<Seagull<Complex64>> {
    build(gamma, istar, Complex64::new(istar.sqrt(), 0.0), opts)
}

/// Build the seagull Hamiltonian with exact rational coefficients.
///
/// `gamma` and `I*` are taken as exact binary rationals; `sqrt(I*)` must be
/// exactly representable as well.
pub fn build_seagull_exact(gamma: f64, istar: f64, opts: &ExpandOptions) -> Result<Seagull<ExactComplex>> {
    let r = istar.sqrt();
    if r * r != istar {
        return Err(Error::InvalidInput(format!(
            "exact mode needs a rational sqrt(I*), got I* = {istar}"
        )));
    }
    let opts = ExpandOptions {
        drop_tol: 0.0,
        ..*opts
    };
    build(gamma, istar, ExactComplex::from_f64(r), &opts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly_algebra::{PhasePoint, Series, TruncationPolicy};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn frequencies_and_twist() {
        let s = build_seagull(1.0, 1.0, &ExpandOptions::default()).unwrap();
        let h = &s.hamiltonian;
        assert!((h.omega_f64() - 3.0).abs() < 1e-15);
        assert_eq!(h.big_omega_f64(), vec![1.0]);
        let c0 = h.twist_matrix();
        let expect = [
            [2.0, -2.0, 0.0, 0.0],
            [-2.0, 4.0, -2.0, 0.0],
            [0.0, -2.0, 4.0, -2.0],
            [0.0, 0.0, -2.0, 4.0],
        ];
        for i in 0..4 {
            for j in 0..4 {
                assert!((c0[(i, j)] - c(expect[i][j])).norm() < 1e-14, "C0[{i},{j}]");
            }
        }
        assert!(h.twist_constant().unwrap() > 0.0);
    }

    #[test]
    fn f0_first_order() {
        let istar = 1.5;
        let s = build_seagull(-1.0, istar, &ExpandOptions::default()).unwrap();
        let t = TruncationPolicy::default();
        let expect = Series::cosine(4, 1, t, &[0, 1, 0, 0])
            .add(&Series::cosine(4, 1, t, &[0, 0, 0, 1]))
            .unwrap()
            .scale(&c(2.0 * istar));
        assert!(s.hamiltonian.get(0, 1).max_abs_diff(&expect) < 1e-14);
    }

    #[test]
    fn torus_energy() {
        let s = build_seagull(1.0, 2.0, &ExpandOptions::default()).unwrap();
        let pt = PhasePoint::from_real(&[0.3, 0.1, -0.2, 1.0], &[0.0; 4], &[c(0.0)], &[c(0.0)]);
        let e = s.hamiltonian.evaluate(&pt, 0.0, 3).unwrap();
        assert!((e - c(4.0 * (2.0 + 4.0))).norm() < 1e-13);
    }

    #[test]
    fn exact_requires_rational_root() {
        assert!(build_seagull_exact(1.0, 2.0, &ExpandOptions::default()).is_err());
        assert!(build_seagull_exact(1.0, 0.25, &ExpandOptions::default()).is_ok());
        assert!(build_seagull(1.0, 0.0, &ExpandOptions::default()).is_err());
    }
}
