use crate::error::Result;
use crate::model::GradedHamiltonian;
use crate::poly_algebra::Coefficient;

/// Largest violation of each normal form property over `1 <= s <= r`.
#[derive(Clone, Debug, PartialEq)]
pub struct StructureReport {
    pub order: usize,
    /// `f_0` depends on the fast angle.
    pub fast_f0: f64,
    /// `f_1` present.
    pub f1: f64,
    /// `f_2` depends on the fast angle.
    pub fast_f2: f64,
    /// `f_2` at `xi = eta = 0`, `q = q*`.
    pub f2_at_qstar: f64,
    /// `f_3` depends on the actions.
    pub f3_actions: f64,
    /// `f_4` at `xi = eta = 0` depends on the fast angle.
    pub fast_f4: f64,
    pub tol: f64,
}

impl StructureReport {
    pub fn violations(&self) -> [f64; 6] {
        [
            self.fast_f0,
            self.f1,
            self.fast_f2,
            self.f2_at_qstar,
            self.f3_actions,
            self.fast_f4,
        ]
    }

    /// Properties 1 to 5 in order.
    pub fn properties(&self) -> [bool; 5] {
        let t = self.tol;
        [
            self.fast_f0 <= t,
            self.f1 <= t,
            self.fast_f2 <= t && self.f2_at_qstar <= t,
            self.f3_actions <= t,
            self.fast_f4 <= t,
        ]
    }

    pub fn all_hold(&self) -> bool {
        self.properties().iter().all(|&b| b)
    }
}

/// Check the normal form structure of `h` for all orders `1..=h.order`.
pub fn check_structure<C: Coefficient>(h: &GradedHamiltonian<C>, qstar: &[f64], tol: f64) -> Result<StructureReport> {
    let mut rep = StructureReport {
        order: h.order,
        fast_f0: 0.0,
        f1: 0.0,
        fast_f2: 0.0,
        f2_at_qstar: 0.0,
        f3_actions: 0.0,
        fast_f4: 0.0,
        tol,
    };
    for s in 1..=h.order {
        rep.fast_f0 = rep.fast_f0.max(h.get(0, s).fast_oscillating_part().max_abs_coeff());
        rep.f1 = rep.f1.max(h.get(1, s).max_abs_coeff());
        let f2 = h.get(2, s);
        rep.fast_f2 = rep.fast_f2.max(f2.fast_oscillating_part().max_abs_coeff());
        let at = f2.at_zero_transverse().substitute_slow_angles(qstar)?;
        rep.f2_at_qstar = rep.f2_at_qstar.max(at.max_abs_coeff());
        rep.f3_actions = rep
            .f3_actions
            .max(h.get(3, s).filter(|i| i.action_degree() > 0).max_abs_coeff());
        rep.fast_f4 = rep
            .fast_f4
            .max(h.get(4, s).at_zero_transverse().fast_oscillating_part().max_abs_coeff());
    }
    Ok(rep)
}
