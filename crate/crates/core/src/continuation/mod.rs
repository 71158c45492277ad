//! Approximate periodic orbits from the normal form, the shooting map and
//! Newton continuation to true periodic orbits.

pub mod critical;
pub mod newton;
pub mod shooting;

pub use critical::{
    corner_seeds, family_breakdown_test, group_families, qstar_fixed_point, random_seeds, sampled_zeros,
    second_order_gradient, solve_critical_points, CriticalFamily, CriticalOptions, CriticalPoint,
    CriticalPointProblem, CriticalPointReport, QstarFixedPoint,
};
pub use newton::{lambda_min, newton_continue, sigma_min, NewtonOptions, NewtonStep, PeriodicOrbitSolution};
pub use shooting::{
    approximate_orbit, embed, reduce_matrix, reduced_jacobian, relative_equilibrium, upsilon, upsilon_from,
    ApproximateOrbit, ConjugatedPeriodMap, PeriodMap, SeriesPeriodMap,
};
