//! Numerical flows, variational equations and canonical maps.

pub mod flow;
pub mod hamiltonian;
pub mod integrator;
pub mod maps;

pub use flow::{finite_difference_jacobian, flow, flow_stats, flow_with_stm};
pub use hamiltonian::{
    apply_j, complexification_jacobian, complexify, realify, symplectic_defect, symplectic_j, CartesianLattice,
    Hamiltonian, SeriesHamiltonian,
};
pub use integrator::{integrate, GbsOptions, GbsStats};
pub use maps::{wrap_angle, LatticeChart, NormalFormTransform};
