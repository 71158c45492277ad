//! Linear stability of the continued orbits: linearization of the normal
//! form, fast/slow decoupling, Floquet splitting and the spectral
//! perturbation checks.

pub mod appendix;
pub mod classify;
pub mod floquet;
pub mod linear;
pub mod spectral;

pub use appendix::{
    eigenvalue_localization_check, min_eig_bound_check, LocalizationReport, LocalizationRow, MinEigenReport,
    MinEigenRow, PerturbedMatrix,
};
pub use classify::{
    classify_stability, decouple_fast, decoupled_slow_spectrum, slow_matrix, slow_spectrum, ClassifyOptions,
    Decoupling, DirectionClass, Label, StabilityReport,
};
pub use floquet::{floquet_split, multiplier_localization, FloquetReport};
pub use linear::{
    assemble_l, linearize_blocks, linearize_normal_form, LinearVectorField, LinearizationBlocks, EQUILIBRIUM_TOL,
};
pub use spectral::{
    balance, complex_eigenvalues, eigenvalues, eigenvector_condition, eigenvectors, match_spectra,
    min_pairwise_gap, op_norm, operator_constant, MatchedPair, OperatorConstant,
};
