//! Sparse Taylor-Fourier series: arithmetic, grading, Poisson brackets,
//! Lie transforms, fast-angle averaging and the weighted Fourier norm.

pub mod coeff;
pub mod eval;
pub mod index;
pub mod lie;
pub mod norm;
pub mod series;
pub mod text;

pub use coeff::{Coefficient, ExactComplex};
pub use eval::{evaluate, CompiledSeries, Derivatives, PhasePoint};
pub use index::MultiIndex;
pub use lie::{lie_transform, lie_transform_graded, poisson_bracket, LieGenerator};
pub use norm::{weighted_norm, NormWeights};
pub use series::{Series, TaylorFourierSeries, TruncationPolicy, Var};
