//! Concrete Hamiltonians in resonant coordinates: the lattice model, the
//! resonant chart, the expansion about a resonant torus and the seagull
//! configuration.

pub mod chart;
pub mod expand;
pub mod graded;
pub mod lattice;
pub mod seagull;

pub use chart::{chart_matrix, IntMatrix, ResonantChart};
pub use expand::{expand_around_torus, ExpandOptions, TorusData};
pub use graded::{ExpandedHamiltonian, GradedHamiltonian};
pub use lattice::{AaTerm, LatticeModel};
pub use seagull::{build_seagull, build_seagull_exact, Seagull};
