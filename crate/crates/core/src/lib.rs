//! Resonant normal forms for nearly integrable Hamiltonian systems near
//! completely resonant lower-dimensional tori, with continuation of the
//! surviving periodic orbits and their linear stability analysis.

pub mod continuation;
pub mod dynamics;
pub mod error;
pub mod fit;
pub mod model;
pub mod normal_form;
pub mod poly_algebra;
pub mod stability;

pub use error::{Error, Result};
