//! The resonant normal form: homological equations, the five-stage
//! normalization step, the driver and the bookkeeping of the analytic
//! estimates.

pub mod driver;
pub mod homological;
pub mod ledger;
pub mod melnikov;
pub mod step;
pub mod structure;

pub use driver::{normalize, NormalFormResult};
pub use homological::{divisor, solve_homological, solve_linear, HomologicalMode};
pub use ledger::{estimate_ledger, BoundRow, EstimateLedger, LedgerParams, NuTable};
pub use melnikov::{check_melnikov, DivisorTuple, MelnikovReport};
pub use step::{
    frequency_fix_translation, normalization_step, translation_rhs, GeneratingFunction, NormalizeOptions, Route,
    Stage,
};
pub use structure::{check_structure, StructureReport};
