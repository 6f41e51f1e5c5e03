//! Exact engine for pointed G-crossed ribbon categories: axiom checks,
//! colored diagram evaluation and surgery invariants of 3-manifolds with
//! flat G-structures.

pub mod category;
pub mod checks;
pub mod diagram;
pub mod evaluator;
pub mod fusion;
pub mod kirby;
pub mod moves;
pub mod report;
pub mod scalars;
pub mod surgery;

pub use category::{CategoryData, CategoryError, GroupTable, ScalarKey};
pub use report::{AxiomFailure, AxiomReport};
pub use scalars::{CycNumber, ScalarError};
