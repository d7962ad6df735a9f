//! Executable versions of the run transformations: cycle replacement,
//! reshuffling, monotone and positive cycle decompositions, and the
//! semi-positive tail construction.

use thiserror::Error;

use crate::model::ModelError;

pub mod bounds;
pub mod cycles;
pub mod decompose;
pub mod linear_form;
pub mod replace;
pub mod reshuffle;
pub mod tail;

pub use bounds::PolyBounds;
pub use cycles::{
    enumerate_short_cycles, find_replacement, irreplaceable_catalog, CatalogEntry,
    CycleCharacterization, CycleTable,
};
pub use decompose::{
    find_monotone_decomposition, positive_cycle_decomposition, MonotoneDecomposition,
    PositiveDecomposition,
};
pub use linear_form::{greedy_linear_form, LinearForm};
pub use replace::replace_cycles_in_run;
pub use reshuffle::{reshuffle, ReshuffleResult, Reshuffled, TraceStep};
pub use tail::semi_positive_tail;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ToolkitError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("path is not a cycle")]
    NotACycle,
    #[error("input run is infeasible from the given configuration")]
    Infeasible,
    #[error("malformed linear form: {0}")]
    Malformed(&'static str),
    #[error("{procedure} exceeded its iteration cap of {cap}")]
    IterationCap { procedure: &'static str, cap: usize },
    /// A postcondition that the underlying lemma guarantees did not hold.
    #[error("{0}")]
    Diagnostic(String),
}
