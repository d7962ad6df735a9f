//! Coverability for two-counter vector addition systems with states where
//! one counter is updated in unary.
//!
//! The crate has an exact backward oracle ([`oracle`]), a compositional
//! path algebra for compressed witnesses ([`path`], [`witness`]), the
//! run-transformation toolkit ([`toolkit`]) and a witness synthesiser
//! ([`solver`]). Text formats, generators and the fuzz harness live in
//! [`io`].

#[cfg(feature = "cli")]
pub mod cli;
pub mod io;
pub mod model;
pub mod oracle;
pub mod path;
pub mod solver;
pub mod toolkit;
pub mod witness;

pub use model::{
    Config, Counter, Counters, CoverInstance, ExplicitPath, ModelError, StateId, TransitionId, Vass,
};
pub use path::{PathExpr, Summary};
pub use witness::{check_witness, CheckOutcome, RejectReason, Witness};
