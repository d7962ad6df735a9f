//! Compressed-linear-form coverability witnesses and their checker.

use std::fmt;

use crate::model::{Config, CoverInstance};
use crate::path::{feasible_from, summarize, Feasibility, PathError, PathExpr, Violation};

/// Maximum power nesting accepted by [`check_witness`].
pub const MAX_WITNESS_DEPTH: usize = 2;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub expr: PathExpr,
    pub declared_final: Option<Config>,
}

impl Witness {
    pub fn new(expr: PathExpr) -> Self {
        Witness {
            expr,
            declared_final: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RejectReason {
    Structural(PathError),
    EndpointMismatch,
    DepthExceeded(usize),
    Infeasible(Violation),
    TargetNotCovered(Config),
    DeclaredFinalMismatch { declared: Config, actual: Config },
}

impl RejectReason {
    /// Single lowercase word, used on the `reason:` line of the CLI.
    pub fn keyword(&self) -> &'static str {
        match self {
            RejectReason::Structural(_) => "structural",
            RejectReason::EndpointMismatch => "endpoint-mismatch",
            RejectReason::DepthExceeded(_) => "depth-exceeded",
            RejectReason::Infeasible(_) => "infeasible",
            RejectReason::TargetNotCovered(_) => "target-not-covered",
            RejectReason::DeclaredFinalMismatch { .. } => "declared-final-mismatch",
        }
    }
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RejectReason::Structural(e) => write!(f, "structural: {e}"),
            RejectReason::EndpointMismatch => f.write_str(
                "endpoint mismatch: witness does not run from the initial to the target state",
            ),
            RejectReason::DepthExceeded(d) => {
                write!(f, "depth exceeded: power depth {d} > {MAX_WITNESS_DEPTH}")
            }
            RejectReason::Infeasible(v) => write!(f, "infeasible: {v}"),
            RejectReason::TargetNotCovered(c) => {
                write!(f, "target not covered: final counters {}", c.counters())
            }
            RejectReason::DeclaredFinalMismatch { declared, actual } => write!(
                f,
                "declared final mismatch: declared {}, reached {}",
                declared.counters(),
                actual.counters()
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CheckOutcome {
    Accept(Config),
    Reject(RejectReason),
}

impl CheckOutcome {
    pub fn is_accept(&self) -> bool {
        matches!(self, CheckOutcome::Accept(_))
    }
}

/// Accepts iff the witness runs from the initial state to the target state,
/// has power depth at most two, stays non-negative from the initial
/// configuration and ends covering the target. Never expands the witness.
pub fn check_witness(inst: &CoverInstance, w: &Witness) -> CheckOutcome {
    let summary = match summarize(&inst.vass, &w.expr) {
        Ok(s) => s,
        Err(e) => return CheckOutcome::Reject(RejectReason::Structural(e)),
    };
    let ends_ok = match (summary.first, summary.last) {
        (Some(a), Some(b)) => a == inst.initial.state && b == inst.target.state,
        _ => inst.initial.state == inst.target.state,
    };
    if !ends_ok {
        return CheckOutcome::Reject(RejectReason::EndpointMismatch);
    }
    let depth = w.expr.power_depth();
    if depth > MAX_WITNESS_DEPTH {
        return CheckOutcome::Reject(RejectReason::DepthExceeded(depth));
    }
    let fin = match feasible_from(&inst.vass, &w.expr, &inst.initial) {
        Ok(Feasibility::Reached(c)) => c,
        Ok(Feasibility::Violation(v)) => return CheckOutcome::Reject(RejectReason::Infeasible(v)),
        Err(e) => return CheckOutcome::Reject(RejectReason::Structural(e)),
    };
    if !fin.covers(&inst.target) {
        return CheckOutcome::Reject(RejectReason::TargetNotCovered(fin));
    }
    if let Some(d) = &w.declared_final {
        if *d != fin {
            return CheckOutcome::Reject(RejectReason::DeclaredFinalMismatch {
                declared: d.clone(),
                actual: fin,
            });
        }
    }
    CheckOutcome::Accept(fin)
}
