//! Differential fuzz harness: solver verdicts against the backward oracle.

use std::fmt;

use num_bigint::BigUint;

use crate::io::gen::{derive_seed, gen_random, FuzzEnvelope};
use crate::oracle::backward_cover;
use crate::solver::{solve, Budget, Verdict};
use crate::toolkit::{irreplaceable_catalog, PolyBounds};
use crate::witness::{check_witness, CheckOutcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    /// Both say not coverable.
    AgreeNotCoverable,
    /// Both say coverable and the witness checks.
    AgreeCoverable,
    /// The oracle says coverable, the solver found no witness in budget.
    WitnessUnknown,
    /// The verdicts differ.
    Disagree,
    /// A coverable verdict whose witness the checker rejects.
    BadWitness,
    /// The irreplaceable catalog exceeded `R(|Q|)`.
    CatalogTooLarge,
}

impl Outcome {
    pub fn is_failure(self) -> bool {
        !matches!(self, Outcome::AgreeNotCoverable | Outcome::AgreeCoverable)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CaseResult {
    pub index: u64,
    pub seed: u64,
    pub outcome: Outcome,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FuzzReport {
    pub cases: Vec<CaseResult>,
}

impl FuzzReport {
    pub fn count(&self, o: Outcome) -> usize {
        self.cases.iter().filter(|c| c.outcome == o).count()
    }

    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| c.outcome.is_failure())
    }

    pub fn all_agree(&self) -> bool {
        self.failures().next().is_none()
    }
}

impl fmt::Display for FuzzReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} instances: {} coverable, {} not coverable, {} witness-unknown, {} disagreements, {} bad witnesses, {} catalog violations",
            self.cases.len(),
            self.count(Outcome::AgreeCoverable),
            self.count(Outcome::AgreeNotCoverable),
            self.count(Outcome::WitnessUnknown),
            self.count(Outcome::Disagree),
            self.count(Outcome::BadWitness),
            self.count(Outcome::CatalogTooLarge),
        )
    }
}

/// Runs one instance through the oracle, the solver and the checker.
pub fn run_case(env: &FuzzEnvelope, index: u64, budget: &Budget) -> CaseResult {
    let seed = derive_seed(env.seed, index);
    let inst = gen_random(&env.with_seed(seed));
    let result = |outcome, detail: String| CaseResult {
        index,
        seed,
        outcome,
        detail,
    };
    let r = PolyBounds::new(inst.vass.num_states()).r;
    let catalog = irreplaceable_catalog(&inst.vass).len();
    if BigUint::from(catalog) > r {
        return result(
            Outcome::CatalogTooLarge,
            format!("catalog {catalog} > R = {r}"),
        );
    }
    let oracle = backward_cover(&inst).coverable;
    match (solve(&inst, budget), oracle) {
        (Verdict::NotCoverable, false) => result(Outcome::AgreeNotCoverable, String::new()),
        (Verdict::CoverableWitnessUnknown(rep), true) => {
            result(Outcome::WitnessUnknown, rep.to_string())
        }
        (Verdict::Coverable(w), true) => match check_witness(&inst, &w) {
            CheckOutcome::Accept(_) => result(Outcome::AgreeCoverable, String::new()),
            CheckOutcome::Reject(why) => result(Outcome::BadWitness, why.to_string()),
        },
        (v, o) => result(
            Outcome::Disagree,
            format!(
                "solver says {}, oracle says {}",
                v.word(),
                if o { "coverable" } else { "not-coverable" }
            ),
        ),
    }
}

/// Runs `count` instances with seeds derived from `env.seed`, on up to
/// `threads` worker threads. Results are in instance order whatever the
/// thread count.
pub fn run_fuzz(env: &FuzzEnvelope, count: u64, budget: &Budget, threads: usize) -> FuzzReport {
    let threads = threads.max(1).min(count.max(1) as usize);
    let mut cases: Vec<Option<CaseResult>> = vec![None; count as usize];
    if threads == 1 {
        for (i, slot) in cases.iter_mut().enumerate() {
            *slot = Some(run_case(env, i as u64, budget));
        }
    } else {
        let chunk = cases.len().div_ceil(threads);
        std::thread::scope(|s| {
            for (c, part) in cases.chunks_mut(chunk).enumerate() {
                s.spawn(move || {
                    for (j, slot) in part.iter_mut().enumerate() {
                        *slot = Some(run_case(env, (c * chunk + j) as u64, budget));
                    }
                });
            }
        });
    }
    FuzzReport {
        cases: cases
            .into_iter()
            .map(|c| c.expect("every case ran"))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_campaign_agrees_and_is_order_stable() {
        let env = FuzzEnvelope::new(3, 4, 5, 4, 11);
        let a = run_fuzz(&env, 24, &Budget::default(), 1);
        let b = run_fuzz(&env, 24, &Budget::default(), 3);
        assert_eq!(a, b);
        assert!(a.all_agree(), "{a}: {:?}", a.failures().collect::<Vec<_>>());
    }

    #[test]
    fn single_state_no_transitions() {
        let env = FuzzEnvelope::new(1, 0, 1, 3, 5);
        let report = run_fuzz(&env, 20, &Budget::default(), 1);
        assert!(report.all_agree());
        for case in &report.cases {
            let inst = gen_random(&env.with_seed(case.seed));
            let expected = inst.initial.covers(&inst.target);
            assert_eq!(case.outcome == Outcome::AgreeCoverable, expected);
        }
    }
}
