//! Coverability verdicts with compressed witnesses.
//!
//! The verdict always comes from the backward oracle. For coverable
//! instances the solver then looks for a witness of power depth at most two
//! in four phases:
//!
//! 1. trivial: the target is already covered, the witness is empty;
//! 2. flat: a skeleton `τ₀ γ₁^{e₁} ⋯ γ_k^{e_k} τ_k` with exponents from
//!    [`ilp::exponent_feasibility`];
//! 3. pumped: `ρ σ^x τ′` where `ρ` and `σ` are instantiated skeletons,
//!    `eff(σ) > 0`, and `τ′` is a flat tail from the pumped configuration;
//! 4. fallback: the oracle's covering run compressed into a linear form.
//!
//! Every emitted witness has passed [`check_witness`].

pub mod ilp;
pub mod lp;
pub mod skeleton;

use std::ops::ControlFlow;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::model::{effect, simulate, Config, Counters, CoverInstance, SimOutcome, StateId};
use crate::oracle::{backward_cover_with, BackwardOptions, BackwardResult, MinBasis};
use crate::path::PathExpr;
use crate::toolkit::cycles::CycleTable;
use crate::toolkit::decompose::positive_cycle_decomposition;
use crate::toolkit::linear_form::greedy_linear_form;
use crate::toolkit::reshuffle::{reshuffle_with, ReshuffleResult};
use crate::toolkit::tail::semi_positive_tail;
use crate::witness::{check_witness, CheckOutcome, Witness};

use ilp::{add_skeleton, AffineCounters, IlpError, System};
use skeleton::{
    for_each_skeleton, for_each_skeleton_of_size, max_size, CycleChoices, Skeleton, SkeletonBound,
};

pub use ilp::exponent_feasibility;
pub use skeleton::enumerate_skeletons;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Budget {
    pub max_width: usize,
    /// `None` means `|Q| + 4`.
    pub max_skeleton_path_len: Option<usize>,
    /// `None` means `max(2·(|V|max + |u|max + |v|max)², 2¹⁶)`.
    pub exp_bound: Option<BigUint>,
    /// Exponent `b` in `B = (|V|max + |u|max + |v|max)^b`.
    pub pump_exponent_b: u32,
    pub wall_clock: Option<std::time::Duration>,
    /// Skeletons (or skeleton pairs) tried per phase.
    pub max_skeletons: u64,
    /// Search nodes per exponent problem.
    pub ilp_nodes: u64,
    /// Longest oracle run the fallback will compress.
    pub max_covering_path: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_width: 4,
            max_skeleton_path_len: None,
            exp_bound: None,
            pump_exponent_b: 4,
            wall_clock: None,
            max_skeletons: 20_000,
            ilp_nodes: 20_000,
            max_covering_path: 1 << 20,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Phase {
    Trivial,
    Flat,
    Pumped,
    Fallback,
}

impl Phase {
    pub fn name(self) -> &'static str {
        match self {
            Phase::Trivial => "trivial",
            Phase::Flat => "flat",
            Phase::Pumped => "pumped",
            Phase::Fallback => "fallback",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BudgetReport {
    pub skeletons_tried: u64,
    pub ilp_exhausted: u64,
    pub timed_out: bool,
    pub notes: Vec<String>,
}

impl std::fmt::Display for BudgetReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{} skeletons tried, {} exponent searches exhausted",
            self.skeletons_tried, self.ilp_exhausted
        )?;
        if self.timed_out {
            write!(f, ", wall clock exceeded")?;
        }
        for n in &self.notes {
            write!(f, "; {n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Coverable(Witness),
    NotCoverable,
    CoverableWitnessUnknown(BudgetReport),
}

impl Verdict {
    pub fn word(&self) -> &'static str {
        match self {
            Verdict::Coverable(_) => "coverable",
            Verdict::NotCoverable => "not-coverable",
            Verdict::CoverableWitnessUnknown(_) => "coverable-witness-unknown",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveStats {
    pub phase: Option<Phase>,
    pub oracle_iterations: u64,
    pub basis_size: usize,
    pub report: BudgetReport,
}

pub fn solve(inst: &CoverInstance, budget: &Budget) -> Verdict {
    solve_with_stats(inst, budget).0
}

pub fn solve_with_stats(inst: &CoverInstance, budget: &Budget) -> (Verdict, SolveStats) {
    let oracle = backward_cover_with(
        inst,
        BackwardOptions {
            stop_when_covered: false,
        },
    );
    let mut stats = SolveStats {
        phase: None,
        oracle_iterations: oracle.iterations,
        basis_size: oracle.basis.elements.len(),
        report: BudgetReport::default(),
    };
    if !oracle.coverable {
        return (Verdict::NotCoverable, stats);
    }
    let mut search = Search::new(inst, budget, &oracle);
    let found = search.run();
    stats.report = search.report;
    match found {
        Some((w, phase)) => {
            stats.phase = Some(phase);
            (Verdict::Coverable(w), stats)
        }
        None => (
            Verdict::CoverableWitnessUnknown(stats.report.clone()),
            stats,
        ),
    }
}

/// A witness for a coverable instance, or `None` when the search budget
/// runs out (or the instance is not coverable).
pub fn synthesize_witness(inst: &CoverInstance, budget: &Budget) -> Option<Witness> {
    match solve(inst, budget) {
        Verdict::Coverable(w) => Some(w),
        _ => None,
    }
}

fn max_abs(c: &Counters) -> BigInt {
    c.bin.abs().max(c.una.abs())
}

/// `|V|max + |u|max + |v|max`.
fn size_sum(inst: &CoverInstance) -> BigInt {
    inst.vass.max_abs_update() + max_abs(inst.initial.counters()) + max_abs(inst.target.counters())
}

pub fn default_exp_bound(inst: &CoverInstance) -> BigUint {
    let s = size_sum(inst);
    let b = (BigInt::from(2) * &s * &s).to_biguint().unwrap_or_default();
    b.max(BigUint::from(1u32) << 16)
}

/// `4·B·|Q|²·|V|max²` with `B = (|V|max + |u|max + |v|max)^b`.
pub fn pump_ceiling(inst: &CoverInstance, b: u32) -> BigInt {
    let q = BigInt::from(inst.vass.num_states());
    let vmax = inst.vass.max_abs_update();
    BigInt::from(4) * size_sum(inst).pow(b) * &q * &q * &vmax * &vmax
}

/// Least `x >= 1` with `c + x·eff >= b`, if any.
fn least_pump(c: &Counters, eff: &Counters, b: &Counters) -> Option<BigInt> {
    let mut x = BigInt::one();
    for (ci, ei, bi) in [(&c.bin, &eff.bin, &b.bin), (&c.una, &eff.una, &b.una)] {
        if ei.is_zero() {
            if ci < bi {
                return None;
            }
        } else {
            x = x.max((bi - ci).div_ceil(ei));
        }
    }
    Some(x)
}

/// Longest oracle run handed to the positive cycle decomposition.
const DECOMPOSE_RUN_MAX: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Growth {
    Both,
    Binary,
    Unary,
}

struct Search<'a> {
    inst: &'a CoverInstance,
    oracle: &'a BackwardResult,
    budget: &'a Budget,
    table: CycleTable,
    choices: CycleChoices,
    bound: SkeletonBound,
    exp_bound: BigUint,
    deadline: Option<std::time::Instant>,
    report: BudgetReport,
}

impl<'a> Search<'a> {
    fn new(inst: &'a CoverInstance, budget: &'a Budget, oracle: &'a BackwardResult) -> Self {
        let table = CycleTable::new(&inst.vass);
        let choices = CycleChoices::new(&inst.vass, &table);
        let bound = SkeletonBound {
            path_len: budget
                .max_skeleton_path_len
                .unwrap_or(inst.vass.num_states() + 4),
            width: budget.max_width,
        };
        // Instant::now is only touched when a deadline is requested; it is
        // unavailable on wasm32-unknown-unknown.
        let deadline = budget.wall_clock.map(|d| std::time::Instant::now() + d);
        Search {
            inst,
            oracle,
            budget,
            table,
            choices,
            bound,
            exp_bound: budget
                .exp_bound
                .clone()
                .unwrap_or_else(|| default_exp_bound(inst)),
            deadline,
            report: BudgetReport::default(),
        }
    }

    fn out_of_time(&mut self) -> bool {
        let late = self
            .deadline
            .is_some_and(|d| std::time::Instant::now() >= d);
        self.report.timed_out |= late;
        late
    }

    fn basis(&self) -> &MinBasis {
        &self.oracle.basis
    }

    fn accept(&self, expr: PathExpr) -> Option<Witness> {
        let w = Witness::new(expr);
        match check_witness(self.inst, &w) {
            CheckOutcome::Accept(_) => Some(w),
            CheckOutcome::Reject(r) => {
                log::warn!("discarding candidate witness: {r}");
                None
            }
        }
    }

    fn run(&mut self) -> Option<(Witness, Phase)> {
        let inst = self.inst;
        if inst.initial.state == inst.target.state && inst.initial.covers(&inst.target) {
            return self.accept(PathExpr::empty()).map(|w| (w, Phase::Trivial));
        }
        let cap = self.budget.max_skeletons;
        if let Some(e) = self.flat(&inst.initial.clone(), &inst.target.clone(), cap) {
            if let Some(w) = self.accept(e) {
                return Some((w, Phase::Flat));
            }
        }
        if let Some(w) = self.pumped() {
            return Some((w, Phase::Pumped));
        }
        self.fallback().map(|w| (w, Phase::Fallback))
    }

    fn solve_system(&mut self, sys: &System) -> Option<Vec<BigInt>> {
        match sys.solve(self.budget.ilp_nodes) {
            Ok(x) => x,
            Err(IlpError::Exhausted(_)) => {
                self.report.ilp_exhausted += 1;
                None
            }
            Err(e) => {
                self.report.notes.push(e.to_string());
                None
            }
        }
    }

    /// Flat expression from `from` covering `target`, trying at most `cap`
    /// skeletons.
    fn flat(&mut self, from: &Config, target: &Config, cap: u64) -> Option<PathExpr> {
        let vass: &'a crate::model::Vass = &self.inst.vass;
        let choices = self.choices.clone();
        let bound = self.bound;
        let exp_bound = BigInt::from(self.exp_bound.clone());
        let mut tried = 0u64;
        let mut found = None;
        let _ = for_each_skeleton(
            vass,
            &choices,
            from.state,
            Some(target.state),
            bound,
            |sk| {
                tried += 1;
                if tried > cap || (tried.is_multiple_of(256) && self.out_of_time()) {
                    return ControlFlow::Break(());
                }
                let mut sys = System::default();
                let entry = AffineCounters::constant(from.counters(), 0);
                let Ok((mut exit, _)) = add_skeleton(vass, &mut sys, sk, &entry, &exp_bound) else {
                    return ControlFlow::Continue(());
                };
                exit.widen(sys.nvars());
                sys.require_nonneg(
                    &exit.sub(&AffineCounters::constant(target.counters(), sys.nvars())),
                );
                if let Some(x) = self.solve_system(&sys) {
                    let exps: Vec<BigUint> = x.iter().map(|v| v.to_biguint().unwrap()).collect();
                    found = Some(sk.instantiate(&exps));
                    return ControlFlow::Break(());
                }
                ControlFlow::Continue(())
            },
        );
        self.report.skeletons_tried += tried.min(cap);
        found
    }

    /// `ρ σ^x τ′` read off a positive cycle decomposition of the oracle's
    /// covering run, when that run is short enough to transform.
    fn pumped_from_run(&mut self) -> Option<Witness> {
        let len = self.oracle.covering_path_len()?;
        if len > DECOMPOSE_RUN_MAX {
            return None;
        }
        let path = self.oracle.covering_path(len)?;
        let vass: &'a crate::model::Vass = &self.inst.vass;
        let pd = match positive_cycle_decomposition(vass, &self.inst.initial, &path) {
            Ok(Some(pd)) => pd,
            Ok(None) => return None,
            Err(e) => {
                self.report
                    .notes
                    .push(format!("positive decomposition: {e}"));
                return None;
            }
        };
        let c = match simulate(vass, &self.inst.initial, &pd.decomposition.prefix).ok()? {
            SimOutcome::Reached(c) => c,
            SimOutcome::FailureAt { .. } => return None,
        };
        let eff = effect(vass, &pd.decomposition.cycle).ok()?;
        let growth = if eff.bin.is_positive() && eff.una.is_positive() {
            Growth::Both
        } else if eff.bin.is_positive() {
            Growth::Binary
        } else {
            Growth::Unary
        };
        self.pump_and_tail(
            &c,
            &eff,
            growth,
            pd.prefix_form.to_expr(),
            pd.cycle_form.to_expr(),
        )
    }

    fn pumped(&mut self) -> Option<Witness> {
        if let Some(w) = self.pumped_from_run() {
            return Some(w);
        }
        let vass: &'a crate::model::Vass = &self.inst.vass;
        let start = self.inst.initial.clone();
        let choices = self.choices.clone();
        let bound = self.bound;
        let total_max = 2 * max_size(&choices, bound);
        let cap = self.budget.max_skeletons;
        let mut tried = 0u64;
        let mut found = None;
        'outer: for total in 1..=total_max {
            for rho_size in 0..total {
                let sigma_size = total - rho_size;
                let mut rhos = Vec::new();
                let _ = for_each_skeleton_of_size(
                    vass,
                    &choices,
                    start.state,
                    None,
                    bound,
                    rho_size,
                    |sk| {
                        rhos.push(sk.clone());
                        ControlFlow::Continue(())
                    },
                );
                for rho in rhos {
                    let p = rho.last_state(vass).ok().flatten().unwrap_or(start.state);
                    if self.basis().elements_at(p).next().is_none() {
                        continue;
                    }
                    let mut sigmas = Vec::new();
                    let _ = for_each_skeleton_of_size(
                        vass,
                        &choices,
                        p,
                        Some(p),
                        bound,
                        sigma_size,
                        |sk| {
                            sigmas.push(sk.clone());
                            ControlFlow::Continue(())
                        },
                    );
                    for sigma in sigmas {
                        tried += 1;
                        if tried > cap || (tried.is_multiple_of(64) && self.out_of_time()) {
                            break 'outer;
                        }
                        if let Some(w) = self.try_pump(&start, p, &rho, &sigma) {
                            found = Some(w);
                            break 'outer;
                        }
                    }
                }
            }
        }
        self.report.skeletons_tried += tried.min(cap);
        found
    }

    fn try_pump(
        &mut self,
        start: &Config,
        p: StateId,
        rho: &Skeleton,
        sigma: &Skeleton,
    ) -> Option<Witness> {
        let vass: &'a crate::model::Vass = &self.inst.vass;
        let exp_bound = BigInt::from(self.exp_bound.clone());
        let umin = self.basis().elements_at(p).map(|c| c.una().clone()).min()?;
        let bmin = self.basis().elements_at(p).map(|c| c.bin().clone()).min()?;
        for growth in [Growth::Both, Growth::Binary, Growth::Unary] {
            let mut sys = System::default();
            let entry = AffineCounters::constant(start.counters(), 0);
            let (mut mid, rho_vars) = add_skeleton(vass, &mut sys, rho, &entry, &exp_bound).ok()?;
            mid.widen(sys.nvars());
            let (mut exit, sigma_vars) =
                add_skeleton(vass, &mut sys, sigma, &mid, &exp_bound).ok()?;
            mid.widen(sys.nvars());
            exit.widen(sys.nvars());
            let eff = exit.sub(&mid);
            let n = sys.nvars();
            let one = BigInt::one();
            let zero = BigInt::zero();
            let (lb, lu) = match growth {
                Growth::Both => (&one, &one),
                Growth::Binary => (&one, &zero),
                Growth::Unary => (&zero, &one),
            };
            sys.require(eff.bin.plus_const(&-lb));
            sys.require(eff.una.plus_const(&-lu));
            match growth {
                Growth::Both => {}
                Growth::Binary => sys.require(mid.una.plus_const(&-&umin)),
                Growth::Unary => sys.require(mid.bin.plus_const(&-&bmin)),
            }
            debug_assert_eq!(n, sys.nvars());
            let Some(x) = self.solve_system(&sys) else {
                continue;
            };
            let to_u = |ix: &[usize]| -> Vec<BigUint> {
                ix.iter().map(|&i| x[i].to_biguint().unwrap()).collect()
            };
            let rho_expr = rho.instantiate(&to_u(&rho_vars));
            let sigma_expr = sigma.instantiate(&to_u(&sigma_vars));
            let c = Config::from_counters(p, mid.eval(&x)).ok()?;
            let e = eff.eval(&x);
            if let Some(w) = self.pump_and_tail(&c, &e, growth, rho_expr, sigma_expr) {
                return Some(w);
            }
        }
        None
    }

    /// Least sufficient pump count by doubling and bisection, with a flat
    /// tail from the pumped configuration.
    fn pump_and_tail(
        &mut self,
        c: &Config,
        eff: &Counters,
        growth: Growth,
        rho: PathExpr,
        sigma: PathExpr,
    ) -> Option<Witness> {
        let x_min = self
            .basis()
            .elements_at(c.state)
            .filter_map(|b| least_pump(c.counters(), eff, b.counters()))
            .min()?;
        let ceiling = pump_ceiling(self.inst, self.budget.pump_exponent_b).max(x_min.clone());
        let mut lo = x_min.clone() - 1;
        let mut hi = x_min;
        let mut best;
        loop {
            if let Some(t) = self.tail_at(c, eff, &hi, growth) {
                best = (hi.clone(), t);
                break;
            }
            if hi >= ceiling || self.out_of_time() {
                return None;
            }
            lo = hi.clone();
            hi = (hi * BigInt::from(2)).min(ceiling.clone());
        }
        while &hi - &lo > BigInt::one() {
            let mid: BigInt = (&lo + &hi) / 2;
            match self.tail_at(c, eff, &mid, growth) {
                Some(t) => {
                    hi = mid.clone();
                    best = (mid, t);
                }
                None => lo = mid,
            }
        }
        let (x, tail) = best;
        let expr = PathExpr::seq([rho, PathExpr::power(sigma, x.to_biguint().unwrap()), tail])
            .normalized();
        self.accept(expr)
    }

    fn tail_at(
        &mut self,
        c: &Config,
        eff: &Counters,
        x: &BigInt,
        growth: Growth,
    ) -> Option<PathExpr> {
        let pumped = Config::from_counters(c.state, c.counters().add(&eff.scale(x))).ok()?;
        let target = self.inst.target.clone();
        let vass: &'a crate::model::Vass = &self.inst.vass;
        let tail = match growth {
            Growth::Unary => semi_positive_tail(
                &vass.flipped(),
                &pumped.flipped(),
                &target.flipped(),
                &self.exp_bound,
            ),
            _ => semi_positive_tail(vass, &pumped, &target, &self.exp_bound),
        };
        if let Ok(Some(f)) = tail {
            return Some(f.to_expr());
        }
        let cap = (self.budget.max_skeletons / 16).max(64);
        self.flat(&pumped, &target, cap)
    }

    fn fallback(&mut self) -> Option<Witness> {
        let path = self.oracle.covering_path(self.budget.max_covering_path)?;
        let vass: &'a crate::model::Vass = &self.inst.vass;
        if path.len() <= 4096 {
            if let Ok(r) = reshuffle_with(vass, &self.table, &self.inst.initial, &path) {
                if let ReshuffleResult::Narrow(f) = r.result {
                    if let Some(w) = self.accept(f.to_expr()) {
                        return Some(w);
                    }
                }
            }
        }
        let f = greedy_linear_form(vass, &path).ok()?;
        if f.exps.iter().any(|e| e.to_u64().is_none()) {
            return None;
        }
        self.accept(f.to_expr())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::gen::{fig1, fig2};
    use crate::Vass;

    fn witness(v: Verdict) -> Witness {
        match v {
            Verdict::Coverable(w) => w,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn fig1_is_coverable() {
        let inst = fig1();
        let (v, stats) = solve_with_stats(&inst, &Budget::default());
        let w = witness(v);
        assert!(w.expr.power_depth() <= 2);
        assert!(check_witness(&inst, &w).is_accept());
        assert_eq!(stats.phase, Some(Phase::Pumped));
    }

    #[test]
    fn fig2_pumps_canonical_cycle() {
        for n in 1..=3 {
            let inst = fig2(n).unwrap();
            let (v, stats) = solve_with_stats(&inst, &Budget::default());
            let w = witness(v);
            assert_eq!(w.expr.power_depth(), 2, "n = {n}: {:?}", stats);
            match check_witness(&inst, &w) {
                CheckOutcome::Accept(c) => assert!(c.covers(&inst.target)),
                r => panic!("{r:?}"),
            }
        }
    }

    #[test]
    fn no_transitions() {
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        let inst = CoverInstance::new(
            v,
            Config::new(q, 0, 0).unwrap(),
            Config::new(q, 1, 0).unwrap(),
        )
        .unwrap();
        assert_eq!(solve(&inst, &Budget::default()), Verdict::NotCoverable);
    }

    #[test]
    fn trivially_covered() {
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        let inst = CoverInstance::new(
            v,
            Config::new(q, 3, 3).unwrap(),
            Config::new(q, 1, 0).unwrap(),
        )
        .unwrap();
        let (v, stats) = solve_with_stats(&inst, &Budget::default());
        assert_eq!(witness(v).expr, PathExpr::empty());
        assert_eq!(stats.phase, Some(Phase::Trivial));
    }

    #[test]
    fn least_pump_counts() {
        let c = Counters::new(0, 1);
        assert_eq!(
            least_pump(&c, &Counters::new(1, 0), &Counters::new(891, 1)),
            Some(BigInt::from(891))
        );
        assert_eq!(
            least_pump(&c, &Counters::new(1, 0), &Counters::new(1, 2)),
            None
        );
        assert_eq!(
            least_pump(&c, &Counters::new(1, 0), &Counters::new(0, 0)),
            Some(BigInt::one())
        );
    }
}
