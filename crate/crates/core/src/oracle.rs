//! Ground truth: backward coverability over upward-closed sets, and a
//! saturating forward explorer used for cross-checks.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashSet, VecDeque};
use std::fmt::Write as _;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::model::{Config, Counters, CoverInstance, ExplicitPath, StateId, TransitionId, Vass};

/// Minimal elements of an upward-closed set of configurations.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MinBasis {
    pub elements: Vec<Config>,
}

impl MinBasis {
    /// Whether `c` lies in the upward closure.
    pub fn contains(&self, c: &Config) -> bool {
        self.elements.iter().any(|e| c.covers(e))
    }

    pub fn elements_at(&self, s: StateId) -> impl Iterator<Item = &Config> + '_ {
        self.elements.iter().filter(move |e| e.state == s)
    }

    /// One `<state> <bin> <una>` line per element, ordered by state name,
    /// then binary, then unary value.
    pub fn dump(&self, vass: &Vass) -> String {
        let mut rows: Vec<_> = self
            .elements
            .iter()
            .map(|e| (vass.state_name(e.state), e.bin(), e.una()))
            .collect();
        rows.sort();
        let mut out = String::new();
        for (s, b, u) in rows {
            let _ = writeln!(out, "{s} {b} {u}");
        }
        out
    }
}

#[derive(Debug, Clone)]
struct Node {
    state: StateId,
    val: Counters,
    /// Transition taken from this element and the element it leads into.
    succ: Option<(TransitionId, usize)>,
    alive: bool,
}

/// Per-state antichain: binary value → (unary value, node). Unary values
/// strictly decrease as binary values increase.
#[derive(Debug, Clone, Default)]
struct Antichain {
    by_bin: BTreeMap<BigInt, (BigInt, usize)>,
}

impl Antichain {
    /// The element dominated by `v`, if any.
    fn below(&self, v: &Counters) -> Option<usize> {
        let (_, (u, ix)) = self.by_bin.range(..=v.bin.clone()).next_back()?;
        (u <= &v.una).then_some(*ix)
    }

    /// Inserts `v` unless dominated; returns removed nodes on success.
    fn insert(&mut self, v: &Counters, ix: usize) -> Option<Vec<usize>> {
        if self.below(v).is_some() {
            return None;
        }
        let doomed: Vec<BigInt> = self
            .by_bin
            .range(v.bin.clone()..)
            .take_while(|(_, (u, _))| *u >= v.una)
            .map(|(b, _)| b.clone())
            .collect();
        let removed = doomed
            .iter()
            .map(|b| self.by_bin.remove(b).unwrap().1)
            .collect();
        self.by_bin.insert(v.bin.clone(), (v.una.clone(), ix));
        Some(removed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct BackwardOptions {
    /// Stop as soon as the initial configuration is covered. The returned
    /// basis is then only a subset of the fixpoint.
    pub stop_when_covered: bool,
}

#[derive(Debug, Clone)]
pub struct BackwardResult {
    pub coverable: bool,
    pub basis: MinBasis,
    /// Number of basis elements whose predecessors were expanded.
    pub iterations: u64,
    nodes: Vec<Node>,
    hit: Option<usize>,
}

impl BackwardResult {
    /// A covering run read off the predecessor chain, if the instance is
    /// coverable and the run has at most `max_len` steps.
    pub fn covering_path(&self, max_len: usize) -> Option<ExplicitPath> {
        let mut ix = self.hit?;
        let mut out = Vec::new();
        while let Some((t, next)) = self.nodes[ix].succ {
            if out.len() >= max_len {
                return None;
            }
            out.push(t);
            ix = next;
        }
        Some(ExplicitPath(out))
    }

    /// Exact length of the covering run read off the predecessor chain.
    pub fn covering_path_len(&self) -> Option<usize> {
        let mut ix = self.hit?;
        let mut n = 0;
        while let Some((_, next)) = self.nodes[ix].succ {
            n += 1;
            ix = next;
        }
        Some(n)
    }
}

pub fn backward_cover(inst: &CoverInstance) -> BackwardResult {
    backward_cover_with(inst, BackwardOptions::default())
}

/// Elements with a smaller counter sum are expanded first; they tend to
/// subsume the larger ones before those are expanded.
fn priority(v: &Counters) -> BigInt {
    &v.bin + &v.una
}

/// Iterates minimal predecessors of `↑target` to a fixpoint. Elements are
/// expanded in order of counter sum, ties by insertion order, and
/// transitions in index order, so the result is deterministic.
pub fn backward_cover_with(inst: &CoverInstance, opts: BackwardOptions) -> BackwardResult {
    let vass = &inst.vass;
    let mut incoming: Vec<Vec<TransitionId>> = vec![Vec::new(); vass.num_states()];
    for (i, t) in vass.transitions().iter().enumerate() {
        incoming[t.to.0].push(TransitionId(i));
    }
    let mut chains: Vec<Antichain> = vec![Antichain::default(); vass.num_states()];
    let mut nodes = vec![Node {
        state: inst.target.state,
        val: inst.target.counters().clone(),
        succ: None,
        alive: true,
    }];
    chains[inst.target.state.0].insert(&nodes[0].val, 0);
    let init = inst.initial.counters();
    let initial_hit = |chains: &Vec<Antichain>| chains[inst.initial.state.0].below(init);
    let mut hit = initial_hit(&chains);
    let mut queue = BinaryHeap::from([Reverse((priority(&nodes[0].val), 0usize))]);
    let mut iterations = 0u64;
    while let Some(Reverse((_, ix))) = queue.pop() {
        if opts.stop_when_covered && hit.is_some() {
            break;
        }
        if !nodes[ix].alive {
            continue;
        }
        iterations += 1;
        let state = nodes[ix].state;
        for &t in &incoming[state.0] {
            let tr = &vass.transitions()[t.0];
            let v = nodes[ix].val.sub(&tr.update).max_zero();
            let new_ix = nodes.len();
            if let Some(removed) = chains[tr.from.0].insert(&v, new_ix) {
                for r in removed {
                    nodes[r].alive = false;
                }
                nodes.push(Node {
                    state: tr.from,
                    val: v,
                    succ: Some((t, ix)),
                    alive: true,
                });
                queue.push(Reverse((priority(&nodes[new_ix].val), new_ix)));
                if tr.from == inst.initial.state && hit.is_none() && init.ge(&nodes[new_ix].val) {
                    hit = Some(new_ix);
                }
            }
        }
    }
    // An element that covered the initial configuration may have been
    // replaced by a smaller one; the replacement covers it too.
    if !opts.stop_when_covered {
        hit = initial_hit(&chains);
    }
    let mut elements = Vec::new();
    for (s, ch) in chains.iter().enumerate() {
        for (b, (u, _)) in &ch.by_bin {
            elements.push(
                Config::new(StateId(s), b.clone(), u.clone()).expect("basis is non-negative"),
            );
        }
    }
    BackwardResult {
        coverable: hit.is_some(),
        basis: MinBasis { elements },
        iterations,
        nodes,
        hit,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ForwardVerdict {
    Coverable,
    NotCoverableWithinCap,
    Exhausted,
}

/// Breadth-first search where counter values above the caps saturate at the
/// caps. A `Coverable` answer is always genuine when the caps are at least
/// `target + |T|max`.
pub fn forward_explore(
    inst: &CoverInstance,
    cap_bin: &BigInt,
    cap_una: &BigInt,
    max_configs: usize,
) -> ForwardVerdict {
    let cap = Counters {
        bin: cap_bin.clone(),
        una: cap_una.clone(),
    };
    let clamp = |c: Counters| c.min(&cap);
    let start = (inst.initial.state, clamp(inst.initial.counters().clone()));
    let mut seen: HashSet<(StateId, Counters)> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([start]);
    let target = inst.target.counters();
    while let Some((s, v)) = queue.pop_front() {
        if s == inst.target.state && v.ge(target) {
            return ForwardVerdict::Coverable;
        }
        for (_, t) in inst.vass.outgoing(s) {
            let w = v.add(&t.update);
            if !w.is_nonneg() {
                continue;
            }
            let next = (t.to, clamp(w));
            if !seen.contains(&next) {
                if seen.len() >= max_configs {
                    return ForwardVerdict::Exhausted;
                }
                seen.insert(next.clone());
                queue.push_back(next);
            }
        }
    }
    ForwardVerdict::NotCoverableWithinCap
}

/// Caps for [`forward_explore`] satisfying its soundness precondition.
pub fn default_caps(inst: &CoverInstance) -> (BigInt, BigInt) {
    let m = inst.vass.max_abs_update();
    let slack = if m.is_zero() { BigInt::from(1) } else { m };
    (inst.target.bin() + &slack, inst.target.una() + &slack)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::simulate;
    use crate::model::tests::fig1_vass;
    use crate::model::SimOutcome;

    fn single(loops: &[(i64, i64)], init: (i64, i64), target: (i64, i64)) -> CoverInstance {
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        for &(b, u) in loops {
            v.add_transition(q, q, b, u).unwrap();
        }
        CoverInstance::new(
            v,
            Config::new(q, init.0, init.1).unwrap(),
            Config::new(q, target.0, target.1).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn increment_loop() {
        let inst = single(&[(1, 0)], (0, 0), (3, 0));
        let r = backward_cover(&inst);
        assert!(r.coverable);
        assert_eq!(
            r.basis.elements,
            vec![Config::new(StateId(0), 0, 0).unwrap()]
        );
        assert_eq!(r.covering_path(10).unwrap().len(), 3);
    }

    #[test]
    fn no_transitions() {
        let inst = single(&[], (0, 0), (1, 0));
        let r = backward_cover(&inst);
        assert!(!r.coverable);
        assert_eq!(
            r.basis.elements,
            vec![Config::new(StateId(0), 1, 0).unwrap()]
        );
        assert_eq!(r.basis.dump(&inst.vass), "q 1 0\n");
    }

    #[test]
    fn fig1_is_coverable_and_chain_is_a_run() {
        let v = fig1_vass();
        let q = v.state_id("q").unwrap();
        let inst = CoverInstance::new(
            v,
            Config::new(q, 0, 1).unwrap(),
            Config::new(q, 0, 10).unwrap(),
        )
        .unwrap();
        let r = backward_cover(&inst);
        assert!(r.coverable);
        let path = r.covering_path(100_000).unwrap();
        match simulate(&inst.vass, &inst.initial, &path).unwrap() {
            SimOutcome::Reached(c) => assert!(c.covers(&inst.target)),
            other => panic!("{other:?}"),
        }
        let early = backward_cover_with(
            &inst,
            BackwardOptions {
                stop_when_covered: true,
            },
        );
        assert!(early.coverable);
    }

    #[test]
    fn basis_is_antichain() {
        let inst = single(&[(3, -1), (-2, 1), (-1, 0)], (0, 0), (4, 3));
        let r = backward_cover(&inst);
        for (i, a) in r.basis.elements.iter().enumerate() {
            for (j, b) in r.basis.elements.iter().enumerate() {
                if i != j {
                    assert!(!a.covers(b), "{a:?} covers {b:?}");
                }
            }
        }
    }

    #[test]
    fn forward_examples() {
        let v = fig1_vass();
        let q = v.state_id("q").unwrap();
        let inst = CoverInstance::new(
            v,
            Config::new(q, 0, 1).unwrap(),
            Config::new(q, 0, 10).unwrap(),
        )
        .unwrap();
        assert_eq!(
            forward_explore(&inst, &BigInt::from(200), &BigInt::from(20), 1_000_000),
            ForwardVerdict::Coverable
        );
        let empty = single(&[], (0, 0), (1, 0));
        assert_eq!(
            forward_explore(&empty, &BigInt::from(2), &BigInt::from(2), 100),
            ForwardVerdict::NotCoverableWithinCap
        );
    }
}
