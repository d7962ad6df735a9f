//! Skeletons `τ₀ γ₁ τ₁ ⋯ γ_k τ_k` with symbolic exponents and their
//! enumeration by size.

use std::collections::VecDeque;
use std::ops::ControlFlow;

use num_bigint::BigUint;
use num_traits::One;

use crate::model::{ExplicitPath, ModelError, StateId, Vass};
use crate::path::PathExpr;
use crate::toolkit::cycles::{enumerate_short_cycles, CycleTable};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Skeleton {
    pub paths: Vec<ExplicitPath>,
    pub cycles: Vec<ExplicitPath>,
}

impl Skeleton {
    pub fn plain(path: ExplicitPath) -> Self {
        Skeleton {
            paths: vec![path],
            cycles: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.cycles.len()
    }

    pub fn path_len(&self) -> usize {
        self.paths.iter().map(ExplicitPath::len).sum()
    }

    /// `Σ|τ_i| + Σ|γ_i|`.
    pub fn size(&self) -> usize {
        self.path_len() + self.cycles.iter().map(ExplicitPath::len).sum::<usize>()
    }

    /// The path with every exponent set to one.
    pub fn unrolled(&self) -> ExplicitPath {
        let mut out = self.paths[0].clone();
        for i in 0..self.width() {
            out = out.concat(&self.cycles[i]).concat(&self.paths[i + 1]);
        }
        out
    }

    pub fn first_state(&self, vass: &Vass) -> Result<Option<StateId>, ModelError> {
        self.unrolled().first_state(vass)
    }

    pub fn last_state(&self, vass: &Vass) -> Result<Option<StateId>, ModelError> {
        self.unrolled().last_state(vass)
    }

    pub fn validate(&self, vass: &Vass) -> Result<(), String> {
        if self.paths.len() != self.width() + 1 {
            return Err(format!(
                "{} connecting paths for {} cycles",
                self.paths.len(),
                self.width()
            ));
        }
        for (i, c) in self.cycles.iter().enumerate() {
            if !c.is_cycle(vass).map_err(|e| e.to_string())? {
                return Err(format!("cycle {} is not a cycle", i + 1));
            }
        }
        self.unrolled().states(vass).map_err(|e| e.to_string())?;
        Ok(())
    }

    /// Depth-one expression; exponent one is written inline.
    pub fn instantiate(&self, exps: &[BigUint]) -> PathExpr {
        assert_eq!(exps.len(), self.width());
        let mut items: Vec<PathExpr> = Vec::new();
        let atoms = |items: &mut Vec<PathExpr>, p: &ExplicitPath| {
            items.extend(p.steps().iter().map(|&t| PathExpr::Atom(t)))
        };
        atoms(&mut items, &self.paths[0]);
        for i in 0..self.width() {
            if exps[i].is_one() {
                atoms(&mut items, &self.cycles[i]);
            } else {
                items.push(PathExpr::power(
                    PathExpr::from_path(&self.cycles[i]).normalized(),
                    exps[i].clone(),
                ));
            }
            atoms(&mut items, &self.paths[i + 1]);
        }
        PathExpr::Seq(items).normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkeletonBound {
    /// Bound on `Σ|τ_i|`.
    pub path_len: usize,
    /// Bound on `k`.
    pub width: usize,
}

/// Cycles usable at every state: catalog representatives first, then the
/// remaining short cycles.
#[derive(Debug, Clone)]
pub struct CycleChoices {
    per_state: Vec<Vec<ExplicitPath>>,
}

impl CycleChoices {
    pub fn new(vass: &Vass, table: &CycleTable) -> Self {
        let mut per_state: Vec<Vec<ExplicitPath>> = vec![Vec::new(); vass.num_states()];
        for e in table.catalog() {
            per_state[e.characterization.start.0].push(e.representative.clone());
        }
        for s in vass.states() {
            for c in enumerate_short_cycles(vass, s) {
                if !per_state[s.0].contains(&c) {
                    per_state[s.0].push(c);
                }
            }
        }
        CycleChoices { per_state }
    }

    pub fn at(&self, s: StateId) -> &[ExplicitPath] {
        &self.per_state[s.0]
    }

    pub fn max_len(&self) -> usize {
        self.per_state
            .iter()
            .flatten()
            .map(ExplicitPath::len)
            .max()
            .unwrap_or(0)
    }
}

/// Shortest distance from every state to `to`, `usize::MAX` if unreachable.
fn distances_to(vass: &Vass, to: StateId) -> Vec<usize> {
    let mut dist = vec![usize::MAX; vass.num_states()];
    let mut pred: Vec<Vec<StateId>> = vec![Vec::new(); vass.num_states()];
    for t in vass.transitions() {
        pred[t.to.0].push(t.from);
    }
    dist[to.0] = 0;
    let mut queue = VecDeque::from([to]);
    while let Some(s) = queue.pop_front() {
        for &p in &pred[s.0] {
            if dist[p.0] == usize::MAX {
                dist[p.0] = dist[s.0] + 1;
                queue.push_back(p);
            }
        }
    }
    dist
}

struct Walk<'a, F> {
    vass: &'a Vass,
    choices: &'a CycleChoices,
    to: Option<StateId>,
    dist: Option<Vec<usize>>,
    bound: SkeletonBound,
    paths: Vec<ExplicitPath>,
    cycles: Vec<ExplicitPath>,
    /// States visited by the current connecting path.
    tau_states: Vec<StateId>,
    f: F,
}

impl<F: FnMut(&Skeleton) -> ControlFlow<()>> Walk<'_, F> {
    fn go(&mut self, cur: StateId, left: usize, path_left: usize) -> ControlFlow<()> {
        let d = self.dist.as_ref().map_or(0, |d| d[cur.0]);
        if d > left || d > path_left {
            return ControlFlow::Continue(());
        }
        if left == 0 {
            if self.to.is_none_or(|t| t == cur) {
                let sk = Skeleton {
                    paths: self.paths.clone(),
                    cycles: self.cycles.clone(),
                };
                return (self.f)(&sk);
            }
            return ControlFlow::Continue(());
        }
        if path_left > 0 {
            let outs: Vec<_> = self.vass.outgoing(cur).map(|(id, t)| (id, t.to)).collect();
            for (id, next) in outs {
                if self.tau_states.contains(&next) {
                    continue;
                }
                self.paths.last_mut().unwrap().0.push(id);
                self.tau_states.push(next);
                let r = self.go(next, left - 1, path_left - 1);
                self.tau_states.pop();
                self.paths.last_mut().unwrap().0.pop();
                r?;
            }
        }
        if self.cycles.len() < self.bound.width {
            let tau_empty = self.paths.last().unwrap().is_empty();
            for c in self.choices.at(cur).to_vec() {
                if c.len() > left || (tau_empty && self.cycles.last() == Some(&c)) {
                    continue;
                }
                self.cycles.push(c.clone());
                self.paths.push(ExplicitPath::empty());
                let saved = std::mem::replace(&mut self.tau_states, vec![cur]);
                let r = self.go(cur, left - c.len(), path_left);
                self.tau_states = saved;
                self.paths.pop();
                self.cycles.pop();
                r?;
            }
        }
        ControlFlow::Continue(())
    }
}

/// Calls `f` on every skeleton from `from` (ending in `to`, or anywhere
/// when `to` is `None`) of total size exactly `size` within `bound`.
/// Connecting paths are simple; a repeated state inside one would be a
/// cycle with exponent one.
pub fn for_each_skeleton_of_size(
    vass: &Vass,
    choices: &CycleChoices,
    from: StateId,
    to: Option<StateId>,
    bound: SkeletonBound,
    size: usize,
    f: impl FnMut(&Skeleton) -> ControlFlow<()>,
) -> ControlFlow<()> {
    let mut w = Walk {
        vass,
        choices,
        to,
        dist: to.map(|t| distances_to(vass, t)),
        bound,
        paths: vec![ExplicitPath::empty()],
        cycles: Vec::new(),
        tau_states: vec![from],
        f,
    };
    w.go(from, size, bound.path_len)
}

/// Largest skeleton size admitted by `bound`.
pub fn max_size(choices: &CycleChoices, bound: SkeletonBound) -> usize {
    bound.path_len + bound.width * choices.max_len()
}

/// Calls `f` on every skeleton within `bound`, in increasing size.
pub fn for_each_skeleton(
    vass: &Vass,
    choices: &CycleChoices,
    from: StateId,
    to: Option<StateId>,
    bound: SkeletonBound,
    mut f: impl FnMut(&Skeleton) -> ControlFlow<()>,
) -> ControlFlow<()> {
    for size in 0..=max_size(choices, bound) {
        for_each_skeleton_of_size(vass, choices, from, to, bound, size, &mut f)?;
    }
    ControlFlow::Continue(())
}

/// All skeletons from `from` to `to` within `bound`, in increasing size.
pub fn enumerate_skeletons(
    vass: &Vass,
    from: StateId,
    to: StateId,
    bound: SkeletonBound,
) -> Vec<Skeleton> {
    let table = CycleTable::new(vass);
    let choices = CycleChoices::new(vass, &table);
    let mut out = Vec::new();
    let _ = for_each_skeleton(vass, &choices, from, Some(to), bound, |sk| {
        out.push(sk.clone());
        ControlFlow::Continue(())
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::fig1_vass;

    fn sk(paths: &[&[usize]], cycles: &[&[usize]]) -> Skeleton {
        Skeleton {
            paths: paths
                .iter()
                .map(|p| ExplicitPath::from_indices(p))
                .collect(),
            cycles: cycles
                .iter()
                .map(|c| ExplicitPath::from_indices(c))
                .collect(),
        }
    }

    #[test]
    fn fig1_listing() {
        let v = fig1_vass();
        let q = StateId(0);
        let all = enumerate_skeletons(
            &v,
            q,
            q,
            SkeletonBound {
                path_len: 2,
                width: 2,
            },
        );
        assert!(all.contains(&sk(&[&[], &[]], &[&[0]])));
        assert!(all.contains(&sk(&[&[], &[], &[]], &[&[0], &[1]])));
        assert!(!all.contains(&sk(&[&[], &[], &[]], &[&[0], &[0]])));
        let sizes: Vec<usize> = all.iter().map(Skeleton::size).collect();
        assert!(sizes.windows(2).all(|w| w[0] <= w[1]));
        let mut dedup = all.clone();
        dedup.sort_by_key(|s| format!("{s:?}"));
        dedup.dedup();
        assert_eq!(dedup.len(), all.len());
    }

    #[test]
    fn unconnected_states_have_none() {
        let mut v = Vass::new();
        let a = v.add_state("a").unwrap();
        let b = v.add_state("b").unwrap();
        assert!(enumerate_skeletons(
            &v,
            a,
            b,
            SkeletonBound {
                path_len: 0,
                width: 0
            }
        )
        .is_empty());
    }

    #[test]
    fn single_loop_exact() {
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        v.add_transition(q, q, 1, 0).unwrap();
        let all = enumerate_skeletons(
            &v,
            q,
            q,
            SkeletonBound {
                path_len: 0,
                width: 1,
            },
        );
        assert_eq!(all, vec![sk(&[&[]], &[]), sk(&[&[], &[]], &[&[0]])]);
    }

    #[test]
    fn instantiate_writes_powers() {
        let s = sk(&[&[], &[]], &[&[0, 1]]);
        let e = s.instantiate(&[BigUint::from(3u32)]);
        assert_eq!(e.power_depth(), 1);
        assert_eq!(crate::io::serialize_witness(&e), "( #0 #1 )^3");
    }
}
