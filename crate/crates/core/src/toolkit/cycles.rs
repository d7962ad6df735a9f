//! Short cycles, their characterisations and the replacement relation.

use std::collections::HashMap;

use crate::model::{
    effect, guard, nadir_state, Counters, ExplicitPath, StateId, TransitionId, Vass,
};
use crate::toolkit::bounds::PolyBounds;
use crate::toolkit::ToolkitError;

/// Start state, binary-nadir state, effect, guard and length of a cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CycleCharacterization {
    pub start: StateId,
    pub nadir: StateId,
    pub eff: Counters,
    pub grd: Counters,
    pub len: usize,
}

impl CycleCharacterization {
    pub fn of(vass: &Vass, cycle: &ExplicitPath) -> Result<Self, ToolkitError> {
        if !cycle.is_cycle(vass)? {
            return Err(ToolkitError::NotACycle);
        }
        Ok(CycleCharacterization {
            start: cycle.first_state(vass)?.expect("cycles are non-empty"),
            nadir: nadir_state(vass, cycle)?,
            eff: effect(vass, cycle)?,
            grd: guard(vass, cycle)?,
            len: cycle.len(),
        })
    }

    /// `other ≺ self`: same start and nadir, effect and guard at least as
    /// large, length at most as large, and the two differ.
    pub fn dominates(&self, other: &CycleCharacterization) -> bool {
        self.start == other.start
            && self.nadir == other.nadir
            && self.eff.ge(&other.eff)
            && self.grd.ge(&other.grd)
            && self.len <= other.len
            && self != other
    }
}

/// Monotone: effect `>= 0` or `<= 0` componentwise.
pub fn is_monotone(eff: &Counters) -> bool {
    eff.is_monotone()
}

fn walks(
    vass: &Vass,
    at: StateId,
    cur: StateId,
    len: usize,
    simple: bool,
    visited: &mut Vec<StateId>,
    stack: &mut Vec<TransitionId>,
    out: &mut Vec<ExplicitPath>,
) {
    if stack.len() == len {
        if cur == at {
            out.push(ExplicitPath(stack.clone()));
        }
        return;
    }
    for (id, t) in vass.outgoing(cur) {
        let closes = stack.len() + 1 == len;
        if simple && !closes && (t.to == at || visited.contains(&t.to)) {
            continue;
        }
        if !simple && closes && t.to != at {
            continue;
        }
        stack.push(id);
        visited.push(t.to);
        walks(vass, at, t.to, len, simple, visited, stack, out);
        visited.pop();
        stack.pop();
    }
}

/// Every closed walk from `at` of length `1..=|Q|`, by length and then by
/// transition-index order.
pub fn enumerate_short_cycles(vass: &Vass, at: StateId) -> Vec<ExplicitPath> {
    let mut out = Vec::new();
    for len in 1..=vass.num_states() {
        walks(
            vass,
            at,
            at,
            len,
            false,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut out,
        );
    }
    out
}

/// Cycles from `at` that visit no state twice, `at` only at both ends.
pub fn enumerate_simple_cycles(vass: &Vass, at: StateId) -> Vec<ExplicitPath> {
    let mut out = Vec::new();
    for len in 1..=vass.num_states() {
        walks(
            vass,
            at,
            at,
            len,
            true,
            &mut Vec::new(),
            &mut Vec::new(),
            &mut out,
        );
    }
    out
}

/// Paths from `from` to `to` that visit no state twice, by length and then
/// by transition-index order. Includes the empty path when `from == to`.
pub fn enumerate_simple_paths(vass: &Vass, from: StateId, to: StateId) -> Vec<ExplicitPath> {
    fn go(
        vass: &Vass,
        to: StateId,
        cur: StateId,
        len: usize,
        visited: &mut Vec<StateId>,
        stack: &mut Vec<TransitionId>,
        out: &mut Vec<ExplicitPath>,
    ) {
        if stack.len() == len {
            if cur == to {
                out.push(ExplicitPath(stack.clone()));
            }
            return;
        }
        for (id, t) in vass.outgoing(cur) {
            if visited.contains(&t.to) {
                continue;
            }
            stack.push(id);
            visited.push(t.to);
            go(vass, to, t.to, len, visited, stack, out);
            visited.pop();
            stack.pop();
        }
    }
    let mut out = Vec::new();
    for len in 0..vass.num_states() {
        go(
            vass,
            to,
            from,
            len,
            &mut vec![from],
            &mut Vec::new(),
            &mut out,
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct CycleInfo {
    pub cycle: ExplicitPath,
    pub ch: CycleCharacterization,
    pub irreplaceable: bool,
}

#[derive(Debug, Clone)]
pub struct CatalogEntry {
    pub characterization: CycleCharacterization,
    pub representative: ExplicitPath,
}

/// All short cycles of a VASS with their characterisations, computed once.
#[derive(Debug, Clone)]
pub struct CycleTable {
    per_state: Vec<Vec<CycleInfo>>,
    catalog: Vec<CatalogEntry>,
    by_char: HashMap<CycleCharacterization, usize>,
}

impl CycleTable {
    pub fn new(vass: &Vass) -> Self {
        let mut per_state = Vec::with_capacity(vass.num_states());
        for s in vass.states() {
            let mut infos: Vec<CycleInfo> = enumerate_short_cycles(vass, s)
                .into_iter()
                .map(|c| {
                    let ch = CycleCharacterization::of(vass, &c).expect("closed walk");
                    CycleInfo {
                        cycle: c,
                        ch,
                        irreplaceable: true,
                    }
                })
                .collect();
            for i in 0..infos.len() {
                let dominated = infos.iter().any(|o| o.ch.dominates(&infos[i].ch));
                infos[i].irreplaceable = !dominated;
            }
            per_state.push(infos);
        }
        let mut catalog = Vec::new();
        let mut by_char = HashMap::new();
        for info in per_state.iter().flatten().filter(|i| i.irreplaceable) {
            by_char.entry(info.ch.clone()).or_insert_with(|| {
                catalog.push(CatalogEntry {
                    characterization: info.ch.clone(),
                    representative: info.cycle.clone(),
                });
                catalog.len() - 1
            });
        }
        let bound = PolyBounds::new(vass.num_states()).r;
        assert!(
            num_bigint::BigUint::from(catalog.len()) <= bound,
            "irreplaceable catalog has {} entries, more than R = {bound}",
            catalog.len()
        );
        CycleTable {
            per_state,
            catalog,
            by_char,
        }
    }

    pub fn cycles_at(&self, s: StateId) -> &[CycleInfo] {
        &self.per_state[s.0]
    }

    pub fn catalog(&self) -> &[CatalogEntry] {
        &self.catalog
    }

    /// The catalog representative sharing `ch`, if `ch` is irreplaceable.
    pub fn representative(&self, ch: &CycleCharacterization) -> Option<&ExplicitPath> {
        self.by_char
            .get(ch)
            .map(|&i| &self.catalog[i].representative)
    }

    pub fn is_irreplaceable(&self, ch: &CycleCharacterization) -> bool {
        !self.per_state[ch.start.0]
            .iter()
            .any(|o| o.ch.dominates(ch))
    }

    /// An irreplaceable short cycle dominating `ch`, preferring shorter and
    /// then lexicographically smaller cycles.
    pub fn replacement_for(&self, ch: &CycleCharacterization) -> Option<&CycleInfo> {
        self.per_state[ch.start.0]
            .iter()
            .filter(|o| o.irreplaceable && o.ch.dominates(ch))
            .min_by(|a, b| (a.cycle.len(), &a.cycle).cmp(&(b.cycle.len(), &b.cycle)))
    }
}

/// A short cycle with the same start and binary-nadir state that strictly
/// dominates `cycle`, itself irreplaceable; `None` if `cycle` is
/// irreplaceable.
pub fn find_replacement(
    vass: &Vass,
    cycle: &ExplicitPath,
) -> Result<Option<ExplicitPath>, ToolkitError> {
    let ch = CycleCharacterization::of(vass, cycle)?;
    let table = CycleTable::new(vass);
    Ok(table.replacement_for(&ch).map(|i| i.cycle.clone()))
}

/// One representative per characterisation of irreplaceable short cycles.
pub fn irreplaceable_catalog(vass: &Vass) -> Vec<CatalogEntry> {
    CycleTable::new(vass).catalog
}
