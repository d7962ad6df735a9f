//! Monotone cycle decompositions `π = ρ σ τ` and the positive variant with
//! `eff(σ) > 0`.

use num_traits::ToPrimitive;

use crate::model::{effect, Config, Counters, ExplicitPath, Vass};
use crate::toolkit::cycles::CycleTable;
use crate::toolkit::linear_form::LinearForm;
use crate::toolkit::replace::final_config;
use crate::toolkit::reshuffle::{reshuffle_with, ReshuffleResult};
use crate::toolkit::ToolkitError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonotoneDecomposition {
    pub prefix: ExplicitPath,
    pub cycle: ExplicitPath,
    pub suffix: ExplicitPath,
}

impl MonotoneDecomposition {
    pub fn whole(&self) -> ExplicitPath {
        self.prefix.concat(&self.cycle).concat(&self.suffix)
    }

    /// `(|ρσ|, |σ|)`.
    pub fn cost(&self) -> (usize, usize) {
        (self.prefix.len() + self.cycle.len(), self.cycle.len())
    }

    /// Whether this is a monotone cycle decomposition of `path`.
    pub fn is_valid_for(&self, vass: &Vass, path: &ExplicitPath) -> Result<bool, ToolkitError> {
        Ok(self.whole() == *path
            && self.cycle.is_cycle(vass)?
            && effect(vass, &self.cycle)?.is_monotone()
            && self.cycle.len() < path.len())
    }
}

fn small_sums(sums: &[Counters]) -> Option<Vec<(i128, i128)>> {
    sums.iter()
        .map(|s| Some((s.bin.to_i128()?, s.una.to_i128()?)))
        .collect()
}

/// The monotone cycle decomposition with the shortest cycle, earliest
/// position first; `None` when the path has none.
pub fn find_monotone_decomposition(
    vass: &Vass,
    path: &ExplicitPath,
) -> Result<Option<MonotoneDecomposition>, ToolkitError> {
    let states = path.states(vass)?;
    let sums = path.prefix_sums(vass)?;
    let m = path.len();
    let small = small_sums(&sums);
    let monotone = |i: usize, j: usize| -> bool {
        match &small {
            Some(s) => {
                let (b, u) = (s[j].0 - s[i].0, s[j].1 - s[i].1);
                (b >= 0 && u >= 0) || (b <= 0 && u <= 0)
            }
            None => sums[j].sub(&sums[i]).is_monotone(),
        }
    };
    for len in 1..m {
        for i in 0..=m - len {
            if states[i] == states[i + len] && monotone(i, i + len) {
                return Ok(Some(MonotoneDecomposition {
                    prefix: path.slice(0, i),
                    cycle: path.slice(i, i + len),
                    suffix: path.slice(i + len, m),
                }));
            }
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositiveDecomposition {
    /// The transformed covering path `ρ σ τ`.
    pub path: ExplicitPath,
    pub decomposition: MonotoneDecomposition,
    /// Narrow linear forms denoting `ρ` and `σ`.
    pub prefix_form: LinearForm,
    pub cycle_form: LinearForm,
}

const DECOMPOSITION_CAP: usize = 100_000;

/// Follows the constructive argument: reshuffle, then lower the cost
/// `(|ρσ|, |σ|)` by re-decomposing `ρ` or `σ`, dropping `σ` whenever its
/// effect is not positive, and finally reshuffle `ρ` and `σ` into narrow
/// forms. Returns `None` when the run (after reshuffling or dropping
/// cycles) has a narrow linear form.
pub fn positive_cycle_decomposition(
    vass: &Vass,
    start: &Config,
    path: &ExplicitPath,
) -> Result<Option<PositiveDecomposition>, ToolkitError> {
    let table = CycleTable::new(vass);
    let original = final_config(vass, start, path)?.ok_or(ToolkitError::Infeasible)?;
    let first = reshuffle_with(vass, &table, start, path)?;
    let mut d = match first.result {
        ReshuffleResult::Narrow(_) => return Ok(None),
        ReshuffleResult::Monotone(d) => d,
    };
    let zero = Counters::zero();
    for _ in 0..DECOMPOSITION_CAP {
        let eff = effect(vass, &d.cycle)?;
        if !(eff.ge(&zero) && eff != zero) {
            let shorter = d.prefix.concat(&d.suffix);
            log::debug!(
                "positive-decomposition drop-cycle len {} -> {}",
                d.whole().len(),
                shorter.len()
            );
            match reshuffle_with(vass, &table, start, &shorter)?.result {
                ReshuffleResult::Narrow(_) => return Ok(None),
                ReshuffleResult::Monotone(next) => d = next,
            }
            continue;
        }
        if let Some(inner) = find_monotone_decomposition(vass, &d.prefix)? {
            log::debug!("positive-decomposition split-prefix cost {:?}", d.cost());
            d = MonotoneDecomposition {
                prefix: inner.prefix,
                cycle: inner.cycle,
                suffix: inner.suffix.concat(&d.cycle).concat(&d.suffix),
            };
            continue;
        }
        if let Some(inner) = find_monotone_decomposition(vass, &d.cycle)? {
            log::debug!("positive-decomposition split-cycle cost {:?}", d.cost());
            d = MonotoneDecomposition {
                prefix: d.prefix.concat(&inner.prefix),
                cycle: inner.cycle,
                suffix: inner.suffix.concat(&d.suffix),
            };
            continue;
        }
        // ρ and σ admit no monotone decomposition; reshuffle them.
        let pre = reshuffle_with(vass, &table, start, &d.prefix)?;
        let prefix_form = match pre.result {
            ReshuffleResult::Narrow(f) => f,
            ReshuffleResult::Monotone(inner) => {
                d = MonotoneDecomposition {
                    prefix: inner.prefix,
                    cycle: inner.cycle,
                    suffix: inner.suffix.concat(&d.cycle).concat(&d.suffix),
                };
                continue;
            }
        };
        let mid = final_config(vass, start, &pre.path)?.ok_or(ToolkitError::Infeasible)?;
        let cyc = reshuffle_with(vass, &table, &mid, &d.cycle)?;
        let cycle_form = match cyc.result {
            ReshuffleResult::Narrow(f) => f,
            ReshuffleResult::Monotone(inner) => {
                d = MonotoneDecomposition {
                    prefix: pre.path.concat(&inner.prefix),
                    cycle: inner.cycle,
                    suffix: inner.suffix.concat(&d.suffix),
                };
                continue;
            }
        };
        let decomposition = MonotoneDecomposition {
            prefix: pre.path,
            cycle: cyc.path,
            suffix: d.suffix,
        };
        let whole = decomposition.whole();
        let fin = final_config(vass, start, &whole)?.ok_or_else(|| {
            ToolkitError::Diagnostic("positive decomposition lost feasibility".into())
        })?;
        let eff = effect(vass, &decomposition.cycle)?;
        if !fin.covers(&original)
            || !(eff.ge(&zero) && eff != zero)
            || !decomposition.is_valid_for(vass, &whole)?
        {
            return Err(ToolkitError::Diagnostic(format!(
                "positive decomposition postcondition failed: eff(σ) = {eff}"
            )));
        }
        return Ok(Some(PositiveDecomposition {
            path: whole,
            decomposition,
            prefix_form,
            cycle_form,
        }));
    }
    Err(ToolkitError::IterationCap {
        procedure: "positive cycle decomposition",
        cap: DECOMPOSITION_CAP,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::gen::{fig2, fig2_canonical_witness};
    use crate::model::tests::fig1_vass;
    use crate::path::expand;

    #[test]
    fn monotone_examples() {
        let v = fig1_vass();
        assert_eq!(
            find_monotone_decomposition(&v, &ExplicitPath::from_indices(&[0, 1])).unwrap(),
            None
        );
        let d = find_monotone_decomposition(&v, &ExplicitPath::from_indices(&[0, 1, 0, 1]))
            .unwrap()
            .unwrap();
        assert_eq!(d.prefix, ExplicitPath::empty());
        assert_eq!(d.cycle, ExplicitPath::from_indices(&[0, 1]));
        assert_eq!(d.suffix, ExplicitPath::from_indices(&[0, 1]));
        let mut w = Vass::new();
        let a = w.add_state("a").unwrap();
        let b = w.add_state("b").unwrap();
        w.add_transition(a, b, 1, 1).unwrap();
        assert_eq!(
            find_monotone_decomposition(&w, &ExplicitPath::from_indices(&[0])).unwrap(),
            None
        );
    }

    #[test]
    fn fig2_positive_cycle() {
        let inst = fig2(2).unwrap();
        let run = expand(&inst.vass, &fig2_canonical_witness(2), 1 << 20).unwrap();
        let pd = positive_cycle_decomposition(&inst.vass, &inst.initial, &run)
            .unwrap()
            .expect("no narrow form for the canonical run");
        let eff = effect(&inst.vass, &pd.decomposition.cycle).unwrap();
        assert!(
            eff.ge(&Counters::zero()) && eff != Counters::zero(),
            "{eff}"
        );
        assert_eq!(pd.prefix_form.to_path(), pd.decomposition.prefix);
        assert_eq!(pd.cycle_form.to_path(), pd.decomposition.cycle);
        let fin = final_config(&inst.vass, &inst.initial, &pd.path)
            .unwrap()
            .unwrap();
        assert!(fin.covers(&inst.target));
    }

    #[test]
    fn simple_run_has_no_positive_decomposition() {
        let mut w = Vass::new();
        let a = w.add_state("a").unwrap();
        let b = w.add_state("b").unwrap();
        w.add_transition(a, b, 1, 1).unwrap();
        let start = Config::new(a, 0, 0).unwrap();
        assert_eq!(
            positive_cycle_decomposition(&w, &start, &ExplicitPath::from_indices(&[0])).unwrap(),
            None
        );
    }

    #[test]
    fn dispensable_negative_cycle_is_dropped() {
        // loop (-1, 0) then a long positive stretch
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        v.add_transition(q, q, -1, 0).unwrap();
        v.add_transition(q, q, 2, 0).unwrap();
        let start = Config::new(q, 1, 0).unwrap();
        let path = ExplicitPath::from_indices(&[0, 1, 1]);
        match positive_cycle_decomposition(&v, &start, &path).unwrap() {
            None => {}
            Some(pd) => assert!(pd.path.len() <= path.len()),
        }
    }
}
