//! Reshuffling a run until it has a narrow linear form or exhibits a
//! monotone cycle.

use num_bigint::BigInt;
use num_traits::Signed;

use crate::model::{effect, run_configs, Config, ExplicitPath, Vass};
use crate::toolkit::bounds::PolyBounds;
use crate::toolkit::cycles::CycleTable;
use crate::toolkit::decompose::{find_monotone_decomposition, MonotoneDecomposition};
use crate::toolkit::linear_form::{greedy_linear_form, LinearForm};
use crate::toolkit::replace::{final_config, replace_cycles_in_run};
use crate::toolkit::ToolkitError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ReshuffleResult {
    Narrow(LinearForm),
    Monotone(MonotoneDecomposition),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TraceKind {
    Replace,
    Split,
    Move,
    Merge,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TraceStep {
    pub kind: TraceKind,
    pub cost_before: (usize, usize),
    pub cost_after: (usize, usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reshuffled {
    /// The transformed path; the result refers to it.
    pub path: ExplicitPath,
    pub result: ReshuffleResult,
    pub trace: Vec<TraceStep>,
}

const MOVE_CAP: usize = 1_000_000;

/// Re-splits every connecting path that repeats a state.
fn resplit(vass: &Vass, form: &LinearForm) -> Result<LinearForm, ToolkitError> {
    let mut out = LinearForm::plain(ExplicitPath::empty());
    for i in 0..=form.width() {
        let g = greedy_linear_form(vass, &form.paths[i])?;
        let last = out.paths.len() - 1;
        out.paths[last] = out.paths[last].concat(&g.paths[0]);
        out.cycles.extend(g.cycles);
        out.exps.extend(g.exps);
        out.paths.extend(g.paths.into_iter().skip(1));
        if i < form.width() {
            out.cycles.push(form.cycles[i].clone());
            out.exps.push(form.exps[i]);
            out.paths.push(ExplicitPath::empty());
        }
    }
    Ok(out.merged())
}

fn remove_bundle(form: &mut LinearForm, x: usize) {
    form.cycles.remove(x);
    form.exps.remove(x);
    let tail = form.paths.remove(x + 1);
    form.paths[x] = form.paths[x].concat(&tail);
}

/// Unary value every configuration between two bundles must reach before
/// an iteration may move across them.
fn move_threshold(vass: &Vass) -> BigInt {
    let max_una = vass
        .transitions()
        .iter()
        .map(|t| t.update.una.abs())
        .max()
        .unwrap_or_default()
        .max(BigInt::from(1));
    max_una * BigInt::from(vass.num_states())
}

enum PairOutcome {
    Merged,
    Moved,
    Blocked,
}

/// Moves iterations of the non-monotone cycle shared by bundles `i < j`
/// towards the side its binary effect favours until one bundle empties or
/// a low-unary configuration blocks the move.
fn move_pair(
    vass: &Vass,
    start: &Config,
    form: &mut LinearForm,
    i: usize,
    j: usize,
    threshold: &BigInt,
    moves: &mut usize,
) -> Result<PairOutcome, ToolkitError> {
    let eff = effect(vass, &form.cycles[i])?;
    let right_to_left = eff.bin.is_positive();
    let mut moved = false;
    loop {
        let path = form.to_path();
        let configs = run_configs(vass, start, &path)?.ok_or_else(|| {
            ToolkitError::Diagnostic("iteration move produced an infeasible run".into())
        })?;
        let spans = form.bundle_spans();
        let (lo, hi) = (spans[i].1, spans[j].0);
        if configs[lo..=hi].iter().any(|c| c.una() < threshold) {
            return Ok(if moved {
                PairOutcome::Moved
            } else {
                PairOutcome::Blocked
            });
        }
        *moves += 1;
        if *moves > MOVE_CAP {
            return Err(ToolkitError::IterationCap {
                procedure: "reshuffle moves",
                cap: MOVE_CAP,
            });
        }
        let (from, to) = if right_to_left { (j, i) } else { (i, j) };
        form.exps[from] -= 1;
        form.exps[to] += 1;
        moved = true;
        if form.exps[from] == 0 {
            remove_bundle(form, from);
            return Ok(PairOutcome::Merged);
        }
    }
}

/// Transforms `path` (feasible from `start`) until it either has a narrow
/// linear form or contains a monotone cycle. The returned path is feasible,
/// ends in the same state at counters at least as high and is no longer.
pub fn reshuffle(
    vass: &Vass,
    start: &Config,
    path: &ExplicitPath,
) -> Result<Reshuffled, ToolkitError> {
    reshuffle_with(vass, &CycleTable::new(vass), start, path)
}

pub fn reshuffle_with(
    vass: &Vass,
    table: &CycleTable,
    start: &Config,
    path: &ExplicitPath,
) -> Result<Reshuffled, ToolkitError> {
    let original = final_config(vass, start, path)?.ok_or(ToolkitError::Infeasible)?;
    let bounds = PolyBounds::new(vass.num_states());
    let threshold = move_threshold(vass);
    let mut trace = Vec::new();
    let mut form = greedy_linear_form(vass, path)?;
    let mut moves = 0usize;
    let result = loop {
        let before = form.cost();
        form = replace_cycles_in_run(vass, table, start, &form)?;
        trace.push(TraceStep {
            kind: TraceKind::Replace,
            cost_before: before,
            cost_after: form.cost(),
        });
        let split = resplit(vass, &form)?;
        if split != form {
            trace.push(TraceStep {
                kind: TraceKind::Split,
                cost_before: form.cost(),
                cost_after: split.cost(),
            });
            form = split;
        }
        let cur = form.to_path();
        if let Some(d) = find_monotone_decomposition(vass, &cur)? {
            break ReshuffleResult::Monotone(d);
        }
        if bounds.is_narrow(form.cost()) {
            break ReshuffleResult::Narrow(form.clone());
        }
        let mut progressed = false;
        let mut i = 0;
        'pairs: while i < form.width() {
            let Some(j) = (i + 1..form.width()).find(|&j| form.cycles[j] == form.cycles[i]) else {
                i += 1;
                continue;
            };
            let before = form.cost();
            match move_pair(vass, start, &mut form, i, j, &threshold, &mut moves)? {
                PairOutcome::Merged => {
                    trace.push(TraceStep {
                        kind: TraceKind::Merge,
                        cost_before: before,
                        cost_after: form.cost(),
                    });
                    progressed = true;
                    break 'pairs;
                }
                PairOutcome::Moved => {
                    trace.push(TraceStep {
                        kind: TraceKind::Move,
                        cost_before: before,
                        cost_after: form.cost(),
                    });
                    progressed = true;
                }
                PairOutcome::Blocked => {}
            }
            i += 1;
        }
        if !progressed {
            return Err(ToolkitError::Diagnostic(format!(
                "reshuffle stuck at cost {:?} with no monotone cycle",
                form.cost()
            )));
        }
        form = form.merged();
    };
    for step in &trace {
        log::debug!(
            "reshuffle {:?}: {:?} -> {:?}",
            step.kind,
            step.cost_before,
            step.cost_after
        );
    }
    let out = match &result {
        ReshuffleResult::Narrow(f) => f.to_path(),
        ReshuffleResult::Monotone(d) => d.whole(),
    };
    let fin = final_config(vass, start, &out)?
        .ok_or_else(|| ToolkitError::Diagnostic("reshuffle output is infeasible".into()))?;
    if !fin.covers(&original) || out.len() > path.len() {
        return Err(ToolkitError::Diagnostic(
            "reshuffle output ends lower or is longer than the input".into(),
        ));
    }
    if let ReshuffleResult::Monotone(d) = &result {
        if !d.is_valid_for(vass, &out)? {
            return Err(ToolkitError::Diagnostic(
                "invalid monotone decomposition".into(),
            ));
        }
    }
    Ok(Reshuffled {
        path: out,
        result,
        trace,
    })
}
