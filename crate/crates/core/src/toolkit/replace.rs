//! Swapping replaceable cycles of a run for irreplaceable dominators.

use crate::model::{simulate, Config, ExplicitPath, SimOutcome, Vass};
use crate::toolkit::cycles::{CycleCharacterization, CycleTable};
use crate::toolkit::linear_form::LinearForm;
use crate::toolkit::ToolkitError;

/// Final configuration of the run, `None` if it goes negative.
pub(crate) fn final_config(
    vass: &Vass,
    start: &Config,
    path: &ExplicitPath,
) -> Result<Option<Config>, ToolkitError> {
    Ok(match simulate(vass, start, path)? {
        SimOutcome::Reached(c) => Some(c),
        SimOutcome::FailureAt { .. } => None,
    })
}

/// Replaces every replaceable short cycle of the form by its dominator and
/// then every irreplaceable cycle by the catalog representative of its
/// characterisation. Cycles longer than `|Q|` are left alone. The result is
/// feasible from `start`, ends at least as high and is no longer.
pub fn replace_cycles_in_run(
    vass: &Vass,
    table: &CycleTable,
    start: &Config,
    form: &LinearForm,
) -> Result<LinearForm, ToolkitError> {
    let before = final_config(vass, start, &form.to_path())?.ok_or(ToolkitError::Infeasible)?;
    let mut out = form.clone();
    for c in out.cycles.iter_mut() {
        if c.len() > vass.num_states() {
            continue;
        }
        let mut ch = CycleCharacterization::of(vass, c)?;
        if let Some(r) = table.replacement_for(&ch) {
            *c = r.cycle.clone();
            ch = r.ch.clone();
        }
        if let Some(rep) = table.representative(&ch) {
            *c = rep.clone();
        }
    }
    let out = out.merged();
    let after = final_config(vass, start, &out.to_path())?.ok_or_else(|| {
        ToolkitError::Diagnostic("cycle replacement produced an infeasible run".into())
    })?;
    if !after.covers(&before) || out.len() > form.len() {
        return Err(ToolkitError::Diagnostic(
            "cycle replacement lowered the final counters or lengthened the run".into(),
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::fig1_vass;
    use crate::model::Counters;
    use crate::toolkit::cycles::tests::replacement_vass;
    use crate::toolkit::linear_form::greedy_linear_form;

    #[test]
    fn replaces_dominated_cycle() {
        let v = replacement_vass();
        let table = CycleTable::new(&v);
        let q = v.state_id("q").unwrap();
        let start = Config::new(q, 5, 0).unwrap();
        let form = LinearForm {
            paths: vec![ExplicitPath::empty(), ExplicitPath::empty()],
            cycles: vec![ExplicitPath::from_indices(&[0, 1])],
            exps: vec![3],
        };
        let out = replace_cycles_in_run(&v, &table, &start, &form).unwrap();
        assert_eq!(out.cycles, vec![ExplicitPath::from_indices(&[2, 3])]);
        let before = final_config(&v, &start, &form.to_path()).unwrap().unwrap();
        let after = final_config(&v, &start, &out.to_path()).unwrap().unwrap();
        assert_eq!(after.counters().sub(before.counters()), Counters::new(6, 0));
    }

    #[test]
    fn fig1_form_unchanged() {
        let v = fig1_vass();
        let table = CycleTable::new(&v);
        let start = Config::new(crate::StateId(0), 0, 1).unwrap();
        let mut steps = Vec::new();
        for _ in 0..990 {
            steps.extend([0, 1]);
        }
        steps.extend([1; 10]);
        let form = greedy_linear_form(&v, &ExplicitPath::from_indices(&steps)).unwrap();
        assert_eq!(
            replace_cycles_in_run(&v, &table, &start, &form).unwrap(),
            form
        );
    }

    #[test]
    fn infeasible_input_is_an_error() {
        let v = fig1_vass();
        let table = CycleTable::new(&v);
        let start = Config::new(crate::StateId(0), 0, 1).unwrap();
        let form = LinearForm::plain(ExplicitPath::from_indices(&[1]));
        assert_eq!(
            replace_cycles_in_run(&v, &table, &start, &form),
            Err(ToolkitError::Infeasible)
        );
    }
}
