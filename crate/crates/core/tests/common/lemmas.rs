//! Randomized checks of the structural lemmas. Each suite returns the number
//! of cases it ran or the first counterexample.

use num_bigint::BigUint;
use rand::Rng;
use ucover::model::{effect, Config, Counters, StateId};
use ucover::toolkit::cycles::{enumerate_short_cycles, CycleCharacterization, CycleTable};
use ucover::toolkit::{
    greedy_linear_form, irreplaceable_catalog, positive_cycle_decomposition, replace_cycles_in_run,
    reshuffle, PolyBounds, ReshuffleResult,
};

use super::{feasible_walk, final_config, random_total_vass, rng};

fn instance(seed: u64, i: usize) -> (ucover::Vass, Config, ucover::ExplicitPath) {
    let mut r = rng(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let states = r.gen_range(1..=3);
    let v = {
        let extra = r.gen_range(0..=4);
        random_total_vass(&mut r, states, extra, 6)
    };
    let start = Config::new(StateId(0), r.gen_range(0..=30), r.gen_range(0..=8)).unwrap();
    let len = r.gen_range(0..=40);
    let p = feasible_walk(&mut r, &v, &start, len);
    (v, start, p)
}

/// The replaced form is feasible, ends in the same state at least as high,
/// is no longer, and every short cycle in it is a catalog representative.
pub fn replacement_suite(cases: usize, seed: u64) -> Result<usize, String> {
    for i in 0..cases {
        let (v, start, p) = instance(seed, i);
        let before = final_config(&v, &start, &p).ok_or("walk infeasible")?;
        let table = CycleTable::new(&v);
        let form = greedy_linear_form(&v, &p).map_err(|e| e.to_string())?;
        let out = replace_cycles_in_run(&v, &table, &start, &form)
            .map_err(|e| format!("case {i}: {e}"))?;
        out.validate(&v).map_err(|e| format!("case {i}: {e}"))?;
        let q = out.to_path();
        let after =
            final_config(&v, &start, &q).ok_or(format!("case {i}: replaced run infeasible"))?;
        if after.state != before.state || !after.covers(&before) || q.len() > p.len() {
            return Err(format!("case {i}: {p} -> {q}"));
        }
        for c in out.cycles.iter().filter(|c| c.len() <= v.num_states()) {
            let ch = CycleCharacterization::of(&v, c).map_err(|e| e.to_string())?;
            if table.representative(&ch) != Some(c) {
                return Err(format!(
                    "case {i}: cycle {c} is not a catalog representative"
                ));
            }
        }
    }
    Ok(cases)
}

/// The reshuffled run is feasible, no longer and ends at least as high; and
/// it either has a narrow linear form or contains a monotone cycle.
pub fn reshuffle_suite(cases: usize, seed: u64) -> Result<usize, String> {
    for i in 0..cases {
        let (v, start, p) = instance(seed, i);
        let before = final_config(&v, &start, &p).ok_or("walk infeasible")?;
        let rs = reshuffle(&v, &start, &p).map_err(|e| format!("case {i}: {e}"))?;
        let after = final_config(&v, &start, &rs.path)
            .ok_or(format!("case {i}: reshuffled run infeasible"))?;
        if after.state != before.state || !after.covers(&before) || rs.path.len() > p.len() {
            return Err(format!("case {i}: {p} -> {}", rs.path));
        }
        match &rs.result {
            ReshuffleResult::Narrow(f) => {
                if f.to_path() != rs.path || !PolyBounds::new(v.num_states()).is_narrow(f.cost()) {
                    return Err(format!("case {i}: bad narrow form"));
                }
            }
            ReshuffleResult::Monotone(d) => {
                let ok = d.is_valid_for(&v, &rs.path).map_err(|e| e.to_string())?
                    && effect(&v, &d.cycle)
                        .map_err(|e| e.to_string())?
                        .is_monotone();
                if !ok {
                    return Err(format!("case {i}: bad monotone decomposition"));
                }
            }
        }
    }
    Ok(cases)
}

/// The catalog has at most `R(|Q|)` entries and none is dominated by a short
/// cycle.
pub fn catalog_suite(cases: usize, seed: u64) -> Result<usize, String> {
    for i in 0..cases {
        let mut r = rng(seed.wrapping_add(i as u64));
        let states = r.gen_range(1..=4);
        let v = {
            let extra = r.gen_range(0..=4);
            random_total_vass(&mut r, states, extra, 8)
        };
        let catalog = irreplaceable_catalog(&v);
        let bound = PolyBounds::new(states).r;
        if BigUint::from(catalog.len()) > bound {
            return Err(format!("case {i}: {} entries > R = {bound}", catalog.len()));
        }
        for e in &catalog {
            for s in v.states() {
                for c in enumerate_short_cycles(&v, s) {
                    let ch = CycleCharacterization::of(&v, &c).map_err(|e| e.to_string())?;
                    if ch.dominates(&e.characterization) {
                        return Err(format!(
                            "case {i}: {} is dominated by {c}",
                            e.representative
                        ));
                    }
                }
            }
        }
    }
    Ok(cases)
}

/// When a run has no narrow reshuffling, the decomposition `ρ σ τ` has
/// `eff(σ) > 0`, is feasible and ends at least as high as the run.
/// Returns the number of cases with a decomposition as well.
pub fn positive_decomposition_suite(cases: usize, seed: u64) -> Result<(usize, usize), String> {
    let zero = Counters::zero();
    let mut found = 0;
    for i in 0..cases {
        let (v, start, p) = instance(seed, i);
        let before = final_config(&v, &start, &p).ok_or("walk infeasible")?;
        let Some(pd) =
            positive_cycle_decomposition(&v, &start, &p).map_err(|e| format!("case {i}: {e}"))?
        else {
            continue;
        };
        found += 1;
        let eff = effect(&v, &pd.decomposition.cycle).map_err(|e| e.to_string())?;
        let after = final_config(&v, &start, &pd.path).ok_or(format!("case {i}: infeasible"))?;
        let valid = pd
            .decomposition
            .is_valid_for(&v, &pd.path)
            .map_err(|e| e.to_string())?;
        if !(eff.ge(&zero) && eff != zero)
            || !after.covers(&before)
            || after.state != before.state
            || !valid
        {
            return Err(format!("case {i}: eff(σ) = {eff}"));
        }
        if pd.prefix_form.to_path() != pd.decomposition.prefix
            || pd.cycle_form.to_path() != pd.decomposition.cycle
        {
            return Err(format!("case {i}: forms do not denote ρ and σ"));
        }
    }
    Ok((cases, found))
}
