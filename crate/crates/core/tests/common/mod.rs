//! Random structures shared by the integration suites.
#![allow(dead_code)]

use num_bigint::BigUint;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use ucover::model::{run_configs, Config, ExplicitPath, StateId, TransitionId, Vass};
use ucover::path::PathExpr;
use ucover::toolkit::cycles::enumerate_short_cycles;

pub use rand::SeedableRng;

pub mod lemmas;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A VASS with `states` states and `trans` transitions; binary updates in
/// `[-max_bin, max_bin]`, unary in `{-1, 0, 1}`.
pub fn random_vass(r: &mut ChaCha8Rng, states: usize, trans: usize, max_bin: i64) -> Vass {
    let mut v = Vass::new();
    for i in 0..states {
        v.add_state(&format!("s{i}")).unwrap();
    }
    for _ in 0..trans {
        let a = StateId(r.gen_range(0..states));
        let b = StateId(r.gen_range(0..states));
        v.add_transition(
            a,
            b,
            r.gen_range(-max_bin..=max_bin),
            r.gen_range(-1i64..=1),
        )
        .unwrap();
    }
    v
}

/// A VASS where every state has at least one outgoing transition.
pub fn random_total_vass(r: &mut ChaCha8Rng, states: usize, extra: usize, max_bin: i64) -> Vass {
    let mut v = random_vass(r, states, extra, max_bin);
    for s in 0..states {
        let b = StateId(r.gen_range(0..states));
        v.add_transition(
            StateId(s),
            b,
            r.gen_range(-max_bin..=max_bin),
            r.gen_range(-1i64..=1),
        )
        .unwrap();
    }
    v
}

/// A random walk of at most `len` steps from `s`.
pub fn random_walk(r: &mut ChaCha8Rng, v: &Vass, s: StateId, len: usize) -> ExplicitPath {
    let mut cur = s;
    let mut out: Vec<TransitionId> = Vec::new();
    for _ in 0..len {
        let outs: Vec<_> = v.outgoing(cur).map(|(id, t)| (id, t.to)).collect();
        if outs.is_empty() {
            break;
        }
        let (id, to) = outs[r.gen_range(0..outs.len())];
        out.push(id);
        cur = to;
    }
    ExplicitPath(out)
}

/// A random walk that stays feasible from `start`: steps that would make a
/// counter negative are avoided.
pub fn feasible_walk(r: &mut ChaCha8Rng, v: &Vass, start: &Config, len: usize) -> ExplicitPath {
    let mut cur = start.clone();
    let mut out: Vec<TransitionId> = Vec::new();
    for _ in 0..len {
        let outs: Vec<_> = v
            .outgoing(cur.state)
            .filter(|(_, t)| cur.counters().add(&t.update).is_nonneg())
            .map(|(id, t)| (id, t.to, t.update.clone()))
            .collect();
        if outs.is_empty() {
            break;
        }
        let (id, to, upd) = outs[r.gen_range(0..outs.len())].clone();
        out.push(id);
        cur = Config::from_counters(to, cur.counters().add(&upd)).unwrap();
    }
    ExplicitPath(out)
}

/// Final configuration of a feasible run.
pub fn final_config(v: &Vass, start: &Config, p: &ExplicitPath) -> Option<Config> {
    run_configs(v, start, p)
        .ok()
        .flatten()
        .and_then(|cs| cs.last().cloned())
}

fn atoms(p: &ExplicitPath) -> Vec<PathExpr> {
    p.steps().iter().map(|t| PathExpr::Atom(*t)).collect()
}

/// A well-formed expression of power depth at most `depth` starting in `s`,
/// together with its last state.
pub fn random_expr(r: &mut ChaCha8Rng, v: &Vass, s: StateId, depth: usize) -> (PathExpr, StateId) {
    let mut items = Vec::new();
    let mut cur = s;
    for _ in 0..r.gen_range(1..=4) {
        let cycles = enumerate_short_cycles(v, cur);
        if depth > 0 && !cycles.is_empty() && r.gen_bool(0.5) {
            let body = if depth > 1 && r.gen_bool(0.4) {
                let mut inner = Vec::new();
                for _ in 0..r.gen_range(1..=3) {
                    inner.push(cycle_power(r, &cycles, depth - 1));
                }
                PathExpr::Seq(inner)
            } else {
                PathExpr::Seq(atoms(&cycles[r.gen_range(0..cycles.len())]))
            };
            items.push(PathExpr::power(body, BigUint::from(r.gen_range(0u32..=6))));
        } else {
            let n = r.gen_range(0..=3);
            let w = random_walk(r, v, cur, n);
            if let Some(last) = w.last_state(v).unwrap() {
                cur = last;
            }
            items.extend(atoms(&w));
        }
    }
    (PathExpr::Seq(items), cur)
}

fn cycle_power(r: &mut ChaCha8Rng, cycles: &[ExplicitPath], depth: usize) -> PathExpr {
    let c = &cycles[r.gen_range(0..cycles.len())];
    let body = PathExpr::Seq(atoms(c));
    if depth == 0 {
        return body;
    }
    PathExpr::power(body, BigUint::from(r.gen_range(0u32..=4)))
}
