//! wasm-bindgen exports behind `www/index.html`. Every export returns a JSON
//! string; the `*_json` functions are the same operations without the
//! JavaScript error wrapping, for native tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ucover::io::gen::{fig2, fig2_canonical_witness, fig2_n};
use ucover::io::{parse_instance, serialize_instance, serialize_witness};
use ucover::model::run_configs;
use ucover::oracle::backward_cover;
use ucover::path::{expand, summarize};
use ucover::solver::{solve_with_stats, Budget, Verdict};
use ucover::witness::{check_witness, CheckOutcome, Witness};

/// Runs longer than this are not expanded for plotting.
pub const MAX_PLOTTED_RUN: usize = 200_000;
/// Points kept from a plotted run.
pub const MAX_POINTS: usize = 2_000;

#[derive(Debug, Serialize)]
pub struct Fig2Check {
    pub n: u32,
    pub big_n: String,
    pub instance: String,
    pub witness: String,
    pub accepted: bool,
    pub final_config: Option<String>,
    pub reason: Option<String>,
    pub written_size: u64,
    pub expanded_len: String,
}

#[derive(Debug, Serialize)]
pub struct SolveRun {
    pub verdict: String,
    pub phase: Option<String>,
    pub witness: Option<String>,
    pub final_config: Option<String>,
    pub run_len: Option<String>,
    /// `(step, bin, una)` samples of the witness run; empty when the run is
    /// too long to expand.
    pub points: Vec<(u64, i64, i64)>,
    pub note: Option<String>,
}

#[derive(Debug, Serialize)]
pub struct StateBasis {
    pub state: String,
    /// Minimal `(bin, una)` pairs, sorted by `bin`.
    pub points: Vec<(String, String)>,
}

#[derive(Debug, Serialize)]
pub struct OracleBasis {
    pub coverable: bool,
    pub iterations: u64,
    pub initial: (String, String, String),
    pub states: Vec<StateBasis>,
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

pub fn fig2_check_json(n: u32) -> Result<String, String> {
    let inst = fig2(n).map_err(|e| e.to_string())?;
    let expr = fig2_canonical_witness(n);
    let s = summarize(&inst.vass, &expr).map_err(|e| e.to_string())?;
    let (accepted, final_config, reason) = match check_witness(&inst, &Witness::new(expr.clone())) {
        CheckOutcome::Accept(c) => (true, Some(c.display(&inst.vass).to_string()), None),
        CheckOutcome::Reject(r) => (false, None, Some(r.to_string())),
    };
    to_json(&Fig2Check {
        n,
        big_n: fig2_n(n).to_string(),
        instance: serialize_instance(&inst),
        witness: serialize_witness(&expr),
        accepted,
        final_config,
        reason,
        written_size: expr.written_size(),
        expanded_len: s.len.to_string(),
    })
}

fn small(x: &num_bigint::BigInt) -> i64 {
    use num_traits::ToPrimitive;
    x.to_i64().unwrap_or(i64::MAX)
}

pub fn solve_instance_json(text: &str) -> Result<String, String> {
    let inst = parse_instance(text).map_err(|e| e.to_string())?;
    let (v, stats) = solve_with_stats(&inst, &Budget::default());
    let mut out = SolveRun {
        verdict: v.word().to_string(),
        phase: stats.phase.map(|p| p.name().to_string()),
        witness: None,
        final_config: None,
        run_len: None,
        points: Vec::new(),
        note: None,
    };
    match v {
        Verdict::Coverable(w) => {
            out.witness = Some(serialize_witness(&w.expr));
            if let CheckOutcome::Accept(c) = check_witness(&inst, &w) {
                out.final_config = Some(c.display(&inst.vass).to_string());
            }
            let len = summarize(&inst.vass, &w.expr)
                .map_err(|e| e.to_string())?
                .len;
            out.run_len = Some(len.to_string());
            match expand(&inst.vass, &w.expr, MAX_PLOTTED_RUN) {
                Ok(path) => {
                    let configs = run_configs(&inst.vass, &inst.initial, &path)
                        .map_err(|e| e.to_string())?
                        .ok_or("witness run is infeasible")?;
                    let stride = configs.len().div_ceil(MAX_POINTS).max(1);
                    let last = configs.len() - 1;
                    out.points = configs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| i % stride == 0 || *i == last)
                        .map(|(i, c)| (i as u64, small(c.bin()), small(c.una())))
                        .collect();
                }
                Err(_) => {
                    out.note = Some(format!(
                        "run longer than {MAX_PLOTTED_RUN} steps, not plotted"
                    ))
                }
            }
        }
        Verdict::CoverableWitnessUnknown(rep) => out.note = Some(rep.to_string()),
        Verdict::NotCoverable => {}
    }
    to_json(&out)
}

pub fn oracle_basis_json(text: &str) -> Result<String, String> {
    let inst = parse_instance(text).map_err(|e| e.to_string())?;
    let r = backward_cover(&inst);
    let states = inst
        .vass
        .states()
        .map(|s| {
            let mut pts: Vec<_> = r
                .basis
                .elements_at(s)
                .map(|c| (c.bin().clone(), c.una().clone()))
                .collect();
            pts.sort();
            StateBasis {
                state: inst.vass.state_name(s).to_string(),
                points: pts
                    .into_iter()
                    .map(|(b, u)| (b.to_string(), u.to_string()))
                    .collect(),
            }
        })
        .collect();
    let i = &inst.initial;
    to_json(&OracleBasis {
        coverable: r.coverable,
        iterations: r.iterations,
        initial: (
            inst.vass.state_name(i.state).to_string(),
            i.bin().to_string(),
            i.una().to_string(),
        ),
        states,
    })
}

/// The canonical `fig2` witness for `n` and its check result.
#[wasm_bindgen]
pub fn fig2_check(n: u32) -> Result<String, JsValue> {
    fig2_check_json(n).map_err(|e| JsValue::from_str(&e))
}

/// Solves an instance and samples the counters along the witness run.
#[wasm_bindgen]
pub fn solve_instance(text: &str) -> Result<String, JsValue> {
    solve_instance_json(text).map_err(|e| JsValue::from_str(&e))
}

/// The minimal basis of the backward oracle, per state.
#[wasm_bindgen]
pub fn oracle_basis(text: &str) -> Result<String, JsValue> {
    oracle_basis_json(text).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;
    use ucover::io::gen::fig1;

    fn parse(s: Result<String, String>) -> Value {
        serde_json::from_str(&s.unwrap()).unwrap()
    }

    #[test]
    fn fig2_slider_values() {
        for n in [1, 6, 20] {
            let v = parse(fig2_check_json(n));
            assert_eq!(v["accepted"], true, "{v}");
            assert_eq!(v["big_n"], (1u64 << n).to_string());
        }
        assert!(fig2_check_json(0).is_err());
    }

    #[test]
    fn fig1_run_is_plotted() {
        let v = parse(solve_instance_json(&serialize_instance(&fig1())));
        assert_eq!(v["verdict"], "coverable");
        let pts = v["points"].as_array().unwrap();
        assert!(!pts.is_empty() && pts.len() <= MAX_POINTS + 1);
        assert_eq!(pts[0], serde_json::json!([0, 0, 1]));
        let last = pts.last().unwrap();
        assert!(last[2].as_i64().unwrap() >= 10);
    }

    #[test]
    fn basis_staircase() {
        let v = parse(oracle_basis_json(&serialize_instance(&fig1())));
        assert_eq!(v["coverable"], true);
        let pts = v["states"][0]["points"].as_array().unwrap();
        assert!(!pts.is_empty());
        // minimal elements are an antichain: bin up, una down
        let nums: Vec<(i64, i64)> = pts
            .iter()
            .map(|p| {
                (
                    p[0].as_str().unwrap().parse().unwrap(),
                    p[1].as_str().unwrap().parse().unwrap(),
                )
            })
            .collect();
        assert!(nums.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 > w[1].1));
    }

    #[test]
    fn parse_errors_surface() {
        assert!(solve_instance_json("vass 3u").is_err());
        assert!(oracle_basis_json("").is_err());
    }
}
