//! Semi-positive tails `ρ′ γ^e τ` reaching a target from a boosted start.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::model::{effect, guard, Config, Counters, ExplicitPath, Vass};
use crate::toolkit::cycles::{enumerate_simple_cycles, enumerate_simple_paths};
use crate::toolkit::linear_form::LinearForm;
use crate::toolkit::replace::final_config;
use crate::toolkit::ToolkitError;

/// Least `e` in `[lo, hi]` with `a + b·e >= 0` for every `(a, b)`.
pub(crate) fn least_affine(
    constraints: &[(BigInt, BigInt)],
    lo: &BigInt,
    hi: &BigInt,
) -> Option<BigInt> {
    let mut lo = lo.clone();
    let mut hi = hi.clone();
    for (a, b) in constraints {
        if b.is_zero() {
            if a.is_negative() {
                return None;
            }
        } else if b.is_positive() {
            // e >= ceil(-a / b)
            let bound = (-a).div_ceil(b);
            lo = lo.max(bound);
        } else {
            // e <= floor(a / -b)
            let bound = a.div_floor(&-b);
            hi = hi.min(bound);
        }
    }
    (lo <= hi).then_some(lo)
}

fn per_component(a: &Counters, b: &Counters) -> [(BigInt, BigInt); 2] {
    [
        (a.bin.clone(), b.bin.clone()),
        (a.una.clone(), b.una.clone()),
    ]
}

/// Least `e` in `[1, e_max]` such that `ρ γ^e τ` is feasible from `start`
/// and ends covering `target`.
fn least_tail_exponent(
    vass: &Vass,
    start: &Config,
    rho: &ExplicitPath,
    gamma: &ExplicitPath,
    tau: &ExplicitPath,
    target: &Config,
    e_max: &BigInt,
) -> Result<Option<BigInt>, ToolkitError> {
    let Some(mid) = final_config(vass, start, rho)? else {
        return Ok(None);
    };
    let c = mid.counters();
    let eff = effect(vass, gamma)?;
    let grd = guard(vass, gamma)?;
    let neg = eff.min_zero();
    let mut cons = Vec::new();
    // γ^e: c + grd + (e - 1)·min(0, eff) >= 0
    cons.extend(per_component(&c.add(&grd).sub(&neg), &neg));
    // τ after γ^e: c + e·eff + grd(τ) >= 0
    cons.extend(per_component(&c.add(&guard(vass, tau)?), &eff));
    // final: c + e·eff + eff(τ) >= target
    cons.extend(per_component(
        &c.add(&effect(vass, tau)?).sub(target.counters()),
        &eff,
    ));
    Ok(least_affine(&cons, &BigInt::from(1), e_max))
}

/// Finds a narrow form `ρ′ γ^e τ` from `start` covering `target`, with `ρ′`
/// and `τ` simple and `γ` a simple cycle of positive unary effect, or a
/// single simple path. Tries plain paths first, then cycles in enumeration
/// order, taking the least exponent up to `e_max` for each.
pub fn semi_positive_tail(
    vass: &Vass,
    start: &Config,
    target: &Config,
    e_max: &BigUint,
) -> Result<Option<LinearForm>, ToolkitError> {
    if start.state == target.state && start.covers(target) {
        return Ok(Some(LinearForm::plain(ExplicitPath::empty())));
    }
    for p in enumerate_simple_paths(vass, start.state, target.state) {
        if let Some(fin) = final_config(vass, start, &p)? {
            if fin.covers(target) {
                return Ok(Some(LinearForm::plain(p)));
            }
        }
    }
    let e_max = BigInt::from(e_max.clone());
    for s in vass.states() {
        let cycles: Vec<ExplicitPath> = enumerate_simple_cycles(vass, s)
            .into_iter()
            .filter(|g| {
                effect(vass, g)
                    .map(|e| e.una.is_positive())
                    .unwrap_or(false)
            })
            .collect();
        if cycles.is_empty() {
            continue;
        }
        let heads = enumerate_simple_paths(vass, start.state, s);
        let tails = enumerate_simple_paths(vass, s, target.state);
        for gamma in &cycles {
            for rho in &heads {
                for tau in &tails {
                    let Some(e) =
                        least_tail_exponent(vass, start, rho, gamma, tau, target, &e_max)?
                    else {
                        continue;
                    };
                    let Some(e) = e.to_usize() else {
                        continue;
                    };
                    return Ok(Some(LinearForm {
                        paths: vec![rho.clone(), tau.clone()],
                        cycles: vec![gamma.clone()],
                        exps: vec![e],
                    }));
                }
            }
        }
    }
    Ok(None)
}
