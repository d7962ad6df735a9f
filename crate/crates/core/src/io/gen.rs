//! Instance generators: the two worked example families and seeded random
//! instances.

use num_bigint::BigInt;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Config, CoverInstance, Vass};
use crate::path::PathExpr;

/// One state `q` with λ = `#0` = (100, −1) and ρ = `#1` = (−99, 1), from
/// `q(0,1)` to `q(0,10)`.
pub fn fig1() -> CoverInstance {
    let mut v = Vass::new();
    let q = v.add_state("q").unwrap();
    v.add_transition(q, q, 100, -1).unwrap();
    v.add_transition(q, q, -99, 1).unwrap();
    CoverInstance::new(
        v,
        Config::new(q, 0, 1).unwrap(),
        Config::new(q, 0, 10).unwrap(),
    )
    .unwrap()
}

/// `( #0 #1 )^990 ( #1 )^10`, reaching `q(0,11)`.
pub fn fig1_canonical_witness() -> PathExpr {
    PathExpr::seq([
        PathExpr::power(
            PathExpr::seq([PathExpr::atom(0), PathExpr::atom(1)]),
            990u32,
        ),
        PathExpr::power(PathExpr::atom(1), 10u32),
    ])
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("family parameter n must be at least 1 (got {0})")]
pub struct BadFamilyParameter(pub u32);

/// `2^n`.
pub fn fig2_n(n: u32) -> BigInt {
    BigInt::one() << n
}

/// The six-state family with `N = 2^n`. Transitions in index order:
/// `qa (N⁴,−1)`, `ab (0,0)`, `bq (−N⁶+N,0)`, `qp (−N,0)`, `pc (N⁴,0)`,
/// `cd (0,0)`, `dq (−N⁶+1,1)`, then the loops `α@a (−N²,1)`, `β@b (N⁴,−1)`,
/// `γ@c (−N²,1)`, `δ@d (N⁴,−1)`. From `q(0,1)` to `q(N,1)`.
pub fn fig2(n: u32) -> Result<CoverInstance, BadFamilyParameter> {
    if n < 1 {
        return Err(BadFamilyParameter(n));
    }
    let big_n = fig2_n(n);
    let n2 = &big_n * &big_n;
    let n4 = &n2 * &n2;
    let n6 = &n4 * &n2;
    let mut v = Vass::new();
    let [q, p, a, b, c, d] = ["q", "p", "a", "b", "c", "d"].map(|s| v.add_state(s).unwrap());
    let z = BigInt::from(0);
    let rows = [
        (q, a, n4.clone(), -1),
        (a, b, z.clone(), 0),
        (b, q, -&n6 + &big_n, 0),
        (q, p, -big_n.clone(), 0),
        (p, c, n4.clone(), 0),
        (c, d, z, 0),
        (d, q, -&n6 + 1, 1),
        (a, a, -n2.clone(), 1),
        (b, b, n4.clone(), -1),
        (c, c, -n2, 1),
        (d, d, n4, -1),
    ];
    for (from, to, bin, una) in rows {
        v.add_transition(from, to, bin, una).unwrap();
    }
    let target = Config::new(q, big_n, 1).unwrap();
    Ok(CoverInstance::new(v, Config::new(q, 0, 1).unwrap(), target).unwrap())
}

/// `( #0 (#7)^{N²} #1 (#8)^{N²} #2 #3 #4 (#9)^{N²} #5 (#10)^{N²} #6 )^N`.
pub fn fig2_canonical_witness(n: u32) -> PathExpr {
    let big_n = fig2_n(n).to_biguint().unwrap();
    let n2 = &big_n * &big_n;
    let inner = |t| PathExpr::power(PathExpr::atom(t), n2.clone());
    PathExpr::power(
        PathExpr::seq([
            PathExpr::atom(0),
            inner(7),
            PathExpr::atom(1),
            inner(8),
            PathExpr::atom(2),
            PathExpr::atom(3),
            PathExpr::atom(4),
            inner(9),
            PathExpr::atom(5),
            inner(10),
            PathExpr::atom(6),
        ]),
        big_n,
    )
}

/// Bounds for random instances. State and transition counts are upper
/// bounds; actual counts are drawn uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FuzzEnvelope {
    pub state_count: u32,
    pub transition_count: u32,
    pub max_bin_update: u32,
    pub max_init_target: u32,
    pub seed: u64,
}

impl FuzzEnvelope {
    pub fn new(
        states: u32,
        transitions: u32,
        max_bin: u32,
        max_init_target: u32,
        seed: u64,
    ) -> Self {
        FuzzEnvelope {
            state_count: states,
            transition_count: transitions,
            max_bin_update: max_bin,
            max_init_target,
            seed,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        FuzzEnvelope { seed, ..self }
    }
}

/// Deterministic in the envelope: `|Q|` uniform in `[1, state_count]`, `|T|`
/// uniform in `[0, transition_count]`, binary updates uniform in
/// `[-max, max]`, unary updates uniform in `{-1, 0, 1}`, initial and
/// target counters uniform in `[0, max_init_target]`.
pub fn gen_random(env: &FuzzEnvelope) -> CoverInstance {
    let mut rng = ChaCha8Rng::seed_from_u64(env.seed);
    let nq = rng.gen_range(1..=env.state_count.max(1));
    let nt = rng.gen_range(0..=env.transition_count);
    let mut v = Vass::new();
    let states: Vec<_> = (0..nq)
        .map(|i| v.add_state(&format!("s{i}")).unwrap())
        .collect();
    let m = i64::from(env.max_bin_update);
    for _ in 0..nt {
        let from = states[rng.gen_range(0..states.len())];
        let to = states[rng.gen_range(0..states.len())];
        let b = rng.gen_range(-m..=m);
        let u = rng.gen_range(-1i64..=1);
        v.add_transition(from, to, b, u).unwrap();
    }
    let config = |rng: &mut ChaCha8Rng| {
        let s = states[rng.gen_range(0..states.len())];
        let b = rng.gen_range(0..=env.max_init_target);
        let u = rng.gen_range(0..=env.max_init_target);
        Config::new(s, b, u).unwrap()
    };
    let init = config(&mut rng);
    let target = config(&mut rng);
    CoverInstance::new(v, init, target).unwrap()
}

/// Seed of the `i`-th instance in a fuzz campaign with base seed `base`.
pub fn derive_seed(base: u64, i: u64) -> u64 {
    // splitmix64 step, so neighbouring campaigns do not overlap
    let mut z = base.wrapping_add(i.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Counters;
    use crate::witness::{check_witness, CheckOutcome, Witness};

    #[test]
    fn fig1_shape() {
        let i = fig1();
        assert_eq!(i.vass.num_states(), 1);
        assert_eq!(i.vass.transitions().len(), 2);
        let q = i.initial.state;
        assert_eq!(
            check_witness(&i, &Witness::new(fig1_canonical_witness())),
            CheckOutcome::Accept(Config::new(q, 0, 11).unwrap())
        );
    }

    #[test]
    fn fig2_small() {
        assert!(fig2(0).is_err());
        let i = fig2(1).unwrap();
        assert_eq!(i.vass.transitions()[0].update, Counters::new(16, -1));
        for n in 1..=3 {
            let i = fig2(n).unwrap();
            let out = check_witness(&i, &Witness::new(fig2_canonical_witness(n)));
            let q = i.initial.state;
            assert_eq!(
                out,
                CheckOutcome::Accept(Config::new(q, fig2_n(n), 1).unwrap())
            );
        }
    }

    #[test]
    fn random_is_deterministic() {
        let env = FuzzEnvelope::new(4, 6, 8, 6, 42);
        assert_eq!(gen_random(&env), gen_random(&env));
        assert_ne!(derive_seed(7, 0), derive_seed(7, 1));
    }

    #[test]
    fn random_respects_envelope() {
        for s in 0..200 {
            let i = gen_random(&FuzzEnvelope::new(4, 6, 8, 6, s));
            assert!((1..=4).contains(&i.vass.num_states()));
            assert!(i.vass.transitions().len() <= 6);
            for t in i.vass.transitions() {
                assert!(t.update.bin.magnitude() <= &8u32.into());
                assert!(t.update.una.magnitude() <= &1u32.into());
            }
            assert!(i.initial.bin() <= &BigInt::from(6) && i.target.una() <= &BigInt::from(6));
        }
    }
}
