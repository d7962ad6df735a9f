//! Exponent search for skeletons: a small integer program over box-bounded
//! variables with affine `≥ 0` constraints, solved by depth-first interval
//! splitting with bounds propagation.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::model::{effect, guard, Config, Counters, ModelError, Vass};
use crate::solver::lp::relaxation_feasible;
use crate::solver::skeleton::Skeleton;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IlpError {
    #[error("exponent search exceeded its node budget of {0}")]
    Exhausted(u64),
    #[error("malformed skeleton: {0}")]
    Malformed(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// `constant + Σ coeffs[i]·x_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Affine {
    pub constant: BigInt,
    pub coeffs: Vec<BigInt>,
}

impl Affine {
    pub fn constant(c: BigInt, nvars: usize) -> Self {
        Affine {
            constant: c,
            coeffs: vec![BigInt::zero(); nvars],
        }
    }

    pub fn add(&self, o: &Affine) -> Affine {
        Affine {
            constant: &self.constant + &o.constant,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Affine) -> Affine {
        Affine {
            constant: &self.constant - &o.constant,
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn plus_const(&self, c: &BigInt) -> Affine {
        Affine {
            constant: &self.constant + c,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn plus_var(&self, var: usize, k: &BigInt) -> Affine {
        let mut out = self.clone();
        out.coeffs[var] += k;
        out
    }

    pub fn eval(&self, x: &[BigInt]) -> BigInt {
        &self.constant
            + self
                .coeffs
                .iter()
                .zip(x)
                .map(|(a, b)| a * b)
                .sum::<BigInt>()
    }

    fn widen(&mut self, nvars: usize) {
        self.coeffs.resize(nvars, BigInt::zero());
    }
}

/// Affine binary and unary counter values.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AffineCounters {
    pub bin: Affine,
    pub una: Affine,
}

impl AffineCounters {
    pub fn constant(c: &Counters, nvars: usize) -> Self {
        AffineCounters {
            bin: Affine::constant(c.bin.clone(), nvars),
            una: Affine::constant(c.una.clone(), nvars),
        }
    }

    pub fn plus(&self, c: &Counters) -> Self {
        AffineCounters {
            bin: self.bin.plus_const(&c.bin),
            una: self.una.plus_const(&c.una),
        }
    }

    pub fn plus_var(&self, var: usize, c: &Counters) -> Self {
        AffineCounters {
            bin: self.bin.plus_var(var, &c.bin),
            una: self.una.plus_var(var, &c.una),
        }
    }

    pub fn sub(&self, o: &AffineCounters) -> Self {
        AffineCounters {
            bin: self.bin.sub(&o.bin),
            una: self.una.sub(&o.una),
        }
    }

    pub fn eval(&self, x: &[BigInt]) -> Counters {
        Counters::new(self.bin.eval(x), self.una.eval(x))
    }

    pub fn widen(&mut self, nvars: usize) {
        self.bin.widen(nvars);
        self.una.widen(nvars);
    }
}

/// Variables with box bounds and constraints `a(x) >= 0`.
#[derive(Debug, Clone, Default)]
pub struct System {
    pub lo: Vec<BigInt>,
    pub hi: Vec<BigInt>,
    pub constraints: Vec<Affine>,
}

impl System {
    pub fn nvars(&self) -> usize {
        self.lo.len()
    }

    /// Adds a fresh variable and returns its index. Existing constraints are
    /// widened.
    pub fn new_var(&mut self, lo: BigInt, hi: BigInt) -> usize {
        self.lo.push(lo);
        self.hi.push(hi);
        let n = self.nvars();
        for c in &mut self.constraints {
            c.widen(n);
        }
        n - 1
    }

    pub fn require(&mut self, mut a: Affine) {
        a.widen(self.nvars());
        self.constraints.push(a);
    }

    pub fn require_ge(&mut self, a: &Affine, b: &Affine) {
        let mut a = a.clone();
        let mut b = b.clone();
        a.widen(self.nvars());
        b.widen(self.nvars());
        self.require(a.sub(&b));
    }

    pub fn require_nonneg(&mut self, c: &AffineCounters) {
        self.require(c.bin.clone());
        self.require(c.una.clone());
    }

    /// Whether `x` satisfies every constraint and bound.
    pub fn satisfied_by(&self, x: &[BigInt]) -> bool {
        x.len() == self.nvars()
            && x.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(v, (l, h))| l <= v && v <= h)
            && self.constraints.iter().all(|c| !c.eval(x).is_negative())
    }

    /// Lexicographically least solution, or `None`.
    pub fn solve(&self, node_budget: u64) -> Result<Option<Vec<BigInt>>, IlpError> {
        let mut nodes = 0u64;
        let out = dfs(
            self,
            self.lo.clone(),
            self.hi.clone(),
            &mut nodes,
            node_budget,
        )?;
        debug_assert!(out.as_ref().is_none_or(|x| self.satisfied_by(x)));
        Ok(out)
    }
}

fn term_max(b: &BigInt, lo: &BigInt, hi: &BigInt) -> BigInt {
    if b.is_negative() {
        b * lo
    } else {
        b * hi
    }
}

const PROPAGATION_ROUNDS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Propagation {
    Infeasible,
    Stable,
    /// Still tightening after the round cap.
    Stalled,
}

/// Tightens bounds until nothing changes or the round cap is reached.
fn propagate(sys: &System, lo: &mut [BigInt], hi: &mut [BigInt]) -> Propagation {
    for _ in 0..PROPAGATION_ROUNDS {
        let mut changed = false;
        for c in &sys.constraints {
            let terms: Vec<BigInt> = (0..lo.len())
                .map(|i| term_max(&c.coeffs[i], &lo[i], &hi[i]))
                .collect();
            let max: BigInt = &c.constant + terms.iter().sum::<BigInt>();
            if max.is_negative() {
                return Propagation::Infeasible;
            }
            for i in 0..lo.len() {
                let b = &c.coeffs[i];
                if b.is_zero() {
                    continue;
                }
                let rest = &max - &terms[i];
                if b.is_positive() {
                    let need = (-&rest).div_ceil(b);
                    if need > lo[i] {
                        lo[i] = need;
                        changed = true;
                    }
                } else {
                    let cap = rest.div_floor(&-b);
                    if cap < hi[i] {
                        hi[i] = cap;
                        changed = true;
                    }
                }
                if lo[i] > hi[i] {
                    return Propagation::Infeasible;
                }
            }
        }
        if !changed {
            return Propagation::Stable;
        }
    }
    Propagation::Stalled
}

/// The rational relaxation within the current bounds, shifted so that every
/// variable is non-negative.
fn relaxation_feasible_within(sys: &System, lo: &[BigInt], hi: &[BigInt]) -> bool {
    let n = lo.len();
    let mut rows = Vec::with_capacity(sys.constraints.len() + n);
    for c in &sys.constraints {
        let shifted: BigInt =
            &c.constant + c.coeffs.iter().zip(lo).map(|(b, l)| b * l).sum::<BigInt>();
        rows.push((c.coeffs.clone(), -shifted));
    }
    for i in 0..n {
        let mut coeffs = vec![BigInt::zero(); n];
        coeffs[i] = BigInt::from(-1);
        rows.push((coeffs, -(&hi[i] - &lo[i])));
    }
    relaxation_feasible(n, &rows)
}

fn dfs(
    sys: &System,
    mut lo: Vec<BigInt>,
    mut hi: Vec<BigInt>,
    nodes: &mut u64,
    budget: u64,
) -> Result<Option<Vec<BigInt>>, IlpError> {
    *nodes += 1;
    if *nodes > budget {
        return Err(IlpError::Exhausted(budget));
    }
    match propagate(sys, &mut lo, &mut hi) {
        Propagation::Infeasible => return Ok(None),
        Propagation::Stalled => {
            if !relaxation_feasible_within(sys, &lo, &hi) {
                return Ok(None);
            }
        }
        Propagation::Stable => {
            if *nodes == 1 && !relaxation_feasible_within(sys, &lo, &hi) {
                return Ok(None);
            }
        }
    }
    let Some(i) = (0..lo.len()).find(|&i| lo[i] < hi[i]) else {
        return Ok(sys.satisfied_by(&lo).then_some(lo));
    };
    let mid: BigInt = (&lo[i] + &hi[i]).div_floor(&BigInt::from(2));
    let mut left_hi = hi.clone();
    left_hi[i] = mid.clone();
    if let Some(x) = dfs(sys, lo.clone(), left_hi, nodes, budget)? {
        return Ok(Some(x));
    }
    let mut right_lo = lo;
    right_lo[i] = mid + 1;
    dfs(sys, right_lo, hi, nodes, budget)
}

/// Adds the constraints for running `sk` from `entry` with a fresh variable
/// per cycle, each in `[1, exp_bound]`, and returns the affine exit
/// counters together with the variable indices.
pub fn add_skeleton(
    vass: &Vass,
    sys: &mut System,
    sk: &Skeleton,
    entry: &AffineCounters,
    exp_bound: &BigInt,
) -> Result<(AffineCounters, Vec<usize>), IlpError> {
    let mut cur = entry.clone();
    let mut vars = Vec::with_capacity(sk.width());
    for i in 0..=sk.width() {
        let tau = &sk.paths[i];
        cur.widen(sys.nvars());
        sys.require_nonneg(&cur.plus(&guard(vass, tau)?));
        cur = cur.plus(&effect(vass, tau)?);
        if i == sk.width() {
            break;
        }
        let gamma = &sk.cycles[i];
        let v = sys.new_var(BigInt::one(), exp_bound.clone());
        vars.push(v);
        cur.widen(sys.nvars());
        let eff = effect(vass, gamma)?;
        let grd = guard(vass, gamma)?;
        // first iteration, then the last one after e - 1 iterations
        sys.require_nonneg(&cur.plus(&grd));
        sys.require_nonneg(
            &cur.plus(&grd)
                .sub(&AffineCounters::constant(&eff, sys.nvars()))
                .plus_var(v, &eff),
        );
        cur = cur.plus_var(v, &eff);
    }
    Ok((cur, vars))
}

/// Exponents `e_i ∈ [1, exp_bound]` under which `sk` run from `initial` is
/// feasible and ends at least at `target`, lexicographically least first.
pub fn exponent_feasibility(
    vass: &Vass,
    sk: &Skeleton,
    initial: &Config,
    target: &Counters,
    exp_bound: &BigUint,
    node_budget: u64,
) -> Result<Option<Vec<BigUint>>, IlpError> {
    sk.validate(vass).map_err(IlpError::Malformed)?;
    if let Some(s) = sk.first_state(vass)? {
        if s != initial.state {
            return Err(IlpError::Malformed(
                "skeleton does not start at the initial state".into(),
            ));
        }
    }
    let mut sys = System::default();
    let entry = AffineCounters::constant(initial.counters(), 0);
    let bound = BigInt::from(exp_bound.clone());
    let (mut exit, _) = add_skeleton(vass, &mut sys, sk, &entry, &bound)?;
    exit.widen(sys.nvars());
    let t = AffineCounters::constant(target, sys.nvars());
    sys.require_nonneg(&exit.sub(&t));
    Ok(sys.solve(node_budget)?.map(|x| {
        x.into_iter()
            .map(|v| v.to_biguint().expect("exponents are positive"))
            .collect()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::tests::fig1_vass;
    use crate::model::ExplicitPath;
    use crate::StateId;

    fn loop_vass(b: i64, u: i64) -> Vass {
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        v.add_transition(q, q, b, u).unwrap();
        v
    }

    fn single(c: &[usize]) -> Skeleton {
        Skeleton {
            paths: vec![ExplicitPath::empty(), ExplicitPath::empty()],
            cycles: vec![ExplicitPath::from_indices(c)],
        }
    }

    #[test]
    fn forced_loop_count() {
        let v = loop_vass(1, 0);
        let start = Config::new(StateId(0), 0, 0).unwrap();
        let e = exponent_feasibility(
            &v,
            &single(&[0]),
            &start,
            &Counters::new(5, 0),
            &BigUint::from(1_000_000u32),
            10_000,
        )
        .unwrap();
        assert_eq!(e, Some(vec![BigUint::from(5u32)]));
    }

    #[test]
    fn negative_loop_is_infeasible() {
        let v = loop_vass(-1, 0);
        let start = Config::new(StateId(0), 0, 0).unwrap();
        let e = exponent_feasibility(
            &v,
            &single(&[0]),
            &start,
            &Counters::new(1, 0),
            &BigUint::from(1_000_000u32),
            10_000,
        )
        .unwrap();
        assert_eq!(e, None);
    }

    #[test]
    fn fig1_pair_then_rho() {
        let v = fig1_vass();
        let sk = Skeleton {
            paths: vec![ExplicitPath::empty(); 3],
            cycles: vec![
                ExplicitPath::from_indices(&[0, 1]),
                ExplicitPath::from_indices(&[1]),
            ],
        };
        let start = Config::new(StateId(0), 0, 1).unwrap();
        let e = exponent_feasibility(
            &v,
            &sk,
            &start,
            &Counters::new(0, 10),
            &BigUint::from(65536u32),
            10_000,
        )
        .unwrap()
        .unwrap();
        // lexicographically least: 99·e₂ ≤ e₁ and e₂ ≥ 9
        assert_eq!(e, vec![BigUint::from(891u32), BigUint::from(9u32)]);
        // (990, 10) is also a solution
        let mut sys = System::default();
        let entry = AffineCounters::constant(start.counters(), 0);
        let (exit, _) = add_skeleton(&v, &mut sys, &sk, &entry, &BigInt::from(65536)).unwrap();
        let x = [BigInt::from(990), BigInt::from(10)];
        assert!(sys.satisfied_by(&x));
        assert_eq!(exit.eval(&x), Counters::new(0, 11));
    }

    #[test]
    fn budget_is_reported() {
        let mut sys = System::default();
        let a = sys.new_var(BigInt::from(0), BigInt::from(1) << 40);
        let b = sys.new_var(BigInt::from(0), BigInt::from(1) << 40);
        // 2a - 2b = 1 has no integer solution, and propagation alone can't tell
        let mut c = Affine::constant(BigInt::from(-1), 2);
        c.coeffs[a] = BigInt::from(2);
        c.coeffs[b] = BigInt::from(-2);
        let mut d = c.clone();
        for k in d.coeffs.iter_mut() {
            *k = -k.clone();
        }
        d.constant = BigInt::from(1);
        sys.require(c);
        sys.require(d);
        assert_eq!(sys.solve(1000), Err(IlpError::Exhausted(1000)));
    }
}
