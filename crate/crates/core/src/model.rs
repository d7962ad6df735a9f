//! The 2-VASS with one unary counter: states, transitions, configurations,
//! explicit paths and the prefix-sum quantities (effect, guard, nadir) that
//! the rest of the crate is built on.

use std::collections::HashMap;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Signed};
use thiserror::Error;

/// Index of a state in [`Vass::states`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateId(pub usize);

/// Positional index of a transition. The i-th transition in file order is
/// atom `#i` in every path expression.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TransitionId(pub usize);

impl fmt::Display for TransitionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// One of the two counters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Counter {
    Binary,
    Unary,
}

impl fmt::Display for Counter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Counter::Binary => f.write_str("binary"),
            Counter::Unary => f.write_str("unary"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("duplicate state `{0}`")]
    DuplicateState(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(usize),
    #[error("transition {0} does not exist")]
    UnknownTransition(TransitionId),
    #[error("unary update {0} out of range (must be -1, 0 or 1)")]
    UnaryOutOfRange(BigInt),
    #[error("path is not state-compatible at step {step}")]
    IncompatiblePath { step: usize },
    #[error("path starts in a different state than the configuration")]
    StartMismatch,
    #[error("counter values must be non-negative")]
    NegativeCounter,
    #[error("operation requires a non-empty path")]
    EmptyPath,
}

/// A pair of integers, one per counter. Used for counter updates, effects,
/// guards and counter valuations alike.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Counters {
    pub bin: BigInt,
    pub una: BigInt,
}

impl Counters {
    pub fn new(bin: impl Into<BigInt>, una: impl Into<BigInt>) -> Self {
        Counters {
            bin: bin.into(),
            una: una.into(),
        }
    }

    pub fn zero() -> Self {
        Counters::default()
    }

    pub fn get(&self, c: Counter) -> &BigInt {
        match c {
            Counter::Binary => &self.bin,
            Counter::Unary => &self.una,
        }
    }

    pub fn get_mut(&mut self, c: Counter) -> &mut BigInt {
        match c {
            Counter::Binary => &mut self.bin,
            Counter::Unary => &mut self.una,
        }
    }

    pub fn add(&self, other: &Counters) -> Counters {
        Counters {
            bin: &self.bin + &other.bin,
            una: &self.una + &other.una,
        }
    }

    pub fn sub(&self, other: &Counters) -> Counters {
        Counters {
            bin: &self.bin - &other.bin,
            una: &self.una - &other.una,
        }
    }

    pub fn scale(&self, k: &BigInt) -> Counters {
        Counters {
            bin: &self.bin * k,
            una: &self.una * k,
        }
    }

    pub fn min(&self, other: &Counters) -> Counters {
        Counters {
            bin: (&self.bin).min(&other.bin).clone(),
            una: (&self.una).min(&other.una).clone(),
        }
    }

    pub fn max(&self, other: &Counters) -> Counters {
        Counters {
            bin: (&self.bin).max(&other.bin).clone(),
            una: (&self.una).max(&other.una).clone(),
        }
    }

    /// Componentwise `min(self, 0)`.
    pub fn min_zero(&self) -> Counters {
        self.min(&Counters::zero())
    }

    /// Componentwise `max(self, 0)`.
    pub fn max_zero(&self) -> Counters {
        self.max(&Counters::zero())
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Counters) -> bool {
        self.bin <= other.bin && self.una <= other.una
    }

    /// Componentwise `self >= other`.
    pub fn ge(&self, other: &Counters) -> bool {
        other.le(self)
    }

    /// `self >= other` with at least one strict inequality.
    pub fn gt(&self, other: &Counters) -> bool {
        self.ge(other) && self != other
    }

    pub fn is_nonneg(&self) -> bool {
        !self.bin.is_negative() && !self.una.is_negative()
    }

    /// First coordinate (binary before unary) that is negative.
    pub fn first_negative(&self) -> Option<Counter> {
        if self.bin.is_negative() {
            Some(Counter::Binary)
        } else if self.una.is_negative() {
            Some(Counter::Unary)
        } else {
            None
        }
    }

    /// Effect is `>= 0` or `<= 0` componentwise.
    pub fn is_monotone(&self) -> bool {
        let z = Counters::zero();
        self.ge(&z) || self.le(&z)
    }

    /// The two coordinates swapped.
    pub fn flipped(&self) -> Counters {
        Counters {
            bin: self.una.clone(),
            una: self.bin.clone(),
        }
    }

    /// `max(|bin|, |una|) + 1`.
    pub fn size_max(&self) -> BigInt {
        self.bin.abs().max(self.una.abs()) + 1
    }
}

impl fmt::Display for Counters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.bin, self.una)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Transition {
    pub from: StateId,
    pub to: StateId,
    pub update: Counters,
}

/// Componentwise minimum over all prefix sums of a path, the empty prefix
/// included; both components are therefore `<= 0`.
pub type GuardPair = Counters;

/// A finite automaton whose transitions carry a binary-encoded update and a
/// unary update. In strict mode (the default) unary updates lie in
/// `{-1, 0, 1}`; permissive mode accepts arbitrary integers, which makes the
/// structure a general 2-VASS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vass {
    states: Vec<String>,
    index: HashMap<String, StateId>,
    transitions: Vec<Transition>,
    strict: bool,
}

impl Vass {
    pub fn new() -> Self {
        Vass {
            states: Vec::new(),
            index: HashMap::new(),
            transitions: Vec::new(),
            strict: true,
        }
    }

    pub fn permissive() -> Self {
        Vass {
            strict: false,
            ..Vass::new()
        }
    }

    pub fn is_strict(&self) -> bool {
        self.strict
    }

    pub fn add_state(&mut self, name: &str) -> Result<StateId, ModelError> {
        if self.index.contains_key(name) {
            return Err(ModelError::DuplicateState(name.to_string()));
        }
        let id = StateId(self.states.len());
        self.states.push(name.to_string());
        self.index.insert(name.to_string(), id);
        Ok(id)
    }

    pub fn add_transition(
        &mut self,
        from: StateId,
        to: StateId,
        bin: impl Into<BigInt>,
        una: impl Into<BigInt>,
    ) -> Result<TransitionId, ModelError> {
        for s in [from, to] {
            if s.0 >= self.states.len() {
                return Err(ModelError::StateOutOfRange(s.0));
            }
        }
        let update = Counters::new(bin, una);
        if self.strict && update.una.abs() > BigInt::one() {
            return Err(ModelError::UnaryOutOfRange(update.una));
        }
        let id = TransitionId(self.transitions.len());
        self.transitions.push(Transition { from, to, update });
        Ok(id)
    }

    pub fn state_id(&self, name: &str) -> Result<StateId, ModelError> {
        self.index
            .get(name)
            .copied()
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn state_name(&self, id: StateId) -> &str {
        &self.states[id.0]
    }

    pub fn states(&self) -> impl ExactSizeIterator<Item = StateId> + '_ {
        (0..self.states.len()).map(StateId)
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn transitions(&self) -> &[Transition] {
        &self.transitions
    }

    pub fn transition(&self, id: TransitionId) -> Result<&Transition, ModelError> {
        self.transitions
            .get(id.0)
            .ok_or(ModelError::UnknownTransition(id))
    }

    /// Transitions leaving `s`, in index order.
    pub fn outgoing(&self, s: StateId) -> impl Iterator<Item = (TransitionId, &Transition)> + '_ {
        self.transitions
            .iter()
            .enumerate()
            .filter(move |(_, t)| t.from == s)
            .map(|(i, t)| (TransitionId(i), t))
    }

    /// The same automaton with the two counters swapped. The result is
    /// always permissive since the new second counter may carry binary
    /// updates. Transition indices are preserved.
    pub fn flipped(&self) -> Vass {
        Vass {
            states: self.states.clone(),
            index: self.index.clone(),
            transitions: self
                .transitions
                .iter()
                .map(|t| Transition {
                    from: t.from,
                    to: t.to,
                    update: t.update.flipped(),
                })
                .collect(),
            strict: false,
        }
    }

    /// `|T|max`: the largest absolute value occurring in any update.
    pub fn max_abs_update(&self) -> BigInt {
        self.transitions
            .iter()
            .map(|t| t.update.bin.abs().max(t.update.una.abs()))
            .max()
            .unwrap_or_default()
    }

    /// `|V|max = |Q| + |T| * |T|max`.
    pub fn pseudo_size(&self) -> BigInt {
        BigInt::from(self.states.len())
            + BigInt::from(self.transitions.len()) * self.max_abs_update()
    }

    /// `|V| = |Q| + sum of bit(b)` over binary updates.
    pub fn size(&self) -> u64 {
        self.states.len() as u64
            + self
                .transitions
                .iter()
                .map(|t| bit_size(&t.update.bin))
                .sum::<u64>()
    }
}

impl Default for Vass {
    fn default() -> Self {
        Vass::new()
    }
}

/// `bit(z) = floor(log2(|z| + 1)) + 1`.
pub fn bit_size(z: &BigInt) -> u64 {
    let m: BigUint = z.magnitude() + 1u32;
    // bits() is floor(log2(m)) + 1 for m >= 1
    m.bits()
}

/// A state together with two non-negative counter values.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Config {
    pub state: StateId,
    counters: Counters,
}

impl Config {
    pub fn new(
        state: StateId,
        bin: impl Into<BigInt>,
        una: impl Into<BigInt>,
    ) -> Result<Self, ModelError> {
        Config::from_counters(state, Counters::new(bin, una))
    }

    pub fn from_counters(state: StateId, counters: Counters) -> Result<Self, ModelError> {
        if !counters.is_nonneg() {
            return Err(ModelError::NegativeCounter);
        }
        Ok(Config { state, counters })
    }

    pub fn counters(&self) -> &Counters {
        &self.counters
    }

    pub fn bin(&self) -> &BigInt {
        &self.counters.bin
    }

    pub fn una(&self) -> &BigInt {
        &self.counters.una
    }

    /// Same state and componentwise `>=`.
    pub fn covers(&self, other: &Config) -> bool {
        self.state == other.state && self.counters.ge(&other.counters)
    }

    pub fn flipped(&self) -> Config {
        Config {
            state: self.state,
            counters: self.counters.flipped(),
        }
    }

    pub fn display<'a>(&'a self, vass: &'a Vass) -> impl fmt::Display + 'a {
        DisplayConfig { vass, config: self }
    }
}

struct DisplayConfig<'a> {
    vass: &'a Vass,
    config: &'a Config,
}

impl fmt::Display for DisplayConfig<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}({}, {})",
            self.vass.state_name(self.config.state),
            self.config.counters.bin,
            self.config.counters.una
        )
    }
}

/// A coverability question: can `initial` reach a configuration covering
/// `target`?
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverInstance {
    pub vass: Vass,
    pub initial: Config,
    pub target: Config,
}

impl CoverInstance {
    pub fn new(vass: Vass, initial: Config, target: Config) -> Result<Self, ModelError> {
        for s in [initial.state, target.state] {
            if s.0 >= vass.num_states() {
                return Err(ModelError::StateOutOfRange(s.0));
            }
        }
        Ok(CoverInstance {
            vass,
            initial,
            target,
        })
    }

    /// The instance with both counters swapped everywhere.
    pub fn flipped(&self) -> CoverInstance {
        CoverInstance {
            vass: self.vass.flipped(),
            initial: self.initial.flipped(),
            target: self.target.flipped(),
        }
    }
}

/// A sequence of transition indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ExplicitPath(pub Vec<TransitionId>);

impl ExplicitPath {
    pub fn empty() -> Self {
        ExplicitPath(Vec::new())
    }

    pub fn from_indices(ix: &[usize]) -> Self {
        ExplicitPath(ix.iter().copied().map(TransitionId).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn steps(&self) -> &[TransitionId] {
        &self.0
    }

    pub fn slice(&self, from: usize, to: usize) -> ExplicitPath {
        ExplicitPath(self.0[from..to].to_vec())
    }

    pub fn concat(&self, other: &ExplicitPath) -> ExplicitPath {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        ExplicitPath(v)
    }

    pub fn repeat(&self, times: usize) -> ExplicitPath {
        ExplicitPath(self.0.repeat(times))
    }

    /// Checks state compatibility and returns the visited states
    /// `q_0, ..., q_m`. Empty for the empty path.
    pub fn states(&self, vass: &Vass) -> Result<Vec<StateId>, ModelError> {
        let mut out = Vec::with_capacity(self.0.len() + 1);
        for (i, &t) in self.0.iter().enumerate() {
            let tr = vass.transition(t)?;
            match out.last() {
                None => out.push(tr.from),
                Some(&s) if s != tr.from => {
                    return Err(ModelError::IncompatiblePath { step: i + 1 })
                }
                _ => {}
            }
            out.push(tr.to);
        }
        Ok(out)
    }

    pub fn first_state(&self, vass: &Vass) -> Result<Option<StateId>, ModelError> {
        match self.0.first() {
            None => Ok(None),
            Some(&t) => Ok(Some(vass.transition(t)?.from)),
        }
    }

    pub fn last_state(&self, vass: &Vass) -> Result<Option<StateId>, ModelError> {
        match self.0.last() {
            None => Ok(None),
            Some(&t) => Ok(Some(vass.transition(t)?.to)),
        }
    }

    pub fn is_cycle(&self, vass: &Vass) -> Result<bool, ModelError> {
        let states = self.states(vass)?;
        Ok(!self.is_empty() && states.first() == states.last())
    }

    /// Prefix sums of the updates, the empty prefix first: `m + 1` entries.
    pub fn prefix_sums(&self, vass: &Vass) -> Result<Vec<Counters>, ModelError> {
        self.states(vass)?;
        let mut acc = Counters::zero();
        let mut out = Vec::with_capacity(self.0.len() + 1);
        out.push(acc.clone());
        for &t in &self.0 {
            acc = acc.add(&vass.transitions[t.0].update);
            out.push(acc.clone());
        }
        Ok(out)
    }
}

impl fmt::Display for ExplicitPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, t) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{t}")?;
        }
        f.write_str("]")
    }
}

/// Sum of the counter updates along `path`.
pub fn effect(vass: &Vass, path: &ExplicitPath) -> Result<Counters, ModelError> {
    path.states(vass)?;
    Ok(path.0.iter().fold(Counters::zero(), |acc, t| {
        acc.add(&vass.transitions[t.0].update)
    }))
}

/// Componentwise minimum over all prefix sums, the empty prefix included.
pub fn guard(vass: &Vass, path: &ExplicitPath) -> Result<GuardPair, ModelError> {
    let sums = path.prefix_sums(vass)?;
    Ok(sums.iter().fold(Counters::zero(), |g, s| g.min(s)))
}

/// Outcome of following a path from a configuration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SimOutcome {
    Reached(Config),
    /// `step` is 1-based: the counter went negative after taking the
    /// `step`-th transition.
    FailureAt {
        step: usize,
        counter: Counter,
    },
}

pub fn simulate(
    vass: &Vass,
    start: &Config,
    path: &ExplicitPath,
) -> Result<SimOutcome, ModelError> {
    let states = path.states(vass)?;
    if let Some(&s0) = states.first() {
        if s0 != start.state {
            return Err(ModelError::StartMismatch);
        }
    }
    let mut cur = start.counters.clone();
    for (i, &t) in path.0.iter().enumerate() {
        cur = cur.add(&vass.transitions[t.0].update);
        if let Some(c) = cur.first_negative() {
            return Ok(SimOutcome::FailureAt {
                step: i + 1,
                counter: c,
            });
        }
    }
    let state = states.last().copied().unwrap_or(start.state);
    Ok(SimOutcome::Reached(Config {
        state,
        counters: cur,
    }))
}

/// Every configuration of the run, the start included. `None` if the run
/// goes negative.
pub fn run_configs(
    vass: &Vass,
    start: &Config,
    path: &ExplicitPath,
) -> Result<Option<Vec<Config>>, ModelError> {
    let states = path.states(vass)?;
    if let Some(&s0) = states.first() {
        if s0 != start.state {
            return Err(ModelError::StartMismatch);
        }
    }
    let mut out = Vec::with_capacity(path.len() + 1);
    out.push(start.clone());
    let mut cur = start.counters.clone();
    for (i, &t) in path.0.iter().enumerate() {
        cur = cur.add(&vass.transitions[t.0].update);
        if !cur.is_nonneg() {
            return Ok(None);
        }
        out.push(Config {
            state: states[i + 1],
            counters: cur.clone(),
        });
    }
    Ok(Some(out))
}

/// Binary-nadir decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NadirSplit {
    /// `path[1..i_b]`; its effect equals the binary guard of the whole path.
    pub prefix: ExplicitPath,
    /// `path[i_b+1..k]`; its binary guard is zero.
    pub suffix: ExplicitPath,
    pub nadir_state: StateId,
}

/// Splits `path` at the first index where the binary prefix sum attains its
/// minimum (index 0, the empty prefix, is allowed).
pub fn nadir_decompose(vass: &Vass, path: &ExplicitPath) -> Result<NadirSplit, ModelError> {
    if path.is_empty() {
        return Err(ModelError::EmptyPath);
    }
    let states = path.states(vass)?;
    let sums = path.prefix_sums(vass)?;
    let mut best = 0;
    for (i, s) in sums.iter().enumerate() {
        if s.bin < sums[best].bin {
            best = i;
        }
    }
    Ok(NadirSplit {
        prefix: path.slice(0, best),
        suffix: path.slice(best, path.len()),
        nadir_state: states[best],
    })
}

/// Binary-nadir state of a non-empty path.
pub fn nadir_state(vass: &Vass, path: &ExplicitPath) -> Result<StateId, ModelError> {
    nadir_decompose(vass, path).map(|d| d.nadir_state)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// One state `q`, λ = (100, -1), ρ = (-99, 1).
    pub fn fig1_vass() -> Vass {
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        v.add_transition(q, q, 100, -1).unwrap();
        v.add_transition(q, q, -99, 1).unwrap();
        v
    }

    fn p(ix: &[usize]) -> ExplicitPath {
        ExplicitPath::from_indices(ix)
    }

    #[test]
    fn effect_examples() {
        let v = fig1_vass();
        assert_eq!(effect(&v, &p(&[0, 1])).unwrap(), Counters::new(1, 0));
        assert_eq!(effect(&v, &p(&[])).unwrap(), Counters::zero());
        assert_eq!(effect(&v, &p(&[1, 1])).unwrap(), Counters::new(-198, 2));
    }

    #[test]
    fn guard_examples() {
        let v = fig1_vass();
        assert_eq!(guard(&v, &p(&[0, 1])).unwrap(), Counters::new(0, -1));
        assert_eq!(guard(&v, &p(&[])).unwrap(), Counters::zero());
        assert_eq!(guard(&v, &p(&[1])).unwrap(), Counters::new(-99, 0));
    }

    #[test]
    fn simulate_examples() {
        let v = fig1_vass();
        let q = v.state_id("q").unwrap();
        let start = Config::new(q, 0, 1).unwrap();
        assert_eq!(
            simulate(&v, &start, &p(&[0, 1])).unwrap(),
            SimOutcome::Reached(Config::new(q, 1, 1).unwrap())
        );
        assert_eq!(
            simulate(&v, &start, &p(&[1])).unwrap(),
            SimOutcome::FailureAt {
                step: 1,
                counter: Counter::Binary
            }
        );
        assert_eq!(
            simulate(&v, &start, &p(&[])).unwrap(),
            SimOutcome::Reached(start.clone())
        );
    }

    #[test]
    fn incompatible_paths_are_structural_errors() {
        let mut v = Vass::new();
        let a = v.add_state("a").unwrap();
        let b = v.add_state("b").unwrap();
        v.add_transition(a, b, 1, 0).unwrap();
        assert_eq!(
            effect(&v, &p(&[0, 0])),
            Err(ModelError::IncompatiblePath { step: 2 })
        );
        assert!(guard(&v, &p(&[3])).is_err());
        let start = Config::new(b, 0, 0).unwrap();
        assert_eq!(
            simulate(&v, &start, &p(&[0])),
            Err(ModelError::StartMismatch)
        );
    }

    #[test]
    fn nadir_examples() {
        let mut v = Vass::new();
        let s: Vec<_> = (0..4)
            .map(|i| v.add_state(&format!("s{i}")).unwrap())
            .collect();
        v.add_transition(s[0], s[1], 2, 0).unwrap();
        v.add_transition(s[1], s[2], -3, 0).unwrap();
        v.add_transition(s[2], s[3], 1, 0).unwrap();
        v.add_transition(s[0], s[0], 5, 0).unwrap();
        let d = nadir_decompose(&v, &p(&[0, 1, 2])).unwrap();
        assert_eq!(d.prefix, p(&[0, 1]));
        assert_eq!(d.suffix, p(&[2]));
        assert_eq!(d.nadir_state, s[2]);

        let d = nadir_decompose(&v, &p(&[3])).unwrap();
        assert!(d.prefix.is_empty());
        assert_eq!(d.nadir_state, s[0]);

        let f = fig1_vass();
        let d = nadir_decompose(&f, &p(&[0, 1])).unwrap();
        assert!(d.prefix.is_empty());
        assert_eq!(d.nadir_state, f.state_id("q").unwrap());

        assert_eq!(nadir_decompose(&f, &p(&[])), Err(ModelError::EmptyPath));
    }

    #[test]
    fn strict_mode_rejects_large_unary_updates() {
        let mut v = Vass::new();
        let q = v.add_state("q").unwrap();
        assert!(matches!(
            v.add_transition(q, q, 0, 2),
            Err(ModelError::UnaryOutOfRange(_))
        ));
        let mut w = Vass::permissive();
        let q = w.add_state("q").unwrap();
        assert!(w.add_transition(q, q, 0, 2).is_ok());
    }

    #[test]
    fn negative_configs_are_rejected() {
        assert_eq!(
            Config::new(StateId(0), -1, 0),
            Err(ModelError::NegativeCounter)
        );
    }

    #[test]
    fn bit_sizes() {
        assert_eq!(bit_size(&BigInt::from(0)), 1);
        assert_eq!(bit_size(&BigInt::from(1)), 2);
        assert_eq!(bit_size(&BigInt::from(-3)), 3);
        assert_eq!(bit_size(&BigInt::from(100)), 7);
    }

    #[test]
    fn sizes_of_fig1() {
        let v = fig1_vass();
        assert_eq!(v.max_abs_update(), BigInt::from(100));
        assert_eq!(v.pseudo_size(), BigInt::from(201));
    }
}
