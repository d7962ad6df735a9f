//! Nested path expressions with compositional summaries.
//!
//! A [`PathExpr`] denotes an explicit path without ever materialising it.
//! Every node has a [`Summary`] (endpoint states, effect, guard, expanded
//! length) computed bottom-up. For a power `γ^e` with `e >= 1` the guard is
//! `grd(γ) + min(0, (e-1)·eff(γ))` per coordinate: the lowest point of the
//! run is reached either in the first or in the last iteration. This is what
//! makes checking a compressed witness cost polynomial in its written size.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::model::{
    bit_size, Config, Counter, Counters, ExplicitPath, GuardPair, ModelError, StateId,
    TransitionId, Vass,
};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum PathExpr {
    Atom(TransitionId),
    Seq(Vec<PathExpr>),
    Power(Box<PathExpr>, BigUint),
}

impl PathExpr {
    pub fn atom(i: usize) -> Self {
        PathExpr::Atom(TransitionId(i))
    }

    pub fn empty() -> Self {
        PathExpr::Seq(Vec::new())
    }

    pub fn power(child: PathExpr, e: impl Into<BigUint>) -> Self {
        PathExpr::Power(Box::new(child), e.into())
    }

    pub fn seq(children: impl IntoIterator<Item = PathExpr>) -> Self {
        PathExpr::Seq(children.into_iter().collect())
    }

    /// An explicit path as a flat sequence of atoms.
    pub fn from_path(path: &ExplicitPath) -> Self {
        PathExpr::Seq(path.steps().iter().map(|&t| PathExpr::Atom(t)).collect())
    }

    /// Maximum nesting of `Power` nodes. Atoms have depth 0.
    pub fn power_depth(&self) -> usize {
        match self {
            PathExpr::Atom(_) => 0,
            PathExpr::Seq(cs) => cs.iter().map(PathExpr::power_depth).max().unwrap_or(0),
            PathExpr::Power(c, _) => 1 + c.power_depth(),
        }
    }

    /// Number of nodes in the tree.
    pub fn node_count(&self) -> usize {
        match self {
            PathExpr::Atom(_) => 1,
            PathExpr::Seq(cs) => 1 + cs.iter().map(PathExpr::node_count).sum::<usize>(),
            PathExpr::Power(c, _) => 1 + c.node_count(),
        }
    }

    /// Number of `Power` nodes.
    pub fn power_count(&self) -> usize {
        match self {
            PathExpr::Atom(_) => 0,
            PathExpr::Seq(cs) => cs.iter().map(PathExpr::power_count).sum(),
            PathExpr::Power(c, _) => 1 + c.power_count(),
        }
    }

    /// Written size: one per atom plus the bit size of every exponent.
    pub fn written_size(&self) -> u64 {
        match self {
            PathExpr::Atom(_) => 1,
            PathExpr::Seq(cs) => cs.iter().map(PathExpr::written_size).sum(),
            PathExpr::Power(c, e) => c.written_size() + bit_size(&BigInt::from(e.clone())),
        }
    }

    /// Flattens nested sequences and unwraps single-element sequences. The
    /// denoted path is unchanged. A top-level empty sequence stays as is.
    pub fn normalized(&self) -> PathExpr {
        fn flatten_into(e: &PathExpr, out: &mut Vec<PathExpr>) {
            match e {
                PathExpr::Seq(cs) => cs.iter().for_each(|c| flatten_into(c, out)),
                PathExpr::Atom(_) => out.push(e.clone()),
                PathExpr::Power(c, k) => {
                    out.push(PathExpr::Power(Box::new(c.normalized()), k.clone()))
                }
            }
        }
        let mut items = Vec::new();
        flatten_into(self, &mut items);
        if items.len() == 1 {
            items.pop().unwrap()
        } else {
            PathExpr::Seq(items)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PathError {
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("sequence is not endpoint-compatible: segment ends in state {left:?}, next starts in {right:?}")]
    EndpointMismatch { left: StateId, right: StateId },
    #[error("power with exponent {0} of a path that is not a cycle")]
    PowerOfNonCycle(BigUint),
    #[error("start configuration is not in the first state of the expression")]
    StartMismatch,
}

/// Compositional description of the path an expression denotes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summary {
    /// `None` for an expression that expands to the empty path; such an
    /// expression is compatible with any neighbouring state.
    pub first: Option<StateId>,
    pub last: Option<StateId>,
    pub eff: Counters,
    pub grd: GuardPair,
    pub len: BigUint,
}

impl Summary {
    pub fn empty() -> Self {
        Summary {
            first: None,
            last: None,
            eff: Counters::zero(),
            grd: Counters::zero(),
            len: BigUint::zero(),
        }
    }

    fn atom(vass: &Vass, t: TransitionId) -> Result<Self, PathError> {
        let tr = vass.transition(t)?;
        Ok(Summary {
            first: Some(tr.from),
            last: Some(tr.to),
            eff: tr.update.clone(),
            grd: tr.update.min_zero(),
            len: BigUint::one(),
        })
    }

    /// Summary of `self` followed by `next`.
    pub fn then(&self, next: &Summary) -> Result<Summary, PathError> {
        if let (Some(l), Some(r)) = (self.last, next.first) {
            if l != r {
                return Err(PathError::EndpointMismatch { left: l, right: r });
            }
        }
        Ok(Summary {
            first: self.first.or(next.first),
            last: next.last.or(self.last),
            eff: self.eff.add(&next.eff),
            grd: self.grd.min(&self.eff.add(&next.grd)),
            len: &self.len + &next.len,
        })
    }

    /// Summary of `self^e`.
    pub fn pow(&self, e: &BigUint) -> Result<Summary, PathError> {
        if e.is_zero() {
            return Ok(Summary::empty());
        }
        if *e > BigUint::one() && self.first.is_some() && self.first != self.last {
            return Err(PathError::PowerOfNonCycle(e.clone()));
        }
        let k = BigInt::from(e.clone());
        let rest = self.eff.scale(&(&k - 1));
        Ok(Summary {
            first: self.first,
            last: self.last,
            eff: self.eff.scale(&k),
            grd: self.grd.add(&rest.min_zero()),
            len: &self.len * e,
        })
    }

    pub fn is_cycle(&self) -> bool {
        self.first.is_some() && self.first == self.last
    }
}

/// Expression tree with the summary of every node attached.
#[derive(Debug, Clone)]
struct Annotated<'a> {
    expr: &'a PathExpr,
    summary: Summary,
    children: Vec<Annotated<'a>>,
}

fn annotate<'a>(vass: &Vass, expr: &'a PathExpr) -> Result<Annotated<'a>, PathError> {
    match expr {
        PathExpr::Atom(t) => Ok(Annotated {
            expr,
            summary: Summary::atom(vass, *t)?,
            children: Vec::new(),
        }),
        PathExpr::Seq(cs) => {
            let children = cs
                .iter()
                .map(|c| annotate(vass, c))
                .collect::<Result<Vec<_>, _>>()?;
            let mut s = Summary::empty();
            for c in &children {
                s = s.then(&c.summary)?;
            }
            Ok(Annotated {
                expr,
                summary: s,
                children,
            })
        }
        PathExpr::Power(c, e) => {
            let child = annotate(vass, c)?;
            let summary = child.summary.pow(e)?;
            Ok(Annotated {
                expr,
                summary,
                children: vec![child],
            })
        }
    }
}

/// Summary of the path `expr` denotes, computed without expanding it.
pub fn summarize(vass: &Vass, expr: &PathExpr) -> Result<Summary, PathError> {
    annotate(vass, expr).map(|a| a.summary)
}

/// Summary of an explicit path by direct prefix sums.
pub fn summarize_explicit(vass: &Vass, path: &ExplicitPath) -> Result<Summary, PathError> {
    let sums = path.prefix_sums(vass)?;
    let states = path.states(vass)?;
    Ok(Summary {
        first: states.first().copied(),
        last: states.last().copied(),
        eff: sums.last().cloned().unwrap_or_default(),
        grd: sums.iter().fold(Counters::zero(), |g, s| g.min(s)),
        len: BigUint::from(path.len()),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpandError {
    #[error(transparent)]
    Path(#[from] PathError),
    #[error("expanded length {length} exceeds the limit")]
    LengthOverflow { length: BigUint },
}

/// Fully expands `expr` if its length is at most `max_len`.
pub fn expand(vass: &Vass, expr: &PathExpr, max_len: usize) -> Result<ExplicitPath, ExpandError> {
    let s = summarize(vass, expr)?;
    if s.len > BigUint::from(max_len) {
        return Err(ExpandError::LengthOverflow { length: s.len });
    }
    fn go(e: &PathExpr, out: &mut Vec<TransitionId>) {
        match e {
            PathExpr::Atom(t) => out.push(*t),
            PathExpr::Seq(cs) => cs.iter().for_each(|c| go(c, out)),
            PathExpr::Power(c, k) => {
                // bounded by the length check above
                let k = k.to_usize().unwrap_or(0);
                let start = out.len();
                go(c, out);
                let end = out.len();
                for _ in 1..k {
                    out.extend_from_within(start..end);
                }
                if k == 0 {
                    out.truncate(start);
                }
            }
        }
    }
    let mut out = Vec::with_capacity(s.len.to_usize().unwrap_or(0));
    go(expr, &mut out);
    Ok(ExplicitPath(out))
}

/// One step of a path from the root of an expression tree to an atom.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocStep {
    /// Child of a sequence.
    Child(usize),
    /// 0-based iteration inside a power.
    Iteration(BigUint),
}

/// Where in an expression a run first goes negative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Location(pub Vec<LocStep>);

impl Location {
    /// The 1-based index of the failing step in the expanded path.
    pub fn step_index(&self, vass: &Vass, expr: &PathExpr) -> Result<BigUint, PathError> {
        let mut node = expr;
        let mut offset = BigUint::zero();
        for step in &self.0 {
            match (node, step) {
                (PathExpr::Seq(cs), LocStep::Child(i)) => {
                    for c in &cs[..*i] {
                        offset += summarize(vass, c)?.len;
                    }
                    node = &cs[*i];
                }
                (PathExpr::Power(c, _), LocStep::Iteration(k)) => {
                    offset += summarize(vass, c)?.len * k;
                    node = c;
                }
                _ => break,
            }
        }
        Ok(offset + 1u32)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("root");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" > ")?;
            }
            match s {
                LocStep::Child(c) => write!(f, "term {c}")?,
                LocStep::Iteration(k) => write!(f, "iteration {k}")?,
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub counter: Counter,
    pub location: Location,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} counter negative at {}", self.counter, self.location)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Feasibility {
    Reached(Config),
    Violation(Violation),
}

/// Follows `expr` from `start` without expanding it. The verdict and the
/// final configuration agree with simulating the expanded path.
pub fn feasible_from(
    vass: &Vass,
    expr: &PathExpr,
    start: &Config,
) -> Result<Feasibility, PathError> {
    let tree = annotate(vass, expr)?;
    if let Some(f) = tree.summary.first {
        if f != start.state {
            return Err(PathError::StartMismatch);
        }
    }
    let v = start.counters();
    if v.add(&tree.summary.grd).is_nonneg() {
        let last = tree.summary.last.unwrap_or(start.state);
        let fin = Config::from_counters(last, v.add(&tree.summary.eff))?;
        return Ok(Feasibility::Reached(fin));
    }
    let mut loc = Vec::new();
    let counter = locate(vass, &tree, v.clone(), &mut loc);
    Ok(Feasibility::Violation(Violation {
        counter,
        location: Location(loc),
    }))
}

/// Descends to the first atom at which the run from `v` goes negative.
/// Requires `v + grd(node)` to have a negative coordinate.
fn locate(vass: &Vass, node: &Annotated<'_>, v: Counters, loc: &mut Vec<LocStep>) -> Counter {
    match node.expr {
        PathExpr::Atom(t) => {
            let after = v.add(&vass.transitions()[t.0].update);
            after.first_negative().unwrap_or(Counter::Binary)
        }
        PathExpr::Seq(_) => {
            let mut cur = v;
            for (i, c) in node.children.iter().enumerate() {
                if !cur.add(&c.summary.grd).is_nonneg() {
                    loc.push(LocStep::Child(i));
                    return locate(vass, c, cur, loc);
                }
                cur = cur.add(&c.summary.eff);
            }
            unreachable!("sequence guard violated but no child fails")
        }
        PathExpr::Power(_, e) => {
            let child = &node.children[0];
            let eff = &child.summary.eff;
            let g = &child.summary.grd;
            let e = BigInt::from(e.clone());
            let mut first: Option<BigInt> = None;
            for c in [Counter::Binary, Counter::Unary] {
                let slack = v.get(c) + g.get(c);
                let d = eff.get(c);
                let it = if slack.is_negative() {
                    Some(BigInt::zero())
                } else if d.is_negative() {
                    Some(slack.div_floor(&-d) + 1)
                } else {
                    None
                };
                if let Some(it) = it.filter(|it| *it < e) {
                    first = Some(match first {
                        Some(f) if f <= it => f,
                        _ => it,
                    });
                }
            }
            let it = first.expect("power guard violated but no iteration fails");
            let entry = v.add(&eff.scale(&it));
            loc.push(LocStep::Iteration(it.to_biguint().unwrap()));
            locate(vass, child, entry, loc)
        }
    }
}
