//! Linear forms `τ₀ γ₁^{e₁} τ₁ ⋯ γ_k^{e_k} τ_k` of explicit paths.

use num_bigint::BigUint;

use crate::model::{ExplicitPath, StateId, TransitionId, Vass};
use crate::path::PathExpr;
use crate::toolkit::ToolkitError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearForm {
    /// `k + 1` connecting paths.
    pub paths: Vec<ExplicitPath>,
    /// `k` cycles.
    pub cycles: Vec<ExplicitPath>,
    /// `k` positive exponents.
    pub exps: Vec<usize>,
}

impl LinearForm {
    /// The form with no cycles.
    pub fn plain(path: ExplicitPath) -> Self {
        LinearForm {
            paths: vec![path],
            cycles: Vec::new(),
            exps: Vec::new(),
        }
    }

    pub fn width(&self) -> usize {
        self.cycles.len()
    }

    /// `(Σ|τ_i|, k)`.
    pub fn cost(&self) -> (usize, usize) {
        (self.paths.iter().map(ExplicitPath::len).sum(), self.width())
    }

    pub fn len(&self) -> usize {
        self.cost().0
            + self
                .cycles
                .iter()
                .zip(&self.exps)
                .map(|(c, e)| c.len() * e)
                .sum::<usize>()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// The denoted explicit path.
    pub fn to_path(&self) -> ExplicitPath {
        let mut out = self.paths[0].0.clone();
        for i in 0..self.width() {
            for _ in 0..self.exps[i] {
                out.extend_from_slice(&self.cycles[i].0);
            }
            out.extend_from_slice(&self.paths[i + 1].0);
        }
        ExplicitPath(out)
    }

    /// Depth-one expression; cycles with exponent one are written inline.
    pub fn to_expr(&self) -> PathExpr {
        let mut items: Vec<PathExpr> = Vec::new();
        let push_path = |items: &mut Vec<PathExpr>, p: &ExplicitPath| {
            items.extend(p.steps().iter().map(|&t| PathExpr::Atom(t)));
        };
        push_path(&mut items, &self.paths[0]);
        for i in 0..self.width() {
            if self.exps[i] == 1 {
                push_path(&mut items, &self.cycles[i]);
            } else {
                items.push(PathExpr::power(
                    PathExpr::from_path(&self.cycles[i]).normalized(),
                    BigUint::from(self.exps[i]),
                ));
            }
            push_path(&mut items, &self.paths[i + 1]);
        }
        PathExpr::Seq(items).normalized()
    }

    /// Checks shape, endpoint chaining and that cycles are cycles.
    pub fn validate(&self, vass: &Vass) -> Result<(), ToolkitError> {
        let k = self.width();
        if self.paths.len() != k + 1 || self.exps.len() != k {
            return Err(ToolkitError::Malformed(
                "paths, cycles and exponents disagree in number",
            ));
        }
        if self.exps.contains(&0) {
            return Err(ToolkitError::Malformed("zero exponent"));
        }
        for c in &self.cycles {
            if !c.is_cycle(vass)? {
                return Err(ToolkitError::NotACycle);
            }
        }
        self.to_path().states(vass)?;
        Ok(())
    }

    /// Merges neighbouring bundles of the same cycle separated by an empty
    /// path.
    pub fn merged(mut self) -> Self {
        let mut i = 0;
        while i + 1 < self.cycles.len() {
            if self.paths[i + 1].is_empty() && self.cycles[i] == self.cycles[i + 1] {
                self.exps[i] += self.exps[i + 1];
                self.cycles.remove(i + 1);
                self.exps.remove(i + 1);
                self.paths.remove(i + 1);
            } else {
                i += 1;
            }
        }
        self
    }

    /// Iteration ranges `(start, end)` of every bundle in the denoted path,
    /// as step indices.
    pub fn bundle_spans(&self) -> Vec<(usize, usize)> {
        let mut pos = self.paths[0].len();
        let mut out = Vec::with_capacity(self.width());
        for i in 0..self.width() {
            let end = pos + self.cycles[i].len() * self.exps[i];
            out.push((pos, end));
            pos = end + self.paths[i + 1].len();
        }
        out
    }
}

/// Scans the path left to right; whenever a state repeats inside the
/// current connecting path, the repeated stretch becomes a cycle. Equal
/// cycles met back to back are bundled. Every connecting path of the result
/// is simple, so it has fewer than `|Q|` steps.
pub fn greedy_linear_form(vass: &Vass, path: &ExplicitPath) -> Result<LinearForm, ToolkitError> {
    let states = path.states(vass)?;
    let mut form = LinearForm::plain(ExplicitPath::empty());
    if path.is_empty() {
        return Ok(form);
    }
    let mut cur: Vec<TransitionId> = Vec::new();
    let mut cur_states: Vec<StateId> = vec![states[0]];
    for (i, &t) in path.steps().iter().enumerate() {
        let to = states[i + 1];
        if let Some(pos) = cur_states.iter().position(|&s| s == to) {
            let mut cyc = cur.split_off(pos);
            cyc.push(t);
            let cyc = ExplicitPath(cyc);
            let tau = ExplicitPath(std::mem::take(&mut cur));
            let last = form.paths.len() - 1;
            let extend =
                tau.is_empty() && form.paths[last].is_empty() && form.cycles.last() == Some(&cyc);
            if extend {
                *form.exps.last_mut().unwrap() += 1;
            } else {
                form.paths[last] = form.paths[last].concat(&tau);
                form.cycles.push(cyc);
                form.exps.push(1);
                form.paths.push(ExplicitPath::empty());
            }
            cur_states = vec![to];
        } else {
            cur.push(t);
            cur_states.push(to);
        }
    }
    let last = form.paths.len() - 1;
    form.paths[last] = form.paths[last].concat(&ExplicitPath(cur));
    Ok(form)
}
