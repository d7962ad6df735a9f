//! The polynomial bounds `R`, `P` and the narrow-cost cap.

use num_bigint::BigUint;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolyBounds {
    /// `|Q|⁴(|Q|+1)(2|Q|+1)²`: bound on irreplaceable short cycles with
    /// distinct characterisations.
    pub r: BigUint,
    /// `2(|Q|²+1)(|Q|²+2)·R`.
    pub p: BigUint,
    /// `(|Q|(P+1), P)`.
    pub narrow_cost_cap: (BigUint, BigUint),
}

impl PolyBounds {
    pub fn new(num_states: usize) -> Self {
        let q = BigUint::from(num_states);
        let q2 = &q * &q;
        let two_q1 = &q * 2u32 + 1u32;
        let r = &q2 * &q2 * (&q + 1u32) * &two_q1 * &two_q1;
        let p = (&q2 + 1u32) * (&q2 + 2u32) * &r * 2u32;
        let cap = (&q * (&p + 1u32), p.clone());
        PolyBounds {
            r,
            p,
            narrow_cost_cap: cap,
        }
    }

    /// `C = (Σ|τ|, k)` lies componentwise below the cap.
    pub fn is_narrow(&self, cost: (usize, usize)) -> bool {
        BigUint::from(cost.0) <= self.narrow_cost_cap.0
            && BigUint::from(cost.1) <= self.narrow_cost_cap.1
    }
}
