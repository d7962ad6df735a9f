//! Exact feasibility of the rational relaxation, by the two-phase simplex
//! method's first phase with Bland's rule.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Whether some rational `y >= 0` satisfies `rows[r].0 · y >= rows[r].1`
/// for every row.
pub fn relaxation_feasible(nvars: usize, rows: &[(Vec<BigInt>, BigInt)]) -> bool {
    let m = rows.len();
    if m == 0 {
        return true;
    }
    // columns: y, one surplus per row, then artificials
    let mut art_rows = Vec::new();
    for (r, (_, rhs)) in rows.iter().enumerate() {
        if !rhs.is_negative() && !rhs.is_zero() {
            art_rows.push(r);
        }
    }
    let ncols = nvars + m + art_rows.len();
    let mut t: Vec<Vec<BigRational>> = Vec::with_capacity(m);
    let mut b: Vec<BigRational> = Vec::with_capacity(m);
    let mut basis = vec![0usize; m];
    for (r, (coeffs, rhs)) in rows.iter().enumerate() {
        let mut row = vec![BigRational::zero(); ncols];
        // a·y - s = rhs
        let flip = !art_rows.contains(&r);
        for (j, c) in coeffs.iter().enumerate() {
            let v = BigRational::from_integer(c.clone());
            row[j] = if flip { -v } else { v };
        }
        row[nvars + r] = if flip {
            BigRational::one()
        } else {
            -BigRational::one()
        };
        let rhs = BigRational::from_integer(rhs.clone());
        if flip {
            b.push(-rhs);
            basis[r] = nvars + r;
        } else {
            let k = art_rows.iter().position(|&x| x == r).unwrap();
            row[nvars + m + k] = BigRational::one();
            b.push(rhs);
            basis[r] = nvars + m + k;
        }
        t.push(row);
    }
    let is_art = |j: usize| j >= nvars + m;
    loop {
        // reduced costs of minimising the sum of artificials
        let mut entering = None;
        for j in 0..ncols {
            if basis.contains(&j) {
                continue;
            }
            let mut d = if is_art(j) {
                BigRational::one()
            } else {
                BigRational::zero()
            };
            for r in 0..m {
                if is_art(basis[r]) {
                    d -= &t[r][j];
                }
            }
            if d.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(j) = entering else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if t[r][j].is_positive() {
                let ratio = &b[r] / &t[r][j];
                let better = match &leave {
                    None => true,
                    Some((lr, lratio)) => {
                        ratio < *lratio || (ratio == *lratio && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((p, _)) = leave else {
            // cannot happen for a bounded objective; treat as feasible
            return true;
        };
        let piv = t[p][j].clone();
        for c in t[p].iter_mut() {
            *c /= &piv;
        }
        b[p] /= &piv;
        for r in 0..m {
            if r != p && !t[r][j].is_zero() {
                let f = t[r][j].clone();
                for c in 0..ncols {
                    let delta = &f * &t[p][c];
                    t[r][c] -= delta;
                }
                let delta = &f * &b[p];
                b[r] -= delta;
            }
        }
        basis[p] = j;
    }
    (0..m).all(|r| !is_art(basis[r]) || b[r].is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(c: &[i64], rhs: i64) -> (Vec<BigInt>, BigInt) {
        (
            c.iter().map(|&x| BigInt::from(x)).collect(),
            BigInt::from(rhs),
        )
    }

    #[test]
    fn small_systems() {
        // y0 >= 3, -y0 >= -5
        assert!(relaxation_feasible(1, &[row(&[1], 3), row(&[-1], -5)]));
        // y0 >= 6, -y0 >= -5
        assert!(!relaxation_feasible(1, &[row(&[1], 6), row(&[-1], -5)]));
        // y0 - y1 >= 1, y1 - y0 >= 0
        assert!(!relaxation_feasible(
            2,
            &[row(&[1, -1], 1), row(&[-1, 1], 0)]
        ));
        // 2y0 - 2y1 = 1 is fine over the rationals
        assert!(relaxation_feasible(
            2,
            &[row(&[2, -2], 1), row(&[-2, 2], -1)]
        ));
        assert!(relaxation_feasible(3, &[]));
    }
}
