//! Exact feasibility of `A x = b, x >= 0`.
//!
//! Phase-one simplex with artificial variables and Bland's rule, pivoting
//! fraction-free: the tableau holds integers equal to the rational tableau
//! times the current basis determinant, which stays positive because every
//! pivot element is positive.

use dashu_int::ops::UnsignedAbs;
use dashu_int::IBig;
use dashu_ratio::RBig;

use crate::linalg::Exact;

struct Tableau<T> {
    /// Row 0 is the phase-one objective; rows `1..=m` are constraints.
    /// Columns: `cols` structural, `m` artificial, then the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    scale: T,
}

/// Compares `a / b` with `c / d` for positive `b`, `d`.
fn ratio_cmp<T: Exact>(a: &T, b: &T, c: &T, d: &T) -> Option<std::cmp::Ordering> {
    // a*d - c*b, divided by one to reuse the checked cross product
    let diff = T::cross_div(a, d, c, b, &T::one())?;
    Some(if diff.is_zero() {
        std::cmp::Ordering::Equal
    } else if diff.is_positive() {
        std::cmp::Ordering::Greater
    } else {
        std::cmp::Ordering::Less
    })
}

fn run<T: Exact>(a: &[Vec<i64>], b: &[i64], cols: usize) -> Option<Option<Vec<(IBig, IBig)>>> {
    let m = a.len();
    let width = cols + m + 1;
    let mut rows: Vec<Vec<T>> = Vec::with_capacity(m + 1);
    rows.push(vec![T::zero(); width]);
    for (r, (row, &rhs)) in a.iter().zip(b).enumerate() {
        let flip = rhs < 0;
        let mut t: Vec<T> = row.iter().map(|&v| T::from_i64(if flip { -v } else { v })).collect();
        t.extend((0..m).map(|k| if k == r { T::one() } else { T::zero() }));
        t.push(T::from_i64(rhs.abs()));
        rows.push(t);
    }
    // objective: minimise the sum of artificials, expressed in the nonbasic columns
    for c in (0..cols).chain(std::iter::once(width - 1)) {
        let mut acc = T::zero();
        for r in 1..=m {
            acc = T::cross_div(&acc, &T::one(), &rows[r][c], &T::one(), &T::one())?;
        }
        rows[0][c] = acc;
    }
    let mut t = Tableau { rows, basis: (cols..cols + m).collect(), scale: T::one() };

    loop {
        let entering = (0..cols + m).find(|&c| {
            let v = &t.rows[0][c];
            !v.is_zero() && !v.is_positive()
        });
        let Some(q) = entering else { break };
        let mut leave: Option<usize> = None;
        for r in 1..=m {
            if !t.rows[r][q].is_positive() {
                continue;
            }
            leave = match leave {
                None => Some(r),
                Some(best) => {
                    let ord = ratio_cmp(&t.rows[r][width - 1], &t.rows[r][q], &t.rows[best][width - 1], &t.rows[best][q])?;
                    match ord {
                        std::cmp::Ordering::Less => Some(r),
                        std::cmp::Ordering::Equal if t.basis[r - 1] < t.basis[best - 1] => Some(r),
                        _ => Some(best),
                    }
                }
            };
        }
        // phase one is bounded below by zero, so a leaving row always exists
        let p = leave.expect("phase-one objective is bounded");
        let pivot = t.rows[p][q].clone();
        for r in 0..=m {
            if r == p {
                continue;
            }
            let factor = t.rows[r][q].clone();
            for c in 0..width {
                if c == q {
                    continue;
                }
                let v = T::cross_div(&pivot, &t.rows[r][c], &factor, &t.rows[p][c], &t.scale)?;
                t.rows[r][c] = v;
            }
            t.rows[r][q] = T::zero();
        }
        t.scale = pivot;
        t.basis[p - 1] = q;
    }

    let mut x = vec![(IBig::ZERO, IBig::ONE); cols];
    for (r, &var) in t.basis.iter().enumerate() {
        let value = &t.rows[r + 1][width - 1];
        if var >= cols {
            if !value.is_zero() {
                return Some(None);
            }
        } else {
            x[var] = (value.to_ibig(), t.scale.to_ibig());
        }
    }
    Some(Some(x))
}

/// A point `x >= 0` with `a x = b`, or `None` if there is none.
pub fn nonnegative_solution(a: &[Vec<i64>], b: &[i64]) -> Option<Vec<RBig>> {
    assert_eq!(a.len(), b.len(), "one right-hand side per row");
    let cols = a.first().map_or(0, Vec::len);
    assert!(a.iter().all(|r| r.len() == cols), "rows of equal length");
    let parts = match run::<i128>(a, b, cols) {
        Some(r) => r,
        None => run::<IBig>(a, b, cols).expect("big integers do not overflow"),
    }?;
    Some(parts.into_iter().map(|(num, den)| RBig::from_parts(num, den.unsigned_abs())).collect())
}
