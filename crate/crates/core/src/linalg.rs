//! Exact integer linear algebra on small dense matrices.
//!
//! Elimination is fraction-free (Bareiss): every intermediate entry is a minor
//! of the input, and each step divides exactly by the previous pivot. The
//! arithmetic runs in checked `i128` first and restarts in big integers on
//! overflow.

use dashu_int::ops::UnsignedAbs;
use dashu_int::IBig;
use dashu_ratio::RBig;

use crate::error::{Error, Result};

/// Integer operations needed by fraction-free elimination.
pub(crate) trait Exact: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_positive(&self) -> bool;
    /// `(a * b - c * d) / e`, exact, or `None` on overflow.
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self>;
    fn to_ibig(&self) -> IBig;
}

impl Exact for i128 {
    fn zero() -> Self {
        0
    }
    fn one() -> Self {
        1
    }
    fn from_i64(v: i64) -> Self {
        v as i128
    }
    fn is_zero(&self) -> bool {
        *self == 0
    }
    fn is_positive(&self) -> bool {
        *self > 0
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        let num = a.checked_mul(*b)?.checked_sub(c.checked_mul(*d)?)?;
        debug_assert_eq!(num % e, 0, "fraction-free step must divide exactly");
        Some(num / e)
    }
    fn to_ibig(&self) -> IBig {
        IBig::from(*self)
    }
}

impl Exact for IBig {
    fn zero() -> Self {
        IBig::ZERO
    }
    fn one() -> Self {
        IBig::ONE
    }
    fn from_i64(v: i64) -> Self {
        IBig::from(v)
    }
    fn is_zero(&self) -> bool {
        *self == IBig::ZERO
    }
    fn is_positive(&self) -> bool {
        *self > IBig::ZERO
    }
    fn cross_div(a: &Self, b: &Self, c: &Self, d: &Self, e: &Self) -> Option<Self> {
        Some((a * b - c * d) / e)
    }
    fn to_ibig(&self) -> IBig {
        self.clone()
    }
}

fn check_square(m: &[Vec<i64>]) -> Result<usize> {
    let d = m.len();
    if let Some(row) = m.iter().find(|r| r.len() != d) {
        return Err(Error::SizeMismatch { left: d, right: row.len() });
    }
    Ok(d)
}

type Reduced<T> = Option<(T, bool, Vec<Vec<T>>)>;

/// Fraction-free Gauss-Jordan on `[m | rhs]`. On success `m` is reduced to
/// `p * I` where `p` is the determinant of the row-permuted matrix, and the
/// right block holds `p * m^-1 rhs`. Returns `(p, rows swapped oddly, matrix)`;
/// `None` on overflow, `Some(None)` if `m` is singular.
fn bareiss<T: Exact>(m: &[Vec<i64>], rhs: &[Vec<i64>]) -> Option<Reduced<T>> {
    let d = m.len();
    let width = d + rhs.first().map_or(0, Vec::len);
    let mut a: Vec<Vec<T>> = m
        .iter()
        .zip(rhs.iter().chain(std::iter::repeat(&Vec::new())))
        .map(|(row, extra)| row.iter().chain(extra).map(|&v| T::from_i64(v)).collect())
        .collect();
    let mut prev = T::one();
    let mut sign_flip = false;
    for k in 0..d {
        let Some(p) = (k..d).find(|&r| !a[r][k].is_zero()) else { return Some(None) };
        if p != k {
            a.swap(p, k);
            sign_flip = !sign_flip;
        }
        for r in 0..d {
            if r == k {
                continue;
            }
            for c in 0..width {
                if c == k {
                    continue;
                }
                a[r][c] = T::cross_div(&a[k][k], &a[r][c], &a[r][k], &a[k][c], &prev)?;
            }
            a[r][k] = T::zero();
        }
        prev = a[k][k].clone();
    }
    Some(Some((prev, sign_flip, a)))
}

/// Exact determinant.
pub fn determinant(m: &[Vec<i64>]) -> Result<IBig> {
    let d = check_square(m)?;
    if d == 0 {
        return Ok(IBig::ONE);
    }
    let signed = |p: IBig, flip: bool| if flip { -p } else { p };
    let det = match bareiss::<i128>(m, &[]) {
        Some(r) => r.map(|(p, flip, _)| signed(p.to_ibig(), flip)),
        None => bareiss::<IBig>(m, &[]).expect("big integers do not overflow").map(|(p, flip, _)| signed(p, flip)),
    };
    Ok(det.unwrap_or(IBig::ZERO))
}

/// Solves `m x = rhs` column by column; returns a scale `p = ±det m` and `p * x`.
fn solve_scaled(m: &[Vec<i64>], rhs: &[Vec<i64>]) -> Result<(IBig, Vec<Vec<IBig>>)> {
    let d = check_square(m)?;
    if rhs.len() != d {
        return Err(Error::SizeMismatch { left: d, right: rhs.len() });
    }
    let out = |det: IBig, a: Vec<Vec<IBig>>| (det, a.into_iter().map(|row| row[d..].to_vec()).collect());
    match bareiss::<i128>(m, rhs) {
        Some(Some((det, _, a))) => {
            let a = a.into_iter().map(|row| row.iter().map(Exact::to_ibig).collect()).collect();
            Ok(out(det.to_ibig(), a))
        }
        Some(None) => Err(Error::SingularGenerators),
        None => match bareiss::<IBig>(m, rhs).expect("big integers do not overflow") {
            Some((det, _, a)) => Ok(out(det, a)),
            None => Err(Error::SingularGenerators),
        },
    }
}

/// Inverse of a matrix with determinant `±1`, as an integer matrix.
pub fn unimodular_inverse(m: &[Vec<i64>]) -> Result<Vec<Vec<i64>>> {
    let d = check_square(m)?;
    let identity: Vec<Vec<i64>> = (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect();
    let (det, scaled) = solve_scaled(m, &identity)?;
    let sign = if det == IBig::ONE {
        IBig::ONE
    } else if det == IBig::NEG_ONE {
        IBig::NEG_ONE
    } else {
        return Err(Error::NotUnimodular(det.to_string()));
    };
    scaled
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|v| i64::try_from(v * &sign).map_err(|_| Error::OutOfRange("inverse entry exceeds i64".into())))
                .collect()
        })
        .collect()
}

/// Exact rational solution of `m x = b`.
pub fn solve(m: &[Vec<i64>], b: &[i64]) -> Result<Vec<RBig>> {
    let rhs: Vec<Vec<i64>> = b.iter().map(|&v| vec![v]).collect();
    let (det, scaled) = solve_scaled(m, &rhs)?;
    Ok(scaled.into_iter().map(|row| RBig::from_parts(row[0].clone(), det.clone().unsigned_abs()) * sign_of(&det)).collect())
}

fn sign_of(v: &IBig) -> RBig {
    if *v < IBig::ZERO {
        RBig::NEG_ONE
    } else {
        RBig::ONE
    }
}

/// Transpose of a rectangular matrix.
pub fn transpose(m: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let cols = m.first().map_or(0, Vec::len);
    (0..cols).map(|j| m.iter().map(|row| row[j]).collect()).collect()
}

/// `m v` for an integer matrix and vector.
pub fn mul_vec(m: &[Vec<i64>], v: &[i64]) -> Vec<i64> {
    m.iter().map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum()).collect()
}
