//! Sparse multivariate polynomials with arbitrary-precision integer
//! coefficients in the matrix variables `x[i,j]`, `1 <= i, j <= n`.
//!
//! Monomials are ordered purely lexicographically with the variables ranked
//! row-major: `x[1,1] > x[1,2] > ... > x[1,n] > x[2,1] > ... > x[n,n]`.
//! Terms are kept sorted by decreasing monomial, so the leading term is
//! always `terms[0]`.

mod minors;

use std::collections::{BTreeMap, BinaryHeap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use dashu_int::IBig;
use dashu_ratio::RBig;

use crate::error::{Error, Result};
use crate::ssyt::{tri_index, Array};

pub use minors::{flag_minor, tableau_basis_element, FlagSet};

/// Largest supported matrix size.
pub const MAX_N: usize = 8;
const MAX_VARS: usize = MAX_N * MAX_N;

/// The matrix variable `x[i,j]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarId {
    pub i: usize,
    pub j: usize,
}

impl VarId {
    pub fn new(i: usize, j: usize, n: usize) -> Result<Self> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(Error::OutOfRange(format!("x[{i},{j}] for n = {n}")));
        }
        Ok(VarId { i, j })
    }

    fn slot(self, n: usize) -> usize {
        (self.i - 1) * n + (self.j - 1)
    }

    /// `Greater` means `self` ranks above `other`.
    pub fn rank_cmp(&self, other: &VarId) -> std::cmp::Ordering {
        (other.i, other.j).cmp(&(self.i, self.j))
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x[{},{}]", self.i, self.j)
    }
}

/// Exponent vector; slot `(i-1)*n + (j-1)` holds the exponent of `x[i,j]`.
///
/// `Ord` is the lex monomial order: slots follow the variable ranking, so it
/// is the bytewise order, compared eight slots at a time.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Monomial([u8; MAX_VARS]);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        for (a, b) in self.0.chunks_exact(8).zip(other.0.chunks_exact(8)) {
            let a = u64::from_be_bytes(a.try_into().expect("chunk of eight"));
            let b = u64::from_be_bytes(b.try_into().expect("chunk of eight"));
            if a != b {
                return a.cmp(&b);
            }
        }
        std::cmp::Ordering::Equal
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub const ONE: Monomial = Monomial([0; MAX_VARS]);

    pub fn var(v: VarId, n: usize) -> Self {
        let mut m = Monomial::ONE;
        m.0[v.slot(n)] = 1;
        m
    }

    pub fn exponent(&self, v: VarId, n: usize) -> u32 {
        u32::from(self.0[v.slot(n)])
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| u32::from(e)).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn checked_mul(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = [0u8; MAX_VARS];
        let mut overflow = false;
        for k in 0..MAX_VARS {
            let (s, o) = self.0[k].overflowing_add(other.0[k]);
            out[k] = s;
            overflow |= o;
        }
        (!overflow).then_some(Monomial(out))
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `other / self`, if `self` divides `other`.
    pub fn quotient_of(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = [0u8; MAX_VARS];
        for k in 0..MAX_VARS {
            out[k] = other.0[k].checked_sub(self.0[k])?;
        }
        Some(Monomial(out))
    }

    /// Nonzero `(variable, exponent)` pairs in rank order.
    pub fn factors(&self, n: usize) -> impl Iterator<Item = (VarId, u32)> + '_ {
        (0..n * n).filter(move |&k| self.0[k] != 0).map(move |k| {
            (VarId { i: k / n + 1, j: k % n + 1 }, u32::from(self.0[k]))
        })
    }

    fn render(&self, n: usize) -> String {
        let parts: Vec<String> = self
            .factors(n)
            .map(|(v, e)| if e == 1 { v.to_string() } else { format!("{v}^{e}") })
            .collect();
        parts.join("*")
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let nz: Vec<(usize, u8)> =
            self.0.iter().enumerate().filter(|(_, &e)| e != 0).map(|(k, &e)| (k, e)).collect();
        write!(f, "Monomial{nz:?}")
    }
}

/// A polynomial in `Z[x[i,j]]` with its ambient size `n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n: usize,
    /// Strictly decreasing monomials, nonzero coefficients.
    terms: Vec<(Monomial, IBig)>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_N {
        return Err(Error::UnsupportedSize { n, min: 1, max: MAX_N });
    }
    Ok(())
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        assert!((1..=MAX_N).contains(&n), "unsupported size {n}");
        Polynomial { n, terms: Vec::new() }
    }

    pub fn constant(n: usize, c: impl Into<IBig>) -> Self {
        let c = c.into();
        let mut p = Polynomial::zero(n);
        if !c.is_zero() {
            p.terms.push((Monomial::ONE, c));
        }
        p
    }

    pub fn one(n: usize) -> Self {
        Polynomial::constant(n, 1)
    }

    pub fn var(v: VarId, n: usize) -> Self {
        Polynomial { n, terms: vec![(Monomial::var(v, n), IBig::ONE)] }
    }

    /// Canonicalizes arbitrary terms: merges duplicates, drops zeros, sorts.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, IBig)>) -> Result<Self> {
        check_n(n)?;
        let mut acc: BTreeMap<Monomial, IBig> = BTreeMap::new();
        for (m, c) in terms {
            *acc.entry(m).or_insert(IBig::ZERO) += c;
        }
        let terms = acc.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect();
        Ok(Polynomial { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(Monomial, IBig)] {
        &self.terms
    }

    /// Total degree; zero for constants and the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// Lex-greatest monomial and its coefficient.
    pub fn leading_term(&self) -> Result<(&Monomial, &IBig)> {
        self.terms.first().map(|(m, c)| (m, c)).ok_or(Error::ZeroPolynomial)
    }

    fn same_n(&self, other: &Polynomial) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_n(other)?;
        Ok(self.merge(other, false))
    }

    pub fn checked_sub(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_n(other)?;
        Ok(self.merge(other, true))
    }

    fn merge(&self, other: &Polynomial, negate: bool) -> Polynomial {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut a, mut b) = (self.terms.iter().peekable(), other.terms.iter().peekable());
        let sign = |c: &IBig| if negate { -c } else { c.clone() };
        loop {
            match (a.peek(), b.peek()) {
                (Some((ma, ca)), Some((mb, cb))) => match ma.cmp(mb) {
                    std::cmp::Ordering::Greater => {
                        out.push((*ma, ca.clone()));
                        a.next();
                    }
                    std::cmp::Ordering::Less => {
                        out.push((*mb, sign(cb)));
                        b.next();
                    }
                    std::cmp::Ordering::Equal => {
                        let c = if negate { ca - cb } else { ca + cb };
                        if !c.is_zero() {
                            out.push((*ma, c));
                        }
                        a.next();
                        b.next();
                    }
                },
                (Some((ma, ca)), None) => {
                    out.push((*ma, ca.clone()));
                    a.next();
                }
                (None, Some((mb, cb))) => {
                    out.push((*mb, sign(cb)));
                    b.next();
                }
                (None, None) => break,
            }
        }
        Polynomial { n: self.n, terms: out }
    }

    pub fn checked_mul(&self, other: &Polynomial) -> Result<Polynomial> {
        self.same_n(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Polynomial::zero(self.n));
        }
        let (big, small) =
            if self.len() >= other.len() { (self, other) } else { (other, self) };
        if small.len() == 1 {
            let (m, c) = &small.terms[0];
            let mut terms = Vec::with_capacity(big.len());
            for (bm, bc) in &big.terms {
                // multiplying by a monomial preserves the order
                terms.push((bm.checked_mul(m).ok_or(Error::ExponentOverflow)?, bc * c));
            }
            return Ok(Polynomial { n: self.n, terms });
        }
        let terms = mul_sorted(&small.terms, &big.terms)?;
        Ok(Polynomial { n: self.n, terms })
    }

    pub fn pow(&self, k: u32) -> Result<Polynomial> {
        let mut result = Polynomial::one(self.n);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                result = result.checked_mul(&base)?;
            }
            k >>= 1;
            if k > 0 {
                base = base.checked_mul(&base)?;
            }
        }
        Ok(result)
    }

    pub fn scale(&self, c: &IBig) -> Polynomial {
        if c.is_zero() {
            return Polynomial::zero(self.n);
        }
        Polynomial { n: self.n, terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect() }
    }

    /// Exact quotient `self / divisor` by repeated elimination of the leading
    /// term. Fails as soon as a leading term cannot be cancelled.
    pub fn exact_div(&self, divisor: &Polynomial) -> Result<Polynomial> {
        self.same_n(divisor)?;
        let (dm, dc) = divisor.leading_term().map_err(|_| {
            Error::NotDivisible("division by the zero polynomial".into())
        })?;
        if divisor.len() == 1 {
            let mut terms = Vec::with_capacity(self.len());
            for (m, c) in &self.terms {
                let q = dm.quotient_of(m).ok_or_else(|| self.not_divisible(divisor, m))?;
                if !(c % dc).is_zero() {
                    return Err(self.not_divisible(divisor, m));
                }
                terms.push((q, c / dc));
            }
            return Ok(Polynomial { n: self.n, terms });
        }
        // Heap division: the next remainder term is the larger of the next
        // dividend term and the largest pending product quotient_k * tail_j.
        // Each quotient term keeps one pending product in the heap.
        let tail = &divisor.terms[1..];
        let mut quotient: Vec<(Monomial, IBig)> = Vec::new();
        let mut heap: BinaryHeap<(Monomial, usize, usize)> = BinaryHeap::new();
        let mut next = self.terms.iter().peekable();
        loop {
            let from_dividend = next.peek().map(|(m, _)| *m);
            let from_heap = heap.peek().map(|(m, _, _)| *m);
            let m = match (from_dividend, from_heap) {
                (None, None) => break,
                (Some(a), Some(b)) => a.max(b),
                (Some(a), None) => a,
                (None, Some(b)) => b,
            };
            let mut c = IBig::ZERO;
            if from_dividend == Some(m) {
                c += &next.next().expect("peeked").1;
            }
            while heap.peek().is_some_and(|(hm, _, _)| *hm == m) {
                let (_, k, j) = heap.pop().expect("peeked");
                c -= &quotient[k].1 * &tail[j].1;
                if let Some((tm, _)) = tail.get(j + 1) {
                    heap.push((quotient[k].0.checked_mul(tm).ok_or(Error::ExponentOverflow)?, k, j + 1));
                }
            }
            if c.is_zero() {
                continue;
            }
            let qm = dm.quotient_of(&m).ok_or_else(|| self.not_divisible(divisor, &m))?;
            if !(&c % dc).is_zero() {
                return Err(self.not_divisible(divisor, &m));
            }
            if let Some((tm, _)) = tail.first() {
                heap.push((qm.checked_mul(tm).ok_or(Error::ExponentOverflow)?, quotient.len(), 0));
            }
            quotient.push((qm, &c / dc));
        }
        Ok(Polynomial { n: self.n, terms: quotient })
    }

    fn not_divisible(&self, divisor: &Polynomial, stuck: &Monomial) -> Error {
        Error::NotDivisible(format!(
            "remainder term {} not divisible by leading term {} ({} terms / {} terms)",
            stuck.render(self.n),
            divisor.terms[0].0.render(self.n),
            self.len(),
            divisor.len()
        ))
    }

    /// Exact value at a rational `n x n` matrix.
    pub fn evaluate(&self, matrix: &[Vec<RBig>]) -> Result<RBig> {
        let n = self.n;
        if matrix.len() != n || matrix.iter().any(|r| r.len() != n) {
            return Err(Error::SizeMismatch { left: n, right: matrix.len() });
        }
        let mut max_exp = vec![0u8; n * n];
        for (m, _) in &self.terms {
            for k in 0..n * n {
                max_exp[k] = max_exp[k].max(m.0[k]);
            }
        }
        let powers: Vec<Vec<RBig>> = (0..n * n)
            .map(|k| {
                let x = &matrix[k / n][k % n];
                let mut p = vec![RBig::ONE];
                for e in 1..=max_exp[k] as usize {
                    let next = &p[e - 1] * x;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut total = RBig::ZERO;
        for (m, c) in &self.terms {
            let mut t = RBig::from(c.clone());
            for k in 0..n * n {
                if m.0[k] != 0 {
                    t *= &powers[k][m.0[k] as usize];
                }
            }
            total += t;
        }
        Ok(total)
    }
}

impl fmt::Display for Polynomial {
    /// Canonical rendering, terms in decreasing lex order, e.g.
    /// `x[1,1]*x[3,2] - x[1,2]*x[3,1]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (k, (m, c)) in self.terms.iter().enumerate() {
            let negative = c.sign() == dashu_int::Sign::Negative;
            let abs = if negative { -c } else { c.clone() };
            match (k, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if m.is_one() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                f.write_str(&m.render(self.n))?;
            } else {
                write!(f, "{abs}*{}", m.render(self.n))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial(n={}, {self})", self.n)
    }
}

// Operator sugar; panics on mismatched sizes. Use the checked_* methods
// when sizes come from untrusted input.
impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.checked_add(rhs).expect("polynomial sizes differ")
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.checked_sub(rhs).expect("polynomial sizes differ")
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.checked_mul(rhs).expect("polynomial product failed")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial { n: self.n, terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect() }
    }
}

/// Product of two sorted term lists. Multiplying by one term preserves the
/// order, so the product of a single term is sorted; halves of the shorter
/// list are multiplied recursively and merged.
fn mul_sorted(small: &[(Monomial, IBig)], big: &[(Monomial, IBig)]) -> Result<Vec<(Monomial, IBig)>> {
    if small.len() == 1 {
        let (m, c) = &small[0];
        return big
            .iter()
            .map(|(bm, bc)| Ok((bm.checked_mul(m).ok_or(Error::ExponentOverflow)?, bc * c)))
            .collect();
    }
    let (left, right) = small.split_at(small.len() / 2);
    Ok(merge_owned(mul_sorted(left, big)?, mul_sorted(right, big)?))
}

fn merge_owned(a: Vec<(Monomial, IBig)>, b: Vec<(Monomial, IBig)>) -> Vec<(Monomial, IBig)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut a, mut b) = (a.into_iter().peekable(), b.into_iter().peekable());
    loop {
        let ord = match (a.peek(), b.peek()) {
            (Some((ma, _)), Some((mb, _))) => ma.cmp(mb),
            (Some(_), None) => std::cmp::Ordering::Greater,
            (None, Some(_)) => std::cmp::Ordering::Less,
            (None, None) => break,
        };
        match ord {
            std::cmp::Ordering::Greater => out.push(a.next().expect("peeked")),
            std::cmp::Ordering::Less => out.push(b.next().expect("peeked")),
            std::cmp::Ordering::Equal => {
                let (m, x) = a.next().expect("peeked");
                let (_, y) = b.next().expect("peeked");
                let c = x + y;
                if !c.is_zero() {
                    out.push((m, c));
                }
            }
        }
    }
    out
}

/// The array `A` with `X^A` the leading monomial of `p`, after checking that
/// `p` is monic, its leading exponent lives on the triangle `i >= j`, and
/// the resulting array is D-tight.
pub fn leading_array(p: &Polynomial) -> Result<Array> {
    let (m, c) = p.leading_term()?;
    if !c.is_one() {
        return Err(Error::NotMonic { coeff: c.to_string() });
    }
    let n = p.n;
    let mut a = Array::zero(n);
    for (v, e) in m.factors(n) {
        if v.i < v.j {
            return Err(Error::NotTriangular { i: v.i, j: v.j });
        }
        a.set(v.i, v.j, e);
    }
    a.d_tight().map_err(Error::NotDTight)?;
    Ok(a)
}

/// `X^A` as a monomial.
pub fn array_monomial(a: &Array) -> Monomial {
    let n = a.n();
    let mut m = Monomial::ONE;
    for i in 1..=n {
        for j in 1..=i {
            let e = a.entries()[tri_index(i, j)];
            m.0[VarId { i, j }.slot(n)] = u8::try_from(e).expect("exponent exceeds 255");
        }
    }
    m
}

/// The Pascal matrix `P[i][j] = C(i+j-2, i-1)`, totally positive.
pub fn pascal_matrix(n: usize) -> Vec<Vec<RBig>> {
    let mut binom = vec![vec![IBig::ZERO; 2 * n]; 2 * n];
    for a in 0..2 * n {
        binom[a][0] = IBig::ONE;
        for b in 1..=a {
            binom[a][b] = &binom[a - 1][b - 1] + &binom[a - 1][b];
        }
    }
    (0..n)
        .map(|i| (0..n).map(|j| RBig::from(binom[i + j][i].clone())).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(i: usize, j: usize, n: usize) -> Polynomial {
        Polynomial::var(VarId::new(i, j, n).unwrap(), n)
    }

    #[test]
    fn ring_identities() {
        let n = 3;
        let p = &(&x(1, 1, n) * &x(2, 2, n)) - &x(3, 1, n);
        assert_eq!(&p + &Polynomial::zero(n), p);
        assert_eq!(&p * &Polynomial::one(n), p);
        assert_eq!((&p - &p), Polynomial::zero(n));
        assert_eq!((&x(1, 1, n) * &x(2, 2, n)).to_string(), "x[1,1]*x[2,2]");
        assert_eq!(
            p.checked_add(&Polynomial::one(4)),
            Err(Error::SizeMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn exact_division_cases() {
        let n = 2;
        let a = x(1, 1, n);
        let b = x(1, 2, n);
        let num = &(&a * &a) - &(&b * &b);
        let den = &a + &b;
        assert_eq!(num.exact_div(&den).unwrap(), &a - &b);
        assert_eq!(num.exact_div(&Polynomial::one(n)).unwrap(), num);
        assert!(matches!(den.exact_div(&a), Err(Error::NotDivisible(_))));
        assert!(matches!(num.exact_div(&Polynomial::zero(n)), Err(Error::NotDivisible(_))));
        let twice = num.scale(&IBig::from(2));
        assert_eq!(twice.exact_div(&num.scale(&IBig::from(2))).unwrap(), Polynomial::one(n));
        assert!(num.exact_div(&Polynomial::constant(n, 2)).is_err());
    }

    #[test]
    fn leading_terms() {
        assert_eq!(Polynomial::constant(3, 5).leading_term().unwrap().1, &IBig::from(5));
        assert!(Polynomial::constant(3, 5).leading_term().unwrap().0.is_one());
        assert_eq!(Polynomial::zero(3).leading_term(), Err(Error::ZeroPolynomial));
        let p = x(1, 1, 3).scale(&IBig::from(2));
        assert_eq!(leading_array(&p), Err(Error::NotMonic { coeff: "2".into() }));
        assert_eq!(leading_array(&x(1, 2, 3)), Err(Error::NotTriangular { i: 1, j: 2 }));
    }

    #[test]
    fn rendering() {
        let n = 3;
        let p = &(&(&x(1, 1, n) * &x(1, 1, n)) - &x(2, 1, n).scale(&IBig::from(3))) + &Polynomial::constant(n, -4);
        assert_eq!(p.to_string(), "x[1,1]^2 - 3*x[2,1] - 4");
        assert_eq!(Polynomial::zero(n).to_string(), "0");
        assert_eq!((-&x(3, 3, n)).to_string(), "-x[3,3]");
    }

    #[test]
    fn evaluation() {
        let n = 2;
        let p = &(&x(1, 1, n) * &x(2, 2, n)) - &x(1, 2, n);
        let m = vec![
            vec![RBig::from(2), RBig::from_parts(IBig::from(1), 3u8.into())],
            vec![RBig::from(5), RBig::from(7)],
        ];
        assert_eq!(p.evaluate(&m).unwrap(), RBig::from_parts(IBig::from(41), 3u8.into()));
    }

    #[test]
    fn pascal_entries() {
        let p = pascal_matrix(4);
        assert_eq!(p[3][3], RBig::from(20));
        assert_eq!(p[0][3], RBig::from(1));
        assert_eq!(p[2][1], RBig::from(3));
    }
}
