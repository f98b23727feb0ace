//! Semistandard Young tableaux, D-tight arrays and Gelfand-Tsetlin patterns.
//!
//! Tableaux are drawn French style: `rows[0]` is the bottom (longest) row.
//! An [`Array`] stores the row multiplicities `a[i][j]` = number of boxes in
//! row `j` filled with `i`, for `1 <= j <= i <= n`. Entries are kept in the
//! flattened order `(1,1), (2,1), (2,2), (3,1), ...`, which is also the rank
//! order of the matrix variables `x[i,j]`, so the lexicographic order on
//! monomials `X^A` is plain slice comparison on the flattened entries.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of triangular entries for size `n`.
pub const fn tri_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// Flat position of `(i, j)` with `1 <= j <= i`.
#[inline]
pub const fn tri_index(i: usize, j: usize) -> usize {
    i * (i - 1) / 2 + (j - 1)
}

/// Inverse of [`tri_index`].
pub fn tri_position(index: usize) -> (usize, usize) {
    let mut i = 1;
    while tri_index(i + 1, 1) <= index {
        i += 1;
    }
    (i, index - tri_index(i, 1) + 1)
}

/// Where an integer triangle leaves the cone of D-tight arrays.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DTightViolation {
    /// `a[i][j] < 0`.
    Negative { i: usize, j: usize },
    /// `a(1,j+1) + ... + a(i,j+1) > a(1,j) + ... + a(i-1,j)`.
    Inequality { i: usize, j: usize },
}

impl fmt::Display for DTightViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            DTightViolation::Negative { i, j } => write!(f, "negative entry at (i, j) = ({i}, {j})"),
            DTightViolation::Inequality { i, j } => {
                write!(f, "partial-sum inequality fails at (i, j) = ({i}, {j})")
            }
        }
    }
}

/// Checks the D-tight inequalities on a flattened integer triangle, which may
/// carry negative entries (differences of arrays do).
pub fn check_d_tight(n: usize, entries: &[i64]) -> std::result::Result<(), DTightViolation> {
    debug_assert_eq!(entries.len(), tri_len(n));
    for (idx, &v) in entries.iter().enumerate() {
        if v < 0 {
            let (i, j) = tri_position(idx);
            return Err(DTightViolation::Negative { i, j });
        }
    }
    let at = |i: usize, j: usize| if i >= j { entries[tri_index(i, j)] } else { 0 };
    for j in 1..n {
        let mut upper = 0i64;
        let mut lower = 0i64;
        for i in 1..=n {
            upper += at(i, j + 1);
            if i >= 2 {
                lower += at(i - 1, j);
            }
            if upper > lower {
                return Err(DTightViolation::Inequality { i, j });
            }
        }
    }
    Ok(())
}

/// A nonnegative integer triangle `a[i][j]`, `1 <= j <= i <= n`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(into = "ArrayRepr", try_from = "ArrayRepr")]
pub struct Array {
    n: usize,
    entries: Vec<u32>,
}

impl Array {
    pub fn zero(n: usize) -> Self {
        Array { n, entries: vec![0; tri_len(n)] }
    }

    /// Builds an array from flattened entries in rank order.
    pub fn from_flat(n: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != tri_len(n) {
            return Err(Error::SizeMismatch { left: tri_len(n), right: entries.len() });
        }
        Ok(Array { n, entries })
    }

    /// Converts a signed flattened triangle, rejecting negative entries.
    pub fn from_signed(n: usize, entries: &[i64]) -> Result<Self> {
        if entries.len() != tri_len(n) {
            return Err(Error::SizeMismatch { left: tri_len(n), right: entries.len() });
        }
        let mut out = Vec::with_capacity(entries.len());
        for (idx, &v) in entries.iter().enumerate() {
            let v = u32::try_from(v).map_err(|_| {
                let (i, j) = tri_position(idx);
                Error::NotDTight(DTightViolation::Negative { i, j })
            })?;
            out.push(v);
        }
        Ok(Array { n, entries: out })
    }

    /// Array of the one-column tableau with the given (strictly increasing) entries.
    pub fn from_column(n: usize, column: &[u32]) -> Result<Self> {
        let mut a = Array::zero(n);
        let mut prev = 0;
        for (r, &e) in column.iter().enumerate() {
            if e as usize > n || e <= prev {
                return Err(Error::InvalidTableau(format!("bad column {column:?} for n = {n}")));
            }
            prev = e;
            a.entries[tri_index(e as usize, r + 1)] += 1;
        }
        Ok(a)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// `a[i][j]`; zero outside the triangle.
    pub fn get(&self, i: usize, j: usize) -> u32 {
        if j == 0 || j > i || i > self.n {
            0
        } else {
            self.entries[tri_index(i, j)]
        }
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        assert!(1 <= j && j <= i && i <= self.n, "({i}, {j}) outside the triangle");
        self.entries[tri_index(i, j)] = value;
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    pub fn to_signed(&self) -> Vec<i64> {
        self.entries.iter().map(|&v| i64::from(v)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&v| v == 0)
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|&v| u64::from(v)).sum()
    }

    /// Entrywise multiple.
    pub fn scaled(&self, t: u32) -> Array {
        Array { n: self.n, entries: self.entries.iter().map(|&v| v * t).collect() }
    }

    /// Number of columns of the tableau, i.e. the length of the bottom row.
    pub fn width(&self) -> u64 {
        (1..=self.n).map(|i| u64::from(self.get(i, 1))).sum()
    }

    /// `Ok(())` when D-tight, otherwise the first violated inequality.
    pub fn d_tight(&self) -> std::result::Result<(), DTightViolation> {
        check_d_tight(self.n, &self.to_signed())
    }

    pub fn is_d_tight(&self) -> bool {
        self.d_tight().is_ok()
    }
}

impl fmt::Debug for Array {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Array({self})")
    }
}

impl fmt::Display for Array {
    /// Rows bottom-up: `a11 a21 .. an1 / a22 .. an2 / ... / ann`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for j in 1..=self.n {
            if j > 1 {
                f.write_str(" / ")?;
            }
            for i in j..=self.n {
                if i > j {
                    f.write_str(" ")?;
                }
                write!(f, "{}", self.get(i, j))?;
            }
        }
        Ok(())
    }
}

/// JSON layout of an [`Array`]: `rows[j-1] = [a_jj, ..., a_nj]`, bottom row first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ArrayRepr {
    pub n: usize,
    pub rows: Vec<Vec<u32>>,
}

impl From<Array> for ArrayRepr {
    fn from(a: Array) -> Self {
        let rows = (1..=a.n).map(|j| (j..=a.n).map(|i| a.get(i, j)).collect()).collect();
        ArrayRepr { n: a.n, rows }
    }
}

impl TryFrom<ArrayRepr> for Array {
    type Error = Error;

    fn try_from(r: ArrayRepr) -> Result<Self> {
        if r.rows.len() != r.n {
            return Err(Error::SizeMismatch { left: r.n, right: r.rows.len() });
        }
        let mut a = Array::zero(r.n);
        for (j0, row) in r.rows.iter().enumerate() {
            let j = j0 + 1;
            if row.len() != r.n - j0 {
                return Err(Error::SizeMismatch { left: r.n - j0, right: row.len() });
            }
            for (k, &v) in row.iter().enumerate() {
                a.set(j + k, j, v);
            }
        }
        Ok(a)
    }
}

/// A semistandard Young tableau over `[n]`, rows stored bottom row first.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "TableauRepr", into = "TableauRepr")]
pub struct Tableau {
    n: usize,
    rows: Vec<Vec<u32>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TableauRepr {
    pub n: usize,
    /// Bottom row first.
    pub rows: Vec<Vec<u32>>,
}

impl From<Tableau> for TableauRepr {
    fn from(t: Tableau) -> Self {
        TableauRepr { n: t.n, rows: t.rows }
    }
}

impl TryFrom<TableauRepr> for Tableau {
    type Error = Error;

    fn try_from(r: TableauRepr) -> Result<Self> {
        Tableau::new(r.n, r.rows)
    }
}

impl Tableau {
    pub fn empty(n: usize) -> Self {
        Tableau { n, rows: Vec::new() }
    }

    pub fn new(n: usize, rows: Vec<Vec<u32>>) -> Result<Self> {
        for (j, row) in rows.iter().enumerate() {
            if row.is_empty() {
                return Err(Error::InvalidTableau(format!("row {} is empty", j + 1)));
            }
            if j > 0 && row.len() > rows[j - 1].len() {
                return Err(Error::InvalidTableau(format!("row {} is longer than the row below", j + 1)));
            }
            for (c, &e) in row.iter().enumerate() {
                if e == 0 || e as usize > n {
                    return Err(Error::InvalidTableau(format!("entry {e} outside [1, {n}]")));
                }
                if c > 0 && row[c - 1] > e {
                    return Err(Error::InvalidTableau(format!("row {} decreases", j + 1)));
                }
                if j > 0 && rows[j - 1][c] >= e {
                    return Err(Error::InvalidTableau(format!("column {} not strict", c + 1)));
                }
            }
        }
        Ok(Tableau { n, rows })
    }

    /// Builds a tableau from its columns, each listed bottom to top.
    pub fn from_columns(n: usize, columns: &[Vec<u32>]) -> Result<Self> {
        let height = columns.iter().map(Vec::len).max().unwrap_or(0);
        let mut rows = vec![Vec::new(); height];
        for col in columns {
            for (r, &e) in col.iter().enumerate() {
                rows[r].push(e);
            }
        }
        Tableau::new(n, rows)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn shape(&self) -> Vec<usize> {
        self.rows.iter().map(Vec::len).collect()
    }

    pub fn num_boxes(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    /// Column fillings, left to right, each read bottom to top.
    pub fn columns(&self) -> Vec<Vec<u32>> {
        let width = self.rows.first().map_or(0, Vec::len);
        (0..width)
            .map(|c| self.rows.iter().take_while(|r| r.len() > c).map(|r| r[c]).collect())
            .collect()
    }
}

impl fmt::Debug for Tableau {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Tableau({self})")
    }
}

impl fmt::Display for Tableau {
    /// Column notation: each column as its entries bottom to top, columns
    /// separated by `|`; e.g. `124|3`. The empty tableau renders as `∅`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cols = self.columns();
        if cols.is_empty() {
            return f.write_str("∅");
        }
        let sep = if self.n >= 10 { "," } else { "" };
        for (k, col) in cols.iter().enumerate() {
            if k > 0 {
                f.write_str("|")?;
            }
            let parts: Vec<String> = col.iter().map(u32::to_string).collect();
            f.write_str(&parts.join(sep))?;
        }
        Ok(())
    }
}

pub fn tableau_to_array(t: &Tableau) -> Array {
    let mut a = Array::zero(t.n);
    for (j0, row) in t.rows.iter().enumerate() {
        for &e in row {
            a.entries[tri_index(e as usize, j0 + 1)] += 1;
        }
    }
    a
}

pub fn array_to_tableau(a: &Array) -> Result<Tableau> {
    a.d_tight().map_err(Error::NotDTight)?;
    let mut rows = Vec::new();
    for j in 1..=a.n {
        let row: Vec<u32> = (j..=a.n)
            .flat_map(|i| std::iter::repeat_n(i as u32, a.get(i, j) as usize))
            .collect();
        if row.is_empty() {
            break;
        }
        rows.push(row);
    }
    Ok(Tableau { n: a.n, rows })
}

/// A Gelfand-Tsetlin pattern `x[i][j]`, `1 <= i <= j <= n`; row `j` reads
/// `x_jj, ..., x_1j`.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
#[serde(into = "GtRepr", try_from = "GtRepr")]
pub struct GtPattern {
    n: usize,
    entries: Vec<u32>,
}

#[inline]
fn gt_index(i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + (i - 1)
}

impl GtPattern {
    pub fn zero(n: usize) -> Self {
        GtPattern { n, entries: vec![0; tri_len(n)] }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        assert!(1 <= i && i <= j && j <= self.n, "({i}, {j}) outside the pattern");
        self.entries[gt_index(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: u32) {
        assert!(1 <= i && i <= j && j <= self.n, "({i}, {j}) outside the pattern");
        self.entries[gt_index(i, j)] = value;
    }

    /// Top row `x_1n, ..., x_nn`; equals the shape of the tableau.
    pub fn top_row(&self) -> Vec<u32> {
        (1..=self.n).map(|i| self.get(i, self.n)).collect()
    }

    /// First failing `(i, j)` of `x_ij <= x_{i-1,j-1} <= x_{i-1,j}`.
    pub fn check(&self) -> std::result::Result<(), (usize, usize)> {
        for j in 2..=self.n {
            for i in 2..=j {
                let below = self.get(i - 1, j - 1);
                if self.get(i, j) > below || below > self.get(i - 1, j) {
                    return Err((i, j));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GtRepr {
    pub n: usize,
    /// Top row first; row `j` lists `x_jj, ..., x_1j`.
    pub rows: Vec<Vec<u32>>,
}

impl From<GtPattern> for GtRepr {
    fn from(p: GtPattern) -> Self {
        let rows = (1..=p.n).rev().map(|j| (1..=j).rev().map(|i| p.get(i, j)).collect()).collect();
        GtRepr { n: p.n, rows }
    }
}

impl TryFrom<GtRepr> for GtPattern {
    type Error = Error;

    fn try_from(r: GtRepr) -> Result<Self> {
        if r.rows.len() != r.n {
            return Err(Error::SizeMismatch { left: r.n, right: r.rows.len() });
        }
        let mut p = GtPattern::zero(r.n);
        for (k, row) in r.rows.iter().enumerate() {
            let j = r.n - k;
            if row.len() != j {
                return Err(Error::SizeMismatch { left: j, right: row.len() });
            }
            for (t, &v) in row.iter().enumerate() {
                p.set(j - t, j, v);
            }
        }
        Ok(p)
    }
}

/// `x_ij = a_ii + a_{i+1,i} + ... + a_ji`: the number of entries `<= j` in row `i`.
pub fn array_to_gt(a: &Array) -> Result<GtPattern> {
    a.d_tight().map_err(Error::NotDTight)?;
    let mut p = GtPattern::zero(a.n);
    for i in 1..=a.n {
        let mut acc = 0;
        for j in i..=a.n {
            acc += a.get(j, i);
            p.set(i, j, acc);
        }
    }
    Ok(p)
}

pub fn gt_to_array(p: &GtPattern) -> Result<Array> {
    p.check().map_err(|(i, j)| Error::NotGt { i, j })?;
    let mut a = Array::zero(p.n);
    for i in 1..=p.n {
        a.set(i, i, p.get(i, i));
        for k in i + 1..=p.n {
            a.set(k, i, p.get(i, k) - p.get(i, k - 1));
        }
    }
    Ok(a)
}

/// Pure lexicographic comparison of `X^A` and `X^B` with
/// `x11 > x12 > ... > x1n > x21 > ... > xnn`.
pub fn lex_compare(a: &Array, b: &Array) -> Result<Ordering> {
    same_size(a, b)?;
    Ok(a.entries.cmp(&b.entries))
}

/// Tropical multiplication: entrywise sum.
pub fn tropical_product(a: &Array, b: &Array) -> Result<Array> {
    same_size(a, b)?;
    let entries = a.entries.iter().zip(&b.entries).map(|(x, y)| x + y).collect();
    Ok(Array { n: a.n, entries })
}

/// Tropical addition: the lex-greater argument, `a` on ties.
pub fn tropical_sum(a: &Array, b: &Array) -> Result<Array> {
    Ok(match lex_compare(a, b)? {
        Ordering::Less => b.clone(),
        _ => a.clone(),
    })
}

fn same_size(a: &Array, b: &Array) -> Result<()> {
    if a.n != b.n {
        return Err(Error::SizeMismatch { left: a.n, right: b.n });
    }
    Ok(())
}

/// `l(A) = sum_i ( sum_{j>k} a_ij a_ik + sum_{j>k} a_ji a_ki )`.
pub fn l_statistic(a: &Array) -> u64 {
    let n = a.n;
    let at = |i: usize, j: usize| u64::from(a.get(i, j));
    let mut total = 0;
    for i in 1..=n {
        for j in 1..=n {
            for k in 1..j {
                total += at(i, j) * at(i, k) + at(j, i) * at(k, i);
            }
        }
    }
    total
}

/// Arrays of the one-column tableaux `{1..i}` for `i = 1..n`, then `{i..n}` for `i = 2..n`.
pub fn frozen_arrays(n: usize) -> Vec<Array> {
    let initial = (1..=n).map(|i| interval_array(1, i, n));
    let last = (2..=n).map(|i| interval_array(i, n - i + 1, n));
    initial.chain(last).collect()
}

fn interval_array(start: usize, len: usize, n: usize) -> Array {
    let mut a = Array::zero(n);
    for r in 1..=len {
        a.set(start + r - 1, r, 1);
    }
    a
}

/// Array of the one-column tableau `{start, ..., start + len - 1}`.
pub fn interval_column_array(start: usize, len: usize, n: usize) -> Result<Array> {
    if start == 0 || len == 0 || start + len - 1 > n {
        return Err(Error::OutOfRange(format!("interval ({start}, {len}) for n = {n}")));
    }
    Ok(interval_array(start, len, n))
}
