use rustc_hash::FxHashMap;

use super::{check_n, Polynomial, VarId};
use crate::error::{Error, Result};
use crate::ssyt::Tableau;

/// A nonempty strictly increasing subset of `[n]`, the row set of a flag minor.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FlagSet(Vec<u32>);

impl FlagSet {
    pub fn new(elements: Vec<u32>) -> Result<Self> {
        let increasing = elements.windows(2).all(|w| w[0] < w[1]);
        if elements.is_empty() || elements[0] == 0 || !increasing {
            return Err(Error::InvalidFlagSet(elements));
        }
        Ok(FlagSet(elements))
    }

    pub fn elements(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn max(&self) -> u32 {
        *self.0.last().expect("flag sets are nonempty")
    }
}

/// The minor of the generic matrix on rows `set` and columns `1..=|set|`.
///
/// Laplace expansion along the last column, memoized over row subsets: the
/// minor on rows `S` and columns `1..=|S|` is built from the minors on the
/// subsets `S \ {s}`.
pub fn flag_minor(set: &FlagSet, n: usize) -> Result<Polynomial> {
    check_n(n)?;
    if set.max() as usize > n {
        return Err(Error::InvalidFlagSet(set.0.clone()));
    }
    let rows = set.elements();
    let k = rows.len();
    let mut memo: Vec<Option<Polynomial>> = vec![None; 1 << k];
    memo[0] = Some(Polynomial::one(n));
    for mask in 1usize..(1 << k) {
        let cols = mask.count_ones() as usize;
        let mut acc = Polynomial::zero(n);
        let mut position = 0;
        for p in 0..k {
            if mask & (1 << p) == 0 {
                continue;
            }
            let var = Polynomial::var(VarId { i: rows[p] as usize, j: cols }, n);
            let sub = memo[mask & !(1 << p)].as_ref().expect("subsets are built first");
            let term = var.checked_mul(sub)?;
            // sign (-1)^(row position + column position), both counted within the minor
            acc = if (position + cols - 1).is_multiple_of(2) { acc.checked_add(&term)? } else { acc.checked_sub(&term)? };
            position += 1;
        }
        memo[mask] = Some(acc);
    }
    Ok(memo.pop().flatten().expect("full mask computed"))
}

/// `Delta_T`: the product of the flag minors of the columns of `t`.
pub fn tableau_basis_element(t: &Tableau) -> Result<Polynomial> {
    let n = t.n();
    check_n(n)?;
    let mut counts: FxHashMap<Vec<u32>, u32> = FxHashMap::default();
    for col in t.columns() {
        *counts.entry(col).or_insert(0) += 1;
    }
    let mut cols: Vec<_> = counts.into_iter().collect();
    cols.sort();
    let mut result = Polynomial::one(n);
    for (col, mult) in cols {
        let minor = flag_minor(&FlagSet::new(col)?, n)?;
        result = result.checked_mul(&minor.pow(mult)?)?;
    }
    Ok(result)
}

#[cfg(test)]
mod tests {
    use dashu_int::IBig;
    use dashu_ratio::RBig;

    use super::*;
    use crate::poly::{leading_array, pascal_matrix};
    use crate::ssyt::{tableau_to_array, Array};

    fn minor(set: &[u32], n: usize) -> Polynomial {
        flag_minor(&FlagSet::new(set.to_vec()).unwrap(), n).unwrap()
    }

    /// Leibniz formula over all permutations, independent of the memoized expansion.
    fn leibniz(rows: &[u32], n: usize) -> Polynomial {
        fn perms(k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            let mut out = Vec::new();
            for p in perms(k - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, k - 1);
                    out.push(q);
                }
            }
            out
        }
        let k = rows.len();
        let mut total = Polynomial::zero(n);
        for perm in perms(k) {
            let inversions = (0..k).flat_map(|a| (a + 1..k).map(move |b| (a, b))).filter(|&(a, b)| perm[a] > perm[b]).count();
            let mut term = Polynomial::constant(n, if inversions % 2 == 0 { 1 } else { -1 });
            for (c, &r) in perm.iter().enumerate() {
                term = &term * &Polynomial::var(VarId { i: rows[r] as usize, j: c + 1 }, n);
            }
            total = &total + &term;
        }
        total
    }

    #[test]
    fn small_minors() {
        assert_eq!(minor(&[1], 3).to_string(), "x[1,1]");
        assert_eq!(minor(&[1, 3], 3).to_string(), "x[1,1]*x[3,2] - x[1,2]*x[3,1]");
        let full = minor(&[1, 2, 3], 3);
        assert_eq!(full.len(), 6);
        assert_eq!(full.terms()[0].0.render(3), "x[1,1]*x[2,2]*x[3,3]");
        assert!(flag_minor(&FlagSet::new(vec![2, 4]).unwrap(), 3).is_err());
        assert!(FlagSet::new(vec![2, 2]).is_err());
        assert!(FlagSet::new(vec![]).is_err());
    }

    #[test]
    fn memoized_expansion_matches_leibniz() {
        for rows in [vec![2, 3, 5], vec![1, 2, 4, 5], vec![1, 2, 3, 4, 5], vec![2, 3, 4, 5, 6]] {
            let n = 6;
            assert_eq!(minor(&rows, n), leibniz(&rows, n), "rows {rows:?}");
        }
    }

    #[test]
    fn minor_terms_are_homogeneous() {
        let rows = [1u32, 3, 4, 6];
        let p = minor(&rows, 6);
        assert_eq!(p.len(), 24);
        for (m, c) in p.terms() {
            assert!(c == &IBig::ONE || c == &IBig::NEG_ONE);
            for col in 1..=6 {
                let in_col: u32 = (1..=6).map(|i| m.exponent(VarId { i, j: col }, 6)).sum();
                assert_eq!(in_col, u32::from(col <= rows.len()));
            }
            for row in 1..=6u32 {
                let in_row: u32 = (1..=6).map(|j| m.exponent(VarId { i: row as usize, j }, 6)).sum();
                assert_eq!(in_row, u32::from(rows.contains(&row)));
            }
        }
    }

    #[test]
    fn three_term_exchange_divides() {
        // Delta_1 Delta_23 + Delta_12 Delta_3 = Delta_2 Delta_13
        let n = 3;
        let sum = &(&minor(&[1], n) * &minor(&[2, 3], n)) + &(&minor(&[1, 2], n) * &minor(&[3], n));
        assert_eq!(sum.to_string(), "x[1,1]*x[2,1]*x[3,2] - x[1,2]*x[2,1]*x[3,1]");
        assert_eq!(sum.exact_div(&minor(&[2], n)).unwrap(), minor(&[1, 3], n));
    }

    #[test]
    fn worked_example_basis_element() {
        let t = Tableau::new(
            3,
            vec![vec![1, 1, 1, 1, 2, 2, 2, 3, 3, 3, 3], vec![2, 2, 2, 3, 3, 3], vec![3]],
        )
        .unwrap();
        let expected = [
            (vec![1, 2, 3], 1),
            (vec![1, 2], 2),
            (vec![1, 3], 1),
            (vec![2, 3], 2),
            (vec![2], 1),
            (vec![3], 4),
        ]
        .iter()
        .fold(Polynomial::one(3), |acc, (s, e)| &acc * &minor(s, 3).pow(*e).unwrap());
        let delta = tableau_basis_element(&t).unwrap();
        assert_eq!(delta, expected);
        assert_eq!(leading_array(&delta).unwrap(), tableau_to_array(&t));
        assert_eq!(tableau_basis_element(&Tableau::empty(3)).unwrap(), Polynomial::one(3));
        let col = Tableau::from_columns(3, &[vec![1, 3]]).unwrap();
        assert_eq!(tableau_basis_element(&col).unwrap(), minor(&[1, 3], 3));
    }

    #[test]
    fn leading_array_of_minor() {
        assert_eq!(leading_array(&minor(&[1, 3], 3)).unwrap(), Array::from_column(3, &[1, 3]).unwrap());
        let (m, c) = minor(&[1, 3], 3).leading_term().map(|(m, c)| (*m, c.clone())).unwrap();
        assert_eq!(m.render(3), "x[1,1]*x[3,2]");
        assert_eq!(c, IBig::ONE);
    }

    #[test]
    fn minors_at_identity_and_pascal() {
        let id: Vec<Vec<RBig>> =
            (0..3).map(|i| (0..3).map(|j| RBig::from(u8::from(i == j))).collect()).collect();
        assert_eq!(minor(&[1, 2], 3).evaluate(&id).unwrap(), RBig::ONE);
        assert_eq!(minor(&[1, 3], 3).evaluate(&id).unwrap(), RBig::ZERO);
        // 3x3 Pascal determinant: rows (1,1,1), (1,2,3), (1,3,6) -> 1
        assert_eq!(minor(&[1, 2, 3], 3).evaluate(&pascal_matrix(3)).unwrap(), RBig::ONE);
    }
}
