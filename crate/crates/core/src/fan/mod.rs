//! Seed cones in the space of triangular arrays and the fan they form.

mod project;
mod verify;

use std::fmt;

use dashu_int::IBig;
use dashu_ratio::RBig;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::cluster::{seed_key, Seed, SeedKey};
use crate::error::{Error, Result};
use crate::linalg::{determinant, unimodular_inverse};
use crate::lp::nonnegative_solution;
use crate::ssyt::{frozen_arrays, tri_len, Array};

pub use project::{quotient_project, ProjectedCone, ProjectedFan, ProjectedRay, Projection};
pub use verify::{
    coverage, sample_d_tight, seed_cones, verify_fan, CoverageReport, FanReport, FanViolation, PairwiseMode,
    UncoveredPoint, ViolationKind,
};

/// A point with exact rational coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalPoint(pub Vec<RBig>);

impl RationalPoint {
    pub fn from_integers(v: &[i64]) -> Self {
        RationalPoint(v.iter().map(|&x| RBig::from(x)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (k, v) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl Serialize for RationalPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.0.iter().map(|v| v.to_string()))
    }
}

impl<'de> Deserialize<'de> for RationalPoint {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = Vec::<String>::deserialize(d)?;
        raw.iter()
            .map(|s| s.parse::<RBig>().map_err(|e| serde::de::Error::custom(format!("{s}: {e}"))))
            .collect::<std::result::Result<_, _>>()
            .map(RationalPoint)
    }
}

/// A unimodular simplicial cone: the mutable labels of a seed followed by
/// the frozen arrays.
#[derive(Clone, Debug)]
pub struct Cone {
    n: usize,
    generators: Vec<Array>,
    /// Inverse of the matrix whose columns are the generators.
    inverse: Vec<Vec<i64>>,
    key: SeedKey,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Membership {
    Outside,
    Boundary,
    Interior,
}

impl Cone {
    /// Fails with `NotUnimodular` unless the generators form a lattice basis.
    pub fn new(n: usize, generators: Vec<Array>, key: SeedKey) -> Result<Cone> {
        let d = tri_len(n);
        if generators.len() != d {
            return Err(Error::SizeMismatch { left: d, right: generators.len() });
        }
        if let Some(g) = generators.iter().find(|g| g.n() != n) {
            return Err(Error::SizeMismatch { left: n, right: g.n() });
        }
        let columns = generator_matrix(&generators);
        let inverse = match unimodular_inverse(&columns) {
            Ok(inv) => inv,
            Err(Error::SingularGenerators) => return Err(Error::NotUnimodular("0".into())),
            Err(e) => return Err(e),
        };
        Ok(Cone { n, generators, inverse, key })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    pub fn generators(&self) -> &[Array] {
        &self.generators
    }

    pub fn key(&self) -> &SeedKey {
        &self.key
    }

    /// Exact determinant of the generator matrix.
    pub fn determinant(&self) -> IBig {
        determinant(&generator_matrix(&self.generators)).expect("square by construction")
    }

    /// Coordinates of an integer point in the generator basis.
    pub fn coordinates(&self, p: &[i64]) -> Vec<i64> {
        self.inverse.iter().map(|row| row.iter().zip(p).map(|(a, b)| a * b).sum()).collect()
    }

    /// Location of an integer point; stops at the first negative coordinate.
    pub fn locate_integer(&self, p: &[i64]) -> Membership {
        let mut all_positive = true;
        for row in &self.inverse {
            let l: i64 = row.iter().zip(p).map(|(a, b)| a * b).sum();
            if l < 0 {
                return Membership::Outside;
            }
            all_positive &= l > 0;
        }
        if all_positive {
            Membership::Interior
        } else {
            Membership::Boundary
        }
    }

    fn sum_of_generators(&self) -> Vec<i64> {
        let mut s = vec![0i64; self.dim()];
        for g in &self.generators {
            for (acc, v) in s.iter_mut().zip(g.entries()) {
                *acc += i64::from(*v);
            }
        }
        s
    }
}

fn generator_matrix(generators: &[Array]) -> Vec<Vec<i64>> {
    let d = generators.len();
    (0..d).map(|r| generators.iter().map(|g| i64::from(g.entries()[r])).collect()).collect()
}

/// The cone spanned by the mutable labels of `seed` (in vertex order) and
/// the frozen arrays.
pub fn cone_of_seed(seed: &Seed) -> Result<Cone> {
    let n = seed.n();
    let mut generators = seed.mutable_labels();
    generators.extend(frozen_arrays(n));
    Cone::new(n, generators, seed_key(seed))
}

/// Exact location of a rational point relative to a cone.
pub fn cone_membership(p: &RationalPoint, cone: &Cone) -> Result<Membership> {
    if p.dim() != cone.dim() {
        return Err(Error::SizeMismatch { left: cone.dim(), right: p.dim() });
    }
    let mut all_positive = true;
    for row in &cone.inverse {
        let l = row.iter().zip(&p.0).fold(RBig::ZERO, |acc, (&a, b)| acc + RBig::from(a) * b);
        if l < RBig::ZERO {
            return Ok(Membership::Outside);
        }
        all_positive &= l > RBig::ZERO;
    }
    Ok(if all_positive { Membership::Interior } else { Membership::Boundary })
}

/// How two cones relate: the generators they share, and the coordinates of
/// each unshared generator of the second cone in the unshared generators of
/// the first.
///
/// Writing a point of the second cone as `G2 mu`, its coordinates in the
/// first cone are `G1^-1 G2 mu`. A shared generator contributes a unit
/// column, so it only moves the coordinate of its twin in the first cone and
/// can always absorb a lower bound there. Both pair tests therefore reduce to
/// the square block on the unshared generators.
struct PairReduction {
    /// `block[i][j]`: coordinate along unshared generator `i` of the first
    /// cone of unshared generator `j` of the second.
    block: Vec<Vec<i64>>,
    /// For each unshared generator of the second cone, its full coordinate
    /// vector in the first cone.
    columns: Vec<Vec<i64>>,
    unshared_second: Vec<usize>,
    /// Pairs `(index in first, index in second)` of equal generators.
    shared: Vec<(usize, usize)>,
}

fn reduce(c1: &Cone, c2: &Cone) -> Result<PairReduction> {
    if c1.n != c2.n {
        return Err(Error::SizeMismatch { left: c1.n, right: c2.n });
    }
    let mut shared = Vec::new();
    let mut unshared_second = Vec::new();
    for (j, g) in c2.generators.iter().enumerate() {
        match c1.generators.iter().position(|h| h == g) {
            Some(i) => shared.push((i, j)),
            None => unshared_second.push(j),
        }
    }
    let unshared_first: Vec<usize> = (0..c1.dim()).filter(|i| !shared.iter().any(|&(s, _)| s == *i)).collect();
    let columns: Vec<Vec<i64>> = unshared_second
        .iter()
        .map(|&j| {
            let g: Vec<i64> = c2.generators[j].entries().iter().map(|&v| i64::from(v)).collect();
            c1.coordinates(&g)
        })
        .collect();
    let block = unshared_first.iter().map(|&i| columns.iter().map(|col| col[i]).collect()).collect();
    Ok(PairReduction { block, columns, unshared_second, shared })
}

/// Builds `sum_j mu_j g2_j` over the unshared generators plus enough of each
/// shared generator that every coordinate in the first cone reaches `floor`.
fn assemble_point(c1: &Cone, c2: &Cone, red: &PairReduction, mu: &[RBig], floor: &RBig) -> RationalPoint {
    let d = c1.dim();
    let mut coords = vec![RBig::ZERO; d];
    for (col, m) in red.columns.iter().zip(mu) {
        for (acc, &v) in coords.iter_mut().zip(col) {
            *acc += RBig::from(v) * m;
        }
    }
    let mut weights: Vec<(usize, RBig)> = red.unshared_second.iter().cloned().zip(mu.iter().cloned()).collect();
    for &(i, j) in &red.shared {
        let need = floor - &coords[i];
        let w = if need > *floor { need } else { floor.clone() };
        weights.push((j, w));
    }
    let mut point = vec![RBig::ZERO; d];
    for (j, w) in weights {
        for (acc, &v) in point.iter_mut().zip(c2.generators[j].entries()) {
            *acc += RBig::from(v) * &w;
        }
    }
    RationalPoint(point)
}

/// Whether the interiors of two cones meet, with a common interior point.
///
/// Interior points are positive combinations; since cones are closed under
/// scaling, asking for coefficients `>= 1` on both sides is equivalent.
pub fn interiors_intersect(c1: &Cone, c2: &Cone) -> Result<Option<RationalPoint>> {
    let red = reduce(c1, c2)?;
    let k = red.block.len();
    if k == 0 {
        return Ok(Some(RationalPoint::from_integers(&c1.sum_of_generators())));
    }
    // mu = 1 + u, block mu - s = 1  ->  block u - s = 1 - block 1
    let a: Vec<Vec<i64>> = red
        .block
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain((0..k).map(|t| if t == i { -1 } else { 0 })).collect())
        .collect();
    let b: Vec<i64> = red.block.iter().map(|row| 1 - row.iter().sum::<i64>()).collect();
    Ok(nonnegative_solution(&a, &b).map(|x| {
        let mu: Vec<RBig> = x[..k].iter().map(|u| u + RBig::ONE).collect();
        assemble_point(c1, c2, &red, &mu, &RBig::ONE)
    }))
}

/// The intersection of two cones is their common face, or a point of the
/// intersection outside the span of the shared generators.
///
/// A violation is a point `G1 lambda = G2 mu` with `lambda, mu >= 0` and some
/// weight on an unshared generator of the first cone; normalising that weight
/// to one gives a bounded feasibility problem.
pub fn face_witness(c1: &Cone, c2: &Cone) -> Result<Option<RationalPoint>> {
    let red = reduce(c1, c2)?;
    let k = red.block.len();
    if k == 0 {
        return Ok(None);
    }
    // block mu - s = 0, sum s = 1, mu, s >= 0
    let mut a: Vec<Vec<i64>> = red
        .block
        .iter()
        .enumerate()
        .map(|(i, row)| row.iter().cloned().chain((0..k).map(|t| if t == i { -1 } else { 0 })).collect())
        .collect();
    a.push((0..2 * k).map(|t| i64::from(t >= k)).collect());
    let mut b = vec![0i64; k];
    b.push(1);
    Ok(nonnegative_solution(&a, &b).map(|x| assemble_point(c1, c2, &red, &x[..k], &RBig::ZERO)))
}

/// True iff the two cones meet exactly in their common face.
pub fn face_check(c1: &Cone, c2: &Cone) -> Result<bool> {
    Ok(face_witness(c1, c2)?.is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{initial_seed, mutate_seed};
    use crate::quiver::grid_vertex;

    fn col(n: usize, c: &[u32]) -> Array {
        Array::from_column(n, c).unwrap()
    }

    #[test]
    fn initial_cones_are_unimodular() {
        for n in 3..=6 {
            let c = cone_of_seed(&initial_seed(n).unwrap()).unwrap();
            assert_eq!(c.dim(), tri_len(n));
            let det = c.determinant();
            assert!(det == IBig::ONE || det == IBig::NEG_ONE, "n={n} det={det}");
        }
        let c = cone_of_seed(&initial_seed(3).unwrap()).unwrap();
        assert_eq!(c.generators()[0], col(3, &[2]));
        assert_eq!(&c.generators()[1..], frozen_arrays(3).as_slice());
    }

    #[test]
    fn non_unimodular_generators_are_rejected() {
        let n = 2;
        let doubled = vec![col(n, &[1]).scaled(2), col(n, &[1, 2]), col(n, &[2])];
        assert!(matches!(Cone::new(n, doubled, SeedKey(vec![])), Err(Error::NotUnimodular(_))));
        let repeated = vec![col(n, &[1]), col(n, &[1]), col(n, &[2])];
        assert!(matches!(Cone::new(n, repeated, SeedKey(vec![])), Err(Error::NotUnimodular(_))));
    }

    #[test]
    fn membership_examples() {
        let c = cone_of_seed(&initial_seed(4).unwrap()).unwrap();
        let sum = RationalPoint::from_integers(&c.sum_of_generators());
        assert_eq!(cone_membership(&sum, &c).unwrap(), Membership::Interior);
        let g: Vec<i64> = c.generators()[0].to_signed();
        assert_eq!(cone_membership(&RationalPoint::from_integers(&g), &c).unwrap(), Membership::Boundary);
        let neg: Vec<i64> = g.iter().map(|v| -v).collect();
        assert_eq!(cone_membership(&RationalPoint::from_integers(&neg), &c).unwrap(), Membership::Outside);
        assert_eq!(c.locate_integer(&c.sum_of_generators()), Membership::Interior);
        assert_eq!(c.locate_integer(&g), Membership::Boundary);
        assert_eq!(c.locate_integer(&neg), Membership::Outside);
        let half = RationalPoint(sum.0.iter().map(|v| v / RBig::from(2)).collect());
        assert_eq!(cone_membership(&half, &c).unwrap(), Membership::Interior);
    }

    #[test]
    fn n3_cones_meet_in_their_common_facet() {
        let s = initial_seed(3).unwrap();
        let (t, _) = mutate_seed(&s, grid_vertex(3, 2, 1).unwrap()).unwrap();
        let (a, b) = (cone_of_seed(&s).unwrap(), cone_of_seed(&t).unwrap());
        assert_eq!(interiors_intersect(&a, &b).unwrap(), None);
        assert!(face_check(&a, &b).unwrap());
        assert!(face_check(&b, &a).unwrap());
        let w = interiors_intersect(&a, &a).unwrap().unwrap();
        assert_eq!(w, RationalPoint::from_integers(&a.sum_of_generators()));
        assert!(face_check(&a, &a).unwrap());
    }

    #[test]
    fn overlapping_cones_are_caught() {
        // two cones in the plane-like n = 2 space that overlap: swap one
        // frozen generator for a unimodular combination inside the first cone
        let n = 2;
        let base = vec![col(n, &[1]), col(n, &[1, 2]), col(n, &[2])];
        let a = Cone::new(n, base.clone(), SeedKey(vec![])).unwrap();
        let inner = Array::from_flat(n, vec![2, 1, 1]).unwrap();
        let b = Cone::new(n, vec![inner, base[1].clone(), base[2].clone()], SeedKey(vec![])).unwrap();
        let w = interiors_intersect(&a, &b).unwrap().expect("b lies inside a");
        assert_eq!(cone_membership(&w, &a).unwrap(), Membership::Interior);
        assert_eq!(cone_membership(&w, &b).unwrap(), Membership::Interior);
        let v = face_witness(&a, &b).unwrap().expect("not a common face");
        assert_ne!(cone_membership(&v, &a).unwrap(), Membership::Outside);
        assert_ne!(cone_membership(&v, &b).unwrap(), Membership::Outside);
    }
}
