use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{cone_of_seed, face_witness, interiors_intersect, Cone, Membership, RationalPoint};
use crate::cluster::ExchangeGraph;
use crate::error::Result;
use crate::ssyt::{tri_index, tri_len, Array};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
pub enum PairwiseMode {
    Full,
    /// Uniformly random unordered pairs of distinct cones.
    Sampled { pairs: usize, rng_seed: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ViolationKind {
    NotUnimodular,
    AdjacentNotFacet,
    AdjacentInteriorsMeet,
    NotAFace,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanViolation {
    pub kind: ViolationKind,
    pub first: usize,
    pub second: Option<usize>,
    pub detail: String,
    pub witness: Option<RationalPoint>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanReport {
    pub n: usize,
    pub cones: usize,
    pub enumeration_complete: bool,
    pub unimodular: usize,
    pub adjacent_pairs_checked: usize,
    pub pairwise: PairwiseMode,
    pub pairs_checked: usize,
    pub pairs_total: usize,
    pub violations: Vec<FanViolation>,
}

impl FanReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.unimodular == self.cones
    }
}

fn build_cones(graph: &ExchangeGraph) -> (Vec<Option<Cone>>, Vec<FanViolation>) {
    let built: Vec<Result<Cone>> = graph.seeds().par_iter().map(cone_of_seed).collect();
    let mut violations = Vec::new();
    let cones = built
        .into_iter()
        .enumerate()
        .map(|(k, c)| match c {
            Ok(c) => Some(c),
            Err(e) => {
                violations.push(FanViolation {
                    kind: ViolationKind::NotUnimodular,
                    first: k,
                    second: None,
                    detail: e.to_string(),
                    witness: None,
                });
                None
            }
        })
        .collect();
    (cones, violations)
}

/// Every seed cone, failing on the first one that is not unimodular.
pub fn seed_cones(graph: &ExchangeGraph) -> Result<Vec<Cone>> {
    graph.seeds().par_iter().map(cone_of_seed).collect()
}

fn adjacency_violation(graph: &ExchangeGraph, cones: &[Option<Cone>], edge: usize) -> Option<FanViolation> {
    let e = graph.edges()[edge];
    let (Some(a), Some(b)) = (&cones[e.from], &cones[e.to]) else { return None };
    let violation = |kind, detail: String, witness| FanViolation { kind, first: e.from, second: Some(e.to), detail, witness };
    let only_a: Vec<&Array> = a.generators().iter().filter(|g| !b.generators().contains(g)).collect();
    let only_b: Vec<&Array> = b.generators().iter().filter(|g| !a.generators().contains(g)).collect();
    let exchanged = graph.seeds()[e.from].var(e.vertex).label();
    if only_a.len() != 1 || only_b.len() != 1 || only_a[0] != exchanged {
        return Some(violation(
            ViolationKind::AdjacentNotFacet,
            format!("{} and {} generators outside the shared facet", only_a.len(), only_b.len()),
            None,
        ));
    }
    match interiors_intersect(a, b) {
        Ok(None) => None,
        Ok(Some(w)) => Some(violation(ViolationKind::AdjacentInteriorsMeet, "common interior point".into(), Some(w))),
        Err(err) => Some(violation(ViolationKind::AdjacentInteriorsMeet, err.to_string(), None)),
    }
}

fn face_violation(cones: &[Option<Cone>], i: usize, j: usize) -> Option<FanViolation> {
    let (Some(a), Some(b)) = (&cones[i], &cones[j]) else { return None };
    let violation = |detail: String, witness| FanViolation {
        kind: ViolationKind::NotAFace,
        first: i,
        second: Some(j),
        detail,
        witness,
    };
    match face_witness(a, b) {
        Ok(None) => None,
        Ok(Some(w)) => Some(violation("intersection is larger than the common face".into(), Some(w))),
        Err(err) => Some(violation(err.to_string(), None)),
    }
}

/// Checks that the seed cones form a simplicial fan: every cone unimodular,
/// mutation-adjacent cones glued along a facet with disjoint interiors, and
/// every checked pair meeting exactly in its common face.
pub fn verify_fan(graph: &ExchangeGraph, mode: PairwiseMode) -> FanReport {
    let (cones, mut violations) = build_cones(graph);
    let m = cones.len();
    let unimodular = cones.iter().filter(|c| c.is_some()).count();

    let adjacency: Vec<FanViolation> =
        (0..graph.edges().len()).into_par_iter().filter_map(|k| adjacency_violation(graph, &cones, k)).collect();
    violations.extend(adjacency);

    let pairs_total = m * m.saturating_sub(1) / 2;
    let (pairs_checked, face) = match mode {
        PairwiseMode::Sampled { pairs, rng_seed } if pairs < pairs_total => {
            let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
            let picks: Vec<(usize, usize)> = (0..pairs)
                .map(|_| {
                    let i = rng.gen_range(0..m);
                    let j = (i + rng.gen_range(1..m)) % m;
                    (i.min(j), i.max(j))
                })
                .collect();
            let found: Vec<FanViolation> = picks.par_iter().filter_map(|&(i, j)| face_violation(&cones, i, j)).collect();
            (pairs, found)
        }
        _ => {
            let found: Vec<FanViolation> = (0..m)
                .into_par_iter()
                .flat_map_iter(|i| {
                    let cones = &cones;
                    (i + 1..m).filter_map(move |j| face_violation(cones, i, j))
                })
                .collect();
            (pairs_total, found)
        }
    };
    violations.extend(face);

    FanReport {
        n: graph.n(),
        cones: m,
        enumeration_complete: graph.is_complete(),
        unimodular,
        adjacent_pairs_checked: graph.edges().len(),
        pairwise: mode,
        pairs_checked,
        pairs_total,
        violations,
    }
}

/// A uniform random D-tight array with entries in `0..=bound`, by rejection.
///
/// Entries are drawn column by column and a partial array is discarded as
/// soon as one of its D-tight inequalities fails; since every draw is
/// independent this samples the same distribution as filtering complete
/// arrays. Returns the array and the number of attempts.
pub fn sample_d_tight<R: Rng>(n: usize, bound: u32, rng: &mut R) -> (Array, u64) {
    let mut entries = vec![0u32; tri_len(n)];
    let mut attempts = 0u64;
    'attempt: loop {
        attempts += 1;
        for j in 1..=n {
            let (mut upper, mut lower) = (0u64, 0u64);
            for i in j..=n {
                let v = rng.gen_range(0..=bound);
                entries[tri_index(i, j)] = v;
                if j >= 2 {
                    // sum_{k<=i} a(k, j) <= sum_{k<=i-1} a(k, j-1)
                    upper += u64::from(v);
                    lower += u64::from(entries[tri_index(i - 1, j - 1)]);
                    if upper > lower {
                        continue 'attempt;
                    }
                }
            }
        }
        let a = Array::from_flat(n, entries).expect("sized by construction");
        debug_assert!(a.is_d_tight());
        return (a, attempts);
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UncoveredPoint {
    pub point: Array,
    pub interior_hits: usize,
    pub boundary_hits: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageReport {
    pub n: usize,
    pub cones: usize,
    pub enumeration_complete: bool,
    pub samples: usize,
    pub bound: u32,
    pub rng_seed: u64,
    pub attempts: u64,
    pub covered: usize,
    pub uncovered: usize,
    pub double_interior: usize,
    pub max_cones_per_point: usize,
    /// Up to ten uncovered points and ten points interior to two cones.
    pub examples: Vec<UncoveredPoint>,
}

impl CoverageReport {
    pub fn passed(&self) -> bool {
        self.uncovered == 0 && self.double_interior == 0
    }
}

const EXAMPLES: usize = 10;

/// Locates random D-tight points among the seed cones.
pub fn coverage(graph: &ExchangeGraph, samples: usize, bound: u32, rng_seed: u64) -> Result<CoverageReport> {
    let n = graph.n();
    let cones = seed_cones(graph)?;
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut attempts = 0;
    let points: Vec<Array> = (0..samples)
        .map(|_| {
            let (a, tries) = sample_d_tight(n, bound, &mut rng);
            attempts += tries;
            a
        })
        .collect();
    let hits: Vec<(usize, usize)> = points
        .par_iter()
        .map(|p| {
            let v = p.to_signed();
            let (mut interior, mut boundary) = (0, 0);
            for c in &cones {
                match c.locate_integer(&v) {
                    Membership::Interior => interior += 1,
                    Membership::Boundary => boundary += 1,
                    Membership::Outside => {}
                }
            }
            (interior, boundary)
        })
        .collect();
    let mut report = CoverageReport {
        n,
        cones: cones.len(),
        enumeration_complete: graph.is_complete(),
        samples,
        bound,
        rng_seed,
        attempts,
        covered: 0,
        uncovered: 0,
        double_interior: 0,
        max_cones_per_point: 0,
        examples: Vec::new(),
    };
    let (mut uncovered_shown, mut double_shown) = (0, 0);
    for (p, &(interior, boundary)) in points.iter().zip(&hits) {
        report.max_cones_per_point = report.max_cones_per_point.max(interior + boundary);
        let example = || UncoveredPoint { point: p.clone(), interior_hits: interior, boundary_hits: boundary };
        if interior + boundary == 0 {
            report.uncovered += 1;
            if uncovered_shown < EXAMPLES {
                uncovered_shown += 1;
                report.examples.push(example());
            }
        } else {
            report.covered += 1;
        }
        if interior > 1 {
            report.double_interior += 1;
            if double_shown < EXAMPLES {
                double_shown += 1;
                report.examples.push(example());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{enumerate, EnumerateOptions};

    #[test]
    fn sampler_matches_plain_rejection_frequencies() {
        // n = 2, bound 2: D-tight iff a22 <= a11; 18 of 27 arrays qualify
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let mut counts = std::collections::BTreeMap::new();
        let draws = 18_000;
        for _ in 0..draws {
            let (a, _) = sample_d_tight(2, 2, &mut rng);
            assert!(a.is_d_tight());
            *counts.entry(a.entries().to_vec()).or_insert(0usize) += 1;
        }
        assert_eq!(counts.len(), 18);
        for &c in counts.values() {
            assert!((800..1200).contains(&c), "count {c} far from 1000");
        }
    }

    #[test]
    fn n3_and_n4_fans_verify() {
        for (n, cones, pairs) in [(3, 2, 1), (4, 14, 91)] {
            let g = enumerate(n, &EnumerateOptions::default()).unwrap();
            let r = verify_fan(&g, PairwiseMode::Full);
            assert!(r.passed(), "{:?}", r.violations);
            assert_eq!((r.cones, r.pairs_checked), (cones, pairs));
            let c = coverage(&g, 500, 8, 3).unwrap();
            assert!(c.passed(), "{c:?}");
            assert_eq!(c.covered, 500);
        }
    }

    #[test]
    fn truncated_fan_leaves_gaps() {
        let g = enumerate(4, &EnumerateOptions { max_depth: Some(1), ..Default::default() }).unwrap();
        let c = coverage(&g, 300, 8, 5).unwrap();
        assert!(c.uncovered > 0);
        assert!(!c.enumeration_complete);
        let r = verify_fan(&g, PairwiseMode::Sampled { pairs: 3, rng_seed: 1 });
        assert!(r.passed());
        assert_eq!(r.pairs_checked, 3);
    }
}
