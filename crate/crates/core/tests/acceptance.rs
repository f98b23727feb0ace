//! One line per acceptance criterion; exits nonzero if any fails.

use std::collections::{BTreeMap, BTreeSet};
use std::time::{Duration, Instant};

use dashu_ratio::RBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clusterfan_core::cluster::{cluster_variables, enumerate, EnumerateOptions, ExchangeGraph};
use clusterfan_core::fan::{coverage, quotient_project, verify_fan, PairwiseMode};
use clusterfan_core::poly::{flag_minor, leading_array, pascal_matrix, FlagSet, Polynomial};
use clusterfan_core::quiver::{Quiver, Vertex, VertexId, VertexLabel};
use clusterfan_core::ssyt::{array_to_tableau, frozen_arrays, tableau_to_array, tropical_product, Array, Tableau};

const N4_TIME_LIMIT: Duration = Duration::from_secs(10);
const N5_TIME_LIMIT: Duration = Duration::from_secs(15 * 60);
const COVERAGE_SAMPLES: usize = 10_000;
const COVERAGE_BOUND: u32 = 8;
const COVERAGE_SEED: u64 = 7;
const DEEP_DEPTH: usize = 6;
const ORACLE_CASES: usize = 1000;
const ORACLE_SEED: u64 = 15;

struct Report {
    failures: usize,
}

impl Report {
    fn line(&mut self, id: usize, name: &str, passed: bool, detail: String) {
        if !passed {
            self.failures += 1;
        }
        println!("criterion {id:>2} {:<4} {name}: {detail}", if passed { "PASS" } else { "FAIL" });
    }
}

fn column(n: usize, digits: &str) -> Array {
    let col: Vec<u32> = digits.chars().map(|c| c.to_digit(10).unwrap()).collect();
    Array::from_column(n, &col).unwrap()
}

fn tableau(n: usize, cols: &str) -> Array {
    let cols: Vec<Vec<u32>> = cols.split('|').map(|c| c.chars().map(|d| d.to_digit(10).unwrap()).collect()).collect();
    tableau_to_array(&Tableau::from_columns(n, &cols).unwrap())
}

fn column_set(a: &Array) -> Option<Vec<u32>> {
    let t = array_to_tableau(a).ok()?;
    let cols = t.columns();
    (cols.len() == 1).then(|| cols[0].clone())
}

fn timed(n: usize, options: EnumerateOptions) -> (ExchangeGraph, Duration) {
    let start = Instant::now();
    let g = enumerate(n, &options).unwrap_or_else(|e| panic!("enumeration for n = {n} failed: {e}"));
    (g, start.elapsed())
}

fn frozen_labels(g: &ExchangeGraph) -> BTreeSet<Array> {
    g.seeds()
        .iter()
        .flat_map(|s| s.quiver().ids().filter(|&v| s.quiver().is_frozen(v)).map(move |v| s.var(v).label().clone()))
        .collect()
}

fn matrix_mutation(b: &[Vec<i64>], frozen: &[bool], k: usize) -> Vec<Vec<i64>> {
    let m = b.len();
    let mut out = vec![vec![0; m]; m];
    for i in 0..m {
        for j in 0..m {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else if frozen[i] && frozen[j] {
                0
            } else {
                b[i][j] + b[i][k].signum() * (b[i][k] * b[k][j]).max(0)
            };
        }
    }
    out
}

fn main() {
    let mut report = Report { failures: 0 };

    let (g3, _) = timed(3, EnumerateOptions::default());
    let (g4, t4) = timed(4, EnumerateOptions::default());
    let (g5, t5) = timed(5, EnumerateOptions::default());
    let small = [&g3, &g4, &g5];

    report.line(
        1,
        "n=4 seed count",
        g4.is_complete() && g4.seeds().len() == 14 && t4 < N4_TIME_LIMIT,
        format!("{} seeds in {t4:.2?} (want 14, < {N4_TIME_LIMIT:?})", g4.seeds().len()),
    );

    let vars4 = g4.mutable_variables();
    let minors = vars4
        .iter()
        .filter(|v| {
            column_set(v.label())
                .is_some_and(|set| &flag_minor(&FlagSet::new(set).unwrap(), 4).unwrap() == v.poly())
        })
        .count();
    let others: Vec<&Array> = vars4.iter().map(|v| v.label()).filter(|a| column_set(a).is_none()).collect();
    report.line(
        2,
        "n=4 variable census",
        vars4.len() == 9 && minors == 8 && others == [&tableau(4, "124|3")],
        format!("{} mutable, {minors} flag minors, {} other", vars4.len(), others.len()),
    );

    let expected_rays: [(&str, [i64; 3]); 9] = [
        ("3", [1, 0, 0]),
        ("2", [0, 0, 1]),
        ("24", [-1, 0, 1]),
        ("23", [0, 1, 0]),
        ("14", [-1, 0, 0]),
        ("13", [0, 1, -1]),
        ("134", [0, 0, -1]),
        ("124", [0, -1, 0]),
        ("124|3", [1, -1, 0]),
    ];
    let projected = quotient_project(&g4).unwrap();
    let matched = expected_rays
        .iter()
        .filter(|(t, v)| {
            let label = if t.contains('|') { tableau(4, t) } else { column(4, t) };
            projected.rays.iter().any(|r| r.label == label && r.coords == v)
        })
        .count();
    report.line(
        3,
        "n=4 projected rays",
        matched == 9 && projected.rays.len() == 9 && projected.basis == ["3", "23", "2"],
        format!("{matched}/9 coordinate vectors match, basis {:?}", projected.basis),
    );

    let relations = [
        (("3", "14"), ("1", "34")),
        (("2", "134"), ("1", "234")),
        (("23", "124"), ("12", "234")),
        (("2", "14"), ("1", "24")),
        (("23", "134"), ("13", "234")),
    ];
    let holding = relations
        .iter()
        .filter(|((a, b), (c, d))| {
            tropical_product(&column(4, a), &column(4, b)).unwrap()
                == tropical_product(&column(4, c), &column(4, d)).unwrap()
        })
        .count();
    report.line(4, "n=4 array relations", holding == 5, format!("{holding}/5 hold"));

    let frozen5 = frozen_labels(&g5);
    let vars5 = g5.mutable_variables();
    report.line(
        5,
        "n=5 counts",
        g5.is_complete()
            && g5.seeds().len() == 672
            && vars5.len() == 36
            && frozen5.len() == 9
            && frozen5 == frozen_arrays(5).into_iter().collect()
            && t5 < N5_TIME_LIMIT,
        format!("{} seeds, {} mutable rays, {} frozen rays in {t5:.2?}", g5.seeds().len(), vars5.len(), frozen5.len()),
    );

    let two_column: BTreeSet<Array> =
        vars5.iter().map(|v| v.label().clone()).filter(|a| column_set(a).is_none()).collect();
    let listed: BTreeSet<Array> = [
        "124|3", "125|3", "125|4", "235|4", "135|4", "124|35", "135|24", "1235|4", "1235|34", "1235|24", "1235|14",
        "1245|3", "1245|34", "1245|35",
    ]
    .iter()
    .map(|t| tableau(5, t))
    .collect();
    report.line(
        6,
        "n=5 two-column labels",
        two_column == listed,
        format!("{} found, {} listed, {} in common", two_column.len(), listed.len(), two_column.intersection(&listed).count()),
    );

    let vars3: BTreeSet<Array> = g3.mutable_variables().iter().map(|v| v.label().clone()).collect();
    report.line(
        7,
        "n=3 finite type",
        g3.is_complete() && g3.seeds().len() == 2 && vars3 == [column(3, "2"), column(3, "13")].into_iter().collect(),
        format!("{} seeds, {} mutable variables", g3.seeds().len(), vars3.len()),
    );

    let all_small: Vec<_> = small.iter().flat_map(|g| cluster_variables(g).unwrap()).collect();
    let bad_leading = all_small
        .iter()
        .filter(|v| {
            let (_, c) = v.poly().leading_term().unwrap();
            *c != 1.into() || leading_array(v.poly()).ok().as_ref() != Some(v.label()) || !v.label().is_d_tight()
        })
        .count();
    report.line(
        8,
        "leading terms",
        bad_leading == 0,
        format!("{bad_leading} violations among {} variables", all_small.len()),
    );

    let (deep, t6) = timed(6, EnumerateOptions { max_depth: Some(DEEP_DEPTH), ..Default::default() });
    let mut collisions = 0;
    let mut labelled = 0;
    for g in small.iter().copied().chain([&deep]) {
        let mut table: BTreeMap<&Array, &Polynomial> = BTreeMap::new();
        for s in g.seeds() {
            for v in s.vars() {
                match table.insert(v.label(), v.poly()) {
                    Some(prev) if prev != v.poly() => collisions += 1,
                    _ => {}
                }
            }
        }
        labelled += table.len();
    }
    report.line(
        9,
        "label injectivity",
        collisions == 0,
        format!("{collisions} collisions among {labelled} labels (n=3..5, n=6 to depth {DEEP_DEPTH})"),
    );

    let mut fan_ok = true;
    let mut fan_detail = Vec::new();
    for g in small {
        let r = verify_fan(g, PairwiseMode::Full);
        fan_ok &= r.passed() && r.pairs_checked == r.pairs_total && r.unimodular == g.seeds().len();
        fan_detail.push(format!("n={}: {}/{} pairs, {} violations", g.n(), r.pairs_checked, r.pairs_total, r.violations.len()));
    }
    report.line(10, "fan", fan_ok, fan_detail.join("; "));

    let mut cov_ok = true;
    let mut cov_detail = Vec::new();
    for g in small {
        let r = coverage(g, COVERAGE_SAMPLES, COVERAGE_BOUND, COVERAGE_SEED).unwrap();
        cov_ok &= r.covered == COVERAGE_SAMPLES && r.double_interior == 0;
        cov_detail.push(format!("n={}: {}/{} covered, {} double interior", g.n(), r.covered, r.samples, r.double_interior));
    }
    report.line(11, "coverage", cov_ok, cov_detail.join("; "));

    // enumeration aborts on the first failed division, so reaching here means none failed
    let mutations: usize = small.iter().map(|g| g.stats().mutations).sum::<usize>() + deep.stats().mutations;
    report.line(
        12,
        "exact division",
        deep.stats().depth_reached == DEEP_DEPTH,
        format!("{mutations} mutations, n=6 to depth {} with {} seeds in {t6:.2?}", deep.stats().depth_reached, deep.seeds().len()),
    );

    let (checked, failed) = small
        .iter()
        .copied()
        .chain([&deep])
        .fold((0, 0), |(c, f), g| (c + g.stats().certificates_checked, f + g.stats().certificate_failures));
    report.line(
        13,
        "tropical relation",
        failed == 0 && checked == mutations,
        format!("{failed} failures in {checked} certificates"),
    );

    let mut nonpositive = 0;
    for (g, vars) in small.iter().map(|g| (g, cluster_variables(g).unwrap())) {
        let pascal = pascal_matrix(g.n());
        nonpositive += vars.iter().filter(|v| v.poly().evaluate(&pascal).unwrap() <= RBig::ZERO).count();
    }
    report.line(
        14,
        "positivity",
        nonpositive == 0,
        format!("{nonpositive} non-positive among {} variables", all_small.len()),
    );

    let mut rng = ChaCha8Rng::seed_from_u64(ORACLE_SEED);
    let (mut agree, mut involutive) = (0, 0);
    for _ in 0..ORACLE_CASES {
        let m = rng.gen_range(2..=12);
        let keep = rng.gen_range(0..m);
        let frozen: Vec<bool> = (0..m).map(|k| k != keep && rng.gen_bool(0.3)).collect();
        let mut q = Quiver::new((0..m).map(|k| Vertex { label: VertexLabel::Index(k), frozen: frozen[k] }).collect());
        for u in 0..m {
            for v in u + 1..m {
                if !(frozen[u] && frozen[v]) {
                    q.add_arrows(VertexId(u), VertexId(v), rng.gen_range(-3..=3)).unwrap();
                }
            }
        }
        let mutable: Vec<usize> = (0..m).filter(|&k| !frozen[k]).collect();
        let k = mutable[rng.gen_range(0..mutable.len())];
        let b: Vec<Vec<i64>> = q.ids().map(|u| q.ids().map(|v| i64::from(q.weight(u, v))).collect()).collect();
        let mutated = q.mutate(VertexId(k)).unwrap();
        let mb: Vec<Vec<i64>> =
            mutated.ids().map(|u| mutated.ids().map(|v| i64::from(mutated.weight(u, v))).collect()).collect();
        agree += usize::from(mb == matrix_mutation(&b, &frozen, k));
        involutive += usize::from(mutated.mutate(VertexId(k)).unwrap() == q);
    }
    report.line(
        15,
        "quiver oracle",
        agree == ORACLE_CASES && involutive == ORACLE_CASES,
        format!("{agree}/{ORACLE_CASES} agree, {involutive}/{ORACLE_CASES} involutive"),
    );

    println!("{}/15 criteria passed", 15 - report.failures);
    if report.failures > 0 {
        std::process::exit(1);
    }
}
