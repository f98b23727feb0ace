//! Registry of reproducible numerical claims about the cluster structure for
//! small `n`, each checked against a fresh computation.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

use dashu_ratio::RBig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cluster::{cluster_variables, enumerate, EnumerateOptions, ExchangeGraph};
use crate::fan::{coverage, quotient_project, verify_fan, PairwiseMode};
use crate::poly::{flag_minor, leading_array, pascal_matrix, FlagSet};
use crate::quiver::{Quiver, Vertex, VertexId, VertexLabel};
use crate::ssyt::{frozen_arrays, tableau_to_array, tropical_product, Array, Tableau};

pub struct ClaimInfo {
    pub id: &'static str,
    pub title: &'static str,
}

pub const CLAIMS: &[ClaimInfo] = &[
    ClaimInfo { id: "n4-seeds", title: "n=4 has 14 seeds" },
    ClaimInfo { id: "n4-vars", title: "n=4 has 9 mutable variables, 8 of them flag minors" },
    ClaimInfo { id: "n4-rays", title: "n=4 projected ray coordinates" },
    ClaimInfo { id: "n4-relations", title: "n=4 additive relations among labels" },
    ClaimInfo { id: "n5-counts", title: "n=5 has 672 seeds, 36 mutable and 9 frozen rays" },
    ClaimInfo { id: "n5-tableaux", title: "n=5 two-column labels" },
    ClaimInfo { id: "n3", title: "n=3 has 2 seeds with mutable variables 2 and 13" },
    ClaimInfo { id: "leading-terms", title: "every variable is monic with a D-tight leading array" },
    ClaimInfo { id: "label-injectivity", title: "distinct variables have distinct labels" },
    ClaimInfo { id: "fan", title: "seed cones are unimodular and meet in common faces" },
    ClaimInfo { id: "coverage", title: "random D-tight points lie in exactly one cone interior or on boundaries" },
    ClaimInfo { id: "laurent", title: "every exchange divides exactly, including n=6 to depth 6" },
    ClaimInfo { id: "tropical", title: "every exchange satisfies the tropical label relation" },
    ClaimInfo { id: "positivity", title: "every variable for n<=5 is positive at the Pascal matrix" },
    ClaimInfo { id: "quiver-oracle", title: "quiver mutation matches the exchange-matrix rule and is an involution" },
];

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub pairwise: PairwiseMode,
    pub samples: usize,
    pub bound: u32,
    pub rng_seed: u64,
    pub oracle_cases: usize,
    pub deep_depth: usize,
    pub deep_max_seeds: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            pairwise: PairwiseMode::Full,
            samples: 10_000,
            bound: 8,
            rng_seed: 7,
            oracle_cases: 1000,
            deep_depth: 6,
            deep_max_seeds: 50_000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClaimOutcome {
    pub id: String,
    pub title: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
    pub seconds: f64,
}

type Shared = std::result::Result<Arc<ExchangeGraph>, String>;

/// Runs claims, sharing enumerations between them.
pub struct Suite {
    config: SuiteConfig,
    graphs: BTreeMap<usize, (Shared, f64)>,
    deep: Option<Shared>,
}

struct Check {
    expected: String,
    computed: String,
    passed: bool,
}

fn check(expected: impl Into<String>, computed: impl Into<String>, passed: bool) -> Check {
    Check { expected: expected.into(), computed: computed.into(), passed }
}

fn failed(expected: impl Into<String>, err: impl std::fmt::Display) -> Check {
    check(expected, format!("error: {err}"), false)
}

fn column(n: usize, s: &str) -> Array {
    let col: Vec<u32> = s.chars().map(|c| c.to_digit(10).expect("digit")).collect();
    Array::from_column(n, &col).expect("valid column")
}

fn two_column(n: usize, s: &str) -> Array {
    let cols: Vec<Vec<u32>> =
        s.split('|').map(|c| c.chars().map(|d| d.to_digit(10).expect("digit")).collect()).collect();
    tableau_to_array(&Tableau::from_columns(n, &cols).expect("valid tableau"))
}

fn is_one_column(a: &Array) -> bool {
    crate::ssyt::array_to_tableau(a).map(|t| t.columns().len() == 1).unwrap_or(false)
}

impl Suite {
    pub fn new(config: SuiteConfig) -> Self {
        Suite { config, graphs: BTreeMap::new(), deep: None }
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.config
    }

    /// Complete enumeration for `n`, with its wall time in seconds.
    fn graph(&mut self, n: usize) -> (Shared, f64) {
        self.graphs
            .entry(n)
            .or_insert_with(|| {
                let start = Instant::now();
                let g = enumerate(n, &EnumerateOptions::default()).map(Arc::new).map_err(|e| e.to_string());
                (g, start.elapsed().as_secs_f64())
            })
            .clone()
    }

    fn deep(&mut self) -> Shared {
        let (depth, cap) = (self.config.deep_depth, self.config.deep_max_seeds);
        self.deep
            .get_or_insert_with(|| {
                let options = EnumerateOptions { max_depth: Some(depth), max_seeds: Some(cap), ..Default::default() };
                enumerate(6, &options).map(Arc::new).map_err(|e| e.to_string())
            })
            .clone()
    }

    fn small_graphs(&mut self) -> std::result::Result<Vec<Arc<ExchangeGraph>>, String> {
        (3..=5).map(|n| self.graph(n).0).collect()
    }

    pub fn run(&mut self, id: &str) -> Option<ClaimOutcome> {
        let info = CLAIMS.iter().find(|c| c.id == id)?;
        let start = Instant::now();
        let c = match id {
            "n4-seeds" => self.n4_seeds(),
            "n4-vars" => self.n4_vars(),
            "n4-rays" => self.n4_rays(),
            "n4-relations" => n4_relations(),
            "n5-counts" => self.n5_counts(),
            "n5-tableaux" => self.n5_tableaux(),
            "n3" => self.n3(),
            "leading-terms" => self.leading_terms(),
            "label-injectivity" => self.label_injectivity(),
            "fan" => self.fan(),
            "coverage" => self.coverage(),
            "laurent" => self.laurent(),
            "tropical" => self.tropical(),
            "positivity" => self.positivity(),
            "quiver-oracle" => quiver_oracle(self.config.oracle_cases, self.config.rng_seed),
            _ => unreachable!("registered claim without a check"),
        };
        Some(ClaimOutcome {
            id: info.id.to_string(),
            title: info.title.to_string(),
            expected: c.expected,
            computed: c.computed,
            passed: c.passed,
            seconds: start.elapsed().as_secs_f64(),
        })
    }

    fn n4_seeds(&mut self) -> Check {
        let expected = "14 seeds in under 10 s";
        match self.graph(4) {
            (Ok(g), secs) => check(
                expected,
                format!("{} seeds in {secs:.3} s", g.seeds().len()),
                g.is_complete() && g.seeds().len() == 14 && secs < 10.0,
            ),
            (Err(e), _) => failed(expected, e),
        }
    }

    fn n4_vars(&mut self) -> Check {
        let expected = "9 mutable: 8 flag minors and 124|3";
        let g = match self.graph(4).0 {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let vars = g.mutable_variables();
        let mut minors = 0;
        let mut others = Vec::new();
        for v in &vars {
            let t = v.tableau();
            if is_one_column(v.label()) {
                let set: Vec<u32> = t.chars().map(|c| c.to_digit(10).unwrap_or(0)).collect();
                let is_minor = FlagSet::new(set)
                    .and_then(|s| flag_minor(&s, 4))
                    .map(|m| &m == v.poly())
                    .unwrap_or(false);
                if is_minor {
                    minors += 1;
                    continue;
                }
            }
            others.push(t);
        }
        let computed = format!("{} mutable: {minors} flag minors and {}", vars.len(), others.join(", "));
        let passed = vars.len() == 9 && minors == 8 && others == ["124|3"];
        check(expected, computed, passed)
    }

    fn n4_rays(&mut self) -> Check {
        const RAYS: [(&str, [i64; 3]); 9] = [
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
        let expected = RAYS.iter().map(|(t, v)| format!("{t}={v:?}")).collect::<Vec<_>>().join(" ");
        let g = match self.graph(4).0 {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let fan = match quotient_project(&g) {
            Ok(f) => f,
            Err(e) => return failed(expected, e),
        };
        let computed = RAYS
            .iter()
            .map(|(t, _)| match fan.ray(t) {
                Some(r) => format!("{t}={:?}", r.coords),
                None => format!("{t}=missing"),
            })
            .collect::<Vec<_>>()
            .join(" ");
        let passed = fan.basis == ["3", "23", "2"]
            && fan.rays.len() == RAYS.len()
            && RAYS.iter().all(|(t, v)| fan.ray(t).is_some_and(|r| r.coords == v));
        check(expected, computed, passed)
    }

    fn n5_counts(&mut self) -> Check {
        let expected = "672 seeds, 36 mutable rays, 9 frozen rays";
        let g = match self.graph(5).0 {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let frozen: BTreeSet<Array> = g
            .seeds()
            .iter()
            .flat_map(|s| s.quiver().ids().filter(|&v| s.quiver().is_frozen(v)).map(move |v| s.var(v).label().clone()))
            .collect();
        let mutable = g.mutable_variables().len();
        let computed = format!("{} seeds, {mutable} mutable rays, {} frozen rays", g.seeds().len(), frozen.len());
        let passed = g.is_complete()
            && g.seeds().len() == 672
            && mutable == 36
            && frozen.len() == 9
            && frozen == frozen_arrays(5).into_iter().collect();
        check(expected, computed, passed)
    }

    fn n5_tableaux(&mut self) -> Check {
        const LABELS: [&str; 14] = [
            "124|3", "125|3", "125|4", "235|4", "135|4", "124|35", "135|24", "1235|4", "1235|34", "1235|24",
            "1235|14", "1245|3", "1245|34", "1245|35",
        ];
        let expected = LABELS.join(" ");
        let g = match self.graph(5).0 {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let found: BTreeSet<Array> =
            g.mutable_variables().iter().map(|v| v.label().clone()).filter(|a| !is_one_column(a)).collect();
        let want: BTreeSet<Array> = LABELS.iter().map(|t| two_column(5, t)).collect();
        let mut names: Vec<String> = g
            .mutable_variables()
            .iter()
            .filter(|v| !is_one_column(v.label()))
            .map(|v| v.tableau())
            .collect();
        names.sort();
        check(expected, names.join(" "), found == want)
    }

    fn n3(&mut self) -> Check {
        let expected = "2 seeds, mutable variables 13 2";
        let g = match self.graph(3).0 {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let mut names: Vec<String> = g.mutable_variables().iter().map(|v| v.tableau()).collect();
        names.sort();
        let labels: BTreeSet<Array> = g.mutable_variables().iter().map(|v| v.label().clone()).collect();
        let want: BTreeSet<Array> = [column(3, "2"), column(3, "13")].into_iter().collect();
        check(
            expected,
            format!("{} seeds, mutable variables {}", g.seeds().len(), names.join(" ")),
            g.is_complete() && g.seeds().len() == 2 && labels == want,
        )
    }

    fn leading_terms(&mut self) -> Check {
        let expected = "0 violations";
        let graphs = match self.small_graphs() {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let (mut total, mut bad) = (0, 0);
        for g in &graphs {
            let vars = match cluster_variables(g) {
                Ok(v) => v,
                Err(e) => return failed(expected, e),
            };
            for v in vars {
                total += 1;
                match leading_array(v.poly()) {
                    Ok(a) if &a == v.label() => {}
                    _ => bad += 1,
                }
            }
        }
        check(expected, format!("{bad} violations among {total} variables"), bad == 0 && total > 0)
    }

    fn label_injectivity(&mut self) -> Check {
        let expected = "0 collisions";
        let mut graphs = match self.small_graphs() {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        match self.deep() {
            Ok(g) => graphs.push(g),
            Err(e) => return failed(expected, e),
        }
        let mut total = 0;
        for g in &graphs {
            match cluster_variables(g) {
                Ok(v) => total += v.len(),
                Err(e) => return check(expected, e.to_string(), false),
            }
        }
        check(expected, format!("0 collisions among {total} variables"), true)
    }

    fn fan(&mut self) -> Check {
        let mode = self.config.pairwise;
        let expected = match mode {
            PairwiseMode::Full => "all pairs of all cones pass for n=3,4,5".to_string(),
            PairwiseMode::Sampled { .. } => "all pairs for n=3,4 and >= 20000 sampled pairs for n=5 pass".to_string(),
        };
        let graphs = match self.small_graphs() {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let mut parts = Vec::new();
        let mut passed = true;
        for g in &graphs {
            let m = if g.n() < 5 { PairwiseMode::Full } else { mode };
            let r = verify_fan(g, m);
            passed &= r.passed() && r.enumeration_complete;
            if g.n() == 5 {
                if let PairwiseMode::Sampled { .. } = m {
                    passed &= r.pairs_checked >= 20_000;
                }
            }
            parts.push(format!(
                "n={}: {}/{} unimodular, {}/{} pairs, {} violations",
                g.n(),
                r.unimodular,
                r.cones,
                r.pairs_checked,
                r.pairs_total,
                r.violations.len()
            ));
        }
        check(expected, parts.join("; "), passed)
    }

    fn coverage(&mut self) -> Check {
        let samples = self.config.samples;
        let expected = format!("{samples}/{samples} covered, 0 double interior, for n=3,4,5");
        let graphs = match self.small_graphs() {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let mut parts = Vec::new();
        let mut passed = samples >= 10_000;
        for g in &graphs {
            match coverage(g, samples, self.config.bound, self.config.rng_seed) {
                Ok(r) => {
                    passed &= r.passed() && r.covered == samples;
                    parts.push(format!(
                        "n={}: {}/{} covered, {} double interior",
                        g.n(),
                        r.covered,
                        r.samples,
                        r.double_interior
                    ));
                }
                Err(e) => return failed(expected, e),
            }
        }
        check(expected, parts.join("; "), passed)
    }

    fn laurent(&mut self) -> Check {
        let expected = "no failed division for n=3,4,5 and n=6 to the depth limit";
        let mut parts = Vec::new();
        for n in 3..=5 {
            match self.graph(n).0 {
                Ok(g) => parts.push(format!("n={n}: {} exchanges", g.stats().mutations)),
                Err(e) => return failed(expected, e),
            }
        }
        match self.deep() {
            Ok(g) => parts.push(format!(
                "n=6: {} exchanges over {} seeds to depth {}",
                g.stats().mutations,
                g.seeds().len(),
                g.stats().depth_reached
            )),
            Err(e) => return failed(expected, e),
        }
        check(expected, parts.join("; "), true)
    }

    fn tropical(&mut self) -> Check {
        let expected = "0 failed certificates";
        let mut graphs = match self.small_graphs() {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        match self.deep() {
            Ok(g) => graphs.push(g),
            Err(e) => return failed(expected, e),
        }
        let checked: usize = graphs.iter().map(|g| g.stats().certificates_checked).sum();
        let failures: usize = graphs.iter().map(|g| g.stats().certificate_failures).sum();
        check(expected, format!("{failures} failed certificates of {checked}"), failures == 0 && checked > 0)
    }

    fn positivity(&mut self) -> Check {
        let expected = "0 non-positive values";
        let graphs = match self.small_graphs() {
            Ok(g) => g,
            Err(e) => return failed(expected, e),
        };
        let (mut total, mut bad) = (0, 0);
        for g in &graphs {
            let pascal = pascal_matrix(g.n());
            let vars = match cluster_variables(g) {
                Ok(v) => v,
                Err(e) => return failed(expected, e),
            };
            for v in vars {
                total += 1;
                match v.poly().evaluate(&pascal) {
                    Ok(x) if x > RBig::ZERO => {}
                    _ => bad += 1,
                }
            }
        }
        check(expected, format!("{bad} non-positive values among {total} variables"), bad == 0)
    }
}

fn n4_relations() -> Check {
    const RELATIONS: [([&str; 2], [&str; 2]); 5] = [
        (["3", "14"], ["1", "34"]),
        (["2", "134"], ["1", "234"]),
        (["23", "124"], ["12", "234"]),
        (["2", "14"], ["1", "24"]),
        (["23", "134"], ["13", "234"]),
    ];
    let expected = "5 of 5 relations hold";
    let sum = |pair: [&str; 2]| tropical_product(&column(4, pair[0]), &column(4, pair[1]));
    let mut holding = 0;
    for (lhs, rhs) in RELATIONS {
        match (sum(lhs), sum(rhs)) {
            (Ok(a), Ok(b)) if a == b => holding += 1,
            (Ok(_), Ok(_)) => {}
            (Err(e), _) | (_, Err(e)) => return failed(expected, e),
        }
    }
    check(expected, format!("{holding} of 5 relations hold"), holding == 5)
}

/// Mutation of a skew-symmetric exchange matrix at `k`, keeping entries
/// between two frozen indices at zero.
pub fn exchange_matrix_mutation(b: &[Vec<i64>], frozen: &[bool], k: usize) -> Vec<Vec<i64>> {
    let m = b.len();
    let mut out = b.to_vec();
    for i in 0..m {
        for j in 0..m {
            out[i][j] = if i == k || j == k {
                -b[i][j]
            } else if frozen[i] && frozen[j] {
                0
            } else {
                b[i][j] + (b[i][k].abs() * b[k][j] + b[i][k] * b[k][j].abs()) / 2
            };
        }
    }
    out
}

fn matrix_of(q: &Quiver) -> Vec<Vec<i64>> {
    q.ids().map(|u| q.ids().map(|v| i64::from(q.weight(u, v))).collect()).collect()
}

/// A random quiver on 2 to 12 vertices with at least one mutable vertex.
pub fn random_quiver<R: Rng>(rng: &mut R) -> Quiver {
    let m = rng.gen_range(2..=12);
    let mutable_at = rng.gen_range(0..m);
    let vertices = (0..m)
        .map(|k| Vertex { label: VertexLabel::Index(k), frozen: k != mutable_at && rng.gen_bool(0.3) })
        .collect();
    let mut q = Quiver::new(vertices);
    for u in 0..m {
        for v in u + 1..m {
            if q.is_frozen(VertexId(u)) && q.is_frozen(VertexId(v)) {
                continue;
            }
            let w = rng.gen_range(-3..=3);
            if w != 0 {
                q.add_arrows(VertexId(u), VertexId(v), w).expect("valid arrow");
            }
        }
    }
    q
}

fn quiver_oracle(cases: usize, rng_seed: u64) -> Check {
    let expected = format!("{cases} of {cases} cases agree and are involutive");
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    let (mut agree, mut involutive) = (0, 0);
    for _ in 0..cases {
        let q = random_quiver(&mut rng);
        let mutable: Vec<VertexId> = q.mutable_ids().collect();
        let v = mutable[rng.gen_range(0..mutable.len())];
        let frozen: Vec<bool> = q.ids().map(|u| q.is_frozen(u)).collect();
        let Ok(mutated) = q.mutate(v) else { continue };
        if matrix_of(&mutated) == exchange_matrix_mutation(&matrix_of(&q), &frozen, v.0) {
            agree += 1;
        }
        if mutated.mutate(v).is_ok_and(|back| back == q) {
            involutive += 1;
        }
    }
    check(
        expected,
        format!("{agree} agree, {involutive} involutive, of {cases}"),
        cases > 0 && agree == cases && involutive == cases,
    )
}
