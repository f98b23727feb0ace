use std::collections::BTreeSet;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;
use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};

use super::{initial_seed, mutate_seed_with, same_quiver_up_to_labels, seed_key, ClusterVariable, ExchangeCertificate, Seed, SeedKey};
use crate::error::{Error, Result};
use crate::quiver::VertexId;
use crate::ssyt::Array;

/// Frontier seeds are mutated in chunks of this size to bound peak memory.
const CHUNK: usize = 512;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum MutationOrder {
    #[default]
    Natural,
    Reversed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOptions {
    pub max_seeds: Option<usize>,
    /// Seeds at this distance from the initial seed are not expanded.
    pub max_depth: Option<usize>,
    pub order: MutationOrder,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub from: usize,
    pub to: usize,
    /// Mutated vertex, as a position in the quiver of `from`.
    pub vertex: VertexId,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphStats {
    pub seeds: usize,
    pub edges: usize,
    pub depth_reached: usize,
    pub truncated: bool,
    pub unexpanded_seeds: usize,
    pub mutations: usize,
    /// Cache misses; may vary with thread scheduling.
    pub exchanges_computed: usize,
    pub certificates_checked: usize,
    pub certificate_failures: usize,
}

/// Memo of exchange results keyed on the identities of the variables
/// involved. Computed variables are replaced by a canonical shared copy when
/// an equal polynomial is already known, so pointer identity is polynomial
/// identity for every variable that reaches a frontier.
#[derive(Default)]
pub struct ExchangeCache {
    inner: Mutex<CacheInner>,
}

#[derive(Default)]
struct CacheInner {
    map: FxHashMap<ExchangeKey, Arc<ClusterVariable>>,
    canonical: FxHashMap<Array, Arc<ClusterVariable>>,
    // keeps every keyed variable alive so addresses are never reused
    pinned: Vec<Arc<ClusterVariable>>,
    misses: usize,
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct ExchangeKey {
    old: usize,
    incoming: Vec<(usize, u32)>,
    outgoing: Vec<(usize, u32)>,
}

fn addr(v: &Arc<ClusterVariable>) -> usize {
    Arc::as_ptr(v) as usize
}

impl ExchangeCache {
    fn side(seed: &Seed, arrows: Vec<(VertexId, u32)>) -> Vec<(usize, u32)> {
        let mut side: Vec<(usize, u32)> = arrows.into_iter().map(|(u, w)| (addr(&seed.vars[u.0]), w)).collect();
        side.sort_unstable();
        side
    }

    fn key(seed: &Seed, v: VertexId) -> ExchangeKey {
        ExchangeKey {
            old: addr(&seed.vars[v.0]),
            incoming: Self::side(seed, seed.quiver.in_arrows(v)),
            outgoing: Self::side(seed, seed.quiver.out_arrows(v)),
        }
    }

    fn register(&self, var: &Arc<ClusterVariable>) {
        let mut inner = self.inner.lock().expect("cache lock");
        inner.canonical.entry(var.label.clone()).or_insert_with(|| var.clone());
    }

    pub(crate) fn lookup(&self, seed: &Seed, v: VertexId) -> Option<Arc<ClusterVariable>> {
        self.inner.lock().expect("cache lock").map.get(&Self::key(seed, v)).cloned()
    }

    /// Records a computed exchange and returns the variable to use: the
    /// canonical copy if an equal one is known, otherwise `new` itself. A
    /// label clash with a different polynomial is left for the caller to see.
    pub(crate) fn store(&self, seed: &Seed, v: VertexId, new: Arc<ClusterVariable>) -> Arc<ClusterVariable> {
        let key = Self::key(seed, v);
        let old = seed.vars[v.0].clone();
        let mut inner = self.inner.lock().expect("cache lock");
        inner.misses += 1;
        let new = match inner.canonical.get(&new.label) {
            Some(known) if known.poly == new.poly => known.clone(),
            Some(_) => new,
            None => {
                inner.canonical.insert(new.label.clone(), new.clone());
                new
            }
        };
        // the reverse exchange has the sides swapped and gives back the old variable
        let reverse = ExchangeKey { old: addr(&new), incoming: key.outgoing.clone(), outgoing: key.incoming.clone() };
        inner.pinned.push(old.clone());
        inner.pinned.push(new.clone());
        inner.map.insert(key, new.clone());
        inner.map.insert(reverse, old);
        new
    }

    pub fn misses(&self) -> usize {
        self.inner.lock().expect("cache lock").misses
    }
}

/// The explored part of the exchange graph.
#[derive(Clone, Debug)]
pub struct ExchangeGraph {
    n: usize,
    seeds: Vec<Seed>,
    keys: Vec<SeedKey>,
    index: FxHashMap<SeedKey, usize>,
    depths: Vec<usize>,
    edges: Vec<GraphEdge>,
    failed_certificates: Vec<ExchangeCertificate>,
    stats: GraphStats,
}

impl ExchangeGraph {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn seeds(&self) -> &[Seed] {
        &self.seeds
    }

    pub fn keys(&self) -> &[SeedKey] {
        &self.keys
    }

    pub fn depths(&self) -> &[usize] {
        &self.depths
    }

    /// Undirected edges, each reported once with `from < to`.
    pub fn edges(&self) -> &[GraphEdge] {
        &self.edges
    }

    pub fn stats(&self) -> &GraphStats {
        &self.stats
    }

    /// Exchanges whose tropical certificate did not hold.
    pub fn failed_certificates(&self) -> &[ExchangeCertificate] {
        &self.failed_certificates
    }

    pub fn is_complete(&self) -> bool {
        !self.stats.truncated
    }

    pub fn find(&self, key: &SeedKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Distinct variables sitting at mutable vertices, sorted by label.
    pub fn mutable_variables(&self) -> Vec<Arc<ClusterVariable>> {
        let mut seen: FxHashMap<&Array, Arc<ClusterVariable>> = FxHashMap::default();
        for seed in &self.seeds {
            for v in seed.quiver.mutable_ids() {
                let var = &seed.vars[v.0];
                seen.entry(&var.label).or_insert_with(|| var.clone());
            }
        }
        let mut out: Vec<_> = seen.into_values().collect();
        out.sort_by(|a, b| a.label.cmp(&b.label));
        out
    }
}

/// Every distinct cluster variable of the graph (frozen ones included),
/// sorted by label. Fails if two different polynomials share a label.
pub fn cluster_variables(graph: &ExchangeGraph) -> Result<Vec<Arc<ClusterVariable>>> {
    let mut table: FxHashMap<&Array, &Arc<ClusterVariable>> = FxHashMap::default();
    for seed in &graph.seeds {
        for var in &seed.vars {
            match table.get(&var.label) {
                Some(prev) if prev.poly != var.poly => return Err(collision(prev, var)),
                Some(_) => {}
                None => {
                    table.insert(&var.label, var);
                }
            }
        }
    }
    let mut out: Vec<_> = table.into_values().cloned().collect();
    out.sort_by(|a, b| a.label.cmp(&b.label));
    Ok(out)
}

fn collision(a: &ClusterVariable, b: &ClusterVariable) -> Error {
    Error::LabelCollision { label: a.tableau(), first: a.poly.to_string(), second: b.poly.to_string() }
}

/// Breadth-first exploration of the exchange graph from the initial seed.
///
/// Mutations of one level are computed in parallel on the ambient rayon pool
/// and merged in a fixed order, so the result does not depend on the number
/// of threads. Every exchange is certified tropically, every new label is
/// checked against the label table, and every rediscovered cluster is checked
/// to carry the same quiver.
pub fn enumerate(n: usize, options: &EnumerateOptions) -> Result<ExchangeGraph> {
    let cache = ExchangeCache::default();
    let initial = initial_seed(n)?;
    let mut table: FxHashMap<Array, Arc<ClusterVariable>> = FxHashMap::default();
    for var in &initial.vars {
        cache.register(var);
        table.insert(var.label.clone(), var.clone());
    }
    let first_key = seed_key(&initial);

    let mut graph = ExchangeGraph {
        n,
        seeds: vec![initial],
        keys: vec![first_key.clone()],
        index: [(first_key, 0)].into_iter().collect(),
        depths: vec![0],
        edges: Vec::new(),
        failed_certificates: Vec::new(),
        stats: GraphStats::default(),
    };
    let mut edge_set: BTreeSet<(usize, usize)> = BTreeSet::new();
    let mut frontier = vec![0usize];
    let mut depth = 0;
    let mut seed_cap_hit = false;

    while !frontier.is_empty() {
        if options.max_depth.is_some_and(|d| depth >= d) || seed_cap_hit {
            graph.stats.unexpanded_seeds = frontier.len();
            graph.stats.truncated = true;
            break;
        }
        log::info!("depth {depth}: expanding {} seeds ({} known)", frontier.len(), graph.seeds.len());
        let mut next = Vec::new();
        for chunk in frontier.chunks(CHUNK) {
            let jobs: Vec<(usize, VertexId)> = chunk
                .iter()
                .flat_map(|&s| {
                    let mut vs = graph.seeds[s].mutable_vertices();
                    if options.order == MutationOrder::Reversed {
                        vs.reverse();
                    }
                    vs.into_iter().map(move |v| (s, v))
                })
                .collect();
            let seeds = &graph.seeds;
            let results: Vec<Result<(Seed, ExchangeCertificate)>> =
                jobs.par_iter().map(|&(s, v)| mutate_seed_with(&seeds[s], v, Some(&cache))).collect();

            for (&(parent, v), result) in jobs.iter().zip(results) {
                let (mut child, cert) = result?;
                graph.stats.mutations += 1;
                graph.stats.certificates_checked += 1;
                if !cert.holds() {
                    graph.stats.certificate_failures += 1;
                    graph.failed_certificates.push(cert);
                }
                let fresh = child.vars[v.0].clone();
                match table.get(&fresh.label) {
                    Some(known) if known.poly != fresh.poly => return Err(collision(known, &fresh)),
                    Some(known) => {
                        let known = known.clone();
                        child.share_var(v, known);
                    }
                    None => {
                        table.insert(fresh.label.clone(), fresh);
                    }
                }
                let key = seed_key(&child);
                let target = match graph.index.get(&key) {
                    Some(&existing) => {
                        if !same_quiver_up_to_labels(&graph.seeds[existing], &child) {
                            return Err(Error::QuiverMismatch(key.to_string()));
                        }
                        existing
                    }
                    None => {
                        if options.max_seeds.is_some_and(|m| graph.seeds.len() >= m) {
                            seed_cap_hit = true;
                            continue;
                        }
                        let id = graph.seeds.len();
                        graph.index.insert(key.clone(), id);
                        graph.seeds.push(child);
                        graph.keys.push(key);
                        graph.depths.push(depth + 1);
                        next.push(id);
                        id
                    }
                };
                let pair = (parent.min(target), parent.max(target));
                if edge_set.insert(pair) {
                    let vertex = if parent < target { v } else { locate(&graph.seeds[target], &graph.seeds[parent], v) };
                    graph.edges.push(GraphEdge { from: pair.0, to: pair.1, vertex });
                }
            }
        }
        frontier = next;
        depth += 1;
    }
    graph.stats.depth_reached = *graph.depths.iter().max().unwrap_or(&0);
    graph.stats.seeds = graph.seeds.len();
    graph.stats.edges = graph.edges.len();
    graph.stats.exchanges_computed = cache.misses();
    log::info!("enumeration done: {:?}", graph.stats);
    Ok(graph)
}

/// The vertex of `from` whose mutation leads to `to`: the one carrying the
/// variable absent from `to`.
fn locate(from: &Seed, to: &Seed, v_to: VertexId) -> VertexId {
    from.quiver
        .mutable_ids()
        .find(|&u| !to.vars.iter().any(|x| x.label == from.vars[u.0].label))
        .unwrap_or(v_to)
}
