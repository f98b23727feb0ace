//! Versioned JSON documents for graphs, fans and reports.

use serde::{Deserialize, Serialize};

use crate::cluster::{ClusterVariable, ExchangeGraph, GraphStats};
use crate::fan::Cone;
use crate::quiver::VertexLabel;
use crate::ssyt::{frozen_arrays, Array};

pub const SCHEMA_VERSION: u32 = 1;

/// Wraps a document body with its schema name and version.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub schema: String,
    pub schema_version: u32,
    #[serde(flatten)]
    pub body: T,
}

impl<T> Envelope<T> {
    pub fn new(schema: &str, body: T) -> Self {
        Envelope { schema: format!("clusterfan/{schema}"), schema_version: SCHEMA_VERSION, body }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexEntry {
    pub vertex: VertexLabel,
    pub frozen: bool,
    /// Index into the variable table.
    pub variable: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedEntry {
    pub index: usize,
    pub depth: usize,
    pub key: Vec<Array>,
    pub vertices: Vec<VertexEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeEntry {
    pub from: usize,
    pub to: usize,
    pub vertex: VertexLabel,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VariableEntry {
    pub index: usize,
    pub label: Array,
    pub tableau: String,
    pub frozen: bool,
    pub degree: u32,
    pub terms: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub polynomial: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphDocument {
    pub n: usize,
    pub stats: GraphStats,
    pub variables: Vec<VariableEntry>,
    pub seeds: Vec<SeedEntry>,
    pub edges: Vec<EdgeEntry>,
}

fn variable_entry(index: usize, v: &ClusterVariable, frozen: bool, with_poly: bool) -> VariableEntry {
    VariableEntry {
        index,
        label: v.label().clone(),
        tableau: v.tableau(),
        frozen,
        degree: v.poly().degree(),
        terms: v.poly().len(),
        polynomial: with_poly.then(|| v.poly().to_string()),
    }
}

/// The exchange graph with a deduplicated variable table.
pub fn graph_document(graph: &ExchangeGraph, with_polynomials: bool) -> GraphDocument {
    let frozen = frozen_arrays(graph.n());
    let mut table: Vec<&ClusterVariable> = Vec::new();
    let mut index_of = std::collections::HashMap::<&Array, usize>::new();
    let mut seeds = Vec::with_capacity(graph.seeds().len());
    for (k, seed) in graph.seeds().iter().enumerate() {
        let vertices = seed
            .quiver()
            .ids()
            .map(|v| {
                let var = seed.var(v);
                let idx = *index_of.entry(var.label()).or_insert_with(|| {
                    table.push(var);
                    table.len() - 1
                });
                let vertex = seed.quiver().vertex(v);
                VertexEntry { vertex: vertex.label, frozen: vertex.frozen, variable: idx }
            })
            .collect();
        seeds.push(SeedEntry { index: k, depth: graph.depths()[k], key: graph.keys()[k].0.clone(), vertices });
    }
    let variables = table
        .iter()
        .enumerate()
        .map(|(k, v)| variable_entry(k, v, frozen.contains(v.label()), with_polynomials))
        .collect();
    let edges = graph
        .edges()
        .iter()
        .map(|e| EdgeEntry { from: e.from, to: e.to, vertex: graph.seeds()[e.from].quiver().vertex(e.vertex).label })
        .collect();
    GraphDocument { n: graph.n(), stats: graph.stats().clone(), variables, seeds, edges }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayEntry {
    pub index: usize,
    pub array: Array,
    /// Flattened integer vector in rank order of the array entries.
    pub vector: Vec<i64>,
    pub tableau: String,
    pub frozen: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeEntry {
    pub seed: usize,
    pub generators: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDocument {
    pub n: usize,
    pub rays: Vec<RayEntry>,
    pub cones: Vec<ConeEntry>,
}

/// Cones as index lists into a deduplicated ray table.
pub fn fan_document(n: usize, cones: &[Cone]) -> FanDocument {
    let frozen = frozen_arrays(n);
    let mut rays: Vec<RayEntry> = Vec::new();
    let mut index_of = std::collections::HashMap::<Array, usize>::new();
    let cones = cones
        .iter()
        .enumerate()
        .map(|(k, c)| ConeEntry {
            seed: k,
            generators: c
                .generators()
                .iter()
                .map(|g| {
                    *index_of.entry(g.clone()).or_insert_with(|| {
                        rays.push(RayEntry {
                            index: rays.len(),
                            array: g.clone(),
                            vector: g.to_signed(),
                            tableau: crate::ssyt::array_to_tableau(g)
                                .map(|t| t.to_string())
                                .unwrap_or_else(|_| g.to_string()),
                            frozen: frozen.contains(g),
                        });
                        rays.len() - 1
                    })
                })
                .collect(),
        })
        .collect();
    FanDocument { n, rays, cones }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::{enumerate, EnumerateOptions};
    use crate::fan::seed_cones;

    #[test]
    fn graph_document_round_trips() {
        let g = enumerate(4, &EnumerateOptions::default()).unwrap();
        let doc = graph_document(&g, true);
        assert_eq!(doc.seeds.len(), 14);
        assert_eq!(doc.variables.len(), 16);
        assert_eq!(doc.variables.iter().filter(|v| v.frozen).count(), 7);
        let json = serde_json::to_string(&Envelope::new("exchange-graph", &doc)).unwrap();
        let back: Envelope<GraphDocument> = serde_json::from_str(&json).unwrap();
        assert_eq!(back.schema, "clusterfan/exchange-graph");
        assert_eq!(back.schema_version, SCHEMA_VERSION);
        assert_eq!(back.body, doc);
        let value: serde_json::Value = serde_json::from_str(&json).unwrap();
        assert_eq!(value["variables"][0]["label"]["n"], 4);
    }

    #[test]
    fn fan_document_shares_rays() {
        let g = enumerate(4, &EnumerateOptions::default()).unwrap();
        let doc = fan_document(4, &seed_cones(&g).unwrap());
        assert_eq!(doc.rays.len(), 16);
        assert_eq!(doc.cones.len(), 14);
        assert!(doc.cones.iter().all(|c| c.generators.len() == 10));
    }
}
