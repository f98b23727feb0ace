//! Skew-symmetric quivers with frozen vertices, the triangular grid quiver
//! `Q(n)` and quiver mutation.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of a vertex in [`Quiver::vertices`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct VertexId(pub usize);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum VertexLabel {
    Grid { i: usize, j: usize },
    Index(usize),
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VertexLabel::Grid { i, j } => write!(f, "({i},{j})"),
            VertexLabel::Index(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub label: VertexLabel,
    pub frozen: bool,
}

/// Dense skew-symmetric weight matrix: `w(u, v)` arrows from `u` to `v`.
/// Arrows between two frozen vertices are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertices: Vec<Vertex>,
    weights: Vec<i32>,
}

impl Quiver {
    pub fn new(vertices: Vec<Vertex>) -> Self {
        let m = vertices.len();
        Quiver { vertices, weights: vec![0; m * m] }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn vertex(&self, v: VertexId) -> &Vertex {
        &self.vertices[v.0]
    }

    pub fn is_frozen(&self, v: VertexId) -> bool {
        self.vertices[v.0].frozen
    }

    pub fn ids(&self) -> impl Iterator<Item = VertexId> {
        (0..self.vertices.len()).map(VertexId)
    }

    pub fn mutable_ids(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.ids().filter(|&v| !self.is_frozen(v))
    }

    pub fn find(&self, label: VertexLabel) -> Option<VertexId> {
        self.vertices.iter().position(|v| v.label == label).map(VertexId)
    }

    #[inline]
    pub fn weight(&self, u: VertexId, v: VertexId) -> i32 {
        self.weights[u.0 * self.vertices.len() + v.0]
    }

    fn set(&mut self, u: VertexId, v: VertexId, w: i32) {
        let m = self.vertices.len();
        self.weights[u.0 * m + v.0] = w;
        self.weights[v.0 * m + u.0] = -w;
    }

    /// Adds `k` arrows `u -> v` (negative `k` reverses them).
    pub fn add_arrows(&mut self, u: VertexId, v: VertexId, k: i32) -> Result<()> {
        for x in [u, v] {
            if x.0 >= self.len() {
                return Err(Error::NoSuchVertex(x.0));
            }
        }
        if u == v {
            return Err(Error::OutOfRange(format!("loop at vertex {u}")));
        }
        if self.is_frozen(u) && self.is_frozen(v) {
            return Err(Error::OutOfRange(format!("arrow between frozen vertices {u} and {v}")));
        }
        let w = self.weight(u, v) + k;
        self.set(u, v, w);
        Ok(())
    }

    /// Vertices `u` with `w(u, v) > 0`, with that weight.
    pub fn in_arrows(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        self.ids().filter_map(|u| {
            let w = self.weight(u, v);
            (w > 0).then_some((u, w as u32))
        })
        .collect()
    }

    /// Vertices `u` with `w(v, u) > 0`, with that weight.
    pub fn out_arrows(&self, v: VertexId) -> Vec<(VertexId, u32)> {
        self.ids().filter_map(|u| {
            let w = self.weight(v, u);
            (w > 0).then_some((u, w as u32))
        })
        .collect()
    }

    pub fn is_skew_symmetric(&self) -> bool {
        self.ids().all(|u| {
            self.weight(u, u) == 0 && self.ids().all(|v| self.weight(u, v) + self.weight(v, u) == 0)
        })
    }

    /// Mutation at a mutable vertex `v`: every path `a -> v -> b` adds
    /// `w(a,v) * w(v,b)` arrows `a -> b` (skipped when both ends are frozen),
    /// then all arrows at `v` are reversed.
    pub fn mutate(&self, v: VertexId) -> Result<Quiver> {
        if v.0 >= self.len() {
            return Err(Error::NoSuchVertex(v.0));
        }
        if self.is_frozen(v) {
            return Err(Error::FrozenVertex(v.0));
        }
        let mut out = self.clone();
        let ins = self.in_arrows(v);
        let outs = self.out_arrows(v);
        for &(a, alpha) in &ins {
            for &(b, beta) in &outs {
                if self.is_frozen(a) && self.is_frozen(b) {
                    continue;
                }
                let w = out.weight(a, b) + (alpha * beta) as i32;
                out.set(a, b, w);
            }
        }
        for u in self.ids() {
            let w = self.weight(u, v);
            if w != 0 {
                out.set(u, v, -w);
            }
        }
        Ok(out)
    }

    /// Graphviz rendering; frozen vertices drawn as boxes.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph quiver {\n");
        for v in &self.vertices {
            let shape = if v.frozen { "box" } else { "ellipse" };
            let _ = writeln!(s, "  \"{}\" [shape={shape}];", v.label);
        }
        for u in self.ids() {
            for v in self.ids() {
                let w = self.weight(u, v);
                if w > 0 {
                    let (a, b) = (self.vertices[u.0].label, self.vertices[v.0].label);
                    if w == 1 {
                        let _ = writeln!(s, "  \"{a}\" -> \"{b}\";");
                    } else {
                        let _ = writeln!(s, "  \"{a}\" -> \"{b}\" [label={w}];");
                    }
                }
            }
        }
        s.push_str("}\n");
        s
    }

    pub fn to_export(&self) -> QuiverExport {
        let mut arcs = Vec::new();
        for u in self.ids() {
            for v in self.ids() {
                let w = self.weight(u, v);
                if w > 0 {
                    arcs.push(Arc { from: u.0, to: v.0, weight: w as u32 });
                }
            }
        }
        QuiverExport { vertices: self.vertices.clone(), arcs }
    }

    pub fn from_export(e: &QuiverExport) -> Result<Quiver> {
        let mut q = Quiver::new(e.vertices.clone());
        for arc in &e.arcs {
            q.add_arrows(VertexId(arc.from), VertexId(arc.to), arc.weight as i32)?;
        }
        Ok(q)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Arc {
    pub from: usize,
    pub to: usize,
    pub weight: u32,
}

/// JSON form of a quiver: vertices with frozen flags and positive-weight arcs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverExport {
    pub vertices: Vec<Vertex>,
    pub arcs: Vec<Arc>,
}

/// Grid position of `(i, j)` in [`initial_quiver`]'s vertex order.
pub fn grid_vertex(n: usize, i: usize, j: usize) -> Option<VertexId> {
    if i == 0 || j == 0 || i + j > n + 1 {
        return None;
    }
    // rows i' < i contribute n + 1 - i' vertices each
    let before: usize = (1..i).map(|r| n + 1 - r).sum();
    Some(VertexId(before + j - 1))
}

/// The triangular grid quiver `Q(n)`.
///
/// Vertices `(i, j)` with `i + j <= n + 1`, ordered lexicographically.
/// Frozen: the side `(1, j)` and the hypotenuse `i + j = n + 1`. Arrows point
/// East `(i,j) -> (i+1,j)`, Southwest `(i,j+1) -> (i,j)` and Northwest
/// `(i+1,j) -> (i,j+1)`, so each unit triangle is an oriented 3-cycle.
pub fn initial_quiver(n: usize) -> Result<Quiver> {
    if n < 3 {
        return Err(Error::UnsupportedSize { n, min: 3, max: usize::MAX });
    }
    let mut vertices = Vec::new();
    for i in 1..=n {
        for j in 1..=n + 1 - i {
            vertices.push(Vertex { label: VertexLabel::Grid { i, j }, frozen: i == 1 || i + j == n + 1 });
        }
    }
    let mut q = Quiver::new(vertices);
    let at = |i, j| grid_vertex(n, i, j);
    for i in 1..=n {
        for j in 1..=n + 1 - i {
            let here = at(i, j).expect("inside the grid");
            let arrows = [
                (Some(here), at(i + 1, j)),
                (at(i, j + 1), Some(here)),
                (at(i + 1, j), at(i, j + 1)),
            ];
            for (from, to) in arrows {
                if let (Some(a), Some(b)) = (from, to) {
                    if !(q.is_frozen(a) && q.is_frozen(b)) {
                        q.add_arrows(a, b, 1)?;
                    }
                }
            }
        }
    }
    debug_assert!(grid_exchange_shape_holds(&q, n));
    Ok(q)
}

/// Every mutable `(i,j)` of `Q(n)` has `In = {(i,j+1), (i+1,j-1), (i-1,j)}`
/// and `Out = {(i,j-1), (i+1,j), (i-1,j+1)}`, all with weight one.
fn grid_exchange_shape_holds(q: &Quiver, n: usize) -> bool {
    let at = |i: usize, j: usize| grid_vertex(n, i, j);
    q.mutable_ids().all(|v| {
        let VertexLabel::Grid { i, j } = q.vertex(v).label else { return false };
        let mut ins: Vec<_> =
            [at(i, j + 1), j.checked_sub(1).and_then(|jm| at(i + 1, jm)), at(i - 1, j)].into_iter().flatten().map(|u| (u, 1)).collect();
        let mut outs: Vec<_> =
            [j.checked_sub(1).and_then(|jm| at(i, jm)), at(i + 1, j), at(i - 1, j + 1)].into_iter().flatten().map(|u| (u, 1)).collect();
        ins.sort();
        outs.sort();
        q.in_arrows(v) == ins && q.out_arrows(v) == outs
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(n: usize, i: usize, j: usize) -> VertexId {
        grid_vertex(n, i, j).unwrap()
    }

    #[test]
    fn grid_sizes() {
        let q3 = initial_quiver(3).unwrap();
        assert_eq!(q3.len(), 6);
        assert_eq!(q3.mutable_ids().collect::<Vec<_>>(), vec![grid(3, 2, 1)]);
        let q5 = initial_quiver(5).unwrap();
        assert_eq!(q5.len(), 15);
        assert_eq!(q5.mutable_ids().count(), 6);
        assert_eq!(q5.ids().filter(|&v| q5.is_frozen(v)).count(), 9);
        assert!(initial_quiver(2).is_err());
        for n in 3..=7 {
            let q = initial_quiver(n).unwrap();
            assert!(grid_exchange_shape_holds(&q, n));
            assert_eq!(q.mutable_ids().count(), (n - 1) * (n - 2) / 2);
            for (k, v) in q.vertices().iter().enumerate() {
                let VertexLabel::Grid { i, j } = v.label else { panic!() };
                assert_eq!(grid_vertex(n, i, j), Some(VertexId(k)));
            }
        }
    }

    #[test]
    fn mutable_vertices_are_balanced() {
        for n in 4..=6 {
            let q = initial_quiver(n).unwrap();
            for v in q.mutable_ids() {
                let ins: u32 = q.in_arrows(v).iter().map(|p| p.1).sum();
                let outs: u32 = q.out_arrows(v).iter().map(|p| p.1).sum();
                assert_eq!(ins, outs, "vertex {:?}", q.vertex(v).label);
            }
        }
    }

    #[test]
    fn n3_mutation_reverses_four_arrows() {
        let q = initial_quiver(3).unwrap();
        let v = grid(3, 2, 1);
        let m = q.mutate(v).unwrap();
        for u in q.ids() {
            if u != v {
                assert_eq!(m.weight(u, v), -q.weight(u, v));
            }
        }
        assert_eq!(q.ids().filter(|&u| q.weight(u, v) != 0).count(), 4);
        // no arrows appear or change away from (2,1)
        for a in q.ids().filter(|&a| a != v) {
            for b in q.ids().filter(|&b| b != v) {
                assert_eq!(m.weight(a, b), q.weight(a, b));
            }
        }
        assert_eq!(m.mutate(v).unwrap(), q);
    }

    #[test]
    fn three_cycle() {
        let mut q = Quiver::new((0..3).map(|k| Vertex { label: VertexLabel::Index(k), frozen: false }).collect());
        let (a, b, c) = (VertexId(0), VertexId(1), VertexId(2));
        q.add_arrows(a, b, 1).unwrap();
        q.add_arrows(b, c, 1).unwrap();
        q.add_arrows(c, a, 1).unwrap();
        let m = q.mutate(b).unwrap();
        assert_eq!(m.weight(b, a), 1);
        assert_eq!(m.weight(c, b), 1);
        assert_eq!(m.weight(c, a), 0);
        assert!(m.is_skew_symmetric());
    }

    #[test]
    fn frozen_rules() {
        let q = initial_quiver(4).unwrap();
        assert_eq!(q.mutate(grid(4, 1, 1)), Err(Error::FrozenVertex(0)));
        assert_eq!(q.mutate(VertexId(99)), Err(Error::NoSuchVertex(99)));
        let mut q2 = q.clone();
        assert!(q2.add_arrows(grid(4, 1, 1), grid(4, 1, 2), 1).is_err());
        for u in q.ids() {
            for v in q.ids() {
                if q.is_frozen(u) && q.is_frozen(v) {
                    assert_eq!(q.weight(u, v), 0);
                }
            }
        }
    }

    #[test]
    fn involution_on_q4() {
        let q = initial_quiver(4).unwrap();
        for v in q.mutable_ids() {
            assert_eq!(q.mutate(v).unwrap().mutate(v).unwrap(), q);
        }
    }

    #[test]
    fn export_round_trip_and_dot() {
        let q = initial_quiver(4).unwrap().mutate(grid(4, 2, 2)).unwrap();
        let e = q.to_export();
        assert_eq!(Quiver::from_export(&e).unwrap(), q);
        let dot = q.to_dot();
        assert!(dot.starts_with("digraph"));
        assert!(dot.contains("\"(1,1)\" [shape=box]"));
        assert!(dot.contains("\"(2,2)\" [shape=ellipse]"));
    }
}
