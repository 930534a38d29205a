//! Simple undirected graphs with per-edge labels, matchings, and the top-k weight.
//!
//! Vertices are dense ids `0..n`. Edges keep the position they were inserted at as
//! their id, so later stages (the gadget reduction in particular) can refer to an
//! edge by number. Endpoints are stored with `u < v`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub fn is_red(self) -> bool {
        self == Color::Red
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge<L> {
    pub u: usize,
    pub v: usize,
    pub label: L,
}

impl<L> Edge<L> {
    pub fn other(&self, x: usize) -> usize {
        if x == self.u {
            self.v
        } else {
            self.u
        }
    }
}

/// The first broken invariant found by [`Graph::validate`].
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("self-loop at edge {edge}")]
    SelfLoop { edge: usize },
    #[error("parallel edge {edge} repeats pair ({u}, {v}) of edge {first}")]
    ParallelEdge { edge: usize, first: usize, u: usize, v: usize },
    #[error("edge {edge} references vertex {vertex}, but n = {n}")]
    VertexOutOfRange { edge: usize, vertex: usize, n: usize },
}

/// An undirected graph on `0..n` whose edges carry a label of type `L`.
///
/// Construction never fails; call [`Graph::validate`] to check that the graph is
/// simple and all endpoints are in range.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Graph<L> {
    n: usize,
    edges: Vec<Edge<L>>,
}

/// EM input graph: every edge is red or blue.
pub type ColoredGraph = Graph<Color>;

/// TkPM input graph: every edge has a non-negative integer weight.
pub type WeightedGraph = Graph<u64>;

impl<L> Graph<L> {
    /// Builds a graph, swapping endpoints where needed so that `u <= v`.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (usize, usize, L)>) -> Self {
        let edges = edges
            .into_iter()
            .map(|(a, b, label)| Edge {
                u: a.min(b),
                v: a.max(b),
                label,
            })
            .collect();
        Graph { n, edges }
    }

    /// Like [`Graph::new`], but rejects graphs that fail [`Graph::validate`].
    pub fn try_new(n: usize, edges: impl IntoIterator<Item = (usize, usize, L)>) -> Result<Self> {
        let g = Self::new(n, edges);
        g.validate()?;
        Ok(g)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge<L>] {
        &self.edges
    }

    pub fn edge(&self, id: usize) -> Result<&Edge<L>> {
        self.edges.get(id).ok_or(Error::InvalidEdgeId {
            edge: id,
            edge_count: self.edges.len(),
        })
    }

    pub fn validate(&self) -> Result<(), Violation> {
        let mut seen: HashMap<(usize, usize), usize> = HashMap::with_capacity(self.edges.len());
        for (id, e) in self.edges.iter().enumerate() {
            for vertex in [e.u, e.v] {
                if vertex >= self.n {
                    return Err(Violation::VertexOutOfRange {
                        edge: id,
                        vertex,
                        n: self.n,
                    });
                }
            }
            if e.u == e.v {
                return Err(Violation::SelfLoop { edge: id });
            }
            if let Some(&first) = seen.get(&(e.u, e.v)) {
                return Err(Violation::ParallelEdge {
                    edge: id,
                    first,
                    u: e.u,
                    v: e.v,
                });
            }
            seen.insert((e.u, e.v), id);
        }
        Ok(())
    }

    /// For each vertex, its incident `(edge id, neighbour)` pairs in ascending edge id.
    pub fn incidence(&self) -> Vec<Vec<(usize, usize)>> {
        let mut inc = vec![Vec::new(); self.n];
        for (id, e) in self.edges.iter().enumerate() {
            inc[e.u].push((id, e.v));
            if e.v != e.u {
                inc[e.v].push((id, e.u));
            }
        }
        inc
    }

    /// Vertex coverage of `m`, or `None` if two of its edges share a vertex.
    fn coverage(&self, m: &Matching) -> Result<Option<usize>> {
        let mut covered = vec![false; self.n];
        let mut count = 0;
        for &id in m.edges() {
            let e = self.edge(id)?;
            for x in [e.u, e.v] {
                if covered[x] {
                    return Ok(None);
                }
                covered[x] = true;
                count += 1;
            }
        }
        Ok(Some(count))
    }

    pub fn is_matching(&self, m: &Matching) -> Result<bool> {
        Ok(self.coverage(m)?.is_some())
    }

    pub fn is_perfect_matching(&self, m: &Matching) -> Result<bool> {
        Ok(self.coverage(m)? == Some(self.n))
    }

    pub fn map_labels<T>(&self, mut f: impl FnMut(usize, &Edge<L>) -> T) -> Graph<T> {
        Graph {
            n: self.n,
            edges: self
                .edges
                .iter()
                .enumerate()
                .map(|(id, e)| Edge {
                    u: e.u,
                    v: e.v,
                    label: f(id, e),
                })
                .collect(),
        }
    }
}

impl ColoredGraph {
    /// |R(G)|, the number of red edges.
    pub fn red_edge_count(&self) -> usize {
        self.edges.iter().filter(|e| e.label.is_red()).count()
    }

    pub fn red_count(&self, m: &Matching) -> Result<usize> {
        let mut r = 0;
        for &id in m.edges() {
            if self.edge(id)?.label.is_red() {
                r += 1;
            }
        }
        Ok(r)
    }
}

impl WeightedGraph {
    pub fn weights(&self) -> Vec<u64> {
        self.edges.iter().map(|e| e.label).collect()
    }

    pub fn max_weight(&self) -> Option<u64> {
        self.edges.iter().map(|e| e.label).max()
    }
}

/// Number of red edges of `m` in `graph`.
pub fn red_count(graph: &ColoredGraph, m: &Matching) -> Result<usize> {
    graph.red_count(m)
}

/// Sum of the `k` largest values; everything if there are fewer than `k`.
pub fn top_k_sum(values: impl IntoIterator<Item = u64>, k: usize) -> u64 {
    let mut values: Vec<u64> = values.into_iter().collect();
    values.sort_unstable_by(|a, b| b.cmp(a));
    values.into_iter().take(k).sum()
}

/// The top-k weight `w^k(F)`: the total weight of the `k` heaviest edges of `edges`.
///
/// Panics if an edge id is not an index into `weights`.
pub fn top_k_weight(weights: &[u64], edges: impl IntoIterator<Item = usize>, k: usize) -> u64 {
    top_k_sum(edges.into_iter().map(|e| weights[e]), k)
}

/// A set of edge ids, kept sorted and free of duplicates.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matching(Vec<usize>);

impl Matching {
    pub fn new(edges: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = edges.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Matching(v)
    }

    pub fn edges(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, edge: usize) -> bool {
        self.0.binary_search(&edge).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<usize> for Matching {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        Matching::new(iter)
    }
}

/// Serialized as `m <count> <edge-id>...`.
impl fmt::Display for Matching {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m {}", self.0.len())?;
        for e in &self.0 {
            write!(f, " {e}")?;
        }
        Ok(())
    }
}

/// An Exact Matching instance: is there a perfect matching with exactly `k` red edges?
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct EmInstance {
    pub graph: ColoredGraph,
    pub k: usize,
}

impl EmInstance {
    pub fn new(graph: ColoredGraph, k: usize) -> Self {
        EmInstance { graph, k }
    }
}

/// A Top-k Perfect Matching instance: maximize `w^k(M)` over perfect matchings `M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TkpmInstance {
    pub graph: WeightedGraph,
    pub k: usize,
}

impl TkpmInstance {
    pub fn new(graph: WeightedGraph, k: usize) -> Self {
        TkpmInstance { graph, k }
    }
}
