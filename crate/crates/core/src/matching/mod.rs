//! Compatibility graphs and matchings in general (non-bipartite) graphs.
//!
//! Both matching algorithms are blossom based: [`max_cardinality_matching`]
//! is Edmonds' augmenting-path search, [`max_weighted_matching`] is the
//! primal-dual weighted variant. [`brute_force_matching`] enumerates every
//! matching of a small graph and serves as a test oracle for both.

mod brute;
mod cardinality;
mod weighted;

pub use brute::{brute_force_matching, Objective, BRUTE_FORCE_VERTEX_LIMIT};
pub use cardinality::max_cardinality_matching;
pub use weighted::max_weighted_matching;

use crate::error::{Error, Result};

/// Simple undirected graph on vertices `0..vertex_count`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatGraph {
    n: usize,
    /// Sorted, each stored as `(low, high)`.
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    matrix: Vec<bool>,
}

impl CompatGraph {
    /// Builds a graph; edges may be given in any orientation and order.
    pub fn new(vertex_count: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut norm = Vec::with_capacity(edges.len());
        for &(a, b) in edges {
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::InvalidGraph(format!(
                    "edge ({}, {}) out of range for {} vertices",
                    a + 1,
                    b + 1,
                    vertex_count
                )));
            }
            if a == b {
                return Err(Error::InvalidGraph(format!("self-loop on vertex {}", a + 1)));
            }
            norm.push((a.min(b), a.max(b)));
        }
        norm.sort_unstable();
        if let Some(w) = norm.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::InvalidGraph(format!(
                "duplicate edge ({}, {})",
                w[0].0 + 1,
                w[0].1 + 1
            )));
        }
        Ok(Self::from_sorted(vertex_count, norm))
    }

    fn from_sorted(n: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        let mut matrix = vec![false; n * n];
        for &(a, b) in &edges {
            adj[a].push(b);
            adj[b].push(a);
            matrix[a * n + b] = true;
            matrix[b * n + a] = true;
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        CompatGraph {
            n,
            edges,
            adj,
            matrix,
        }
    }

    pub fn empty(vertex_count: usize) -> Self {
        Self::from_sorted(vertex_count, Vec::new())
    }

    pub fn complete(vertex_count: usize) -> Self {
        let mut edges = Vec::new();
        for a in 0..vertex_count {
            for b in a + 1..vertex_count {
                edges.push((a, b));
            }
        }
        Self::from_sorted(vertex_count, edges)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(low, high)` in lexicographic order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        a < self.n && b < self.n && self.matrix[a * self.n + b]
    }

    /// Position of an edge in [`edges`](Self::edges).
    pub fn edge_index(&self, a: usize, b: usize) -> Option<usize> {
        self.edges.binary_search(&(a.min(b), a.max(b))).ok()
    }

    /// Subgraph induced by `keep`, with edges filtered by `allow`.
    ///
    /// Vertex `i` of the result is `keep[i]` of `self`.
    pub fn induced(&self, keep: &[usize], mut allow: impl FnMut(usize, usize) -> bool) -> Self {
        let mut pos = vec![usize::MAX; self.n];
        for (i, &v) in keep.iter().enumerate() {
            pos[v] = i;
        }
        let mut edges = Vec::new();
        for &(a, b) in &self.edges {
            let (pa, pb) = (pos[a], pos[b]);
            if pa != usize::MAX && pb != usize::MAX && allow(a, b) {
                edges.push((pa.min(pb), pa.max(pb)));
            }
        }
        edges.sort_unstable();
        Self::from_sorted(keep.len(), edges)
    }
}

/// A graph with a nonnegative integer weight on every edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WeightedGraph {
    base: CompatGraph,
    /// Parallel to `base.edges()`.
    weights: Vec<u64>,
}

impl WeightedGraph {
    pub fn new(base: CompatGraph, weights: Vec<u64>) -> Result<Self> {
        if weights.len() != base.edge_count() {
            return Err(Error::InvalidGraph(format!(
                "{} weights for {} edges",
                weights.len(),
                base.edge_count()
            )));
        }
        Ok(WeightedGraph { base, weights })
    }

    pub fn from_fn(base: CompatGraph, mut weight: impl FnMut(usize, usize) -> u64) -> Self {
        let weights = base.edges().iter().map(|&(a, b)| weight(a, b)).collect();
        WeightedGraph { base, weights }
    }

    pub fn unit(base: CompatGraph) -> Self {
        Self::from_fn(base, |_, _| 1)
    }

    pub fn base(&self) -> &CompatGraph {
        &self.base
    }

    pub fn weights(&self) -> &[u64] {
        &self.weights
    }

    pub fn weight(&self, a: usize, b: usize) -> Option<u64> {
        self.base.edge_index(a, b).map(|k| self.weights[k])
    }

    pub fn weighted_edges(&self) -> impl Iterator<Item = (usize, usize, u64)> + '_ {
        self.base
            .edges()
            .iter()
            .zip(&self.weights)
            .map(|(&(a, b), &w)| (a, b, w))
    }
}

/// A set of pairwise vertex-disjoint edges.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Matching {
    /// Sorted, each stored as `(low, high)`.
    edges: Vec<(usize, usize)>,
}

impl Matching {
    /// Builds a matching from a mate array (`mate[v] == usize::MAX` for free vertices).
    pub fn from_mates(mate: &[usize]) -> Self {
        let mut edges: Vec<_> = mate
            .iter()
            .enumerate()
            .filter(|&(v, &u)| u != usize::MAX && v < u)
            .map(|(v, &u)| (v, u))
            .collect();
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn from_edges(mut edges: Vec<(usize, usize)>) -> Self {
        for e in &mut edges {
            *e = (e.0.min(e.1), e.0.max(e.1));
        }
        edges.sort_unstable();
        Matching { edges }
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    pub fn weight(&self, g: &WeightedGraph) -> u64 {
        self.edges
            .iter()
            .map(|&(a, b)| g.weight(a, b).expect("matching edge missing from graph"))
            .sum()
    }

    /// `mate[v]` is the partner of `v`, or `None`.
    pub fn mates(&self, vertex_count: usize) -> Vec<Option<usize>> {
        let mut mate = vec![None; vertex_count];
        for &(a, b) in &self.edges {
            mate[a] = Some(b);
            mate[b] = Some(a);
        }
        mate
    }

    /// True when edges are disjoint and all belong to `g`.
    pub fn is_valid_for(&self, g: &CompatGraph) -> bool {
        let mut used = vec![false; g.vertex_count()];
        for &(a, b) in &self.edges {
            if !g.has_edge(a, b) || used[a] || used[b] {
                return false;
            }
            used[a] = true;
            used[b] = true;
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_rejects_loops_duplicates_and_range() {
        assert!(CompatGraph::new(2, &[(0, 0)]).is_err());
        assert!(CompatGraph::new(2, &[(0, 1), (1, 0)]).is_err());
        assert!(CompatGraph::new(2, &[(0, 2)]).is_err());
        let g = CompatGraph::new(3, &[(2, 0), (1, 0)]).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (0, 2)]);
        assert!(g.has_edge(2, 0) && !g.has_edge(1, 2));
        assert_eq!(g.neighbors(0), &[1, 2]);
    }

    #[test]
    fn induced_subgraph_reindexes() {
        let g = CompatGraph::complete(4);
        let h = g.induced(&[1, 3, 2], |a, b| (a, b) != (2, 3));
        assert_eq!(h.vertex_count(), 3);
        assert_eq!(h.edges(), &[(0, 1), (0, 2)]);
    }

    #[test]
    fn matching_validity() {
        let g = CompatGraph::new(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
        assert!(Matching::from_edges(vec![(1, 0), (3, 2)]).is_valid_for(&g));
        assert!(!Matching::from_edges(vec![(0, 1), (1, 2)]).is_valid_for(&g));
        assert!(!Matching::from_edges(vec![(0, 2)]).is_valid_for(&g));
    }
}
