//! Simple undirected graphs on vertex set `{0, .., n-1}`.
//!
//! Adjacency is stored as one [`VertexSet`] per vertex, which makes the
//! cross-neighborhood operations used by the cut functions word-parallel.

use crate::bitset::VertexSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {0} out of range for n = {1}")]
    VertexOutOfRange(usize, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge {{{0}, {1}}}")]
    DuplicateEdge(usize, usize),
}

/// Undirected simple graph. Invariant: adjacency is symmetric and loop-free.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: Vec<VertexSet>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph { n, adj: (0..n).map(|_| VertexSet::empty(n)).collect() }
    }

    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Inserts edge `{u, v}`, rejecting loops, range errors, and duplicates.
    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u >= self.n {
            return Err(GraphError::VertexOutOfRange(u, self.n));
        }
        if v >= self.n {
            return Err(GraphError::VertexOutOfRange(v, self.n));
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        if self.adj[u].contains(v) {
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        debug_assert!(self.symmetric_and_loop_free());
        Ok(())
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("complete graph edges are valid");
            }
        }
        g
    }

    /// Path v0 - v1 - .. - v(n-1).
    pub fn path(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v).expect("path edges are valid");
        }
        g
    }

    /// Cycle on `n >= 3` vertices.
    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "a cycle needs at least 3 vertices");
        let mut g = Graph::path(n);
        g.add_edge(n - 1, 0).expect("closing edge is valid");
        g
    }

    /// Star with center 0 and `m` rays on `m + 1` vertices.
    pub fn star(m: usize) -> Self {
        let mut g = Graph::empty(m + 1);
        for v in 1..=m {
            g.add_edge(0, v).expect("star edges are valid");
        }
        g
    }

    /// Perfect matching {0,1}, {2,3}, .. on `2k` vertices.
    pub fn matching(k: usize) -> Self {
        let mut g = Graph::empty(2 * k);
        for i in 0..k {
            g.add_edge(2 * i, 2 * i + 1).expect("matching edges are valid");
        }
        g
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn neighbors(&self, v: usize) -> &VertexSet {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u].contains(v)
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.adj[u].iter() {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Neighborhood of a set: `N(X) = (∪_{v ∈ X} N(v)) \ X`.
    pub fn neighbors_of_set(&self, x: &VertexSet) -> VertexSet {
        debug_assert_eq!(x.universe(), self.n);
        let mut out = VertexSet::empty(self.n);
        for v in x.iter() {
            out.union_with(&self.adj[v]);
        }
        out.difference(x)
    }

    fn symmetric_and_loop_free(&self) -> bool {
        (0..self.n).all(|u| {
            !self.adj[u].contains(u) && self.adj[u].iter().all(|v| self.adj[v].contains(u))
        })
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, m={}, edges={:?})", self.n, self.edge_count(), self.edges())
    }
}
