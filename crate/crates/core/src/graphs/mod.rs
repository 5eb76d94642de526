//! Finite simple graphs ordered by homomorphism existence and combined by the
//! disjunctive (co-normal) product.

mod bits;
pub mod canonical;
pub mod capacity;
pub mod catalyst;
pub mod clique;
pub mod coloring;
pub mod expr;
pub mod fractional;
pub mod hom;
pub mod lovasz;

use std::fmt;

pub use bits::BitSet;
pub use canonical::canonical_label;
pub use capacity::{capacity_bounds, sandwich_check, CapacityReport, SandwichReport};
pub use catalyst::{distribute_catalyst, CatalystError, CatalystOutput};
pub use clique::{clique_number, max_clique, Bounded};
pub use coloring::chromatic_number;
pub use expr::{ExprHom, GraphExpr, GraphInstance};
pub use fractional::fractional_chromatic;
pub use hom::{hom_search, HomRefutation};
pub use lovasz::{lovasz_complement, LovaszResult};

/// Default vertex guard for the SDP, fractional and canonical-label routines.
pub const DEFAULT_GUARD: usize = 30;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("a graph needs at least one vertex")]
    NoVertices,
    #[error("vertex {0} out of range")]
    VertexOutOfRange(usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error(
        "graph has {n} vertices, above the guard of {guard} (raise with REMONO_GUARD_OVERRIDE)"
    )]
    GuardExceeded { n: usize, guard: usize },
    #[error("graph has no edge")]
    NoEdge,
}

pub use crate::guard;

/// A finite simple graph on vertices `0..n`, with bitset adjacency rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    rows: Vec<BitSet>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, m={})", self.n, self.edge_count())
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        assert!(n > 0, "graphs are nonempty");
        Graph {
            n,
            rows: vec![BitSet::new(n); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::NoVertices);
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n {
                return Err(GraphError::VertexOutOfRange(u));
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange(v));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Graph::from_edges(n, &edges).expect("valid cycle")
    }

    pub fn path(n: usize) -> Self {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Graph::from_edges(n, &edges).expect("valid path")
    }

    /// The neutral element `K1`.
    pub fn unit() -> Self {
        Graph::empty(1)
    }

    pub(crate) fn add_edge(&mut self, u: usize, v: usize) {
        self.rows[u].insert(v);
        self.rows[v].insert(u);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.rows[u].contains(v)
    }

    pub fn neighbors(&self, u: usize) -> &BitSet {
        &self.rows[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.rows[u].len()
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(BitSet::len).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.n {
            for v in self.rows[u].iter().filter(|&v| v > u) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    pub fn is_edgeless(&self) -> bool {
        self.rows.iter().all(BitSet::is_empty)
    }

    pub fn complement(&self) -> Graph {
        let mut g = Graph::empty(self.n);
        for u in 0..self.n {
            for v in u + 1..self.n {
                if !self.adjacent(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    /// Induced subgraph on `vertices`, in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut g = Graph::empty(vertices.len().max(1));
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate().skip(i + 1) {
                if self.adjacent(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> Graph {
        let mut g = Graph::empty(self.n);
        for (u, v) in self.edges() {
            g.add_edge(perm[u], perm[v]);
        }
        g
    }

    /// Rows of the adjacency matrix as `'0'/'1'` strings.
    pub fn adjacency_strings(&self) -> Vec<String> {
        (0..self.n)
            .map(|u| {
                (0..self.n)
                    .map(|v| if self.adjacent(u, v) { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }
}

/// `(v, w) ~ (v', w')` iff `v ~ v'` or `w ~ w'`; vertex `(v, w)` has index `v·|H| + w`.
pub fn disjunctive_product(g: &Graph, h: &Graph) -> Graph {
    let (n, m) = (g.n, h.n);
    let mut rows = Vec::with_capacity(n * m);
    for v in 0..n {
        for w in 0..m {
            let mut row = BitSet::new(n * m);
            for v2 in 0..n {
                let base = v2 * m;
                if g.adjacent(v, v2) {
                    row.insert_range(base, base + m);
                } else {
                    for w2 in h.rows[w].iter() {
                        row.insert(base + w2);
                    }
                }
            }
            rows.push(row);
        }
    }
    Graph { n: n * m, rows }
}

/// Disjoint union of `g` and `h` plus every edge between the two parts; `h` is shifted by `|G|`.
pub fn graph_join(g: &Graph, h: &Graph) -> Graph {
    let n = g.n + h.n;
    let mut rows = Vec::with_capacity(n);
    for v in 0..g.n {
        let mut row = BitSet::new(n);
        for w in g.rows[v].iter() {
            row.insert(w);
        }
        row.insert_range(g.n, n);
        rows.push(row);
    }
    for v in 0..h.n {
        let mut row = BitSet::new(n);
        row.insert_range(0, g.n);
        for w in h.rows[v].iter() {
            row.insert(g.n + w);
        }
        rows.push(row);
    }
    Graph { n, rows }
}

/// `g^{∗k}`, with `g^{∗0} = K1`.
pub fn power(g: &Graph, k: u32) -> Graph {
    let mut acc = Graph::unit();
    for _ in 0..k {
        acc = disjunctive_product(&acc, g);
    }
    acc
}

/// A vertex map between two graphs, claimed to preserve adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphHom {
    pub source: Graph,
    pub target: Graph,
    pub map: Vec<usize>,
}

impl GraphHom {
    pub fn identity(g: &Graph) -> Self {
        GraphHom {
            source: g.clone(),
            target: g.clone(),
            map: (0..g.n).collect(),
        }
    }

    pub fn verify(&self) -> bool {
        verify_map(&self.source, &self.target, &self.map)
    }
}

/// Independent adjacency-preservation check.
pub fn verify_map(source: &Graph, target: &Graph, map: &[usize]) -> bool {
    if map.len() != source.n || map.iter().any(|&v| v >= target.n) {
        return false;
    }
    source
        .edges()
        .into_iter()
        .all(|(u, v)| target.adjacent(map[u], map[v]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_products_are_complete() {
        let p = disjunctive_product(&Graph::complete(2), &Graph::complete(3));
        assert_eq!(p, Graph::complete(6));
        assert_eq!(power(&Graph::complete(2), 3), Graph::complete(8));
    }

    #[test]
    fn unit_is_neutral() {
        let c5 = Graph::cycle(5);
        assert_eq!(disjunctive_product(&c5, &Graph::unit()), c5);
        assert_eq!(disjunctive_product(&Graph::unit(), &c5), c5);
    }

    #[test]
    fn join_of_points() {
        assert_eq!(
            graph_join(&Graph::unit(), &Graph::unit()),
            Graph::complete(2)
        );
    }

    #[test]
    fn product_adjacency_rule() {
        let (g, h) = (Graph::path(3), Graph::cycle(4));
        let p = disjunctive_product(&g, &h);
        for a in 0..12 {
            for b in 0..12 {
                let (v, w, v2, w2) = (a / 4, a % 4, b / 4, b % 4);
                let expect = a != b && (g.adjacent(v, v2) || h.adjacent(w, w2));
                assert_eq!(p.adjacent(a, b), expect, "{a} {b}");
            }
        }
    }

    #[test]
    fn rejects_bad_edges() {
        assert_eq!(Graph::from_edges(0, &[]), Err(GraphError::NoVertices));
        assert_eq!(
            Graph::from_edges(2, &[(1, 1)]),
            Err(GraphError::SelfLoop(1))
        );
        assert_eq!(
            Graph::from_edges(2, &[(0, 2)]),
            Err(GraphError::VertexOutOfRange(2))
        );
    }
}
