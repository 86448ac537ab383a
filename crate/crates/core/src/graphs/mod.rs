//! Graph types, planted-model generators and edge-list I/O.

mod generate;
mod io;

pub use generate::{
    gen_bipartite_er, gen_bipartite_pc, gen_bipartite_pds, gen_er, gen_pds_edges, gen_pds_fixed_size,
    gen_pds_random_size, gen_planted_clique, uniform_subset, PlantSize,
};
pub use io::{
    read_bipartite_edge_list, read_bipartite_file, read_edge_list, read_graph_file, write_bipartite_edge_list,
    write_bipartite_file, write_edge_list, write_graph_file,
};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{check_probability, Error, Result};

/// Undirected simple graph on `0..num_vertices`.
///
/// Adjacency lists are kept sorted, so two graphs with the same edge set
/// compare equal and iterate their edges in the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<u32>>,
    num_edges: usize,
}

impl Graph {
    pub fn new(num_vertices: usize) -> Self {
        assert!(num_vertices <= u32::MAX as usize, "vertex count exceeds u32 range");
        Graph {
            adj: vec![Vec::new(); num_vertices],
            num_edges: 0,
        }
    }

    /// Builds a graph, rejecting self-loops, duplicates and out-of-range
    /// endpoints. Error line numbers are the 1-based position in `edges`.
    pub fn from_edges<I>(num_vertices: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut pairs = Vec::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            let line = i + 1;
            if u >= num_vertices || v >= num_vertices {
                return Err(Error::OutOfRange { line, u, v });
            }
            if u == v {
                return Err(Error::Parse {
                    line,
                    msg: format!("self-loop at vertex {u}"),
                });
            }
            let (a, b) = (u.min(v), u.max(v));
            if !seen.insert((a, b)) {
                return Err(Error::DuplicateEdge { line, u: a, v: b });
            }
            pairs.push((a as u32, b as u32));
        }
        Ok(Graph::from_distinct_pairs(num_vertices, pairs))
    }

    /// Caller guarantees distinct, in-range, loop-free pairs.
    pub(crate) fn from_distinct_pairs(num_vertices: usize, pairs: Vec<(u32, u32)>) -> Self {
        let mut g = Graph::new(num_vertices);
        g.num_edges = pairs.len();
        for (u, v) in pairs {
            g.adj[u as usize].push(v);
            g.adj[v as usize].push(u);
        }
        for list in &mut g.adj {
            list.sort_unstable();
        }
        g
    }

    pub fn complete(n: usize) -> Self {
        let pairs = (0..n as u32)
            .flat_map(|i| (i + 1..n as u32).map(move |j| (i, j)))
            .collect();
        Graph::from_distinct_pairs(n, pairs)
    }

    pub fn num_vertices(&self) -> usize {
        self.adj.len()
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.adj[v]
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        if u == v || u >= self.adj.len() || v >= self.adj.len() {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&(b as u32)).is_ok()
    }

    /// Inserts `{u, v}`; returns false if it was already present.
    ///
    /// # Panics
    /// On a self-loop or out-of-range endpoint.
    pub fn add_edge(&mut self, u: usize, v: usize) -> bool {
        assert!(u != v, "self-loop at {u}");
        assert!(u < self.adj.len() && v < self.adj.len(), "endpoint out of range");
        match self.adj[u].binary_search(&(v as u32)) {
            Ok(_) => false,
            Err(pos) => {
                self.adj[u].insert(pos, v as u32);
                let pos = self.adj[v].binary_search(&(u as u32)).unwrap_err();
                self.adj[v].insert(pos, u as u32);
                self.num_edges += 1;
                true
            }
        }
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> bool {
        if !self.has_edge(u, v) {
            return false;
        }
        let pos = self.adj[u].binary_search(&(v as u32)).unwrap();
        self.adj[u].remove(pos);
        let pos = self.adj[v].binary_search(&(u as u32)).unwrap();
        self.adj[v].remove(pos);
        self.num_edges -= 1;
        true
    }

    /// Removes every edge incident to `v`.
    pub fn isolate(&mut self, v: usize) {
        let nbrs = std::mem::take(&mut self.adj[v]);
        for &w in &nbrs {
            let list = &mut self.adj[w as usize];
            let pos = list.binary_search(&(v as u32)).unwrap();
            list.remove(pos);
        }
        self.num_edges -= nbrs.len();
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            let start = list.partition_point(|&w| (w as usize) <= u);
            list[start..].iter().map(move |&v| (u, v as usize))
        })
    }

    /// Bitset adjacency rows, `words_per_row` u64 words each.
    pub(crate) fn bit_rows(&self) -> (usize, Vec<u64>) {
        let words = self.adj.len().div_ceil(64).max(1);
        let mut rows = vec![0u64; words * self.adj.len()];
        for (u, list) in self.adj.iter().enumerate() {
            for &v in list {
                rows[u * words + (v as usize >> 6)] |= 1u64 << (v & 63);
            }
        }
        (words, rows)
    }
}

/// Number of edges with both endpoints in `set`. Duplicate members count once.
pub fn subgraph_edge_count(g: &Graph, set: &[usize]) -> u64 {
    let mut member = vec![false; g.num_vertices()];
    let mut distinct = Vec::with_capacity(set.len());
    for &v in set {
        assert!(v < g.num_vertices(), "vertex {v} out of range");
        if !member[v] {
            member[v] = true;
            distinct.push(v);
        }
    }
    let twice: u64 = distinct
        .iter()
        .map(|&v| g.neighbors(v).iter().filter(|&&w| member[w as usize]).count() as u64)
        .sum();
    twice / 2
}

/// Bipartite graph with `num_top` top and `num_bottom` bottom vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteGraph {
    num_bottom: usize,
    top_adj: Vec<Vec<u32>>,
    num_edges: usize,
}

impl BipartiteGraph {
    pub fn new(num_top: usize, num_bottom: usize) -> Self {
        BipartiteGraph {
            num_bottom,
            top_adj: vec![Vec::new(); num_top],
            num_edges: 0,
        }
    }

    pub fn from_edges<I>(num_top: usize, num_bottom: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut seen = HashSet::new();
        let mut pairs = Vec::new();
        for (i, (u, v)) in edges.into_iter().enumerate() {
            let line = i + 1;
            if u >= num_top || v >= num_bottom {
                return Err(Error::OutOfRange { line, u, v });
            }
            if !seen.insert((u, v)) {
                return Err(Error::DuplicateEdge { line, u, v });
            }
            pairs.push((u as u32, v as u32));
        }
        Ok(BipartiteGraph::from_distinct_pairs(num_top, num_bottom, pairs))
    }

    pub(crate) fn from_distinct_pairs(num_top: usize, num_bottom: usize, pairs: Vec<(u32, u32)>) -> Self {
        let mut g = BipartiteGraph::new(num_top, num_bottom);
        g.num_edges = pairs.len();
        for (u, v) in pairs {
            g.top_adj[u as usize].push(v);
        }
        for list in &mut g.top_adj {
            list.sort_unstable();
        }
        g
    }

    pub fn complete(num_top: usize, num_bottom: usize) -> Self {
        let pairs = (0..num_top as u32)
            .flat_map(|u| (0..num_bottom as u32).map(move |v| (u, v)))
            .collect();
        BipartiteGraph::from_distinct_pairs(num_top, num_bottom, pairs)
    }

    pub fn num_top(&self) -> usize {
        self.top_adj.len()
    }

    pub fn num_bottom(&self) -> usize {
        self.num_bottom
    }

    pub fn num_edges(&self) -> usize {
        self.num_edges
    }

    pub fn has_edge(&self, top: usize, bottom: usize) -> bool {
        top < self.top_adj.len() && self.top_adj[top].binary_search(&(bottom as u32)).is_ok()
    }

    pub fn add_edge(&mut self, top: usize, bottom: usize) -> bool {
        assert!(top < self.top_adj.len() && bottom < self.num_bottom, "endpoint out of range");
        match self.top_adj[top].binary_search(&(bottom as u32)) {
            Ok(_) => false,
            Err(pos) => {
                self.top_adj[top].insert(pos, bottom as u32);
                self.num_edges += 1;
                true
            }
        }
    }

    pub fn top_neighbors(&self, top: usize) -> &[u32] {
        &self.top_adj[top]
    }

    /// Edges as `(top, bottom)` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.top_adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().map(move |&v| (u, v as usize)))
    }

    /// Edges between `top_set` and `bottom_set`.
    pub fn block_edge_count(&self, top_set: &[usize], bottom_set: &[usize]) -> u64 {
        let mut member = vec![false; self.num_bottom];
        for &v in bottom_set {
            member[v] = true;
        }
        top_set
            .iter()
            .map(|&u| self.top_adj[u].iter().filter(|&&v| member[v as usize]).count() as u64)
            .sum()
    }
}

/// Planted dense subgraph parameters `(N, K, p, q)`.
///
/// `p == q` is accepted: the planted set is then invisible, which is how the
/// null-equivalence checks are phrased.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PdsParams {
    /// Number of vertices `N`.
    pub n: usize,
    /// Expected (or fixed) planted size `K`.
    pub k: usize,
    pub p: f64,
    pub q: f64,
}

impl PdsParams {
    pub fn new(n: usize, k: usize, p: f64, q: f64) -> Result<Self> {
        let params = PdsParams { n, k, p, q };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        check_probability(self.p)?;
        check_probability(self.q)?;
        if self.k < 1 || self.k > self.n {
            return Err(Error::params(format!("need 1 <= K <= N, got K={} N={}", self.k, self.n)));
        }
        if self.q > self.p {
            return Err(Error::params(format!("need q <= p, got p={} q={}", self.p, self.q)));
        }
        Ok(())
    }
}

/// A graph together with its ground-truth planted vertex set (sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlantedInstance {
    pub graph: Graph,
    pub planted: Vec<usize>,
}

/// A bipartite graph with planted top and bottom sets (sorted).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BipartiteInstance {
    pub graph: BipartiteGraph,
    pub planted_top: Vec<usize>,
    pub planted_bottom: Vec<usize>,
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path4() -> Graph {
        Graph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).unwrap()
    }

    #[test]
    fn construction_rejects_bad_edges() {
        assert!(matches!(Graph::from_edges(3, [(0, 3)]), Err(Error::OutOfRange { line: 1, .. })));
        assert!(matches!(Graph::from_edges(3, [(0, 1), (1, 0)]), Err(Error::DuplicateEdge { line: 2, u: 0, v: 1 })));
        assert!(Graph::from_edges(3, [(1, 1)]).is_err());
    }

    #[test]
    fn edge_mutation_keeps_lists_sorted() {
        let mut g = Graph::new(5);
        assert!(g.add_edge(3, 1));
        assert!(g.add_edge(1, 0));
        assert!(!g.add_edge(0, 1));
        assert!(g.add_edge(4, 1));
        assert_eq!(g.neighbors(1), &[0, 3, 4]);
        assert_eq!(g.num_edges(), 3);
        assert!(g.remove_edge(1, 3));
        assert!(!g.has_edge(3, 1));
        g.isolate(1);
        assert_eq!(g.num_edges(), 0);
        assert!(g.neighbors(4).is_empty());
    }

    #[test]
    fn edges_are_listed_once_in_order() {
        let g = Graph::from_edges(4, [(2, 3), (0, 2), (1, 0)]).unwrap();
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (2, 3)]);
    }

    #[test]
    fn subgraph_counts() {
        let g = path4();
        assert_eq!(subgraph_edge_count(&g, &[]), 0);
        assert_eq!(subgraph_edge_count(&g, &[2]), 0);
        assert_eq!(subgraph_edge_count(&g, &[1, 2, 3]), 2);
        assert_eq!(subgraph_edge_count(&Graph::complete(6), &[0, 2, 3, 5]), 6);
    }

    #[test]
    fn bipartite_basics() {
        let g = BipartiteGraph::complete(3, 2);
        assert_eq!(g.num_edges(), 6);
        assert_eq!(g.block_edge_count(&[0, 1], &[1]), 2);
        assert!(BipartiteGraph::from_edges(2, 2, [(0, 2)]).is_err());
        assert!(BipartiteGraph::from_edges(2, 2, [(0, 1), (0, 1)]).is_err());
    }

    #[test]
    fn params_validation() {
        assert!(PdsParams::new(10, 4, 0.5, 0.25).is_ok());
        assert!(PdsParams::new(10, 0, 0.5, 0.25).is_err());
        assert!(PdsParams::new(10, 11, 0.5, 0.25).is_err());
        assert!(PdsParams::new(10, 4, 0.2, 0.25).is_err());
        assert!(PdsParams::new(10, 4, 1.2, 0.25).is_err());
    }
}
