use std::collections::HashSet;

use rand::Rng;

use super::kernel::{KernelFault, KernelTable};
use super::ReductionParams;
use crate::error::{Error, Result};
use crate::graphs::{BipartiteGraph, Graph};
use crate::randkit::{choose2, Seed};

/// Assigns each of `big_n` vertices an independent uniform parent in
/// `0..n` and returns the children of every parent, in increasing order.
pub fn assign_parents<R: Rng + ?Sized>(big_n: usize, n: usize, rng: &mut R) -> Vec<Vec<u32>> {
    let mut parts = vec![Vec::new(); n];
    for v in 0..big_n as u32 {
        parts[rng.gen_range(0..n)].push(v);
    }
    parts
}

/// Uniform `count`-subset of `0..slots`, sorted, by Floyd's algorithm.
pub fn floyd_sample<R: Rng + ?Sized>(slots: u64, count: u64, rng: &mut R) -> Vec<u64> {
    assert!(count <= slots, "cannot choose {count} of {slots} slots");
    let mut chosen = Vec::with_capacity(count as usize);
    if count <= 32 {
        for j in slots - count..slots {
            let t = rng.gen_range(0..=j);
            chosen.push(if chosen.contains(&t) { j } else { t });
        }
    } else {
        let mut seen = HashSet::with_capacity(count as usize);
        for j in slots - count..slots {
            let t = rng.gen_range(0..=j);
            let pick = if seen.contains(&t) { j } else { t };
            seen.insert(pick);
            chosen.push(pick);
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Position of slot `idx` in the colex order of pairs `i < j`:
/// `idx = C(j, 2) + i`.
pub(crate) fn colex_pair(idx: u64) -> (u64, u64) {
    let mut j = ((1.0 + (1.0 + 8.0 * idx as f64).sqrt()) / 2.0) as u64;
    while choose2(j) > idx {
        j -= 1;
    }
    while choose2(j + 1) <= idx {
        j += 1;
    }
    (idx - choose2(j), j)
}

/// Randomized map from planted-clique instances on `n` vertices to
/// planted-dense-subgraph instances on `N = nℓ` vertices.
///
/// Parents come from stream 0 of the seed. Block edge counts and their
/// placements come from stream 1, visiting blocks `(s, t)` with `s ≤ t`
/// in lexicographic order.
#[derive(Debug)]
pub struct Reducer {
    params: ReductionParams,
    table: KernelTable,
}

impl Reducer {
    /// Fails if the parameters are invalid, or if `strict` is set and a
    /// guarantee condition does not hold.
    pub fn new(params: ReductionParams) -> Result<Self> {
        Self::build(params, None)
    }

    #[doc(hidden)]
    pub fn with_fault(params: ReductionParams, fault: KernelFault) -> Result<Self> {
        Self::build(params, Some(fault))
    }

    fn build(params: ReductionParams, fault: Option<KernelFault>) -> Result<Self> {
        params.validate()?;
        Ok(Reducer {
            table: KernelTable::with_fault(params.q, params.gamma, fault)?,
            params,
        })
    }

    pub fn params(&self) -> &ReductionParams {
        &self.params
    }

    pub fn table(&self) -> &KernelTable {
        &self.table
    }

    /// Number of edges between two parts of sizes `ls`, `lt` whose parents
    /// are (or are not) adjacent: `P′` or `Q′` while both parts have at most
    /// `2ℓ` vertices, `Binom(ls·lt, q)` otherwise.
    pub fn sample_edge_count<R: Rng + ?Sized>(&self, parent_edge: bool, ls: u64, lt: u64, rng: &mut R) -> Result<u64> {
        let slots = ls * lt;
        if slots == 0 {
            return Ok(0);
        }
        let cap = 2 * self.params.ell as u64;
        if ls.max(lt) > cap {
            Ok(self.table.null(slots)?.sample(rng))
        } else {
            Ok(self.table.kernel(ls, lt)?.sample(parent_edge, rng))
        }
    }

    pub fn reduce(&self, g: &Graph, seed: Seed) -> Result<Graph> {
        let n = self.params.n;
        if g.num_vertices() != n {
            return Err(Error::VertexCountMismatch {
                expected: n,
                found: g.num_vertices(),
            });
        }
        let parts = assign_parents(self.params.big_n(), n, &mut seed.derive(0).rng());
        let mut rng = seed.derive(1).rng();
        let mut pairs = Vec::new();
        for s in 0..n {
            let vs = &parts[s];
            // Within a part: Binom(C(ℓs,2), q) edges placed over colex-ordered pairs.
            let slots = choose2(vs.len() as u64);
            if slots > 0 {
                let count = self.table.null(slots)?.sample(&mut rng);
                for idx in floyd_sample(slots, count, &mut rng) {
                    let (i, j) = colex_pair(idx);
                    pairs.push((vs[i as usize], vs[j as usize]));
                }
            }
            for t in s + 1..n {
                let vt = &parts[t];
                let (ls, lt) = (vs.len() as u64, vt.len() as u64);
                let count = self.sample_edge_count(g.has_edge(s, t), ls, lt, &mut rng)?;
                for idx in floyd_sample(ls * lt, count, &mut rng) {
                    let (a, b) = (vs[(idx / lt) as usize], vt[(idx % lt) as usize]);
                    pairs.push((a.min(b), a.max(b)));
                }
            }
        }
        Ok(Graph::from_distinct_pairs(self.params.big_n(), pairs))
    }

    /// Bipartite analogue: parents are assigned separately on each side and
    /// every block joins a top part to a bottom part.
    pub fn reduce_bipartite(&self, g: &BipartiteGraph, seed: Seed) -> Result<BipartiteGraph> {
        let n = self.params.n;
        for found in [g.num_top(), g.num_bottom()] {
            if found != n {
                return Err(Error::VertexCountMismatch { expected: n, found });
            }
        }
        let big_n = self.params.big_n();
        let mut parent_rng = seed.derive(0).rng();
        let top = assign_parents(big_n, n, &mut parent_rng);
        let bottom = assign_parents(big_n, n, &mut parent_rng);
        let mut rng = seed.derive(1).rng();
        let mut pairs = Vec::new();
        for (s, vs) in top.iter().enumerate() {
            for (t, vt) in bottom.iter().enumerate() {
                let (ls, lt) = (vs.len() as u64, vt.len() as u64);
                let count = self.sample_edge_count(g.has_edge(s, t), ls, lt, &mut rng)?;
                for idx in floyd_sample(ls * lt, count, &mut rng) {
                    pairs.push((vs[(idx / lt) as usize], vt[(idx % lt) as usize]));
                }
            }
        }
        Ok(BipartiteGraph::from_distinct_pairs(big_n, big_n, pairs))
    }
}

pub fn reduce_graph(g: &Graph, params: &ReductionParams, seed: Seed) -> Result<Graph> {
    Reducer::new(*params)?.reduce(g, seed)
}

pub fn reduce_bipartite(g: &BipartiteGraph, params: &ReductionParams, seed: Seed) -> Result<BipartiteGraph> {
    Reducer::new(*params)?.reduce_bipartite(g, seed)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::gen_er;
    use crate::randkit::binom_pmf;

    fn params(n: usize, ell: usize, q: f64) -> ReductionParams {
        ReductionParams::new(n, 1, 0.5, ell, q, false).unwrap()
    }

    #[test]
    fn colex_enumerates_pairs() {
        let mut idx = 0;
        for j in 1..40u64 {
            for i in 0..j {
                assert_eq!(colex_pair(idx), (i, j));
                idx += 1;
            }
        }
        assert_eq!(colex_pair(choose2(100_000) + 7), (7, 100_000));
    }

    #[test]
    fn floyd_returns_distinct_sorted_slots() {
        let mut rng = Seed::new(1).rng();
        for &(slots, count) in &[(10, 0), (10, 10), (100, 7), (1000, 300)] {
            let s = floyd_sample(slots, count, &mut rng);
            assert_eq!(s.len() as u64, count);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(s.iter().all(|&x| x < slots));
        }
    }

    #[test]
    fn output_size_and_determinism() {
        let p = params(2, 2, 0.01);
        let g = Graph::from_edges(2, [(0, 1)]).unwrap();
        let a = reduce_graph(&g, &p, Seed::new(3)).unwrap();
        assert_eq!(a.num_vertices(), 4);
        assert_eq!(a, reduce_graph(&g, &p, Seed::new(3)).unwrap());
    }

    #[test]
    fn zero_q_gives_empty_output() {
        let p = params(6, 3, 0.0);
        let g = Graph::complete(6);
        assert_eq!(reduce_graph(&g, &p, Seed::new(5)).unwrap().num_edges(), 0);
        let b = BipartiteGraph::complete(6, 6);
        assert_eq!(reduce_bipartite(&b, &p, Seed::new(5)).unwrap().num_edges(), 0);
    }

    #[test]
    fn vertex_count_checked() {
        let p = params(5, 2, 0.01);
        assert!(matches!(
            reduce_graph(&Graph::new(4), &p, Seed::new(0)),
            Err(Error::VertexCountMismatch { expected: 5, found: 4 })
        ));
        assert!(reduce_bipartite(&BipartiteGraph::new(5, 4), &p, Seed::new(0)).is_err());
    }

    #[test]
    fn empty_parts_contribute_nothing() {
        let reducer = Reducer::new(params(3, 2, 0.01)).unwrap();
        let mut rng = Seed::new(0).rng();
        assert_eq!(reducer.sample_edge_count(true, 0, 3, &mut rng).unwrap(), 0);
    }

    #[test]
    fn oversize_parts_ignore_parent_edge() {
        // ℓ = 2, so parts of size 6 exceed 2ℓ and draw Binom(12, q) either way.
        let reducer = Reducer::new(params(3, 2, 0.05)).unwrap();
        let law = binom_pmf(12, 0.05).unwrap();
        let draws = 100_000;
        for parent_edge in [false, true] {
            let mut rng = Seed::with_stream(9, parent_edge as u64).rng();
            let mut freq = vec![0usize; 13];
            for _ in 0..draws {
                freq[reducer.sample_edge_count(parent_edge, 6, 2, &mut rng).unwrap() as usize] += 1;
            }
            for (m, &c) in freq.iter().enumerate() {
                let p = law.get(m);
                let sd = (draws as f64 * p * (1.0 - p)).sqrt();
                assert!((c as f64 - draws as f64 * p).abs() <= 5.0 * sd + 1.0, "m={m} c={c}");
            }
        }
    }

    #[test]
    fn null_reduction_edge_density() {
        let p = ReductionParams::new(20, 1, 0.5, 4, 0.01, false).unwrap();
        let reducer = Reducer::new(p).unwrap();
        let mut total = 0usize;
        let reps = 400;
        for r in 0..reps {
            let g = gen_er(20, 0.5, Seed::with_stream(1, r)).unwrap();
            total += reducer.reduce(&g, Seed::with_stream(2, r)).unwrap().num_edges();
        }
        let pairs = (choose2(80) * reps) as f64;
        let sd = (pairs * 0.01 * 0.99).sqrt();
        assert!((total as f64 - pairs * 0.01).abs() < 4.0 * sd, "{total}");
    }
}
