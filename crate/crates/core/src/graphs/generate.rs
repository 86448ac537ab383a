use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{BipartiteGraph, BipartiteInstance, Graph, PdsParams, PlantedInstance};
use crate::error::{check_probability, Error, Result};
use crate::randkit::{choose2, Seed};

/// Below this edge probability, generators jump between successes with
/// geometric skips instead of flipping a coin per pair.
const SKIP_SAMPLING_BELOW: f64 = 0.1;

/// Whether the planted set has Bern(K/N) membership or exactly K vertices.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PlantSize {
    Random,
    Fixed,
}

/// Calls `hit` with the index of every success among `total` independent
/// Bernoulli(`prob`) trials, in increasing order.
pub(crate) fn for_each_success<R: Rng + ?Sized>(total: u64, prob: f64, rng: &mut R, mut hit: impl FnMut(u64)) {
    if total == 0 || prob <= 0.0 {
        return;
    }
    if prob >= 1.0 {
        (0..total).for_each(hit);
        return;
    }
    if prob >= SKIP_SAMPLING_BELOW {
        for idx in 0..total {
            if rng.gen_bool(prob) {
                hit(idx);
            }
        }
        return;
    }
    // Failures before the next success are Geometric(prob): floor(ln U / ln(1 - prob)).
    let log_fail = (-prob).ln_1p();
    let mut idx: u64 = 0;
    loop {
        let u = 1.0 - rng.gen::<f64>();
        let skip = (u.ln() / log_fail).floor();
        if skip >= (total - idx) as f64 {
            return;
        }
        idx += skip as u64;
        hit(idx);
        idx += 1;
        if idx >= total {
            return;
        }
    }
}

/// Walks the lexicographic enumeration of pairs `i < j` over `members`,
/// turning monotone linear indices into vertex pairs in amortized O(1).
struct PairCursor<'a> {
    members: &'a [u32],
    row: usize,
    row_start: u64,
}

impl<'a> PairCursor<'a> {
    fn new(members: &'a [u32]) -> Self {
        PairCursor {
            members,
            row: 0,
            row_start: 0,
        }
    }

    fn pair(&mut self, idx: u64) -> (u32, u32) {
        let m = self.members.len() as u64;
        loop {
            let row_len = m - 1 - self.row as u64;
            if idx < self.row_start + row_len {
                let col = self.row + 1 + (idx - self.row_start) as usize;
                return (self.members[self.row], self.members[col]);
            }
            self.row_start += row_len;
            self.row += 1;
        }
    }
}

fn sample_pairs_among<R: Rng + ?Sized>(members: &[u32], prob: f64, rng: &mut R, out: &mut Vec<(u32, u32)>) {
    let mut cursor = PairCursor::new(members);
    for_each_success(choose2(members.len() as u64), prob, rng, |idx| out.push(cursor.pair(idx)));
}

fn check_vertex_count(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::params("need at least one vertex"));
    }
    if n > u32::MAX as usize {
        return Err(Error::TooLarge(format!("{n} vertices")));
    }
    Ok(())
}

/// Erdős–Rényi graph `G(N, q)`.
pub fn gen_er(n: usize, q: f64, seed: Seed) -> Result<Graph> {
    check_vertex_count(n)?;
    check_probability(q)?;
    let vertices: Vec<u32> = (0..n as u32).collect();
    let mut pairs = Vec::new();
    sample_pairs_among(&vertices, q, &mut seed.rng(), &mut pairs);
    Ok(Graph::from_distinct_pairs(n, pairs))
}

/// Edges of a planted model with a given vertex set: pairs inside `planted`
/// appear with probability `p`, all other pairs with probability `q`.
///
/// Randomness comes from `seed` alone, so holding `planted` fixed and
/// varying `seed` resamples only the edges.
pub fn gen_pds_edges(n: usize, planted: &[usize], p: f64, q: f64, seed: Seed) -> Result<Graph> {
    check_vertex_count(n)?;
    check_probability(p)?;
    check_probability(q)?;
    let mut inside = vec![false; n];
    let mut members = Vec::with_capacity(planted.len());
    for &v in planted {
        if v >= n {
            return Err(Error::params(format!("planted vertex {v} out of range for N={n}")));
        }
        if inside[v] {
            return Err(Error::params(format!("planted vertex {v} listed twice")));
        }
        inside[v] = true;
        members.push(v as u32);
    }
    members.sort_unstable();

    let mut rng = seed.rng();
    let vertices: Vec<u32> = (0..n as u32).collect();
    let mut pairs = Vec::new();
    sample_pairs_among(&vertices, q, &mut rng, &mut pairs);
    pairs.retain(|&(u, v)| !(inside[u as usize] && inside[v as usize]));
    sample_pairs_among(&members, p, &mut rng, &mut pairs);
    Ok(Graph::from_distinct_pairs(n, pairs))
}

/// Uniform `k`-subset of `0..n`, sorted, by a partial Fisher–Yates shuffle.
pub fn uniform_subset<R: Rng + ?Sized>(n: usize, k: usize, rng: &mut R) -> Vec<usize> {
    assert!(k <= n, "subset size {k} exceeds {n}");
    let mut perm: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = rng.gen_range(i..n);
        perm.swap(i, j);
    }
    perm.truncate(k);
    perm.sort_unstable();
    perm
}

fn bernoulli_subset<R: Rng + ?Sized>(n: usize, prob: f64, rng: &mut R) -> Vec<usize> {
    (0..n).filter(|_| rng.gen_bool(prob)).collect()
}

fn membership<R: Rng + ?Sized>(params: &PdsParams, size: PlantSize, rng: &mut R) -> Vec<usize> {
    match size {
        PlantSize::Random => bernoulli_subset(params.n, params.k as f64 / params.n as f64, rng),
        PlantSize::Fixed => uniform_subset(params.n, params.k, rng),
    }
}

/// `G(N, K, p, q)`: each vertex joins the planted set independently with
/// probability `K/N`.
///
/// Membership is drawn from stream 0 of `seed` and edges from stream 1.
pub fn gen_pds_random_size(params: &PdsParams, seed: Seed) -> Result<PlantedInstance> {
    gen_pds(params, PlantSize::Random, seed)
}

/// Planted dense subgraph on a uniformly chosen set of exactly `K` vertices.
pub fn gen_pds_fixed_size(params: &PdsParams, seed: Seed) -> Result<PlantedInstance> {
    gen_pds(params, PlantSize::Fixed, seed)
}

fn gen_pds(params: &PdsParams, size: PlantSize, seed: Seed) -> Result<PlantedInstance> {
    params.validate()?;
    let planted = membership(params, size, &mut seed.derive(0).rng());
    let graph = gen_pds_edges(params.n, &planted, params.p, params.q, seed.derive(1))?;
    Ok(PlantedInstance { graph, planted })
}

/// `G(n, k, γ)`: `G(n, γ)` with a clique forced on a uniform `k`-subset.
pub fn gen_planted_clique(n: usize, k: usize, gamma: f64, seed: Seed) -> Result<PlantedInstance> {
    check_vertex_count(n)?;
    check_probability(gamma)?;
    if k < 1 || k > n {
        return Err(Error::params(format!("need 1 <= k <= n, got k={k} n={n}")));
    }
    let planted = uniform_subset(n, k, &mut seed.derive(0).rng());
    let graph = gen_pds_edges(n, &planted, 1.0, gamma, seed.derive(1))?;
    Ok(PlantedInstance { graph, planted })
}

/// Bipartite Erdős–Rényi graph: every top-bottom pair independently with probability `q`.
pub fn gen_bipartite_er(num_top: usize, num_bottom: usize, q: f64, seed: Seed) -> Result<BipartiteGraph> {
    check_vertex_count(num_top)?;
    check_vertex_count(num_bottom)?;
    check_probability(q)?;
    let mut pairs = Vec::new();
    let nb = num_bottom as u64;
    for_each_success(num_top as u64 * nb, q, &mut seed.rng(), |idx| {
        pairs.push(((idx / nb) as u32, (idx % nb) as u32))
    });
    Ok(BipartiteGraph::from_distinct_pairs(num_top, num_bottom, pairs))
}

fn gen_bipartite_planted(
    n: usize,
    top: Vec<usize>,
    bottom: Vec<usize>,
    p: f64,
    q: f64,
    seed: Seed,
) -> Result<BipartiteInstance> {
    let mut rng = seed.rng();
    let nb = n as u64;
    let mut top_in = vec![false; n];
    let mut bottom_in = vec![false; n];
    top.iter().for_each(|&v| top_in[v] = true);
    bottom.iter().for_each(|&v| bottom_in[v] = true);

    let mut pairs = Vec::new();
    for_each_success(nb * nb, q, &mut rng, |idx| {
        let (u, v) = ((idx / nb) as usize, (idx % nb) as usize);
        if !(top_in[u] && bottom_in[v]) {
            pairs.push((u as u32, v as u32));
        }
    });
    let width = bottom.len() as u64;
    if width > 0 {
        for_each_success(top.len() as u64 * width, p, &mut rng, |idx| {
            pairs.push((top[(idx / width) as usize] as u32, bottom[(idx % width) as usize] as u32))
        });
    }
    Ok(BipartiteInstance {
        graph: BipartiteGraph::from_distinct_pairs(n, n, pairs),
        planted_top: top,
        planted_bottom: bottom,
    })
}

/// Bipartite planted dense subgraph with `N` vertices per side.
///
/// The two planted sets are drawn independently, one per side, from
/// stream 0 of `seed`; edges come from stream 1.
pub fn gen_bipartite_pds(params: &PdsParams, size: PlantSize, seed: Seed) -> Result<BipartiteInstance> {
    params.validate()?;
    let mut rng = seed.derive(0).rng();
    let top = membership(params, size, &mut rng);
    let bottom = membership(params, size, &mut rng);
    gen_bipartite_planted(params.n, top, bottom, params.p, params.q, seed.derive(1))
}

/// Bipartite planted clique: a `k × k` bi-clique on uniform subsets of each side.
pub fn gen_bipartite_pc(n: usize, k: usize, gamma: f64, seed: Seed) -> Result<BipartiteInstance> {
    check_vertex_count(n)?;
    check_probability(gamma)?;
    if k < 1 || k > n {
        return Err(Error::params(format!("need 1 <= k <= n, got k={k} n={n}")));
    }
    let mut rng = seed.derive(0).rng();
    let top = uniform_subset(n, k, &mut rng);
    let bottom = uniform_subset(n, k, &mut rng);
    gen_bipartite_planted(n, top, bottom, 1.0, gamma, seed.derive(1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphs::subgraph_edge_count;

    #[test]
    fn pair_cursor_matches_nested_loops() {
        let members = [1u32, 4, 5, 9, 12];
        let expected: Vec<_> = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (members[i], members[j])))
            .collect();
        let mut cursor = PairCursor::new(&members);
        let got: Vec<_> = (0..10).map(|i| cursor.pair(i)).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn skip_sampling_rate_and_order() {
        let mut rng = Seed::new(3).rng();
        let mut hits = Vec::new();
        for_each_success(2_000_000, 0.01, &mut rng, |i| hits.push(i));
        assert!(hits.windows(2).all(|w| w[0] < w[1]));
        let mean = 20_000.0;
        let sd = (2e6f64 * 0.01 * 0.99).sqrt();
        assert!((hits.len() as f64 - mean).abs() < 4.0 * sd, "{}", hits.len());
    }

    #[test]
    fn extreme_probabilities() {
        assert_eq!(gen_er(12, 0.0, Seed::new(1)).unwrap().num_edges(), 0);
        assert_eq!(gen_er(12, 1.0, Seed::new(1)).unwrap(), Graph::complete(12));
        assert_eq!(gen_bipartite_er(3, 4, 1.0, Seed::new(1)).unwrap().num_edges(), 12);
    }

    #[test]
    fn generators_are_deterministic() {
        let params = PdsParams::new(80, 10, 0.6, 0.05).unwrap();
        let a = gen_pds_random_size(&params, Seed::new(42)).unwrap();
        let b = gen_pds_random_size(&params, Seed::new(42)).unwrap();
        assert_eq!(a, b);
        let c = gen_pds_random_size(&params, Seed::new(43)).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn edges_resample_with_fixed_membership() {
        let params = PdsParams::new(60, 8, 0.9, 0.1).unwrap();
        let base = Seed::new(5);
        let a = gen_pds_fixed_size(&params, base).unwrap();
        let regen = gen_pds_edges(60, &a.planted, 0.9, 0.1, base.derive(1)).unwrap();
        assert_eq!(regen, a.graph);
    }

    #[test]
    fn full_membership_plants_everything() {
        let params = PdsParams::new(7, 7, 1.0, 0.0).unwrap();
        let inst = gen_pds_random_size(&params, Seed::new(9)).unwrap();
        assert_eq!(inst.planted, (0..7).collect::<Vec<_>>());
        assert_eq!(inst.graph, Graph::complete(7));
        let fixed = gen_pds_fixed_size(&params, Seed::new(9)).unwrap();
        assert_eq!(fixed.graph, Graph::complete(7));
    }

    #[test]
    fn singleton_plant_is_plain_er() {
        let params = PdsParams::new(30, 1, 1.0, 0.2).unwrap();
        let inst = gen_pds_fixed_size(&params, Seed::new(11)).unwrap();
        assert_eq!(inst.graph, gen_er(30, 0.2, Seed::new(11).derive(1)).unwrap());
    }

    #[test]
    fn clique_is_complete() {
        for t in 0..1000 {
            let inst = gen_planted_clique(20, 5, 0.5, Seed::with_stream(1, t)).unwrap();
            assert_eq!(subgraph_edge_count(&inst.graph, &inst.planted), 10);
        }
        let tri = gen_planted_clique(9, 3, 0.0, Seed::new(2)).unwrap();
        assert_eq!(tri.graph.num_edges(), 3);
        assert_eq!(gen_planted_clique(6, 6, 0.3, Seed::new(2)).unwrap().graph, Graph::complete(6));
    }

    #[test]
    fn bipartite_plants() {
        let full = gen_bipartite_pc(5, 5, 0.2, Seed::new(4)).unwrap();
        assert_eq!(full.graph, BipartiteGraph::complete(5, 5));
        let params = PdsParams::new(50, 5, 1.0, 0.1).unwrap();
        let inst = gen_bipartite_pds(&params, PlantSize::Fixed, Seed::new(4)).unwrap();
        assert_eq!(inst.planted_top.len(), 5);
        assert_eq!(inst.planted_bottom.len(), 5);
        assert_eq!(inst.graph.block_edge_count(&inst.planted_top, &inst.planted_bottom), 25);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(gen_er(0, 0.1, Seed::new(0)).is_err());
        assert!(gen_er(5, 1.5, Seed::new(0)).is_err());
        assert!(gen_planted_clique(5, 6, 0.5, Seed::new(0)).is_err());
        assert!(gen_pds_edges(5, &[1, 1], 0.5, 0.1, Seed::new(0)).is_err());
        assert!(gen_pds_edges(5, &[7], 0.5, 0.1, Seed::new(0)).is_err());
    }
}
