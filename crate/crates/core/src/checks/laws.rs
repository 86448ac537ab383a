//! Exact laws of small random graphs, as probability vectors indexed by
//! edge mask. Bit `idx` of a mask is the `idx`-th vertex pair in
//! lexicographic order (or the pair `(top, bottom)` at `top·Nb + bottom`).

use crate::error::{check_probability, Error, Result};
use crate::graphs::{BipartiteGraph, Graph};
use crate::randkit::{choose2, compensated_sum, Pmf};
use crate::reduction::{KernelTable, ReductionParams};

/// Cap on `components × parent assignments × edge masks` for exhaustive
/// reduction laws, and on the mask count of any single law.
pub const EXACT_OUTCOME_BUDGET: u64 = 1 << 25;

/// Pair index of `i < j` among `n` vertices in lexicographic order.
pub fn pair_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

pub fn graph_mask(g: &Graph) -> usize {
    let n = g.num_vertices();
    g.edges().fold(0, |m, (u, v)| m | 1 << pair_index(n, u, v))
}

pub fn graph_from_mask(n: usize, mask: usize) -> Graph {
    let pairs = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let edges: Vec<_> = pairs.enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, e)| e).collect();
    Graph::from_edges(n, edges).expect("mask pairs are distinct")
}

pub fn bipartite_mask(g: &BipartiteGraph) -> usize {
    let nb = g.num_bottom();
    g.edges().fold(0, |m, (u, v)| m | 1 << (u * nb + v))
}

fn mask_space(bits: u64) -> Result<usize> {
    if bits > 25 || (1u64 << bits) > EXACT_OUTCOME_BUDGET {
        return Err(Error::BudgetExceeded {
            subsets: 1u128 << bits.min(127),
            budget: EXACT_OUTCOME_BUDGET,
        });
    }
    Ok(1 << bits)
}

/// Law of independent edges with per-pair probabilities `probs`.
fn product_law(probs: &[f64]) -> Result<Vec<f64>> {
    let size = mask_space(probs.len() as u64)?;
    let mut law = vec![1.0f64; size];
    for (b, &p) in probs.iter().enumerate() {
        for (mask, w) in law.iter_mut().enumerate() {
            *w *= if mask >> b & 1 == 1 { p } else { 1.0 - p };
        }
    }
    Ok(law)
}

/// Per-pair edge probabilities with `p` inside `set` and `q` elsewhere.
fn planted_probs(n: usize, set: &[bool], p: f64, q: f64) -> Vec<f64> {
    (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| if set[i] && set[j] { p } else { q }))
        .collect()
}

pub fn er_law(n: usize, q: f64) -> Result<Vec<f64>> {
    check_probability(q)?;
    product_law(&vec![q; choose2(n as u64) as usize])
}

pub fn bipartite_er_law(num_top: usize, num_bottom: usize, q: f64) -> Result<Vec<f64>> {
    check_probability(q)?;
    product_law(&vec![q; num_top * num_bottom])
}

fn accumulate(total: &mut [f64], weight: f64, law: &[f64]) {
    for (t, &w) in total.iter_mut().zip(law) {
        *t += weight * w;
    }
}

fn subsets_of(n: usize) -> impl Iterator<Item = Vec<bool>> {
    (0..1usize << n).map(move |s| (0..n).map(|v| s >> v & 1 == 1).collect())
}

/// Law of `G(N, K, p, q)` with Bern(K/N) membership.
pub fn pds_law(n: usize, k: usize, p: f64, q: f64) -> Result<Vec<f64>> {
    check_probability(p)?;
    check_probability(q)?;
    if k > n {
        return Err(Error::params(format!("need K <= N, got K={k} N={n}")));
    }
    let size = mask_space(choose2(n as u64))?;
    let rho = k as f64 / n as f64;
    let mut law = vec![0.0; size];
    for set in subsets_of(n) {
        let inside = set.iter().filter(|&&b| b).count() as i32;
        let weight = rho.powi(inside) * (1.0 - rho).powi(n as i32 - inside);
        if weight > 0.0 {
            accumulate(&mut law, weight, &product_law(&planted_probs(n, &set, p, q))?);
        }
    }
    Ok(law)
}

/// Law of the planted model on a uniform set of exactly `k` vertices.
pub fn fixed_pds_law(n: usize, k: usize, p: f64, q: f64) -> Result<Vec<f64>> {
    check_probability(p)?;
    check_probability(q)?;
    if k > n {
        return Err(Error::params(format!("need K <= N, got K={k} N={n}")));
    }
    let size = mask_space(choose2(n as u64))?;
    let sets: Vec<_> = subsets_of(n).filter(|s| s.iter().filter(|&&b| b).count() == k).collect();
    let weight = 1.0 / sets.len() as f64;
    let mut law = vec![0.0; size];
    for set in &sets {
        accumulate(&mut law, weight, &product_law(&planted_probs(n, set, p, q))?);
    }
    Ok(law)
}

/// Total variation between two laws on the same mask space.
pub fn law_tv(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "laws live on different spaces");
    0.5 * compensated_sum(a.iter().zip(b).map(|(x, y)| (x - y).abs()))
}

/// `Σ a²/b − 1`; infinite if `a` charges a mask `b` does not.
pub fn law_chi2(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "laws live on different spaces");
    let mut terms = Vec::with_capacity(a.len());
    for (&x, &y) in a.iter().zip(b) {
        if y == 0.0 {
            if x > 0.0 {
                return f64::INFINITY;
            }
        } else {
            terms.push(x * x / y);
        }
    }
    compensated_sum(terms) - 1.0
}

/// Law of the input graph to the reduction: a finite mixture of product
/// measures, each given by one edge probability per input pair.
#[derive(Clone, Debug)]
pub struct InputLaw {
    pub components: Vec<(f64, Vec<f64>)>,
}

impl InputLaw {
    /// `G(n, γ)`.
    pub fn er(n: usize, gamma: f64) -> Self {
        InputLaw {
            components: vec![(1.0, vec![gamma; choose2(n as u64) as usize])],
        }
    }

    /// `G(n, k, γ)`: uniform over the `C(n, k)` clique placements.
    pub fn planted_clique(n: usize, k: usize, gamma: f64) -> Self {
        let sets: Vec<_> = subsets_of(n).filter(|s| s.iter().filter(|&&b| b).count() == k).collect();
        let weight = 1.0 / sets.len() as f64;
        InputLaw {
            components: sets.iter().map(|s| (weight, planted_probs(n, s, 1.0, gamma))).collect(),
        }
    }

    /// Bipartite `G_b(n, γ)`, pairs indexed `top·n + bottom`.
    pub fn bipartite_er(n: usize, gamma: f64) -> Self {
        InputLaw {
            components: vec![(1.0, vec![gamma; n * n])],
        }
    }

    /// Bipartite planted clique: uniform `k`-subsets on each side, independently.
    pub fn bipartite_planted_clique(n: usize, k: usize, gamma: f64) -> Self {
        let sets: Vec<_> = subsets_of(n).filter(|s| s.iter().filter(|&&b| b).count() == k).collect();
        let weight = 1.0 / (sets.len() * sets.len()) as f64;
        let mut components = Vec::new();
        for top in &sets {
            for bottom in &sets {
                let probs = (0..n)
                    .flat_map(|s| (0..n).map(move |t| if top[s] && bottom[t] { 1.0 } else { gamma }))
                    .collect();
                components.push((weight, probs));
            }
        }
        InputLaw { components }
    }
}

/// One block of output pairs and the law of its edge count. Given the
/// count, the edge set is uniform, so a particular subset with `e` edges
/// has probability `count_law(e) / C(slots, e)`.
struct Block {
    mask: usize,
    per_subset: Vec<f64>,
}

impl Block {
    fn new(slot_bits: Vec<usize>, count_law: &[f64]) -> Self {
        let slots = slot_bits.len();
        let mut binom = 1.0f64;
        let per_subset = (0..=slots)
            .map(|e| {
                if e > 0 {
                    binom = binom * (slots - e + 1) as f64 / e as f64;
                }
                count_law.get(e).copied().unwrap_or(0.0) / binom
            })
            .collect();
        Block {
            mask: slot_bits.iter().fold(0, |m, &b| m | 1 << b),
            per_subset,
        }
    }
}

fn block_law_into(total: &mut [f64], weight: f64, blocks: &[Block]) {
    for (mask, t) in total.iter_mut().enumerate() {
        let mut w = weight;
        for b in blocks {
            w *= b.per_subset[(mask & b.mask).count_ones() as usize];
            if w == 0.0 {
                break;
            }
        }
        *t += w;
    }
}

fn parent_assignments(n: usize, big_n: usize) -> impl Iterator<Item = Vec<usize>> {
    let total = (n as u64).pow(big_n as u32);
    (0..total).map(move |mut code| {
        (0..big_n)
            .map(|_| {
                let d = (code % n as u64) as usize;
                code /= n as u64;
                d
            })
            .collect()
    })
}

fn check_budget(components: usize, assignments: u64, masks: usize) -> Result<()> {
    let work = (components as u128) * (assignments as u128) * (masks as u128);
    if work > EXACT_OUTCOME_BUDGET as u128 {
        return Err(Error::BudgetExceeded {
            subsets: work,
            budget: EXACT_OUTCOME_BUDGET,
        });
    }
    Ok(())
}

/// Off-diagonal count law: `P′`/`Q′` mixed by the parent-edge probability,
/// or `Binom(ls·lt, q)` for oversize parts.
fn cross_law(table: &KernelTable, params: &ReductionParams, ls: usize, lt: usize, edge_prob: f64) -> Result<Vec<f64>> {
    let slots = (ls * lt) as u64;
    if ls.max(lt) > 2 * params.ell {
        return Ok(crate::randkit::binom_pmf(slots, params.q)?.probs().to_vec());
    }
    let kernel = table.kernel(ls as u64, lt as u64)?;
    Ok((0..=slots as usize)
        .map(|m| edge_prob * kernel.pprime.get(m) + (1.0 - edge_prob) * kernel.qprime.get(m))
        .collect())
}

/// Exact law of the reduced graph for an input drawn from `input`, by
/// enumerating every parent assignment and summing the per-block laws.
pub fn reduction_law_exact(params: &ReductionParams, input: &InputLaw) -> Result<Vec<f64>> {
    params.validate()?;
    let (n, big_n) = (params.n, params.big_n());
    let size = mask_space(choose2(big_n as u64))?;
    let assignments = (n as u64).checked_pow(big_n as u32).unwrap_or(u64::MAX);
    check_budget(input.components.len(), assignments, size)?;
    let table = KernelTable::new(params.q, params.gamma)?;
    let base = 1.0 / assignments as f64;
    let mut law = vec![0.0; size];
    for parents in parent_assignments(n, big_n) {
        let mut parts = vec![Vec::new(); n];
        for (v, &s) in parents.iter().enumerate() {
            parts[s].push(v);
        }
        for (weight, probs) in &input.components {
            let mut blocks = Vec::new();
            for s in 0..n {
                let vs = &parts[s];
                let diag: Vec<usize> = (0..vs.len())
                    .flat_map(|a| (a + 1..vs.len()).map(move |b| (a, b)))
                    .map(|(a, b)| pair_index(big_n, vs[a], vs[b]))
                    .collect();
                if !diag.is_empty() {
                    let count = crate::randkit::binom_pmf(diag.len() as u64, params.q)?;
                    blocks.push(Block::new(diag, count.probs()));
                }
                for t in s + 1..n {
                    let vt = &parts[t];
                    if vs.is_empty() || vt.is_empty() {
                        continue;
                    }
                    let bits = vs
                        .iter()
                        .flat_map(|&a| vt.iter().map(move |&b| pair_index(big_n, a.min(b), a.max(b))))
                        .collect();
                    let count = cross_law(&table, params, vs.len(), vt.len(), probs[pair_index(n, s, t)])?;
                    blocks.push(Block::new(bits, &count));
                }
            }
            block_law_into(&mut law, weight * base, &blocks);
        }
    }
    Ok(law)
}

/// Bipartite analogue of [`reduction_law_exact`]; output pairs are indexed
/// `top·N + bottom`.
pub fn bipartite_reduction_law_exact(params: &ReductionParams, input: &InputLaw) -> Result<Vec<f64>> {
    params.validate()?;
    let (n, big_n) = (params.n, params.big_n());
    let size = mask_space((big_n * big_n) as u64)?;
    let per_side = (n as u64).checked_pow(big_n as u32).unwrap_or(u64::MAX);
    let assignments = per_side.saturating_mul(per_side);
    check_budget(input.components.len(), assignments, size)?;
    let table = KernelTable::new(params.q, params.gamma)?;
    let base = 1.0 / assignments as f64;
    let to_parts = |parents: Vec<usize>| {
        let mut parts = vec![Vec::new(); n];
        for (v, s) in parents.into_iter().enumerate() {
            parts[s].push(v);
        }
        parts
    };
    let mut law = vec![0.0; size];
    for top_parents in parent_assignments(n, big_n) {
        let top = to_parts(top_parents);
        for bottom_parents in parent_assignments(n, big_n) {
            let bottom = to_parts(bottom_parents);
            for (weight, probs) in &input.components {
                let mut blocks = Vec::new();
                for (s, vs) in top.iter().enumerate() {
                    for (t, vt) in bottom.iter().enumerate() {
                        if vs.is_empty() || vt.is_empty() {
                            continue;
                        }
                        let bits = vs.iter().flat_map(|&a| vt.iter().map(move |&b| a * big_n + b)).collect();
                        let count = cross_law(&table, params, vs.len(), vt.len(), probs[s * n + t])?;
                        blocks.push(Block::new(bits, &count));
                    }
                }
                block_law_into(&mut law, weight * base, &blocks);
            }
        }
    }
    Ok(law)
}

/// Law of a single count-then-uniform-placement block, exposed for tests
/// of the placement rule.
pub fn placement_law(slots: usize, count_law: &Pmf) -> Vec<f64> {
    let block = Block::new((0..slots).collect(), count_law.probs());
    let mut law = vec![0.0; 1 << slots];
    block_law_into(&mut law, 1.0, &[block]);
    law
}
