//! Shared inputs for the benchmarks.

use pds_core::graphs::{gen_er, gen_planted_clique};
use pds_core::{Graph, ReductionParams, Seed};

/// `G(n, q)` from a fixed seed.
pub fn er_graph(n: usize, q: f64) -> Graph {
    gen_er(n, q, Seed::new(1)).expect("valid parameters")
}

/// Planted clique instance and reduction parameters with `N = n·ell` and
/// `16·q·ell² = 1`.
pub fn reduction_input(n: usize, k: usize, ell: usize) -> (Graph, ReductionParams) {
    let q = 1.0 / (16.0 * (ell * ell) as f64);
    let params = ReductionParams::new(n, k, 0.5, ell, q, false).expect("valid parameters");
    let g = gen_planted_clique(n, k, 0.5, Seed::new(2)).expect("valid parameters").graph;
    (g, params)
}
