use proptest::prelude::*;
use statrs::distribution::{ChiSquared, ContinuousCDF};

use pds_core::checks::{fixed_pds_law, graph_mask, pds_law};
use pds_core::graphs::{
    gen_bipartite_er, gen_bipartite_pc, gen_bipartite_pds, gen_er, gen_pds_edges, gen_pds_fixed_size,
    gen_pds_random_size, gen_planted_clique, read_bipartite_edge_list, read_edge_list, write_bipartite_edge_list,
    write_edge_list, PlantSize,
};
use pds_core::{BipartiteGraph, Graph, PdsParams, Seed};

/// Vertex pairs of `0..n` in lexicographic order.
fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
}

/// Law of a mask under independent edges, pair `b` present with `probs[b]`.
fn independent_law(probs: &[f64]) -> Vec<f64> {
    (0..1usize << probs.len())
        .map(|mask| {
            probs
                .iter()
                .enumerate()
                .map(|(b, &p)| if mask >> b & 1 == 1 { p } else { 1.0 - p })
                .product()
        })
        .collect()
}

/// Mixture over planted sets `set` (as vertex bitmasks) with weights.
fn planted_mixture(n: usize, p: f64, q: f64, sets: &[(usize, f64)]) -> Vec<f64> {
    let pr = pairs(n);
    let mut law = vec![0.0; 1 << pr.len()];
    for &(set, w) in sets {
        let probs: Vec<f64> = pr
            .iter()
            .map(|&(i, j)| if set >> i & 1 == 1 && set >> j & 1 == 1 { p } else { q })
            .collect();
        for (t, x) in law.iter_mut().zip(independent_law(&probs)) {
            *t += w * x;
        }
    }
    law
}

fn bernoulli_sets(n: usize, rho: f64) -> Vec<(usize, f64)> {
    (0..1usize << n)
        .map(|s| {
            let c = s.count_ones() as i32;
            (s, rho.powi(c) * (1.0 - rho).powi(n as i32 - c))
        })
        .collect()
}

fn uniform_sets(n: usize, k: usize) -> Vec<(usize, f64)> {
    let sets: Vec<usize> = (0..1usize << n).filter(|s| s.count_ones() as usize == k).collect();
    let w = 1.0 / sets.len() as f64;
    sets.into_iter().map(|s| (s, w)).collect()
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Pearson goodness of fit of `draws` masks against `law`, rejecting at level 1e-4.
fn assert_fits(name: &str, law: &[f64], draws: impl Iterator<Item = usize>) {
    let mut counts = vec![0u64; law.len()];
    let mut total = 0u64;
    for m in draws {
        counts[m] += 1;
        total += 1;
    }
    let mut stat = 0.0;
    let mut bins = 0;
    for (&c, &p) in counts.iter().zip(law) {
        if p == 0.0 {
            assert_eq!(c, 0, "{name}: impossible mask observed");
            continue;
        }
        let e = p * total as f64;
        stat += (c as f64 - e).powi(2) / e;
        bins += 1;
    }
    let crit = ChiSquared::new((bins - 1) as f64).unwrap().inverse_cdf(1.0 - 1e-4);
    assert!(stat < crit, "{name}: chi2 = {stat:.2} >= {crit:.2} over {bins} bins");
}

#[test]
fn random_size_law_matches_independent_oracle() {
    for n in 1..=4 {
        for k in 1..=n {
            for &(p, q) in &[(0.7, 0.2), (0.5, 0.5), (1.0, 0.0), (0.9, 0.1)] {
                let got = pds_law(n, k, p, q).unwrap();
                let want = planted_mixture(n, p, q, &bernoulli_sets(n, k as f64 / n as f64));
                assert!(max_abs_diff(&got, &want) <= 1e-12, "n={n} k={k} p={p} q={q}");
            }
        }
    }
}

#[test]
fn fixed_size_law_matches_independent_oracle() {
    for n in 1..=4 {
        for k in 1..=n {
            let got = fixed_pds_law(n, k, 0.8, 0.3).unwrap();
            let want = planted_mixture(n, 0.8, 0.3, &uniform_sets(n, k));
            assert!(max_abs_diff(&got, &want) <= 1e-12, "n={n} k={k}");
        }
    }
}

proptest! {
    #[test]
    fn equal_densities_give_an_iid_law(n in 1usize..=4, k_frac in 0.0..=1.0f64, q in 0.0..=1.0f64) {
        let k = ((k_frac * n as f64).round() as usize).clamp(1, n);
        let got = pds_law(n, k, q, q).unwrap();
        let want = independent_law(&vec![q; pairs(n).len()]);
        prop_assert!(max_abs_diff(&got, &want) <= 1e-12);
    }

    #[test]
    fn planted_clique_is_complete(n in 2usize..60, k_frac in 0.0..=1.0f64, gamma in 0.0..=1.0f64, seed in any::<u64>()) {
        let k = ((k_frac * n as f64).round() as usize).clamp(1, n);
        let inst = gen_planted_clique(n, k, gamma, Seed::new(seed)).unwrap();
        prop_assert_eq!(inst.planted.len(), k);
        for (a, &u) in inst.planted.iter().enumerate() {
            for &v in &inst.planted[a + 1..] {
                prop_assert!(inst.graph.has_edge(u, v));
            }
        }
    }

    #[test]
    fn bipartite_clique_is_complete(n in 1usize..40, k_frac in 0.0..=1.0f64, gamma in 0.0..=1.0f64, seed in any::<u64>()) {
        let k = ((k_frac * n as f64).round() as usize).clamp(1, n);
        let inst = gen_bipartite_pc(n, k, gamma, Seed::new(seed)).unwrap();
        prop_assert_eq!(inst.planted_top.len(), k);
        prop_assert_eq!(inst.planted_bottom.len(), k);
        for &u in &inst.planted_top {
            for &v in &inst.planted_bottom {
                prop_assert!(inst.graph.has_edge(u, v));
            }
        }
    }

    #[test]
    fn generators_replay_under_a_fixed_seed(n in 1usize..80, seed in any::<u64>(), q in 0.0..=0.5f64) {
        let s = Seed::new(seed);
        prop_assert_eq!(gen_er(n, q, s).unwrap(), gen_er(n, q, s).unwrap());
        let params = PdsParams::new(n, n.div_ceil(3), (q + 0.3).min(1.0), q).unwrap();
        prop_assert_eq!(gen_pds_random_size(&params, s).unwrap(), gen_pds_random_size(&params, s).unwrap());
        prop_assert_eq!(gen_pds_fixed_size(&params, s).unwrap(), gen_pds_fixed_size(&params, s).unwrap());
        prop_assert_eq!(
            gen_bipartite_pds(&params, PlantSize::Fixed, s).unwrap(),
            gen_bipartite_pds(&params, PlantSize::Fixed, s).unwrap()
        );
    }

    #[test]
    fn edges_depend_only_on_the_edge_stream(n in 2usize..60, seed in any::<u64>()) {
        let params = PdsParams::new(n, n.div_ceil(2), 0.6, 0.1).unwrap();
        let s = Seed::new(seed);
        let inst = gen_pds_fixed_size(&params, s).unwrap();
        let again = gen_pds_edges(n, &inst.planted, params.p, params.q, s.derive(1)).unwrap();
        prop_assert_eq!(inst.graph, again);
    }

    #[test]
    fn edge_lists_round_trip(n in 1usize..30, raw in prop::collection::vec((0usize..30, 0usize..30), 0..80)) {
        let mut seen = std::collections::HashSet::new();
        let edges: Vec<_> = raw
            .into_iter()
            .filter(|&(u, v)| u < n && v < n && u != v)
            .filter(|&(u, v)| seen.insert((u.min(v), u.max(v))))
            .collect();
        let g = Graph::from_edges(n, edges).unwrap();
        let text = write_edge_list(&g);
        prop_assert_eq!(read_edge_list(&text).unwrap(), g.clone());
        prop_assert_eq!(write_edge_list(&read_edge_list(&text).unwrap()), text);
    }

    #[test]
    fn bipartite_edge_lists_round_trip(nt in 1usize..20, nb in 1usize..20, seed in any::<u64>(), q in 0.0..=1.0f64) {
        let g: BipartiteGraph = gen_bipartite_er(nt, nb, q, Seed::new(seed)).unwrap();
        let text = write_bipartite_edge_list(&g);
        prop_assert_eq!(read_bipartite_edge_list(&text).unwrap(), g);
    }
}

#[test]
fn sampled_masks_follow_the_exact_laws() {
    const DRAWS: u64 = 200_000;
    let (n, k, p, q) = (3, 2, 0.8, 0.25);
    let params = PdsParams::new(n, k, p, q).unwrap();
    let random = planted_mixture(n, p, q, &bernoulli_sets(n, k as f64 / n as f64));
    assert_fits(
        "random size",
        &random,
        (0..DRAWS).map(|i| graph_mask(&gen_pds_random_size(&params, Seed::with_stream(11, i)).unwrap().graph)),
    );
    let fixed = planted_mixture(n, p, q, &uniform_sets(n, k));
    assert_fits(
        "fixed size",
        &fixed,
        (0..DRAWS).map(|i| graph_mask(&gen_pds_fixed_size(&params, Seed::with_stream(12, i)).unwrap().graph)),
    );
    let clique = planted_mixture(n, 1.0, 0.3, &uniform_sets(n, k));
    assert_fits(
        "planted clique",
        &clique,
        (0..DRAWS).map(|i| graph_mask(&gen_planted_clique(n, k, 0.3, Seed::with_stream(13, i)).unwrap().graph)),
    );
    // Skip sampling kicks in below 0.1.
    let sparse = independent_law(&[0.05; 6]);
    assert_fits(
        "sparse er",
        &sparse,
        (0..DRAWS).map(|i| graph_mask(&gen_er(4, 0.05, Seed::with_stream(14, i)).unwrap())),
    );
}

#[test]
fn edge_counts_sit_in_clt_bands() {
    const SAMPLES: u64 = 400;
    let check = |name: &str, mean: f64, var: f64, counts: Vec<f64>| {
        let avg = counts.iter().sum::<f64>() / counts.len() as f64;
        let se = (var / counts.len() as f64).sqrt();
        assert!((avg - mean).abs() <= 4.0 * se, "{name}: mean {avg} vs {mean} (se {se})");
    };
    for &q in &[0.01, 0.1, 0.5] {
        let n = 300usize;
        let m = (n * (n - 1) / 2) as f64;
        let counts = (0..SAMPLES).map(|i| gen_er(n, q, Seed::with_stream(21, i)).unwrap().num_edges() as f64);
        check("er", m * q, m * q * (1.0 - q), counts.collect());
    }
    // Fixed size: C(K,2) planted pairs at p, the rest at q.
    let (n, k, p, q) = (200usize, 40usize, 0.5, 0.05);
    let params = PdsParams::new(n, k, p, q).unwrap();
    let inner = (k * (k - 1) / 2) as f64;
    let outer = (n * (n - 1) / 2) as f64 - inner;
    let counts = (0..SAMPLES).map(|i| gen_pds_fixed_size(&params, Seed::with_stream(22, i)).unwrap().graph.num_edges() as f64);
    check(
        "fixed pds",
        inner * p + outer * q,
        inner * p * (1.0 - p) + outer * q * (1.0 - q),
        counts.collect(),
    );
    let counts = (0..SAMPLES).map(|i| gen_bipartite_er(50, 70, 0.2, Seed::with_stream(23, i)).unwrap().num_edges() as f64);
    check("bipartite er", 3500.0 * 0.2, 3500.0 * 0.16, counts.collect());
}

#[test]
fn planted_set_sizes_follow_their_laws() {
    const SAMPLES: u64 = 2000;
    let params = PdsParams::new(100, 20, 0.5, 0.1).unwrap();
    let sizes: Vec<f64> = (0..SAMPLES)
        .map(|i| gen_pds_random_size(&params, Seed::with_stream(31, i)).unwrap().planted.len() as f64)
        .collect();
    let avg = sizes.iter().sum::<f64>() / SAMPLES as f64;
    let se = (100.0 * 0.2 * 0.8 / SAMPLES as f64).sqrt();
    assert!((avg - 20.0).abs() <= 4.0 * se, "mean planted size {avg}");
    for i in 0..50 {
        assert_eq!(gen_pds_fixed_size(&params, Seed::with_stream(32, i)).unwrap().planted.len(), 20);
        let b = gen_bipartite_pds(&params, PlantSize::Fixed, Seed::with_stream(33, i)).unwrap();
        assert_eq!((b.planted_top.len(), b.planted_bottom.len()), (20, 20));
    }
}

#[test]
fn malformed_edge_lists_are_rejected() {
    use pds_core::Error;
    assert!(matches!(read_edge_list(""), Err(Error::Parse { line: 1, .. })));
    assert!(matches!(read_edge_list("3 1\n0 5\n"), Err(Error::OutOfRange { line: 2, .. })));
    assert!(matches!(read_edge_list("3 2\n0 1\n1 0\n"), Err(Error::DuplicateEdge { line: 3, .. })));
    assert!(matches!(read_edge_list("3 2\n0 1\n"), Err(Error::Parse { .. })));
    assert!(matches!(read_edge_list("3 1\n0 x\n"), Err(Error::Parse { line: 2, .. })));
}
