use rand::seq::SliceRandom;
use rand::Rng;

use super::{Decision, TestOutcome};
use crate::error::{Error, Result};
use crate::graphs::{subgraph_edge_count, Graph, PdsParams};
use crate::randkit::{choose2, Seed};

fn check_output(set: &[usize], k: usize, n: usize, who: &str) -> Result<()> {
    if set.len() != k {
        return Err(Error::ContractViolation(format!(
            "{who} returned {} vertices, expected {k}",
            set.len()
        )));
    }
    let mut seen = vec![false; n];
    for &v in set {
        if v >= n || std::mem::replace(&mut seen[v], true) {
            return Err(Error::ContractViolation(format!(
                "{who} returned an invalid vertex set {set:?}"
            )));
        }
    }
    Ok(())
}

fn density(g: &Graph, set: &[usize]) -> f64 {
    let pairs = choose2(set.len() as u64);
    if pairs == 0 {
        0.0
    } else {
        subgraph_edge_count(g, set) as f64 / pairs as f64
    }
}

/// Detector built on a `K`-subgraph finder: `H1` iff the density of the
/// returned set exceeds `(1 + ε)q`.
pub struct DksDetector<F> {
    finder: F,
    k: usize,
    threshold: f64,
}

/// Wraps `finder`, an `η`-approximation for the densest `K`-subgraph.
///
/// Requires `(1 − ε)c > (1 + ε)η` with `c = p/q`.
pub fn dks_detector<F>(finder: F, eta: f64, epsilon: f64, params: &PdsParams) -> Result<DksDetector<F>>
where
    F: Fn(&Graph, Seed) -> Result<Vec<usize>>,
{
    params.validate()?;
    if !(epsilon >= 0.0) || !(eta >= 1.0) {
        return Err(Error::params(format!("need eta >= 1 and epsilon >= 0, got eta={eta} epsilon={epsilon}")));
    }
    let holds = if params.q == 0.0 {
        params.p > 0.0 && epsilon < 1.0
    } else {
        (1.0 - epsilon) * (params.p / params.q) > (1.0 + epsilon) * eta
    };
    if !holds {
        return Err(Error::params(format!(
            "need (1-epsilon)*p/q > (1+epsilon)*eta, got p={} q={} epsilon={epsilon} eta={eta}",
            params.p, params.q
        )));
    }
    Ok(DksDetector {
        finder,
        k: params.k,
        threshold: (1.0 + epsilon) * params.q,
    })
}

impl<F> DksDetector<F>
where
    F: Fn(&Graph, Seed) -> Result<Vec<usize>>,
{
    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn decide(&self, g: &Graph, seed: Seed) -> Result<TestOutcome> {
        let set = (self.finder)(g, seed)?;
        check_output(&set, self.k, g.num_vertices(), "subgraph finder")?;
        Ok(TestOutcome::new(density(g, &set), self.threshold))
    }
}

/// `q + (1 − ε)²(p − q)/2`.
pub fn tau_recovery(q: f64, p: f64, epsilon: f64) -> f64 {
    q + (1.0 - epsilon).powi(2) * (p - q) / 2.0
}

/// Detector built on a recovery algorithm for the fixed-size model.
///
/// For a uniformly random vertex order `π`, graph `G_t` replaces vertex
/// `π(t)` of `G_{t−1}` by a fresh vertex joined to every other vertex with
/// probability `q`. The recovery algorithm runs on each `G_t`, and the test
/// declares `H1` iff some returned set `S_t` has more than `τ·C(K,2)` edges.
pub struct RecoveryDetector<F> {
    recover: F,
    params: PdsParams,
    edge_threshold: f64,
}

pub fn recovery_detector<F>(recover: F, params: &PdsParams, epsilon: f64) -> Result<RecoveryDetector<F>>
where
    F: Fn(&Graph, Seed) -> Result<Vec<usize>>,
{
    params.validate()?;
    if !(0.0..1.0).contains(&epsilon) {
        return Err(Error::params(format!("need 0 <= epsilon < 1, got {epsilon}")));
    }
    Ok(RecoveryDetector {
        recover,
        params: *params,
        edge_threshold: tau_recovery(params.q, params.p, epsilon) * choose2(params.k as u64) as f64,
    })
}

impl<F> RecoveryDetector<F>
where
    F: Fn(&Graph, Seed) -> Result<Vec<usize>>,
{
    /// Edge-count threshold `τ·C(K,2)`.
    pub fn edge_threshold(&self) -> f64 {
        self.edge_threshold
    }

    /// Runs the construction, stopping at the first `G_t` whose recovered
    /// set clears the threshold. The statistic is that set's edge count, or
    /// the maximum over all `t` when the decision is `H0`; either way the
    /// decision equals the one from the full pass.
    ///
    /// The order comes from stream 0 of `seed`, the fresh edges from
    /// stream 1 and the recovery call on `G_t` gets stream `t` of stream 2.
    pub fn decide(&self, g: &Graph, seed: Seed) -> Result<TestOutcome> {
        let n = g.num_vertices();
        if n != self.params.n {
            return Err(Error::VertexCountMismatch {
                expected: self.params.n,
                found: n,
            });
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(&mut seed.derive(0).rng());
        let edge_seed = seed.derive(1);
        let recover_seed = seed.derive(2);

        let mut current = g.clone();
        let mut best = 0u64;
        for (t, &v) in order.iter().enumerate() {
            current.isolate(v);
            let mut rng = edge_seed.derive(t as u64).rng();
            for w in (0..n).filter(|&w| w != v) {
                if rng.gen_bool(self.params.q) {
                    current.add_edge(v, w);
                }
            }
            let set = (self.recover)(&current, recover_seed.derive(t as u64))?;
            check_output(&set, self.params.k, n, "recovery algorithm")?;
            let edges = subgraph_edge_count(&current, &set);
            best = best.max(edges);
            if edges as f64 > self.edge_threshold {
                return Ok(TestOutcome::new(edges as f64, self.edge_threshold));
            }
        }
        Ok(TestOutcome {
            statistic: best as f64,
            threshold: self.edge_threshold,
            decision: Decision::H0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::detectors::{t_scan_exact, DEFAULT_SCAN_BUDGET};

    fn exact_finder(k: usize) -> impl Fn(&Graph, Seed) -> Result<Vec<usize>> {
        move |g, _| Ok(t_scan_exact(g, k, DEFAULT_SCAN_BUDGET)?.set)
    }

    #[test]
    fn recovery_threshold_fixture() {
        assert_eq!(tau_recovery(0.1, 0.2, 0.5), 0.1125);
    }

    #[test]
    fn dks_extremes() {
        let params = PdsParams::new(10, 4, 0.9, 0.1).unwrap();
        let det = dks_detector(exact_finder(4), 1.0, 0.2, &params).unwrap();
        assert_eq!(det.decide(&Graph::complete(10), Seed::new(0)).unwrap().decision, Decision::H1);
        assert_eq!(det.decide(&Graph::new(10), Seed::new(0)).unwrap().decision, Decision::H0);
    }

    #[test]
    fn dks_precondition() {
        let params = PdsParams::new(10, 4, 0.2, 0.1).unwrap();
        assert!(dks_detector(exact_finder(4), 1.0, 0.5, &params).is_err());
        assert!(dks_detector(exact_finder(4), 1.0, 0.1, &params).is_ok());
    }

    #[test]
    fn wrong_size_output_is_a_contract_violation() {
        let params = PdsParams::new(10, 4, 0.9, 0.1).unwrap();
        let det = dks_detector(|_: &Graph, _| Ok(vec![0, 1]), 1.0, 0.2, &params).unwrap();
        assert!(matches!(det.decide(&Graph::new(10), Seed::new(0)), Err(Error::ContractViolation(_))));
        let rec = recovery_detector(|_: &Graph, _| Ok(vec![0, 0, 1, 2]), &params, 0.5).unwrap();
        assert!(matches!(rec.decide(&Graph::new(10), Seed::new(0)), Err(Error::ContractViolation(_))));
    }

    #[test]
    fn recovery_on_empty_graph_with_no_fresh_edges() {
        let params = PdsParams::new(8, 3, 0.5, 0.0).unwrap();
        let rec = recovery_detector(|_: &Graph, _| Ok(vec![0, 1, 2]), &params, 0.5).unwrap();
        let out = rec.decide(&Graph::new(8), Seed::new(3)).unwrap();
        assert_eq!(out.decision, Decision::H0);
        assert_eq!(out.statistic, 0.0);
    }
}
