//! Detection statistics, thresholds and tests, with Monte Carlo error estimation.

mod bounds;
mod derived;
mod montecarlo;
mod scan;

pub use bounds::{error_bound_lin, error_bound_scan, ErrorBound};
pub use derived::{dks_detector, recovery_detector, tau_recovery, DksDetector, RecoveryDetector};
pub use montecarlo::{estimate_errors, ci_radius, ErrorEstimate};
pub use scan::{t_scan_exact, t_scan_heuristic, ScanMode, ScanResult, DEFAULT_SCAN_BUDGET};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graphs::{Graph, PdsParams};
use crate::randkit::{choose2, Seed};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Decision {
    H0,
    H1,
}

impl Decision {
    /// `H1` iff `statistic > threshold`; ties go to `H0`.
    pub fn from_threshold(statistic: f64, threshold: f64) -> Self {
        if statistic > threshold {
            Decision::H1
        } else {
            Decision::H0
        }
    }

    pub fn is_h1(self) -> bool {
        self == Decision::H1
    }
}

impl From<bool> for Decision {
    fn from(h1: bool) -> Self {
        if h1 {
            Decision::H1
        } else {
            Decision::H0
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: f64,
    pub threshold: f64,
    pub decision: Decision,
}

impl TestOutcome {
    pub fn new(statistic: f64, threshold: f64) -> Self {
        TestOutcome {
            statistic,
            threshold,
            decision: Decision::from_threshold(statistic, threshold),
        }
    }
}

/// Total edge count.
pub fn t_lin(g: &Graph) -> u64 {
    g.num_edges() as u64
}

/// `C(N,2)·q + C(K,2)·(p − q)/2`.
pub fn tau_lin(params: &PdsParams) -> f64 {
    choose2(params.n as u64) as f64 * params.q + choose2(params.k as u64) as f64 * (params.p - params.q) / 2.0
}

/// `C(K,2)·(p + q)/2`.
pub fn tau_scan(k: usize, p: f64, q: f64) -> f64 {
    choose2(k as u64) as f64 * (p + q) / 2.0
}

pub fn linear_test(g: &Graph, params: &PdsParams) -> TestOutcome {
    TestOutcome::new(t_lin(g) as f64, tau_lin(params))
}

pub fn scan_test(g: &Graph, params: &PdsParams, mode: &ScanMode, seed: Seed) -> Result<TestOutcome> {
    let scan = mode.run(g, params.k, seed)?;
    Ok(TestOutcome::new(scan.value as f64, tau_scan(params.k, params.p, params.q)))
}

/// Both component tests of the combined detector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CombinedOutcome {
    pub lin: TestOutcome,
    pub scan: TestOutcome,
    pub decision: Decision,
}

/// `H1` iff `T_lin > τ1` or `T_scan > τ2`.
///
/// `seed` only matters for the heuristic scan.
pub fn combined_test(g: &Graph, params: &PdsParams, mode: &ScanMode, seed: Seed) -> Result<CombinedOutcome> {
    params.validate()?;
    let lin = linear_test(g, params);
    let scan = scan_test(g, params, mode, seed)?;
    Ok(CombinedOutcome {
        lin,
        scan,
        decision: (lin.decision.is_h1() || scan.decision.is_h1()).into(),
    })
}

/// Largest `N` for which [`is_monotone`] enumerates every graph.
pub const MONOTONE_MAX_VERTICES: usize = 5;

/// Checks that `test` never goes from `H1` to `H0` when a single edge is
/// added, over every graph on `n` vertices.
pub fn is_monotone<F>(test: F, n: usize) -> Result<bool>
where
    F: Fn(&Graph) -> Result<Decision>,
{
    if n > MONOTONE_MAX_VERTICES {
        return Err(Error::TooLarge(format!(
            "exhaustive monotonicity check needs N <= {MONOTONE_MAX_VERTICES}, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let graphs = 1usize << pairs.len();
    let decisions = (0..graphs)
        .map(|mask| {
            let edges = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
            test(&Graph::from_edges(n, edges)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((0..graphs).all(|mask| {
        !decisions[mask].is_h1() || (0..pairs.len()).all(|b| decisions[mask | 1 << b].is_h1())
    }))
}
