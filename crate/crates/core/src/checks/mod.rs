//! Numeric verification of the identities and inequalities behind the
//! detectors and the reduction, by exact enumeration at small sizes.

mod kernel;
mod laws;
mod lemmas;
mod report;

#[doc(hidden)]
pub use kernel::{check_mixture_identity_with, check_pprime_tv_with};
pub use kernel::{check_mixture_identity, check_pprime_tv, default_kernel_grid, KernelPoint, MIXTURE_TOLERANCE};
pub use laws::{
    bipartite_er_law, bipartite_mask, bipartite_reduction_law_exact, er_law, fixed_pds_law, graph_from_mask,
    graph_mask, law_chi2, law_tv, pair_index, pds_law, placement_law, reduction_law_exact, InputLaw,
    EXACT_OUTCOME_BUDGET,
};
pub use lemmas::{
    check_binom_dominance, check_decoupling, check_negative_association, check_negative_association_with,
    chi2_planted_vs_null_brute, chi2_planted_vs_null_exact, hyper_mgf, hyper_mgf_sweep, Monotone, NA_BATTERY,
    NA_MAX_BALLS, NA_MAX_BINS,
};
pub use report::{CheckReport, DEFAULT_TOLERANCE};

use std::str::FromStr;

use serde_json::json;

use crate::error::{Error, Result};
use crate::reduction::{KernelFault, ReductionParams};

/// Named groups of checks.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Battery {
    Kernel,
    Lemmas,
    ReductionExact,
    All,
}

impl FromStr for Battery {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kernel" => Ok(Battery::Kernel),
            "lemmas" => Ok(Battery::Lemmas),
            "reduction-exact" => Ok(Battery::ReductionExact),
            "all" => Ok(Battery::All),
            other => Err(Error::params(format!(
                "unknown battery {other:?}; expected kernel, lemmas, reduction-exact or all"
            ))),
        }
    }
}

/// Bound on `E[exp(λH²)]` recorded for the boundedness sweep at `b = 0.01`.
pub const HYPER_MGF_SWEEP_BOUND: f64 = 1.5;

/// Total-variation tolerance for exact null-law comparisons.
pub const EXACT_TV_TOLERANCE: f64 = 1e-12;

fn push_result(out: &mut Vec<CheckReport>, name: &str, params: serde_json::Value, r: Result<Vec<CheckReport>>) {
    match r {
        Ok(reports) => out.extend(reports),
        Err(e) => out.push(CheckReport::failed(name, params, &e)),
    }
}

fn kernel_battery(fault: Option<KernelFault>) -> Vec<CheckReport> {
    let grid = default_kernel_grid();
    let mut out = check_mixture_identity_with(&grid, fault);
    out.extend(check_pprime_tv_with(&grid, fault));
    out
}

fn lemma_battery() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for ell in 1..=12u64 {
        for i in 1..=9 {
            let tau = i as f64 / 10.0;
            let params = json!({"ell": ell, "tau": tau});
            push_result(
                &mut out,
                "check_decoupling",
                params,
                check_decoupling(ell, tau, 1.0 / (16.0 * ell as f64)).map(|r| vec![r]),
            );
        }
    }
    for &(big_k, k, ell) in &[(17u64, 17u64, 1u64), (66, 33, 2)] {
        push_result(
            &mut out,
            "check_binom_dominance",
            json!({"K": big_k, "k": k, "ell": ell}),
            check_binom_dominance(big_k, k, ell),
        );
    }
    for bins in 1..=NA_MAX_BINS {
        for balls in 1..=NA_MAX_BALLS {
            push_result(
                &mut out,
                "check_negative_association",
                json!({"k": bins, "S_size": balls}),
                check_negative_association(bins, balls),
            );
        }
    }
    for n in 1..=4usize {
        for kp in 1..=n {
            for &p in &[0.25, 0.5] {
                for &q in &[0.25, 0.5] {
                    let params = json!({"N": n, "Kp": kp, "p": p, "q": q});
                    let r = chi2_planted_vs_null_exact(n, kp, p, q).and_then(|identity| {
                        let brute = chi2_planted_vs_null_brute(n, kp, p, q)?;
                        Ok(vec![CheckReport::with_tolerance(
                            "chi2_identity",
                            params.clone(),
                            (identity - brute).abs(),
                            DEFAULT_TOLERANCE,
                            0.0,
                        )])
                    });
                    push_result(&mut out, "chi2_identity", params, r);
                }
            }
        }
    }
    push_result(
        &mut out,
        "hyper_mgf_sweep",
        json!({"b": 0.01}),
        hyper_mgf_sweep(0.01).map(|worst| {
            vec![CheckReport::new("hyper_mgf_sweep", json!({"b": 0.01}), worst, HYPER_MGF_SWEEP_BOUND)]
        }),
    );
    out
}

fn exact_null_report(name: &str, n: usize, ell: usize, gamma: f64, q: f64, bipartite: bool) -> CheckReport {
    let params = json!({"n": n, "ell": ell, "gamma": gamma, "q": q});
    let r = ReductionParams::new(n, 1, gamma, ell, q, false).and_then(|rp| {
        let big_n = rp.big_n();
        if bipartite {
            let law = bipartite_reduction_law_exact(&rp, &InputLaw::bipartite_er(n, gamma))?;
            Ok(law_tv(&law, &bipartite_er_law(big_n, big_n, q)?))
        } else {
            let law = reduction_law_exact(&rp, &InputLaw::er(n, gamma))?;
            Ok(law_tv(&law, &er_law(big_n, q)?))
        }
    });
    match r {
        Ok(tv) => CheckReport::with_tolerance(name, params, tv, EXACT_TV_TOLERANCE, 0.0),
        Err(e) => CheckReport::failed(name, params, &e),
    }
}

fn reduction_battery() -> Vec<CheckReport> {
    let mut out = Vec::new();
    for &gamma in &[0.5, 0.25] {
        for &q in &[0.01, 0.001] {
            out.push(exact_null_report("reduction_null_exact", 2, 2, gamma, q, false));
        }
    }
    out.push(exact_null_report("reduction_null_exact", 3, 1, 0.5, 0.05, false));
    out.push(exact_null_report("bipartite_reduction_null_exact", 2, 2, 0.5, 0.01, true));
    out
}

/// Runs a battery. A fault, if given, is injected into every kernel built
/// by the kernel checks.
pub fn run_battery(battery: Battery, fault: Option<KernelFault>) -> Vec<CheckReport> {
    match battery {
        Battery::Kernel => kernel_battery(fault),
        Battery::Lemmas => lemma_battery(),
        Battery::ReductionExact => reduction_battery(),
        Battery::All => {
            let mut out = kernel_battery(fault);
            out.extend(lemma_battery());
            out.extend(reduction_battery());
            out
        }
    }
}
