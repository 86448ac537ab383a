use serde::{Deserialize, Serialize};

use crate::graphs::PdsParams;
use crate::randkit::choose2;

/// Explicit upper bounds on the two error probabilities of a test.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorBound {
    pub type1: f64,
    pub type2: f64,
}

/// Smallest planted size treated as typical: `|S| ≥ ⌈0.9K⌉` fails with
/// probability at most `exp(−K/200)`.
fn typical_size(k: usize) -> u64 {
    (0.9 * k as f64).ceil() as u64
}

/// `exp(−(2A − B)²(p−q)² / (8D))` when `2A > B`, else the trivial bound 1.
fn chernoff_term(a: f64, b: f64, gap: f64, denom: f64) -> f64 {
    let excess = 2.0 * a - b;
    if excess <= 0.0 || denom <= 0.0 {
        return 1.0;
    }
    (-(excess * excess) * gap * gap / (8.0 * denom)).exp()
}

/// `exp(−num / den)`, or 1 when the exponent vanishes.
fn bernstein(num: f64, den: f64) -> f64 {
    if num <= 0.0 || den <= 0.0 {
        1.0
    } else {
        (-num / den).exp()
    }
}

/// Explicit error bounds for the linear test before constants are folded.
///
/// Type I: `exp(−(C(K,2)²(p−q)²/4) / (2C(N,2)q + C(K,2)(p−q)/3))`.
/// Type II: `exp(−K/200) + exp(−(2C(K′,2) − C(K,2))²(p−q)² / (8(C(N,2)q + C(K′,2)(p−q))))`
/// with `K′ = ⌈0.9K⌉`, clamped to 1.
pub fn error_bound_lin(params: &PdsParams) -> ErrorBound {
    let gap = params.p - params.q;
    let ck = choose2(params.k as u64) as f64;
    let cn = choose2(params.n as u64) as f64;
    let type1 = bernstein(ck * ck * gap * gap / 4.0, 2.0 * cn * params.q + ck * gap / 3.0);
    let ckp = choose2(typical_size(params.k)) as f64;
    let tail = chernoff_term(ckp, ck, gap, cn * params.q + ckp * gap);
    let type2 = ((-(params.k as f64) / 200.0).exp() + tail).min(1.0);
    ErrorBound { type1, type2 }
}

/// Explicit error bounds for the scan test before constants are folded.
///
/// Type I: `(Ne/K)^K · exp(−(C(K,2)²(p−q)²/4) / (2C(K,2)q + C(K,2)(p−q)/3))`.
/// Type II: `exp(−K/200) + exp(−(2C(K″,2) − C(K,2))²(p−q)² / (8C(K″,2)p))`
/// with `K″ = min(⌈0.9K⌉, K)`. Both clamped to 1.
pub fn error_bound_scan(params: &PdsParams) -> ErrorBound {
    let gap = params.p - params.q;
    let k = params.k as f64;
    let ck = choose2(params.k as u64) as f64;
    let ln_union = k * (params.n as f64 * std::f64::consts::E / k).ln();
    let exponent = if gap > 0.0 {
        (ck * ck * gap * gap / 4.0) / (2.0 * ck * params.q + ck * gap / 3.0)
    } else {
        0.0
    };
    let type1 = (ln_union - exponent).exp().min(1.0);
    let ckp = choose2(typical_size(params.k).min(params.k as u64)) as f64;
    let tail = chernoff_term(ckp, ck, gap, ckp * params.p);
    let type2 = ((-k / 200.0).exp() + tail).min(1.0);
    ErrorBound { type1, type2 }
}
