use std::sync::OnceLock;

use super::compensated_sum;
use crate::error::{check_probability, Error, Result};

/// Entries above `-NEGATIVE_TOLERANCE` are treated as round-off and clamped.
pub(crate) const NEGATIVE_TOLERANCE: f64 = 1e-12;
/// Largest accepted |sum - 1| before renormalisation.
pub(crate) const NORMALIZATION_TOLERANCE: f64 = 1e-12;

/// Probability mass function on `{0, 1, ..., max_value}`.
///
/// Immutable after construction. Every entry is nonnegative and the entries
/// sum to one within `1e-12`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pmf {
    probs: Vec<f64>,
}

impl Pmf {
    /// Validates `probs` as a PMF.
    ///
    /// Negative entries down to `-1e-12` are clamped to zero and the vector is
    /// renormalised when the total is within `1e-12` of one; anything worse is
    /// a construction error.
    pub fn new(mut probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::params("empty probability vector"));
        }
        for (index, p) in probs.iter_mut().enumerate() {
            if p.is_nan() || *p < -NEGATIVE_TOLERANCE {
                return Err(Error::NegativeMass { index, value: *p });
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum = compensated_sum(probs.iter().copied());
        let deviation = (sum - 1.0).abs();
        if deviation > NORMALIZATION_TOLERANCE || !sum.is_finite() {
            return Err(Error::NotNormalized { sum, deviation });
        }
        if sum != 1.0 {
            probs.iter_mut().for_each(|p| *p /= sum);
        }
        Ok(Pmf { probs })
    }

    /// Normalises arbitrary nonnegative weights.
    pub fn from_weights(weights: Vec<f64>) -> Result<Self> {
        if let Some((index, &value)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| w.is_nan() || **w < 0.0)
        {
            return Err(Error::NegativeMass { index, value });
        }
        let total = compensated_sum(weights.iter().copied());
        if !(total > 0.0 && total.is_finite()) {
            return Err(Error::params("weights must have a positive finite total"));
        }
        Ok(Pmf {
            probs: weights.into_iter().map(|w| w / total).collect(),
        })
    }

    pub fn point_mass(at: usize) -> Self {
        let mut probs = vec![0.0; at + 1];
        probs[at] = 1.0;
        Pmf { probs }
    }

    pub fn max_value(&self) -> usize {
        self.probs.len() - 1
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// `P(m)`, zero outside the support.
    #[inline]
    pub fn get(&self, m: usize) -> f64 {
        self.probs.get(m).copied().unwrap_or(0.0)
    }

    /// `E[f(X)]` by exact summation.
    pub fn expect(&self, f: impl Fn(usize) -> f64) -> f64 {
        compensated_sum(
            self.probs
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0.0)
                .map(|(m, &p)| p * f(m)),
        )
    }

    pub fn mean(&self) -> f64 {
        self.expect(|m| m as f64)
    }

    /// `P(X >= m)`.
    pub fn tail(&self, m: usize) -> f64 {
        compensated_sum(self.probs.iter().skip(m).copied())
    }
}

fn small_ln_factorials() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut table = Vec::with_capacity(256);
        let (mut sum, mut comp) = (0.0f64, 0.0f64);
        table.push(0.0);
        for i in 1..256u32 {
            // Kahan accumulation of ln i
            let y = (i as f64).ln() - comp;
            let t = sum + y;
            comp = (t - sum) - y;
            sum = t;
            table.push(sum);
        }
        table
    })
}

/// `ln(n!)`: table below 256, Stirling series above.
pub fn ln_factorial(n: u64) -> f64 {
    if n < 256 {
        return small_ln_factorials()[n as usize];
    }
    let x = n as f64;
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    x * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI * x).ln() + series
}

/// `ln C(n, k)`; negative infinity when `k > n`.
pub fn ln_choose(n: u64, k: u64) -> f64 {
    if k > n {
        return f64::NEG_INFINITY;
    }
    ln_factorial(n) - ln_factorial(k) - ln_factorial(n - k)
}

/// Exponentiates log-weights relative to their maximum and normalises.
fn from_log_weights(logs: Vec<f64>) -> Pmf {
    let max = logs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let weights: Vec<f64> = logs
        .into_iter()
        .map(|l| if l == f64::NEG_INFINITY { 0.0 } else { (l - max).exp() })
        .collect();
    let total = compensated_sum(weights.iter().copied());
    Pmf {
        probs: weights.into_iter().map(|w| w / total).collect(),
    }
}

/// `Binom(n, p)` computed in log space.
pub fn binom_pmf(n: u64, p: f64) -> Result<Pmf> {
    check_probability(p)?;
    let len = n as usize + 1;
    if p == 0.0 {
        return Ok(Pmf::point_mass(0).padded(len));
    }
    if p == 1.0 {
        return Ok(Pmf::point_mass(n as usize));
    }
    let lp = p.ln();
    let lq = (-p).ln_1p();
    let logs = (0..=n)
        .map(|m| ln_choose(n, m) + m as f64 * lp + (n - m) as f64 * lq)
        .collect();
    Ok(from_log_weights(logs))
}

/// Number of successes among `draws` taken without replacement from a
/// population of `pop` containing `successes` marked items. The PMF is laid
/// out on `{0, ..., draws}`.
pub fn hyper_pmf(pop: u64, successes: u64, draws: u64) -> Result<Pmf> {
    if successes > pop || draws > pop {
        return Err(Error::params(format!(
            "hypergeometric needs successes, draws <= pop (got pop={pop}, successes={successes}, draws={draws})"
        )));
    }
    let lo = draws.saturating_sub(pop - successes);
    let hi = successes.min(draws);
    let total = ln_choose(pop, draws);
    let logs = (0..=draws)
        .map(|h| {
            if h < lo || h > hi {
                f64::NEG_INFINITY
            } else {
                ln_choose(successes, h) + ln_choose(pop - successes, draws - h) - total
            }
        })
        .collect();
    Ok(from_log_weights(logs))
}

impl Pmf {
    fn padded(mut self, len: usize) -> Self {
        if self.probs.len() < len {
            self.probs.resize(len, 0.0);
        }
        self
    }
}

/// `(1/2) * sum |a(m) - b(m)|`, supports padded with zeros.
pub fn tv_distance(a: &Pmf, b: &Pmf) -> f64 {
    let len = a.probs.len().max(b.probs.len());
    let half = 0.5 * compensated_sum((0..len).map(|m| (a.get(m) - b.get(m)).abs()));
    half.clamp(0.0, 1.0)
}

/// `sum (a(m) - b(m))^2 / b(m)`.
pub fn chi2_divergence(a: &Pmf, b: &Pmf) -> Result<f64> {
    let len = a.probs.len().max(b.probs.len());
    let mut terms = Vec::with_capacity(len);
    for m in 0..len {
        let (pa, pb) = (a.get(m), b.get(m));
        if pb == 0.0 {
            if pa > 0.0 {
                return Err(Error::AbsoluteContinuity { index: m });
            }
            continue;
        }
        let d = pa - pb;
        terms.push(d * d / pb);
    }
    Ok(compensated_sum(terms).max(0.0))
}
