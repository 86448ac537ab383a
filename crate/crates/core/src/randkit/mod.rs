//! Seedable sampling primitives and exact arithmetic on finite PMFs.

mod pmf;
mod sample;
mod seed;

pub use pmf::{binom_pmf, chi2_divergence, hyper_pmf, ln_choose, ln_factorial, tv_distance, Pmf};
pub use sample::{sample_binomial, sample_pmf, BinomialSampler, PmfSampler, BINOMIAL_BLOCK};
pub use seed::{mix64, Seed, SeedRng, STREAM_MULTIPLIER};

/// Number of unordered pairs among `n` items.
#[inline]
pub fn choose2(n: u64) -> u64 {
    if n < 2 {
        0
    } else {
        n * (n - 1) / 2
    }
}

/// `C(n, k)` as a saturating 128-bit integer.
pub fn choose_u128(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc * (n - i) / (i + 1) stays integral at every step
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}
