use rand::Rng;

use super::pmf::{binom_pmf, Pmf};
use crate::error::{check_probability, Result};

/// Largest `n` for which a binomial is sampled from a single explicit PMF.
/// Larger `n` is split into blocks of this size and the block draws summed.
pub const BINOMIAL_BLOCK: u64 = 10_000;

/// Draws from `pmf` by walking its CDF.
pub fn sample_pmf<R: Rng + ?Sized>(pmf: &Pmf, rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    let mut last_positive = 0;
    for (m, &p) in pmf.probs().iter().enumerate() {
        if p > 0.0 {
            acc += p;
            last_positive = m;
            if u < acc {
                return m;
            }
        }
    }
    last_positive
}

/// Inversion sampler over a precomputed CDF.
///
/// Returns exactly what [`sample_pmf`] would for the same uniform draw, but
/// finds the crossing point by binary search.
#[derive(Clone, Debug)]
pub struct PmfSampler {
    cdf: Vec<f64>,
    last_positive: usize,
}

impl PmfSampler {
    pub fn new(pmf: &Pmf) -> Self {
        let mut acc = 0.0;
        let mut last_positive = 0;
        let cdf = pmf
            .probs()
            .iter()
            .enumerate()
            .map(|(m, &p)| {
                if p > 0.0 {
                    acc += p;
                    last_positive = m;
                }
                acc
            })
            .collect();
        PmfSampler { cdf, last_positive }
    }

    #[inline]
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        self.cdf.partition_point(|&c| c <= u).min(self.last_positive)
    }
}

#[derive(Clone, Debug)]
enum BinomialKind {
    Constant(u64),
    Blocks {
        full_blocks: u64,
        block: PmfSampler,
        remainder: Option<PmfSampler>,
    },
}

/// Exact `Binom(n, p)` sampler.
///
/// For `n <= BINOMIAL_BLOCK` a single CDF inversion; above that, the sum of
/// independent inversions over blocks of at most `BINOMIAL_BLOCK` trials,
/// which has exactly the same law.
#[derive(Clone, Debug)]
pub struct BinomialSampler {
    kind: BinomialKind,
}

impl BinomialSampler {
    pub fn new(n: u64, p: f64) -> Result<Self> {
        check_probability(p)?;
        let kind = if n == 0 || p == 0.0 {
            BinomialKind::Constant(0)
        } else if p == 1.0 {
            BinomialKind::Constant(n)
        } else {
            let block_size = n.min(BINOMIAL_BLOCK);
            let full_blocks = n / block_size;
            let rem = n % block_size;
            BinomialKind::Blocks {
                full_blocks,
                block: PmfSampler::new(&binom_pmf(block_size, p)?),
                remainder: if rem > 0 {
                    Some(PmfSampler::new(&binom_pmf(rem, p)?))
                } else {
                    None
                },
            }
        };
        Ok(BinomialSampler { kind })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        match &self.kind {
            BinomialKind::Constant(c) => *c,
            BinomialKind::Blocks {
                full_blocks,
                block,
                remainder,
            } => {
                let mut total = 0u64;
                for _ in 0..*full_blocks {
                    total += block.sample(rng) as u64;
                }
                if let Some(r) = remainder {
                    total += r.sample(rng) as u64;
                }
                total
            }
        }
    }
}

/// One exact `Binom(n, p)` draw. Builds the sampler on every call; hold a
/// [`BinomialSampler`] when drawing repeatedly.
pub fn sample_binomial<R: Rng + ?Sized>(n: u64, p: f64, rng: &mut R) -> Result<u64> {
    Ok(BinomialSampler::new(n, p)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randkit::Seed;

    #[test]
    fn point_mass_always_returned() {
        let pmf = Pmf::point_mass(3);
        let mut rng = Seed::new(1).rng();
        assert!((0..1000).all(|_| sample_pmf(&pmf, &mut rng) == 3));
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let pmf = Pmf::new(vec![0.5, 0.5]).unwrap();
        let draw = |s| {
            let mut rng = Seed::new(s).rng();
            (0..64).map(|_| sample_pmf(&pmf, &mut rng)).collect::<Vec<_>>()
        };
        assert_eq!(draw(9), draw(9));
        assert_ne!(draw(9), draw(10));
    }

    #[test]
    fn walk_and_binary_search_agree() {
        let pmf = binom_pmf(30, 0.37).unwrap();
        let sampler = PmfSampler::new(&pmf);
        let mut a = Seed::new(5).rng();
        let mut b = Seed::new(5).rng();
        for _ in 0..10_000 {
            assert_eq!(sample_pmf(&pmf, &mut a), sampler.sample(&mut b));
        }
    }

    #[test]
    fn empirical_frequencies_within_clt_band() {
        let pmf = Pmf::new(vec![0.1, 0.0, 0.25, 0.4, 0.25]).unwrap();
        let sampler = PmfSampler::new(&pmf);
        let draws = 1_000_000;
        let mut counts = [0u64; 5];
        let mut rng = Seed::new(2024).rng();
        for _ in 0..draws {
            counts[sampler.sample(&mut rng)] += 1;
        }
        assert_eq!(counts[1], 0);
        for (m, &c) in counts.iter().enumerate() {
            let p = pmf.get(m);
            let band = 4.0 * (p * (1.0 - p) / draws as f64).sqrt();
            assert!((c as f64 / draws as f64 - p).abs() <= band, "m={m}");
        }
    }

    #[test]
    fn degenerate_binomials() {
        let mut rng = Seed::new(3).rng();
        assert_eq!(sample_binomial(50, 0.0, &mut rng).unwrap(), 0);
        assert_eq!(sample_binomial(50, 1.0, &mut rng).unwrap(), 50);
        assert_eq!(sample_binomial(0, 0.3, &mut rng).unwrap(), 0);
        assert!(sample_binomial(5, 2.0, &mut rng).is_err());
    }

    #[test]
    fn large_n_blocked_mean() {
        let sampler = BinomialSampler::new(1_000_000, 1e-5).unwrap();
        let mut rng = Seed::new(77).rng();
        let draws = 100_000;
        let mean = (0..draws).map(|_| sampler.sample(&mut rng) as f64).sum::<f64>() / draws as f64;
        assert!((mean - 10.0).abs() < 0.5, "mean {mean}");
    }

    #[test]
    fn blocked_and_single_block_agree_in_distribution() {
        // n = 25_000 uses two full blocks plus a remainder
        let sampler = BinomialSampler::new(25_000, 0.2).unwrap();
        let mut rng = Seed::new(8).rng();
        let draws = 20_000;
        let xs: Vec<f64> = (0..draws).map(|_| sampler.sample(&mut rng) as f64).collect();
        let mean = xs.iter().sum::<f64>() / draws as f64;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (draws - 1) as f64;
        assert!((mean - 5000.0).abs() < 4.0 * (4000.0f64 / draws as f64).sqrt());
        assert!((var / 4000.0 - 1.0).abs() < 0.05);
    }
}
