use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use super::m0_of;
use crate::error::{check_probability, Error, Result};
use crate::randkit::{binom_pmf, compensated_sum, BinomialSampler, Pmf, PmfSampler};

/// Deliberate corruption of the kernel construction, for exercising the
/// verification harness end to end.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KernelFault {
    /// Subtract the correction term at zero instead of adding it.
    FlipATerm,
}

fn check_gamma(gamma: f64) -> Result<()> {
    if !(gamma > 0.0 && gamma <= 0.5) {
        return Err(Error::params(format!("gamma must lie in (0, 1/2], got {gamma}")));
    }
    Ok(())
}

fn check_edge_probability(q: f64) -> Result<()> {
    check_probability(q)?;
    if 2.0 * q > 1.0 {
        return Err(Error::params(format!("need p = 2q <= 1, got q={q}")));
    }
    Ok(())
}

/// The modified alternative law `P′` on `0..=ls·lt`, and the correction term `a`.
///
/// `P′` keeps `Binom(ls·lt, 2q)` on `1..=m0`, replaces the tail above `m0`
/// by `Binom(ls·lt, q)/γ`, and moves the difference `a` to zero.
pub fn build_pprime(ls: u64, lt: u64, q: f64, gamma: f64) -> Result<(Pmf, f64)> {
    build_pprime_with(ls, lt, q, gamma, None)
}

#[doc(hidden)]
pub fn build_pprime_with(ls: u64, lt: u64, q: f64, gamma: f64, fault: Option<KernelFault>) -> Result<(Pmf, f64)> {
    check_gamma(gamma)?;
    check_edge_probability(q)?;
    let slots = ls * lt;
    let m0 = m0_of(gamma)? as usize;
    let p_law = binom_pmf(slots, 2.0 * q)?;
    let q_law = binom_pmf(slots, q)?;
    let tail = (m0 + 1)..=slots as usize;
    let a = compensated_sum(tail.clone().map(|m| p_law.get(m) - q_law.get(m) / gamma));
    let mut probs = p_law.probs().to_vec();
    probs[0] += match fault {
        Some(KernelFault::FlipATerm) => -a,
        None => a,
    };
    for m in tail {
        probs[m] = q_law.get(m) / gamma;
    }
    Ok((Pmf::new(probs)?, a))
}

/// `Q′ = (Binom(ls·lt, q) − γP′)/(1 − γ)`.
pub fn build_qprime(ls: u64, lt: u64, q: f64, gamma: f64) -> Result<Pmf> {
    let (pprime, _) = build_pprime(ls, lt, q, gamma)?;
    qprime_from(&pprime, ls * lt, q, gamma)
}

fn qprime_from(pprime: &Pmf, slots: u64, q: f64, gamma: f64) -> Result<Pmf> {
    let m0 = m0_of(gamma)? as usize;
    let q_law = binom_pmf(slots, q)?;
    let probs = (0..=slots as usize)
        .map(|m| {
            if m > m0 {
                // Q(m) − γ·Q(m)/γ vanishes identically.
                0.0
            } else {
                (q_law.get(m) - gamma * pprime.get(m)) / (1.0 - gamma)
            }
        })
        .collect();
    Pmf::new(probs)
}

/// `P′`, `Q′` and `a` for one product `ls·lt`, with inversion samplers.
#[derive(Debug)]
pub struct Kernel {
    pub pprime: Pmf,
    pub qprime: Pmf,
    pub a: f64,
    pprime_sampler: PmfSampler,
    qprime_sampler: PmfSampler,
}

impl Kernel {
    fn build(slots: u64, q: f64, gamma: f64, fault: Option<KernelFault>) -> Result<Self> {
        let (pprime, a) = build_pprime_with(slots, 1, q, gamma, fault)?;
        let qprime = qprime_from(&pprime, slots, q, gamma)?;
        Ok(Kernel {
            pprime_sampler: PmfSampler::new(&pprime),
            qprime_sampler: PmfSampler::new(&qprime),
            pprime,
            qprime,
            a,
        })
    }

    /// Draws from `P′` when the parent pair is an edge, else from `Q′`.
    #[inline]
    pub fn sample<R: rand::Rng + ?Sized>(&self, parent_edge: bool, rng: &mut R) -> u64 {
        if parent_edge {
            self.pprime_sampler.sample(rng) as u64
        } else {
            self.qprime_sampler.sample(rng) as u64
        }
    }
}

/// Lazily built, thread-safe cache of kernels keyed by `ls·lt` (the laws
/// depend on the two part sizes only through their product), plus
/// `Binom(slots, q)` samplers for diagonal and oversize blocks.
#[derive(Debug)]
pub struct KernelTable {
    q: f64,
    gamma: f64,
    fault: Option<KernelFault>,
    kernels: RwLock<HashMap<u64, Arc<Kernel>>>,
    nulls: RwLock<HashMap<u64, Arc<BinomialSampler>>>,
}

impl KernelTable {
    pub fn new(q: f64, gamma: f64) -> Result<Self> {
        Self::with_fault(q, gamma, None)
    }

    #[doc(hidden)]
    pub fn with_fault(q: f64, gamma: f64, fault: Option<KernelFault>) -> Result<Self> {
        check_gamma(gamma)?;
        check_edge_probability(q)?;
        Ok(KernelTable {
            q,
            gamma,
            fault,
            kernels: RwLock::default(),
            nulls: RwLock::default(),
        })
    }

    pub fn kernel(&self, ls: u64, lt: u64) -> Result<Arc<Kernel>> {
        let slots = ls * lt;
        if let Some(k) = self.kernels.read().unwrap().get(&slots) {
            return Ok(Arc::clone(k));
        }
        let built = Arc::new(Kernel::build(slots, self.q, self.gamma, self.fault)?);
        Ok(Arc::clone(self.kernels.write().unwrap().entry(slots).or_insert(built)))
    }

    /// Sampler for `Binom(slots, q)`.
    pub fn null(&self, slots: u64) -> Result<Arc<BinomialSampler>> {
        if let Some(s) = self.nulls.read().unwrap().get(&slots) {
            return Ok(Arc::clone(s));
        }
        let built = Arc::new(BinomialSampler::new(slots, self.q)?);
        Ok(Arc::clone(self.nulls.write().unwrap().entry(slots).or_insert(built)))
    }

    /// Number of distinct products materialized so far.
    pub fn len(&self) -> usize {
        self.kernels.read().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::randkit::tv_distance;

    #[test]
    fn single_slot_kernel_is_unmodified() {
        for &q in &[0.001, 0.01, 0.1, 0.25] {
            let (pp, a) = build_pprime(1, 1, q, 0.5).unwrap();
            assert_eq!(a, 0.0);
            assert_eq!(pp, binom_pmf(1, 2.0 * q).unwrap());
        }
    }

    #[test]
    fn a_term_fixture() {
        // Tail sum over m = 2..4 of Binom(4, 0.02)(m) − 2·Binom(4, 0.01)(m), expanded by hand.
        let p_tail = 6.0 * 0.02f64.powi(2) * 0.98f64.powi(2) + 4.0 * 0.02f64.powi(3) * 0.98 + 0.02f64.powi(4);
        let q_tail = 6.0 * 0.01f64.powi(2) * 0.99f64.powi(2) + 4.0 * 0.01f64.powi(3) * 0.99 + 0.01f64.powi(4);
        let (_, a) = build_pprime(2, 2, 0.01, 0.5).unwrap();
        assert!((a - (p_tail - 2.0 * q_tail)).abs() < 1e-15);
        assert!((a - 1.15242e-3).abs() < 1e-8);
    }

    #[test]
    fn qprime_fixture() {
        let qp = build_qprime(1, 1, 0.1, 0.5).unwrap();
        assert!((qp.get(0) - 1.0).abs() < 1e-15);
        assert!(qp.get(1).abs() < 1e-15);
    }

    #[test]
    fn mixture_identity() {
        let (pp, _) = build_pprime(2, 2, 0.01, 0.5).unwrap();
        let qp = build_qprime(2, 2, 0.01, 0.5).unwrap();
        let target = binom_pmf(4, 0.01).unwrap();
        for m in 0..=4 {
            assert!((0.5 * qp.get(m) + 0.5 * pp.get(m) - target.get(m)).abs() < 1e-12);
        }
    }

    #[test]
    fn small_gamma_leaves_null_nearly_untouched() {
        let gamma = 2f64.powi(-10);
        let qp = build_qprime(1, 1, 0.01, gamma).unwrap();
        assert!(tv_distance(&qp, &binom_pmf(1, 0.01).unwrap()) <= 10.0 * gamma);
    }

    #[test]
    fn invalid_regime_is_reported() {
        assert!(matches!(build_qprime(4, 4, 0.2, 0.5), Err(Error::NegativeMass { .. })));
        assert!(build_pprime(1, 1, 0.01, 0.6).is_err());
        assert!(build_pprime(1, 1, 0.6, 0.5).is_err());
    }

    #[test]
    fn flipped_a_term_breaks_normalization() {
        let r = build_pprime_with(2, 2, 0.01, 0.5, Some(KernelFault::FlipATerm));
        assert!(matches!(r, Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn table_memoizes_by_product() {
        let table = KernelTable::new(0.01, 0.5).unwrap();
        let a = table.kernel(2, 3).unwrap();
        let b = table.kernel(3, 2).unwrap();
        assert!(Arc::ptr_eq(&a, &b));
        table.kernel(1, 6).unwrap();
        assert_eq!(table.len(), 1);
        table.kernel(2, 2).unwrap();
        assert_eq!(table.len(), 2);
    }
}
