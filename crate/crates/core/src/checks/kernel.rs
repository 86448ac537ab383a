use serde::{Deserialize, Serialize};
use serde_json::json;

use super::CheckReport;
use crate::randkit::{binom_pmf, tv_distance};
use crate::reduction::{m0_of, KernelFault, KernelTable};

/// One kernel configuration: part sizes, nominal part-size scale `ℓ`
/// (with `ls, lt ≤ 2ℓ`), edge probability `q` and clique density `γ`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelPoint {
    pub ls: u64,
    pub lt: u64,
    pub ell: u64,
    pub q: f64,
    pub gamma: f64,
}

impl KernelPoint {
    fn params(&self) -> serde_json::Value {
        json!({"ls": self.ls, "lt": self.lt, "ell": self.ell, "q": self.q, "gamma": self.gamma})
    }

    /// `16qℓ² ≤ 1` and `ls, lt ≤ 2ℓ`.
    pub fn in_valid_regime(&self) -> bool {
        let ell = self.ell as f64;
        16.0 * self.q * ell * ell <= 1.0 && self.ls.max(self.lt) <= 2 * self.ell
    }
}

/// Part sizes `1..=6` on both sides, `q ∈ {10⁻³, 10⁻²}`, `γ ∈ {1/2, 1/4}`,
/// with `ℓ = max(ls, lt)`, keeping the points with `16qℓ² ≤ 1`.
pub fn default_kernel_grid() -> Vec<KernelPoint> {
    let mut grid = Vec::new();
    for &q in &[1e-3, 1e-2] {
        for &gamma in &[0.5, 0.25] {
            for ls in 1..=6 {
                for lt in 1..=6 {
                    let point = KernelPoint {
                        ls,
                        lt,
                        ell: ls.max(lt),
                        q,
                        gamma,
                    };
                    if point.in_valid_regime() {
                        grid.push(point);
                    }
                }
            }
        }
    }
    grid
}

pub const MIXTURE_TOLERANCE: f64 = 1e-12;

/// Largest pointwise gap between `(1−γ)Q′ + γP′` and `Binom(ls·lt, q)`;
/// satisfied iff at most `1e-12`.
pub fn check_mixture_identity(grid: &[KernelPoint]) -> Vec<CheckReport> {
    check_mixture_identity_with(grid, None)
}

#[doc(hidden)]
pub fn check_mixture_identity_with(grid: &[KernelPoint], fault: Option<KernelFault>) -> Vec<CheckReport> {
    const NAME: &str = "check_mixture_identity";
    grid.iter()
        .map(|pt| {
            let result = KernelTable::with_fault(pt.q, pt.gamma, fault)
                .and_then(|t| t.kernel(pt.ls, pt.lt))
                .and_then(|kernel| {
                    let target = binom_pmf(pt.ls * pt.lt, pt.q)?;
                    let dev = (0..=(pt.ls * pt.lt) as usize)
                        .map(|m| {
                            ((1.0 - pt.gamma) * kernel.qprime.get(m) + pt.gamma * kernel.pprime.get(m) - target.get(m)).abs()
                        })
                        .fold(0.0, f64::max);
                    Ok(dev)
                });
            match result {
                Ok(dev) => CheckReport::with_tolerance(NAME, pt.params(), dev, MIXTURE_TOLERANCE, 0.0),
                Err(e) => CheckReport::failed(NAME, pt.params(), &e),
            }
        })
        .collect()
}

/// `tv(P′, Binom(ls·lt, 2q)) ≤ 4(8qℓ²)^{m0+1}`.
pub fn check_pprime_tv(grid: &[KernelPoint]) -> Vec<CheckReport> {
    check_pprime_tv_with(grid, None)
}

#[doc(hidden)]
pub fn check_pprime_tv_with(grid: &[KernelPoint], fault: Option<KernelFault>) -> Vec<CheckReport> {
    const NAME: &str = "check_pprime_tv";
    grid.iter()
        .map(|pt| {
            let result = KernelTable::with_fault(pt.q, pt.gamma, fault)
                .and_then(|t| t.kernel(pt.ls, pt.lt))
                .and_then(|kernel| {
                    let lhs = tv_distance(&kernel.pprime, &binom_pmf(pt.ls * pt.lt, 2.0 * pt.q)?);
                    let ell = pt.ell as f64;
                    let rhs = 4.0 * (8.0 * pt.q * ell * ell).powi(m0_of(pt.gamma)? as i32 + 1);
                    Ok((lhs, rhs))
                });
            match result {
                Ok((lhs, rhs)) => CheckReport::new(NAME, pt.params(), lhs, rhs),
                Err(e) => CheckReport::failed(NAME, pt.params(), &e),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(ls: u64, lt: u64, ell: u64, q: f64, gamma: f64) -> KernelPoint {
        KernelPoint { ls, lt, ell, q, gamma }
    }

    #[test]
    fn trivial_support_has_zero_deviation() {
        let r = &check_mixture_identity(&[pt(1, 1, 1, 0.01, 0.5)])[0];
        assert!(r.satisfied);
        assert_eq!(r.lhs, 0.0);
        let r = &check_pprime_tv(&[pt(1, 1, 1, 0.01, 0.5)])[0];
        assert_eq!(r.lhs, 0.0);
    }

    #[test]
    fn tv_fixture() {
        let r = &check_pprime_tv(&[pt(2, 2, 2, 0.01, 0.5)])[0];
        assert!((r.rhs - 0.4096).abs() < 1e-15);
        assert!(r.satisfied && r.lhs >= 0.0);
    }

    #[test]
    fn violated_precondition_is_surfaced() {
        let r = &check_mixture_identity(&[pt(4, 4, 2, 0.2, 0.5)])[0];
        assert!(!r.satisfied);
        assert!(r.error.is_some());
    }

    #[test]
    fn grid_shape() {
        let grid = default_kernel_grid();
        // q = 1e-3 keeps all 36 size pairs; q = 1e-2 keeps max(ls, lt) <= 2.
        assert_eq!(grid.len(), 2 * 36 + 2 * 4);
        assert!(check_mixture_identity(&grid).iter().all(|r| r.satisfied));
        assert!(check_pprime_tv(&grid).iter().all(|r| r.satisfied));
    }

    #[test]
    fn fault_fails_mixture_check() {
        let reports = check_mixture_identity_with(&[pt(2, 2, 2, 0.01, 0.5)], Some(KernelFault::FlipATerm));
        assert!(!reports[0].satisfied);
    }
}
