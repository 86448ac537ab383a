//! Randomized reduction from planted clique to planted dense subgraph,
//! with its error bound, parameter map and regime boundaries.

mod kernel;
mod reducer;

pub use kernel::{build_pprime, build_qprime, Kernel, KernelTable};
#[doc(hidden)]
pub use kernel::{build_pprime_with, KernelFault};
pub use reducer::{assign_parents, floyd_sample, reduce_bipartite, reduce_graph, Reducer};

use serde::{Deserialize, Serialize};

use crate::detectors::Decision;
use crate::error::{check_probability, Error, Result};
use crate::graphs::Graph;
use crate::randkit::Seed;

/// `⌊log2(1/γ)⌋` for `γ ∈ (0, 1/2]`.
///
/// Doubling a float is exact, so the loop finds the largest `m` with
/// `2^m·γ ≤ 1` without any rounding at the boundary.
pub fn m0_of(gamma: f64) -> Result<u32> {
    if !(gamma > 0.0 && gamma <= 0.5) {
        return Err(Error::params(format!("gamma must lie in (0, 1/2], got {gamma}")));
    }
    let mut x = gamma;
    let mut m = 0;
    while x * 2.0 <= 1.0 {
        x *= 2.0;
        m += 1;
    }
    Ok(m)
}

/// Parameters `(n, k, γ, ℓ, q)` of the reduction, with derived `N = nℓ`,
/// `K = kℓ`, `p = 2q` and `m0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReductionParams {
    pub n: usize,
    pub k: usize,
    pub gamma: f64,
    pub ell: usize,
    pub q: f64,
    /// Refuse to run unless both guarantee conditions hold.
    pub strict: bool,
}

/// Whether the two conditions behind the reduction's guarantees hold.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Conditions {
    /// `16qℓ² ≤ 1`: the modified kernels are probability laws.
    pub kernel_validity: bool,
    /// `k ≥ 6eℓ`: needed for the total-variation bound.
    pub clique_size: bool,
}

impl Conditions {
    pub fn all(&self) -> bool {
        self.kernel_validity && self.clique_size
    }
}

impl ReductionParams {
    pub fn new(n: usize, k: usize, gamma: f64, ell: usize, q: f64, strict: bool) -> Result<Self> {
        let params = ReductionParams {
            n,
            k,
            gamma,
            ell,
            q,
            strict,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.ell == 0 {
            return Err(Error::params(format!("need n, ell >= 1, got n={} ell={}", self.n, self.ell)));
        }
        if self.k < 1 || self.k > self.n {
            return Err(Error::params(format!("need 1 <= k <= n, got k={} n={}", self.k, self.n)));
        }
        m0_of(self.gamma)?;
        check_probability(self.q)?;
        if 2.0 * self.q > 1.0 {
            return Err(Error::params(format!("need p = 2q <= 1, got q={}", self.q)));
        }
        if self.n.checked_mul(self.ell).map_or(true, |v| v > u32::MAX as usize) {
            return Err(Error::TooLarge(format!("N = {} * {}", self.n, self.ell)));
        }
        let cond = self.conditions();
        if self.strict && !cond.all() {
            let mut failed = Vec::new();
            if !cond.kernel_validity {
                failed.push(format!("16*q*ell^2 = {} > 1", 16.0 * self.q * (self.ell * self.ell) as f64));
            }
            if !cond.clique_size {
                failed.push(format!("k = {} < 6*e*ell = {:.3}", self.k, 6.0 * std::f64::consts::E * self.ell as f64));
            }
            return Err(Error::Precondition(failed.join("; ")));
        }
        Ok(())
    }

    pub fn big_n(&self) -> usize {
        self.n * self.ell
    }

    pub fn big_k(&self) -> usize {
        self.k * self.ell
    }

    pub fn p(&self) -> f64 {
        2.0 * self.q
    }

    pub fn m0(&self) -> u32 {
        m0_of(self.gamma).expect("validated gamma")
    }

    pub fn conditions(&self) -> Conditions {
        let ell = self.ell as f64;
        Conditions {
            kernel_validity: 16.0 * self.q * ell * ell <= 1.0,
            clique_size: self.k as f64 >= 6.0 * std::f64::consts::E * ell,
        }
    }
}

/// The five terms of the total-variation bound between the reduced
/// alternative and the planted dense subgraph law, and their sum.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct XiBound {
    /// `e^{−K/12}`, `1.5k·e^{−ℓ/18}`, `2k²(8qℓ²)^{m0+1}`,
    /// `0.5·sqrt(e^{72e²qℓ²} − 1)`, `sqrt(0.5k)·e^{−ℓ/36}`.
    pub terms: [f64; 5],
    pub total: f64,
}

pub fn xi_bound(params: &ReductionParams) -> XiBound {
    let k = params.k as f64;
    let ell = params.ell as f64;
    let q = params.q;
    let e = std::f64::consts::E;
    let terms = [
        (-(params.big_k() as f64) / 12.0).exp(),
        1.5 * k * (-ell / 18.0).exp(),
        2.0 * k * k * (8.0 * q * ell * ell).powi(params.m0() as i32 + 1),
        0.5 * (72.0 * e * e * q * ell * ell).exp_m1().sqrt(),
        (0.5 * k).sqrt() * (-ell / 36.0).exp(),
    ];
    XiBound {
        terms,
        total: terms.iter().sum(),
    }
}

/// Instance sizes along the sequence `q = ℓ^{−(2+δ)}`,
/// `n = ⌊ℓ^{(2+δ)/α − 1}⌋`, `k = ⌊ℓ^{(2+δ)β/α − 1}⌋`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MappedParameters {
    pub n: usize,
    pub k: usize,
    pub ell: usize,
    pub q: f64,
    pub big_n: usize,
    pub big_k: usize,
    pub kernel_validity: bool,
    pub clique_size: bool,
}

impl MappedParameters {
    pub fn with_gamma(&self, gamma: f64, strict: bool) -> Result<ReductionParams> {
        ReductionParams::new(self.n, self.k, gamma, self.ell, self.q, strict)
    }
}

fn floor_power(base: f64, exponent: f64, what: &str) -> Result<usize> {
    let v = base.powf(exponent).floor();
    if !(v < 2f64.powi(53)) {
        return Err(Error::TooLarge(format!("{what} = {base}^{exponent}")));
    }
    Ok(v as usize)
}

pub fn map_parameters(alpha: f64, beta: f64, delta: f64, ell: usize) -> Result<MappedParameters> {
    if !(alpha > 0.0) || !(beta > 0.0 && beta < 1.0) || !(delta > 0.0) || ell < 2 {
        return Err(Error::params(format!(
            "need alpha > 0, 0 < beta < 1, delta > 0, ell >= 2; got alpha={alpha} beta={beta} delta={delta} ell={ell}"
        )));
    }
    let l = ell as f64;
    let n = floor_power(l, (2.0 + delta) / alpha - 1.0, "n")?;
    let k = floor_power(l, (2.0 + delta) * beta / alpha - 1.0, "k")?;
    if n == 0 || k == 0 || k > n {
        return Err(Error::params(format!("degenerate sizes n={n} k={k} at ell={ell}")));
    }
    let q = l.powf(-(2.0 + delta));
    Ok(MappedParameters {
        n,
        k,
        ell,
        q,
        big_n: n.checked_mul(ell).ok_or_else(|| Error::TooLarge("N".into()))?,
        big_k: k * ell,
        kernel_validity: 16.0 * q * l * l <= 1.0,
        clique_size: k as f64 >= 6.0 * std::f64::consts::E * l,
    })
}

/// A planted-dense-subgraph test run on reduced graphs, which makes it a
/// planted-clique test.
pub struct ComposedTest<F> {
    reducer: Reducer,
    phi: F,
}

pub fn compose_test<F>(phi: F, params: &ReductionParams) -> Result<ComposedTest<F>>
where
    F: Fn(&Graph, Seed) -> Result<Decision>,
{
    Ok(ComposedTest {
        reducer: Reducer::new(*params)?,
        phi,
    })
}

impl<F> ComposedTest<F>
where
    F: Fn(&Graph, Seed) -> Result<Decision>,
{
    /// Reduces with stream 0 of `seed` and runs the inner test with stream 1.
    pub fn decide(&self, g: &Graph, seed: Seed) -> Result<Decision> {
        let reduced = self.reducer.reduce(g, seed.derive(0))?;
        (self.phi)(&reduced, seed.derive(1))
    }

    pub fn reducer(&self) -> &Reducer {
        &self.reducer
    }
}

/// Location of `(α, β)` in the phase diagram.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Simple,
    Hard,
    Impossible,
    Boundary,
    /// Above the hardness guarantee available for the given `γ` but below
    /// the computational boundary.
    Unresolved,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::Simple => "simple",
            Regime::Hard => "hard",
            Regime::Impossible => "impossible",
            Regime::Boundary => "boundary",
            Regime::Unresolved => "unresolved",
        }
    }
}

/// Tolerance for placing a point on a dividing line.
pub const BOUNDARY_TOL: f64 = 1e-12;

/// Statistical limit `β*(α) = min(α, 1/2 + α/4)`.
pub fn beta_star(alpha: f64) -> f64 {
    alpha.min(beta_sharp(alpha))
}

/// Computational limit `β♯(α) = 1/2 + α/4`.
pub fn beta_sharp(alpha: f64) -> f64 {
    0.5 + alpha / 4.0
}

/// Upper end of the hardness interval proved for a fixed `γ`:
/// `1/2 + ((m0α + 4)/(4m0α + 4))·α − 2/(m0α)`.
pub fn hard_upper_for_gamma(alpha: f64, m0: u32) -> f64 {
    let ma = m0 as f64 * alpha;
    0.5 + (ma + 4.0) / (4.0 * ma + 4.0) * alpha - 2.0 / ma
}

pub fn regime_classify(alpha: f64, beta: f64, gamma: Option<f64>) -> Result<Regime> {
    if !(0.0..=2.0).contains(&alpha) || !(0.0..=1.0).contains(&beta) {
        return Err(Error::params(format!(
            "need alpha in [0, 2] and beta in [0, 1], got alpha={alpha} beta={beta}"
        )));
    }
    let (lower, upper) = (beta_star(alpha), beta_sharp(alpha));
    if (beta - lower).abs() <= BOUNDARY_TOL || (beta - upper).abs() <= BOUNDARY_TOL {
        return Ok(Regime::Boundary);
    }
    if beta < lower {
        return Ok(Regime::Impossible);
    }
    if beta > upper {
        return Ok(Regime::Simple);
    }
    match gamma {
        None => Ok(Regime::Hard),
        Some(g) => {
            let m0 = m0_of(g)?;
            if alpha > 0.0 && alpha < beta && beta < hard_upper_for_gamma(alpha, m0) {
                Ok(Regime::Hard)
            } else {
                Ok(Regime::Unresolved)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn m0_fixtures() {
        assert_eq!(m0_of(0.5).unwrap(), 1);
        assert_eq!(m0_of(0.3).unwrap(), 1);
        assert_eq!(m0_of(0.25).unwrap(), 2);
        assert_eq!(m0_of(0.2499999999).unwrap(), 2);
        assert_eq!(m0_of(2f64.powi(-40)).unwrap(), 40);
        assert_eq!(m0_of(2f64.powi(-40) * 1.0000001).unwrap(), 39);
        assert!(m0_of(0.0).is_err());
        assert!(m0_of(0.51).is_err());
    }

    #[test]
    fn derived_quantities() {
        let p = ReductionParams::new(10, 4, 0.25, 3, 0.005, false).unwrap();
        assert_eq!((p.big_n(), p.big_k(), p.p(), p.m0()), (30, 12, 0.01, 2));
        assert!(p.conditions().kernel_validity);
        assert!(!p.conditions().clique_size);
    }

    #[test]
    fn strict_mode_enforces_conditions() {
        assert!(matches!(
            ReductionParams::new(10, 4, 0.5, 2, 0.1, true),
            Err(Error::Precondition(_))
        ));
        assert!(ReductionParams::new(10, 4, 0.5, 2, 0.1, false).is_ok());
        assert!(ReductionParams::new(100, 33, 0.5, 2, 0.01, true).is_ok());
        assert!(ReductionParams::new(10, 4, 0.5, 2, 0.6, false).is_err());
    }

    #[test]
    fn xi_terms() {
        let p = ReductionParams::new(100, 100, 0.5, 10, 1.0 / 1600.0, false).unwrap();
        let xi = xi_bound(&p);
        let e = std::f64::consts::E;
        assert!((xi.terms[0] - (-1000.0f64 / 12.0).exp()).abs() < 1e-40);
        assert!((xi.terms[1] - 150.0 * (-5.0f64 / 9.0).exp()).abs() < 1e-12);
        assert!((xi.terms[1] - 86.07).abs() < 0.01);
        assert_eq!(xi.terms[2], 5000.0);
        let t4 = 0.5 * ((72.0 * e * e / 16.0).exp() - 1.0).sqrt();
        assert!((xi.terms[3] / t4 - 1.0).abs() < 1e-12);
        assert!(xi.total > 1.0);
    }

    #[test]
    fn xi_zero_q() {
        let p = ReductionParams::new(400, 400, 0.5, 50, 0.0, false).unwrap();
        let xi = xi_bound(&p);
        assert_eq!(xi.terms[2], 0.0);
        assert_eq!(xi.terms[3], 0.0);
    }

    #[test]
    fn mapping_fixture() {
        let m = map_parameters(0.5, 0.6, 0.1, 10).unwrap();
        assert_eq!((m.n, m.k, m.big_n, m.big_k), (1584, 33, 15840, 330));
        assert!((m.q - 10f64.powf(-2.1)).abs() < 1e-15);
        assert!((m.q - 7.943e-3).abs() < 1e-6);
        assert!(map_parameters(0.5, 0.6, 0.0, 10).is_err());
    }

    #[test]
    fn regime_fixtures() {
        assert_eq!(regime_classify(2.0 / 3.0, 2.0 / 3.0, None).unwrap(), Regime::Boundary);
        assert_eq!(regime_classify(1.0, 0.9, None).unwrap(), Regime::Simple);
        assert_eq!(regime_classify(0.4, 0.5, None).unwrap(), Regime::Hard);
        assert_eq!(regime_classify(1.5, 0.3, None).unwrap(), Regime::Impossible);
        assert!(regime_classify(2.5, 0.3, None).is_err());
    }

    #[test]
    fn fixed_gamma_narrows_the_hard_interval() {
        // The proven interval shrinks as γ grows; β just under β♯ is unresolved.
        assert_eq!(regime_classify(0.4, 0.59, Some(0.5)).unwrap(), Regime::Unresolved);
        assert_eq!(regime_classify(0.4, 0.59, None).unwrap(), Regime::Hard);
        let m0 = m0_of(2f64.powi(-60)).unwrap();
        assert!(hard_upper_for_gamma(0.4, m0) > 0.41);
        assert_eq!(regime_classify(0.4, 0.41, Some(2f64.powi(-60))).unwrap(), Regime::Hard);
    }
}
