use serde_json::json;

use super::laws::{fixed_pds_law, er_law, law_chi2};
use super::CheckReport;
use crate::error::{check_probability, Error, Result};
use crate::randkit::{binom_pmf, choose2, compensated_sum, hyper_pmf};

/// `E[exp(λT(T−1))] ≤ exp(16λℓ²τ²)` for `T ~ Binom(ℓ, τ)` and `λℓ ≤ 1/16`.
pub fn check_decoupling(ell: u64, tau: f64, lambda: f64) -> Result<CheckReport> {
    check_probability(tau)?;
    if !(lambda >= 0.0) || lambda * ell as f64 > 1.0 / 16.0 {
        return Err(Error::Precondition(format!(
            "need 0 <= lambda*ell <= 1/16, got lambda={lambda} ell={ell}"
        )));
    }
    let law = binom_pmf(ell, tau)?;
    let lhs = law.expect(|t| (lambda * (t * t.saturating_sub(1)) as f64).exp());
    let l = ell as f64;
    let rhs = (16.0 * lambda * l * l * tau * tau).exp();
    Ok(CheckReport::new(
        "check_decoupling",
        json!({"ell": ell, "tau": tau, "lambda": lambda}),
        lhs,
        rhs,
    ))
}

/// Pointwise and tail comparisons between `X ~ Binom(⌈1.5K⌉, 1/k²)` and
/// `Y ~ Binom(3ℓ, e/k)`: `P[X = m] ≤ P[Y = m]` for `1 ≤ m ≤ 2ℓ − 1`, and
/// `P[X ≥ 2ℓ] ≤ P[Y = 2ℓ]`. Requires `K = kℓ` and `k ≥ 6eℓ`.
pub fn check_binom_dominance(big_k: u64, k: u64, ell: u64) -> Result<Vec<CheckReport>> {
    if ell == 0 || big_k != k * ell || (k as f64) < 6.0 * std::f64::consts::E * ell as f64 {
        return Err(Error::Precondition(format!(
            "need K = k*ell and k >= 6e*ell, got K={big_k} k={k} ell={ell}"
        )));
    }
    // 1.5K rounded up: a larger trial count only makes X heavier.
    let trials = (3 * big_k).div_ceil(2);
    let x = binom_pmf(trials, 1.0 / (k * k) as f64)?;
    let y = binom_pmf(3 * ell, std::f64::consts::E / k as f64)?;
    let params = |m: u64, kind: &str| json!({"K": big_k, "k": k, "ell": ell, "m": m, "kind": kind});
    let mut reports: Vec<_> = (1..2 * ell)
        .map(|m| {
            CheckReport::new(
                "check_binom_dominance",
                params(m, "point"),
                x.get(m as usize),
                y.get(m as usize),
            )
        })
        .collect();
    reports.push(CheckReport::new(
        "check_binom_dominance",
        params(2 * ell, "tail"),
        x.tail(2 * ell as usize),
        y.get(2 * ell as usize),
    ));
    Ok(reports)
}

/// A non-decreasing test function for the negative-association check.
pub type Monotone = fn(f64) -> f64;

/// Functions applied to every intersection count: `x`, `x²`,
/// `exp(0.1·x²)` and `1{x ≥ 2}`.
pub const NA_BATTERY: [(&str, Monotone); 4] = [
    ("identity", |x| x),
    ("square", |x| x * x),
    ("exp_0.1_sq", |x| (0.1 * x * x).exp()),
    ("at_least_2", |x| if x >= 2.0 { 1.0 } else { 0.0 }),
];

pub const NA_MAX_BINS: usize = 3;
pub const NA_MAX_BALLS: usize = 6;

fn for_each_assignment(bins: usize, balls: usize, mut visit: impl FnMut(&[usize])) {
    let mut assignment = vec![0usize; balls];
    loop {
        visit(&assignment);
        let mut i = 0;
        loop {
            if i == balls {
                return;
            }
            assignment[i] += 1;
            if assignment[i] < bins {
                break;
            }
            assignment[i] = 0;
            i += 1;
        }
    }
}

/// Throws `balls` balls into `bins` bins twice, independently and
/// uniformly, and compares `E[∏ f(|V_s ∩ Ṽ_t|)]` with `∏ E[f(|V_s ∩ Ṽ_t|)]`
/// over all bin pairs `(s, t)` by exhaustive enumeration. A passing report
/// can only fail to falsify the inequality, not prove it.
pub fn check_negative_association_with(bins: usize, balls: usize, name: &str, f: Monotone) -> Result<CheckReport> {
    if bins == 0 || bins > NA_MAX_BINS || balls > NA_MAX_BALLS {
        return Err(Error::TooLarge(format!(
            "exhaustive check needs 1 <= k <= {NA_MAX_BINS} and |S| <= {NA_MAX_BALLS}, got k={bins} |S|={balls}"
        )));
    }
    let mut assignments = Vec::new();
    for_each_assignment(bins, balls, |a| assignments.push(a.to_vec()));
    let cells = bins * bins;
    let mut joint = Vec::with_capacity(assignments.len() * assignments.len());
    let mut marginal = vec![Vec::with_capacity(joint.capacity()); cells];
    let mut counts = vec![0usize; cells];
    for v in &assignments {
        for w in &assignments {
            counts.iter_mut().for_each(|c| *c = 0);
            for (&s, &t) in v.iter().zip(w) {
                counts[s * bins + t] += 1;
            }
            let mut prod = 1.0;
            for (cell, &c) in counts.iter().enumerate() {
                let value = f(c as f64);
                prod *= value;
                marginal[cell].push(value);
            }
            joint.push(prod);
        }
    }
    let outcomes = joint.len() as f64;
    let lhs = compensated_sum(joint) / outcomes;
    let rhs: f64 = marginal.into_iter().map(|m| compensated_sum(m) / outcomes).product();
    Ok(CheckReport::new(
        "check_negative_association",
        json!({"k": bins, "S_size": balls, "f": name}),
        lhs,
        rhs,
    ))
}

/// [`check_negative_association_with`] for every function in [`NA_BATTERY`].
pub fn check_negative_association(bins: usize, balls: usize) -> Result<Vec<CheckReport>> {
    NA_BATTERY
        .iter()
        .map(|&(name, f)| check_negative_association_with(bins, balls, name, f))
        .collect()
}

/// `E[exp(λH²)]` for `H ~ Hyper(pop, m, m)`.
pub fn hyper_mgf(pop: u64, m: u64, lambda: f64) -> Result<f64> {
    if m > pop || !(lambda >= 0.0) {
        return Err(Error::params(format!("need m <= pop and lambda >= 0, got pop={pop} m={m} lambda={lambda}")));
    }
    Ok(hyper_pmf(pop, m, m)?.expect(|h| (lambda * (h * h) as f64).exp()))
}

/// Largest `E[exp(λH²)]` over `pop ∈ {16, 32, …, 4096}`, `m ∈ 1..=pop/4`,
/// with `λ = b·min(log(e·pop/m)/m, pop²/m⁴)`.
pub fn hyper_mgf_sweep(b: f64) -> Result<f64> {
    let mut worst = 0.0f64;
    let mut pop = 16u64;
    while pop <= 4096 {
        for m in 1..=pop / 4 {
            let (pf, mf) = (pop as f64, m as f64);
            let lambda = b * ((std::f64::consts::E * pf / mf).ln() / mf).min(pf * pf / mf.powi(4));
            worst = worst.max(hyper_mgf(pop, m, lambda)?);
        }
        pop *= 2;
    }
    Ok(worst)
}

fn check_chi2_args(n: usize, kp: usize, q: f64, p: f64) -> Result<()> {
    check_probability(p)?;
    check_probability(q)?;
    if kp < 1 || kp > n {
        return Err(Error::params(format!("need 1 <= Kp <= N, got Kp={kp} N={n}")));
    }
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::params(format!("divergence is infinite unless 0 < q < 1, got q={q}")));
    }
    Ok(())
}

/// χ² divergence between the uniform-size-`Kp` planted model and `G(N, q)`
/// through its overlap form `E[(1 + (p−q)²/(q(1−q)))^{C(H,2)}] − 1`,
/// `H ~ Hyper(N, Kp, Kp)`.
pub fn chi2_planted_vs_null_exact(n: usize, kp: usize, p: f64, q: f64) -> Result<f64> {
    check_chi2_args(n, kp, q, p)?;
    let base = 1.0 + (p - q) * (p - q) / (q * (1.0 - q));
    let law = hyper_pmf(n as u64, kp as u64, kp as u64)?;
    let terms: Vec<f64> = law
        .probs()
        .iter()
        .enumerate()
        .map(|(h, &w)| w * base.powi(choose2(h as u64) as i32))
        .collect();
    Ok(compensated_sum(terms) - 1.0)
}

/// The same divergence summed over every graph on `N` vertices.
pub fn chi2_planted_vs_null_brute(n: usize, kp: usize, p: f64, q: f64) -> Result<f64> {
    check_chi2_args(n, kp, q, p)?;
    Ok(law_chi2(&fixed_pds_law(n, kp, p, q)?, &er_law(n, q)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn decoupling_fixtures() {
        let r = check_decoupling(2, 0.5, 1.0 / 32.0).unwrap();
        assert!((r.lhs - (0.75 + 0.25 * (1.0f64 / 16.0).exp())).abs() < 1e-15);
        assert!((r.rhs - 0.5f64.exp()).abs() < 1e-15);
        assert!(r.satisfied);
        let r = check_decoupling(7, 0.0, 1.0 / 112.0).unwrap();
        assert_eq!((r.lhs, r.rhs), (1.0, 1.0));
        assert!(matches!(check_decoupling(4, 0.5, 0.1), Err(Error::Precondition(_))));
    }

    #[test]
    fn decoupling_is_monotone() {
        for ell in 1..=12u64 {
            let mut prev_tau = 0.0;
            for i in 1..=9 {
                let lhs = check_decoupling(ell, i as f64 / 10.0, 1.0 / (16.0 * ell as f64)).unwrap().lhs;
                assert!(lhs >= prev_tau - 1e-15);
                prev_tau = lhs;
            }
            let mut prev_lambda = 0.0;
            for j in 1..=8 {
                let lambda = j as f64 / (128.0 * ell as f64);
                let lhs = check_decoupling(ell, 0.5, lambda).unwrap().lhs;
                assert!(lhs >= prev_lambda - 1e-15);
                prev_lambda = lhs;
            }
        }
    }

    #[test]
    fn dominance_fixtures() {
        for &(big_k, k, ell) in &[(17, 17, 1), (66, 33, 2)] {
            let reports = check_binom_dominance(big_k, k, ell).unwrap();
            assert_eq!(reports.len() as u64, 2 * ell);
            assert!(reports.iter().all(|r| r.satisfied), "{reports:?}");
        }
        assert!(check_binom_dominance(16, 16, 1).is_err());
        assert!(check_binom_dominance(20, 17, 1).is_err());
    }

    #[test]
    fn single_bin_is_equality() {
        for r in check_negative_association(1, 4).unwrap() {
            assert!((r.lhs - r.rhs).abs() < 1e-15, "{r:?}");
        }
    }

    #[test]
    fn small_na_fixture() {
        // k = 2, |S| = 2, f = identity: 16 joint outcomes, by hand.
        let r = check_negative_association_with(2, 2, "identity", |x| x).unwrap();
        // Every cell is nonzero only when both balls land in distinct cells
        // covering all four, impossible with two balls.
        assert_eq!(r.lhs, 0.0);
        assert!((r.rhs - 0.5f64.powi(4)).abs() < 1e-15);
        assert!(r.satisfied);
        assert!(check_negative_association(4, 2).is_err());
        assert!(check_negative_association(2, 7).is_err());
    }

    #[test]
    fn hyper_mgf_fixtures() {
        assert_eq!(hyper_mgf(10, 3, 0.0).unwrap(), 1.0);
        let expected = 1.0 / 6.0 + 4.0 / 6.0 * 0.1f64.exp() + 1.0 / 6.0 * 0.4f64.exp();
        assert!((hyper_mgf(4, 2, 0.1).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 1.15208).abs() < 1e-5);
        assert!(hyper_mgf(4, 5, 0.1).is_err());
    }

    #[test]
    fn chi2_fixtures() {
        assert!((chi2_planted_vs_null_exact(4, 2, 0.5, 0.25).unwrap() - 1.0 / 18.0).abs() < 1e-15);
        assert_eq!(chi2_planted_vs_null_exact(5, 3, 0.3, 0.3).unwrap(), 0.0);
        assert_eq!(chi2_planted_vs_null_exact(5, 1, 0.9, 0.3).unwrap(), 0.0);
        let brute = chi2_planted_vs_null_brute(4, 2, 0.5, 0.25).unwrap();
        assert!((brute - 1.0 / 18.0).abs() < 1e-12);
        assert!(chi2_planted_vs_null_exact(4, 2, 0.5, 0.0).is_err());
    }
}
