use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::Decision;
use crate::error::{Error, Result};
use crate::randkit::Seed;

/// Empirical Type-I and Type-II error rates with 95% normal-approximation
/// confidence radii.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErrorEstimate {
    pub type1: f64,
    pub type2: f64,
    pub trials: usize,
    pub type1_ci: f64,
    pub type2_ci: f64,
}

impl ErrorEstimate {
    pub fn from_counts(false_alarms: usize, misses: usize, trials: usize) -> Self {
        let type1 = false_alarms as f64 / trials as f64;
        let type2 = misses as f64 / trials as f64;
        ErrorEstimate {
            type1,
            type2,
            trials,
            type1_ci: ci_radius(type1, trials),
            type2_ci: ci_radius(type2, trials),
        }
    }

    pub fn total(&self) -> f64 {
        self.type1 + self.type2
    }
}

/// `1.96·sqrt(r(1 − r)/trials)`.
pub fn ci_radius(rate: f64, trials: usize) -> f64 {
    1.96 * (rate * (1.0 - rate) / trials as f64).sqrt()
}

/// Runs `test` on `trials` draws from each model.
///
/// Trial `i` uses stream `i` of `seed`: its null and alternative instances
/// come from sub-streams 0 and 1, and the test calls on them get
/// sub-streams 2 and 3. Trials run in parallel but the result does not
/// depend on scheduling; the first failing trial by index is reported.
pub fn estimate_errors<G, N, A, T>(null_gen: N, alt_gen: A, test: T, trials: usize, seed: Seed) -> Result<ErrorEstimate>
where
    G: Send,
    N: Fn(Seed) -> Result<G> + Sync,
    A: Fn(Seed) -> Result<G> + Sync,
    T: Fn(&G, Seed) -> Result<Decision> + Sync,
{
    if trials == 0 {
        return Err(Error::params("need at least one trial"));
    }
    let outcomes: Vec<Result<(bool, bool)>> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let s = seed.derive(i as u64);
            let null = null_gen(s.derive(0))?;
            let false_alarm = test(&null, s.derive(2))?.is_h1();
            drop(null);
            let alt = alt_gen(s.derive(1))?;
            let miss = !test(&alt, s.derive(3))?.is_h1();
            Ok((false_alarm, miss))
        })
        .collect();
    let (mut false_alarms, mut misses) = (0, 0);
    for outcome in outcomes {
        let (fa, miss) = outcome?;
        false_alarms += fa as usize;
        misses += miss as usize;
    }
    Ok(ErrorEstimate::from_counts(false_alarms, misses, trials))
}
