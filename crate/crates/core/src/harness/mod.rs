//! Randomized property suites.
//!
//! Each suite is a list of checks. A check runs independent trials, each of
//! which reports a signed violation (positive means the property is broken by
//! that much); the check fails when any violation exceeds its tolerance. The
//! worst failing trial is kept as a witness holding the exact inputs, so it
//! can be replayed through the public API.
//!
//! Trials draw from per-trial ChaCha streams derived from the suite seed, the
//! check id, the dimension, and the trial index, so results do not depend on
//! how the trials are scheduled.

mod axioms;
mod examples;
mod theorems;

pub use axioms::{run_particle_axioms, run_wave_axioms, WaveMeasure};
pub use examples::run_example_suite;
pub use theorems::run_theorem_suite;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::Value;

use crate::linalg;
use crate::measures::Mode;
use crate::states::{self, DensityMatrix, PureState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Precondition not met; see the note.
    Skipped,
    /// Recorded for information only; never affects the suite outcome.
    Info,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckRecord {
    pub id: String,
    /// The property under test, stated briefly.
    pub anchor: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    pub trials: usize,
    pub failures: usize,
    /// Largest signed violation seen; `<= tolerance` for a passing check.
    pub worst_violation: f64,
    pub tolerance: f64,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

impl CheckRecord {
    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }

    pub(crate) fn skipped(id: &str, anchor: &str, dim: Option<usize>, note: impl Into<String>) -> Self {
        Self {
            id: id.into(),
            anchor: anchor.into(),
            dim,
            trials: 0,
            failures: 0,
            worst_violation: 0.0,
            tolerance: 0.0,
            status: CheckStatus::Skipped,
            note: Some(note.into()),
            witness: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub function: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    pub dims: Vec<usize>,
    pub samples: usize,
    pub seed: u64,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

impl SuiteReport {
    pub(crate) fn new(
        suite: impl Into<String>,
        function: Option<String>,
        mode: Option<Mode>,
        dims: &[usize],
        samples: usize,
        seed: u64,
        checks: Vec<CheckRecord>,
    ) -> Self {
        let pass = checks.iter().all(CheckRecord::passed);
        Self {
            suite: suite.into(),
            function,
            mode,
            dims: dims.to_vec(),
            samples,
            seed,
            checks,
            pass,
        }
    }

    pub fn check(&self, id: &str, dim: Option<usize>) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.id == id && c.dim == dim)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }
}

/// Outcome of one trial.
pub(crate) struct Trial {
    pub violation: f64,
    pub witness: Value,
}

impl Trial {
    pub fn new(violation: f64, witness: Value) -> Self {
        Self { violation, witness }
    }
}

/// Runs `trials` independent trials in parallel and folds them in index order.
pub(crate) fn run_check<F>(
    id: &str,
    anchor: &str,
    dim: Option<usize>,
    tolerance: f64,
    trials: usize,
    seed: u64,
    trial: F,
) -> CheckRecord
where
    F: Fn(usize, &mut ChaCha8Rng) -> Trial + Sync,
{
    let outcomes: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, id, dim.unwrap_or(0), t);
            trial(t, &mut rng)
        })
        .collect();
    fold_trials(id, anchor, dim, tolerance, outcomes)
}

pub(crate) fn fold_trials(
    id: &str,
    anchor: &str,
    dim: Option<usize>,
    tolerance: f64,
    outcomes: Vec<Trial>,
) -> CheckRecord {
    let trials = outcomes.len();
    let mut failures = 0;
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for o in outcomes {
        // NaN counts as a failure.
        let failed = o.violation.is_nan() || o.violation > tolerance;
        if failed {
            failures += 1;
        }
        if o.violation > worst || (o.violation.is_nan() && !worst.is_nan()) {
            worst = o.violation;
            witness = Some(o.witness);
        }
    }
    let status = if failures == 0 {
        CheckStatus::Pass
    } else {
        CheckStatus::Fail
    };
    CheckRecord {
        id: id.into(),
        anchor: anchor.into(),
        dim,
        trials,
        failures,
        worst_violation: if trials == 0 { 0.0 } else { worst },
        tolerance,
        status,
        note: None,
        witness: if failures > 0 { witness } else { None },
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Seed for trial `t` of check `id` at dimension `dim`.
pub fn trial_seed(seed: u64, id: &str, dim: usize, t: usize) -> u64 {
    // FNV-1a over the id, then mixed with the numeric coordinates.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in id.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut s = splitmix64(seed ^ h);
    s = splitmix64(s ^ dim as u64);
    splitmix64(s ^ t as u64)
}

pub(crate) fn trial_rng(seed: u64, id: &str, dim: usize, t: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(trial_seed(seed, id, dim, t))
}

/// Random state of random rank (rank one about a quarter of the time).
pub(crate) fn sample_state<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> DensityMatrix {
    let rank = if rng.random_bool(0.25) {
        1
    } else {
        rng.random_range(1..=dim)
    };
    states::random_density_with(dim, rank, rng)
}

pub(crate) fn sample_pure<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> PureState {
    states::random_pure_with(dim, rng)
}

pub(crate) fn sample_permutation<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<usize> {
    use rand::seq::SliceRandom;
    let mut p: Vec<usize> = (0..dim).collect();
    p.shuffle(rng);
    p
}

pub(crate) fn state_value(rho: &DensityMatrix) -> Value {
    crate::io::matrix_to_value(rho.matrix())
}

pub(crate) fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values
        .into_iter()
        .fold(0.0, |a, b| if b.is_nan() { f64::NAN } else { a.max(b.abs()) })
}

/// Random ensemble of `rho` from a Haar-random isometry with `m` in `[rank, 2 * dim]`.
pub(crate) fn sample_isometry<R: Rng + ?Sized>(rank: usize, dim: usize, rng: &mut R) -> linalg::CMatrix {
    let m = rng.random_range(rank..=(2 * dim).max(rank));
    linalg::random_isometry(m, rank, rng)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trial_seeds_are_distinct_and_stable() {
        let a = trial_seed(7, "W4", 3, 0);
        assert_eq!(a, trial_seed(7, "W4", 3, 0));
        assert_ne!(a, trial_seed(7, "W4", 3, 1));
        assert_ne!(a, trial_seed(7, "W3", 3, 0));
        assert_ne!(a, trial_seed(8, "W4", 3, 0));
        assert_ne!(a, trial_seed(7, "W4", 2, 0));
    }

    #[test]
    fn fold_counts_failures_and_keeps_worst_witness() {
        let outcomes = vec![
            Trial::new(-1.0, Value::from(0)),
            Trial::new(0.5, Value::from(1)),
            Trial::new(2.0, Value::from(2)),
            Trial::new(f64::NAN, Value::from(3)),
        ];
        let r = fold_trials("x", "x", None, 1.0, outcomes);
        assert_eq!(r.failures, 2);
        assert_eq!(r.status, CheckStatus::Fail);
        assert!(r.witness.is_some());

        let r = fold_trials("x", "x", None, 1.0, vec![Trial::new(0.5, Value::Null)]);
        assert_eq!(r.status, CheckStatus::Pass);
        assert!(r.witness.is_none());
        assert_eq!(r.worst_violation, 0.5);
    }
}
