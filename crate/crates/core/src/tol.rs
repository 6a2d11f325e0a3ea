//! Numerical tolerances shared by validation, solvers, and property suites.

/// Accept threshold for state invariants (Hermiticity, trace, PSD, norm).
pub const ACCEPT: f64 = 1e-10;

/// Hard-reject threshold. Violations between [`ACCEPT`] and this value are repaired.
pub const REJECT: f64 = 1e-8;

/// Eigenvalues above this count toward the numerical rank.
pub const RANK_CUT: f64 = 1e-12;

/// Max-norm bound on spectral reconstruction error.
pub const SPECTRAL_RECONSTRUCTION: f64 = 1e-9;

/// Max-norm bound on ensemble reconstruction error.
pub const ENSEMBLE_RECONSTRUCTION: f64 = 1e-8;

/// Ensemble members lighter than this are dropped.
pub const WEIGHT_DROP: f64 = 1e-14;

/// Slack for probability vectors built from user input.
pub const PROB_SUM: f64 = 1e-12;

/// Exact algebraic identities (quadratic triality, pure-state duality).
pub const IDENTITY: f64 = 1e-12;

/// Default slack for randomized property checks.
pub const PROPERTY: f64 = 1e-10;

/// Monotonicity slack for sweeps evaluated with closed-form coherence.
pub const SWEEP_DIRECT: f64 = 1e-8;

/// Monotonicity and concavity slack when coherence is a roof upper bound.
pub const ROOF_PROPERTY: f64 = 1e-3;

/// Consistency slack between a roof value and exact bounds.
pub const ROOF_CONSISTENCY: f64 = 1e-6;

/// Mixedness below this is flagged as a consistency warning.
pub const NEGATIVE_MIXEDNESS: f64 = 1e-9;
