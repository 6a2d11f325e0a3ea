//! Coherence, path information and mixedness of quantum states, generated by
//! symmetric concave functions on the probability simplex.
//!
//! For a generator `f` and a state `rho` the three quantities are
//!
//! * `C_f(rho)`: coherence, `f(|psi_i|^2)` on pure states and its convex roof
//!   on mixed states,
//! * `D_f(rho) = 1 - f(diag rho)`: path information,
//! * `M_f(rho) = f(diag rho) - C_f(rho)`: mixedness,
//!
//! so `C + D + M = 1` holds for every state.
//!
//! ```
//! use triality::{triality_report, DensityMatrix, Mode, SimplexFunction};
//!
//! let rho = DensityMatrix::from_real_rows(&[&[0.5, 0.3], &[0.3, 0.5]]).unwrap();
//! let l1 = SimplexFunction::builtin("l1").unwrap();
//! let r = triality_report(&l1, &rho, Mode::Direct, None).unwrap();
//! assert!((r.c - 0.6).abs() < 1e-12 && (r.m - 0.4).abs() < 1e-12);
//! ```

pub mod error;
pub mod harness;
pub mod interferometer;
pub mod io;
pub mod linalg;
pub mod measures;
pub mod roof;
pub mod simplex;
pub mod states;
pub mod sweep;
pub mod tol;

pub use error::{Error, Result};
pub use harness::{
    run_example_suite, run_particle_axioms, run_theorem_suite, run_wave_axioms, CheckRecord, CheckStatus, SuiteReport,
    WaveMeasure,
};
pub use interferometer::{
    attach_detectors, detector_gram, detector_inequality_report, reduce_system, DetectorConfig, DetectorInequality,
};
pub use linalg::{CMatrix, CVector};
pub use measures::{
    coherence_direct, coherence_l1, coherence_pure, mixedness, path_information, quadratic_triality, triality_report,
    Mode, QuadraticTriality, ReportMetadata, SolverDiagnostics, TrialityReport,
};
pub use num_complex::Complex64;
pub use roof::{
    eigen_ensemble, ensemble_from_isometry, roof_minimize, roof_objective, roof_sample_oracle, Ensemble, RoofConfig,
    RoofResult,
};
pub use simplex::{check_f_conditions, ConditionReport, SimplexFunction};
pub use states::{
    dephase, diagonal, family_anchor, family_state, random_density, random_pure, special_state, DensityMatrix,
    FamilyKind, ProbVector, PureState, SpecialKind, SpectralDecomposition, MAX_DIM,
};
pub use sweep::{monotonicity_violation, sweep, sweep_grid, SweepRow};
