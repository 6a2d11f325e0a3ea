//! Coherence, path information, and mixedness, and the reports that tie them
//! together into `C + D + M = 1`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::roof::{roof_minimize, RoofConfig};
use crate::simplex::{DirectForm, SimplexFunction};
use crate::states::{diagonal, DensityMatrix, PureState};
use crate::tol;

/// `f(|psi_1|^2, ..., |psi_d|^2)`.
pub fn coherence_pure(f: &SimplexFunction, psi: &PureState) -> f64 {
    f.evaluate(&psi.populations())
}

/// `1 - f(diag rho)`.
pub fn path_information(f: &SimplexFunction, rho: &DensityMatrix) -> f64 {
    1.0 - f.evaluate(&diagonal(rho))
}

/// Closed-form mixed-state coherence. Only `l1` has one.
pub fn coherence_direct(name: &str, rho: &DensityMatrix) -> Result<f64> {
    match name {
        "l1" => Ok(coherence_l1(rho)),
        other => Err(Error::UnknownDirectMeasure(other.to_string())),
    }
}

pub fn coherence_of(form: DirectForm, rho: &DensityMatrix) -> f64 {
    match form {
        DirectForm::L1 => coherence_l1(rho),
    }
}

/// `(1/(n-1)) sum_{i != j} |rho_ij|`.
pub fn coherence_l1(rho: &DensityMatrix) -> f64 {
    let n = rho.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += rho.entry(i, j).norm();
        }
    }
    2.0 * acc / (n - 1) as f64
}

/// `f(diag rho) - C`, where `C` is whichever coherence value the caller trusts.
pub fn mixedness(f: &SimplexFunction, rho: &DensityMatrix, coherence: f64) -> f64 {
    f.evaluate(&diagonal(rho)) - coherence
}

/// Measurement certainty, uncertainty, and linear-entropy mixedness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadraticTriality {
    /// `sum_i rho_ii^2`.
    pub p: f64,
    /// `sum_{i != j} |rho_ij|^2`.
    pub w: f64,
    /// `1 - tr rho^2`.
    pub m: f64,
}

impl QuadraticTriality {
    pub fn residual(&self) -> f64 {
        (self.p + self.w + self.m - 1.0).abs()
    }
}

pub fn quadratic_triality(rho: &DensityMatrix) -> QuadraticTriality {
    let n = rho.dim();
    let mut p = 0.0;
    let mut w = 0.0;
    for i in 0..n {
        for j in 0..n {
            let z = rho.entry(i, j);
            if i == j {
                p += z.re * z.re;
            } else {
                w += z.norm_sqr();
            }
        }
    }
    QuadraticTriality {
        p,
        w,
        m: 1.0 - rho.purity(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Closed-form mixed-state coherence.
    Direct,
    /// Convex-roof upper bound.
    Roof,
    /// The quadratic certainty/uncertainty/purity identity.
    Quadratic,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Direct => "direct",
            Self::Roof => "roof",
            Self::Quadratic => "quadratic",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Self::Direct),
            "roof" => Ok(Self::Roof),
            "quadratic" => Ok(Self::Quadratic),
            other => Err(Error::Format(format!("unknown mode `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverDiagnostics {
    pub m: usize,
    pub restarts_used: usize,
    pub iterations: usize,
    pub converged: bool,
    pub spread: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportMetadata {
    pub dim: usize,
    /// Coherence at the maximally coherent state (`f(uniform)`).
    pub max_value: f64,
    pub normalized: bool,
    /// Set in roof mode: `C` is the best ensemble found, not a certified minimum.
    pub coherence_is_upper_bound: bool,
    pub warnings: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub solver: Option<SolverDiagnostics>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialityReport {
    pub measure_name: String,
    pub mode: Mode,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub sum: f64,
    pub residual: f64,
    pub metadata: ReportMetadata,
}

impl TrialityReport {
    pub fn dim(&self) -> usize {
        self.metadata.dim
    }
}

/// Evaluates coherence, path information, and mixedness of `rho` in one go.
///
/// In roof mode a default solver configuration (seed 0) is used when none is given.
pub fn triality_report(
    f: &SimplexFunction,
    rho: &DensityMatrix,
    mode: Mode,
    solver: Option<&RoofConfig>,
) -> Result<TrialityReport> {
    let dim = rho.dim();
    if mode == Mode::Quadratic {
        let q = quadratic_triality(rho);
        let sum = q.p + q.w + q.m;
        return Ok(TrialityReport {
            measure_name: "quadratic".into(),
            mode,
            c: q.w,
            d: q.p,
            m: q.m,
            sum,
            residual: (sum - 1.0).abs(),
            metadata: ReportMetadata {
                dim,
                max_value: 1.0 - 1.0 / dim as f64,
                normalized: true,
                coherence_is_upper_bound: false,
                warnings: Vec::new(),
                solver: None,
            },
        });
    }

    let (c, solver_diag) = match mode {
        Mode::Direct => {
            let form = f
                .direct_form()
                .ok_or_else(|| Error::UnknownDirectMeasure(f.name().to_string()))?;
            (coherence_of(form, rho), None)
        }
        Mode::Roof => {
            let default_cfg = RoofConfig::default();
            let cfg = solver.unwrap_or(&default_cfg);
            let r = roof_minimize(f, rho, cfg)?;
            let diag = SolverDiagnostics {
                m: r.m,
                restarts_used: r.restarts_used,
                iterations: r.iterations,
                converged: r.converged,
                spread: r.spread,
                seed: cfg.seed,
            };
            (r.value, Some(diag))
        }
        Mode::Quadratic => unreachable!(),
    };

    let d = path_information(f, rho);
    let m = mixedness(f, rho, c);
    let sum = c + d + m;
    let mut warnings = Vec::new();
    if m < -tol::NEGATIVE_MIXEDNESS {
        warnings.push(format!("negative mixedness {m:e}: coherence exceeds f(diag)"));
    }
    if let Some(s) = &solver_diag {
        if !s.converged {
            warnings.push("roof solver exhausted its iteration budget".into());
        }
    }
    Ok(TrialityReport {
        measure_name: f.name().to_string(),
        mode,
        c,
        d,
        m,
        sum,
        residual: (sum - 1.0).abs(),
        metadata: ReportMetadata {
            dim,
            max_value: f.max_value(dim),
            normalized: f.is_normalized(),
            coherence_is_upper_bound: mode == Mode::Roof,
            warnings,
            solver: solver_diag,
        },
    })
}
