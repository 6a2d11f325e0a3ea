//! Triality values along one-parameter state families.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measures::{triality_report, Mode};
use crate::roof::RoofConfig;
use crate::simplex::SimplexFunction;
use crate::states::{family_anchor, DensityMatrix, FamilyKind};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub family: FamilyKind,
    pub p: f64,
    pub measure: String,
    pub mode: Mode,
    #[serde(rename = "C")]
    pub c: f64,
    #[serde(rename = "D")]
    pub d: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub sum: f64,
}

/// Grid `p = 1, ..., 0` with `steps` points, both endpoints included.
pub fn sweep_grid(steps: usize) -> Result<Vec<f64>> {
    if steps < 2 {
        return Err(Error::InvalidConfig(format!(
            "a sweep needs at least 2 steps, got {steps}"
        )));
    }
    let last = (steps - 1) as f64;
    Ok((0..steps).map(|k| 1.0 - k as f64 / last).collect())
}

/// Evaluates the triality on `p rho + (1 - p) anchor` over a descending grid.
pub fn sweep(
    f: &SimplexFunction,
    rho: &DensityMatrix,
    family: FamilyKind,
    mode: Mode,
    steps: usize,
    solver: Option<&RoofConfig>,
) -> Result<Vec<SweepRow>> {
    let anchor = family_anchor(family, rho)?;
    sweep_grid(steps)?
        .into_iter()
        .map(|p| {
            let sigma = rho.mix(&anchor, p)?;
            let r = triality_report(f, &sigma, mode, solver)?;
            Ok(SweepRow {
                family,
                p,
                measure: r.measure_name,
                mode,
                c: r.c,
                d: r.d,
                m: r.m,
                sum: r.sum,
            })
        })
        .collect()
}

/// Largest increase of `M` as `p` grows, i.e. `max_k M(p_k) - M(p_{k+1})` over
/// rows in descending `p`. Zero or negative means monotone.
pub fn monotonicity_violation(rows: &[SweepRow]) -> f64 {
    rows.windows(2)
        .map(|w| w[0].m - w[1].m)
        .fold(f64::NEG_INFINITY, f64::max)
}
