//! Convex-roof extension of pure-state coherence.
//!
//! Every pure-state ensemble of a rank-`r` state with spectral decomposition
//! `sum_k lambda_k |e_k><e_k|` has the form
//! `|psi~_j> = sum_k V_jk sqrt(lambda_k) |e_k>` for an `m x r` isometry `V`,
//! with weights `<psi~_j|psi~_j>`. The roof is minimized over that isometry
//! manifold by multi-restart perturbation descent; the result is always an
//! upper bound on the true roof.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix, ZERO};
use crate::measures::coherence_pure;
use crate::simplex::SimplexFunction;
use crate::states::{DensityMatrix, PureState, SpectralDecomposition};
use crate::tol;

/// Weighted pure states decomposing `source`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    weights: Vec<f64>,
    states: Vec<PureState>,
    source: DensityMatrix,
}

impl Ensemble {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>, source: DensityMatrix) -> Result<Self> {
        if weights.len() != states.len() || weights.is_empty() {
            return Err(Error::DimMismatch {
                expected: weights.len(),
                got: states.len(),
            });
        }
        if let Some(s) = states.iter().find(|s| s.dim() != source.dim()) {
            return Err(Error::DimMismatch {
                expected: source.dim(),
                got: s.dim(),
            });
        }
        let ens = Self {
            weights,
            states,
            source,
        };
        let weight_sum: f64 = ens.weights.iter().sum();
        let deviation = ens.reconstruction_error();
        if ens.weights.iter().any(|w| w.is_nan() || *w <= 0.0)
            || (weight_sum - 1.0).abs() > tol::ACCEPT
            || deviation > tol::ENSEMBLE_RECONSTRUCTION
        {
            return Err(Error::BadEnsemble { weight_sum, deviation });
        }
        Ok(ens)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn source(&self) -> &DensityMatrix {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// `max |sum_j w_j |psi_j><psi_j| - source|`.
    pub fn reconstruction_error(&self) -> f64 {
        let n = self.source.dim();
        let mut acc = CMatrix::zeros(n, n);
        for (w, s) in self.weights.iter().zip(&self.states) {
            acc += s.projector() * Complex64::new(*w, 0.0);
        }
        linalg::max_abs_diff(&acc, self.source.matrix())
    }
}

/// Builds the ensemble generated by the isometry `v` (shape `m x rank`).
pub fn ensemble_from_isometry(rho: &DensityMatrix, v: &CMatrix) -> Result<Ensemble> {
    let spectral = rho.spectral();
    ensemble_from_spectral(rho, &spectral, v)
}

fn ensemble_from_spectral(rho: &DensityMatrix, spectral: &SpectralDecomposition, v: &CMatrix) -> Result<Ensemble> {
    let r = spectral.rank;
    if v.ncols() != r {
        return Err(Error::RankMismatch {
            expected: r,
            got: v.ncols(),
        });
    }
    if v.nrows() < r {
        return Err(Error::InvalidConfig(format!(
            "ensemble size {} is smaller than the rank {r}",
            v.nrows()
        )));
    }
    let deviation = linalg::isometry_defect(v);
    if deviation > tol::ACCEPT {
        return Err(Error::NotIsometry { deviation });
    }

    let basis = spectral.scaled_basis();
    let unnormalized = v * basis.transpose();
    let mut weights = Vec::new();
    let mut states = Vec::new();
    for row in unnormalized.row_iter() {
        let amp = row.transpose();
        let w = amp.norm_squared();
        if w < tol::WEIGHT_DROP {
            continue;
        }
        weights.push(w);
        states.push(PureState::normalized(amp)?);
    }
    let total: f64 = weights.iter().sum();
    for w in &mut weights {
        *w /= total;
    }
    Ensemble::new(weights, states, rho.clone())
}

/// Ensemble of eigenvectors weighted by eigenvalues.
pub fn eigen_ensemble(rho: &DensityMatrix) -> Result<Ensemble> {
    let spectral = rho.spectral();
    let r = spectral.rank;
    ensemble_from_spectral(rho, &spectral, &CMatrix::identity(r, r))
}

/// `sum_j w_j C_f(psi_j)`.
pub fn roof_objective(f: &SimplexFunction, ens: &Ensemble) -> f64 {
    ens.weights
        .iter()
        .zip(&ens.states)
        .map(|(w, s)| w * coherence_pure(f, s))
        .sum()
}

/// Solver settings for [`roof_minimize`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoofConfig {
    /// Ensemble size; defaults to `rank^2` capped at `2 * dim` (never below the rank).
    pub m: Option<usize>,
    pub restarts: usize,
    pub max_iters: usize,
    /// Stop once the perturbation scale drops below this.
    pub tol: f64,
    pub seed: u64,
}

impl Default for RoofConfig {
    fn default() -> Self {
        Self {
            m: None,
            restarts: 16,
            max_iters: 2000,
            tol: 1e-8,
            seed: 0,
        }
    }
}

impl RoofConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if self.restarts == 0 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if self.max_iters == 0 {
            return Err(Error::InvalidConfig("max_iters must be at least 1".into()));
        }
        if !(self.tol.is_finite() && self.tol > 0.0) {
            return Err(Error::InvalidConfig(format!("tol must be positive, got {}", self.tol)));
        }
        if self.m == Some(0) {
            return Err(Error::InvalidConfig("m must be positive".into()));
        }
        Ok(())
    }
}

/// Default ensemble size for a rank-`rank` state of dimension `dim`.
pub fn default_ensemble_size(rank: usize, dim: usize) -> usize {
    (rank * rank).min(2 * dim).max(rank)
}

fn resolve_m(m: Option<usize>, rank: usize, dim: usize) -> Result<usize> {
    let m = m.unwrap_or_else(|| default_ensemble_size(rank, dim));
    if m < rank {
        return Err(Error::InvalidConfig(format!("m = {m} is smaller than the rank {rank}")));
    }
    Ok(m)
}

#[derive(Debug, Clone)]
pub struct RoofResult {
    /// Best objective found. An upper bound on the convex roof, not a certificate.
    pub value: f64,
    pub ensemble: Ensemble,
    pub restarts_used: usize,
    /// Total descent iterations across restarts.
    pub iterations: usize,
    /// Whether the winning restart shrank its step below `tol` within budget.
    pub converged: bool,
    /// `max - min` over the restart optima.
    pub spread: f64,
    pub restart_values: Vec<f64>,
    pub m: usize,
}

/// Objective evaluated directly on an isometry, without building an [`Ensemble`].
struct IsometryObjective<'a> {
    f: &'a SimplexFunction,
    /// `n x r`, column k = sqrt(lambda_k) |e_k>.
    basis: CMatrix,
    pops: Vec<f64>,
}

impl<'a> IsometryObjective<'a> {
    fn new(f: &'a SimplexFunction, spectral: &SpectralDecomposition) -> Self {
        let basis = spectral.scaled_basis();
        let n = basis.nrows();
        Self {
            f,
            basis,
            pops: vec![0.0; n],
        }
    }

    fn value(&mut self, v: &CMatrix) -> f64 {
        let (n, r) = self.basis.shape();
        let mut total = 0.0;
        for j in 0..v.nrows() {
            let mut w = 0.0;
            for a in 0..n {
                let mut amp = ZERO;
                for k in 0..r {
                    amp += v[(j, k)] * self.basis[(a, k)];
                }
                let p = amp.norm_sqr();
                self.pops[a] = p;
                w += p;
            }
            if w < tol::WEIGHT_DROP {
                continue;
            }
            for p in &mut self.pops {
                *p /= w;
            }
            total += w * self.f.evaluate_slice(&self.pops);
        }
        total
    }
}

struct RestartOutcome {
    value: f64,
    v: CMatrix,
    iterations: usize,
    converged: bool,
}

const INITIAL_STEP: f64 = 0.5;
const MAX_STEP: f64 = 2.0;
const GROW: f64 = 1.5;
const SHRINK: f64 = 0.9;

fn descend(
    objective: &mut IsometryObjective<'_>,
    start: CMatrix,
    cfg: &RoofConfig,
    rng: &mut ChaCha8Rng,
) -> RestartOutcome {
    let (m, r) = start.shape();
    let mut v = start;
    let mut value = objective.value(&v);
    let mut step = INITIAL_STEP;
    let mut iterations = 0;
    let mut converged = false;

    while iterations < cfg.max_iters {
        if step < cfg.tol {
            converged = true;
            break;
        }
        iterations += 1;
        let g = linalg::gaussian_matrix(m, r, rng);
        let candidate = match linalg::orthonormalize_columns(&(&v + g * Complex64::new(step, 0.0))) {
            Some(c) => c,
            None => {
                step *= SHRINK;
                continue;
            }
        };
        let cv = objective.value(&candidate);
        if cv < value {
            v = candidate;
            value = cv;
            step = (step * GROW).min(MAX_STEP);
        } else {
            step *= SHRINK;
        }
    }
    if step < cfg.tol {
        converged = true;
    }
    RestartOutcome {
        value,
        v,
        iterations,
        converged,
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_add(restart as u64))
}

/// Multi-restart minimization of the ensemble-averaged pure-state coherence.
///
/// Restart 0 starts from the eigen-ensemble; the others from Haar-random
/// isometries. Restart `i` draws from a stream seeded with `seed + i`, and the
/// lowest value wins with ties broken by restart index.
pub fn roof_minimize(f: &SimplexFunction, rho: &DensityMatrix, cfg: &RoofConfig) -> Result<RoofResult> {
    cfg.validate()?;
    let spectral = rho.spectral();
    let r = spectral.rank;
    let n = rho.dim();
    let m = resolve_m(cfg.m, r, n)?;

    if r == 1 {
        let psi = spectral.eigenvectors[0].clone();
        let value = coherence_pure(f, &psi);
        let ensemble = Ensemble::new(vec![1.0], vec![psi], rho.clone())?;
        return Ok(RoofResult {
            value,
            ensemble,
            restarts_used: 0,
            iterations: 0,
            converged: true,
            spread: 0.0,
            restart_values: vec![value],
            m: 1,
        });
    }

    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|i| {
            let mut rng = restart_rng(cfg.seed, i);
            let start = if i == 0 {
                CMatrix::identity(m, r)
            } else {
                linalg::random_isometry(m, r, &mut rng)
            };
            let mut objective = IsometryObjective::new(f, &spectral);
            descend(&mut objective, start, cfg, &mut rng)
        })
        .collect();

    let mut best = 0;
    for (i, o) in outcomes.iter().enumerate() {
        if o.value < outcomes[best].value {
            best = i;
        }
    }
    let restart_values: Vec<f64> = outcomes.iter().map(|o| o.value).collect();
    let max = restart_values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = outcomes[best].value;
    let ensemble = ensemble_from_spectral(rho, &spectral, &outcomes[best].v)?;

    Ok(RoofResult {
        value: min,
        ensemble,
        restarts_used: cfg.restarts,
        iterations: outcomes.iter().map(|o| o.iterations).sum(),
        converged: outcomes[best].converged,
        spread: max - min,
        restart_values,
        m,
    })
}

/// Brute-force upper bound: the best objective over `samples` Haar-random isometries.
pub fn roof_sample_oracle(
    f: &SimplexFunction,
    rho: &DensityMatrix,
    samples: usize,
    m: Option<usize>,
    seed: u64,
) -> Result<f64> {
    if samples == 0 {
        return Err(Error::InvalidConfig("samples must be at least 1".into()));
    }
    let spectral = rho.spectral();
    let r = spectral.rank;
    if r == 1 {
        return Ok(coherence_pure(f, &spectral.eigenvectors[0]));
    }
    let m = resolve_m(m, r, rho.dim())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut objective = IsometryObjective::new(f, &spectral);
    let mut best = f64::INFINITY;
    for _ in 0..samples {
        let v = linalg::random_isometry(m, r, &mut rng);
        best = best.min(objective.value(&v));
    }
    Ok(best)
}
