//! n-path interferometer with which-path detectors.
//!
//! A path state `rho` couples to detector states `|d_i>` as
//! `rho_sd = sum_ij rho_ij |i><j| (x) |d_i><d_j|`. Tracing out the detectors
//! damps each coherence by the detector overlap:
//! `(rho_s)_ij = rho_ij <d_j|d_i>`.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, CVector};
use crate::measures::{coherence_l1, mixedness, path_information};
use crate::simplex::SimplexFunction;
use crate::states::DensityMatrix;
use crate::tol;

#[derive(Debug, Clone, PartialEq)]
pub struct DetectorConfig {
    detector_dim: usize,
    detectors: Vec<CVector>,
}

impl DetectorConfig {
    /// One unit vector per path, all of length `detector_dim`.
    pub fn new(detector_dim: usize, detectors: Vec<CVector>) -> Result<Self> {
        if detector_dim == 0 {
            return Err(Error::BadDetectors("detector_dim must be positive".into()));
        }
        if detectors.len() < 2 {
            return Err(Error::BadDetectors(format!(
                "need at least 2 paths, got {}",
                detectors.len()
            )));
        }
        for (i, d) in detectors.iter().enumerate() {
            if d.len() != detector_dim {
                return Err(Error::BadDetectors(format!(
                    "detector {i} has length {} but detector_dim is {detector_dim}",
                    d.len()
                )));
            }
            let norm_sqr = d.norm_squared();
            if (norm_sqr - 1.0).abs() > tol::ACCEPT {
                return Err(Error::BadDetectors(format!(
                    "detector {i} has norm^2 {norm_sqr}, expected 1"
                )));
            }
        }
        Ok(Self {
            detector_dim,
            detectors,
        })
    }

    /// `n` orthonormal detectors `|0>, ..., |n-1>` (full which-path information).
    pub fn orthonormal(n: usize) -> Result<Self> {
        let detectors = (0..n)
            .map(|i| {
                let mut v = CVector::zeros(n);
                v[i] = Complex64::new(1.0, 0.0);
                v
            })
            .collect();
        Self::new(n, detectors)
    }

    /// All paths marked by the same detector state (no which-path information).
    pub fn identical(n: usize, detector: CVector) -> Result<Self> {
        Self::new(detector.len(), vec![detector; n])
    }

    pub fn paths(&self) -> usize {
        self.detectors.len()
    }

    pub fn detector_dim(&self) -> usize {
        self.detector_dim
    }

    pub fn detectors(&self) -> &[CVector] {
        &self.detectors
    }
}

/// `G_ij = <d_i|d_j>`.
pub fn detector_gram(cfg: &DetectorConfig) -> CMatrix {
    let n = cfg.paths();
    CMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::new(1.0, 0.0)
        } else {
            cfg.detectors[i].dotc(&cfg.detectors[j])
        }
    })
}

fn check_paths(rho: &DensityMatrix, cfg: &DetectorConfig) -> Result<()> {
    if rho.dim() != cfg.paths() {
        return Err(Error::DimMismatch {
            expected: cfg.paths(),
            got: rho.dim(),
        });
    }
    Ok(())
}

/// Reduced path state after the detectors are traced out: `rho o G^T`.
pub fn reduce_system(rho: &DensityMatrix, cfg: &DetectorConfig) -> Result<DensityMatrix> {
    check_paths(rho, cfg)?;
    let g = detector_gram(cfg);
    let n = rho.dim();
    let reduced = CMatrix::from_fn(n, n, |i, j| rho.entry(i, j) * g[(j, i)]);
    DensityMatrix::new(reduced)
}

/// Joint path-detector state on `C^n (x) C^detector_dim`, path index major.
pub fn attach_detectors(rho: &DensityMatrix, cfg: &DetectorConfig) -> Result<DensityMatrix> {
    check_paths(rho, cfg)?;
    let n = rho.dim();
    let m = cfg.detector_dim;
    let joint = CMatrix::from_fn(n * m, n * m, |row, col| {
        let (i, a) = (row / m, row % m);
        let (j, b) = (col / m, col % m);
        rho.entry(i, j) * cfg.detectors[i][a] * cfg.detectors[j][b].conj()
    });
    DensityMatrix::new(joint)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DetectorInequality {
    #[serde(rename = "M_of_rho_s")]
    pub m_of_rho_s: f64,
    #[serde(rename = "M_of_rho")]
    pub m_of_rho: f64,
    #[serde(rename = "C_of_rho_s")]
    pub c_of_rho_s: f64,
    #[serde(rename = "D_of_rho_s")]
    pub d_of_rho_s: f64,
    /// `C(rho_s) + D(rho_s) + M(rho)`, at most one when the inequality holds.
    pub mixed_sum: f64,
    pub holds: bool,
}

/// Compares l1 mixedness with and without detectors: `M(rho_s) >= M(rho)`.
pub fn detector_inequality_report(rho: &DensityMatrix, cfg: &DetectorConfig) -> Result<DetectorInequality> {
    let f = SimplexFunction::builtin("l1")?;
    let rho_s = reduce_system(rho, cfg)?;
    let c_s = coherence_l1(&rho_s);
    let m_of_rho_s = mixedness(&f, &rho_s, c_s);
    let m_of_rho = mixedness(&f, rho, coherence_l1(rho));
    let d_of_rho_s = path_information(&f, &rho_s);
    Ok(DetectorInequality {
        m_of_rho_s,
        m_of_rho,
        c_of_rho_s: c_s,
        d_of_rho_s,
        mixed_sum: c_s + d_of_rho_s + m_of_rho,
        holds: m_of_rho_s >= m_of_rho - tol::PROPERTY,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{max_abs_diff, partial_trace_second};
    use crate::states::{dephase, diagonal, random_density, random_pure};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_detectors(n: usize, m: usize, seed: u64) -> DetectorConfig {
        let detectors = (0..n)
            .map(|i| {
                if m == 1 {
                    let phase = (seed as f64 + i as f64).sin();
                    CVector::from_element(1, c(phase.cos(), phase.sin()))
                } else {
                    random_pure(m, seed * 31 + i as u64).unwrap().amplitudes().clone()
                }
            })
            .collect();
        DetectorConfig::new(m, detectors).unwrap()
    }

    #[test]
    fn gram_examples() {
        assert_eq!(
            detector_gram(&DetectorConfig::orthonormal(3).unwrap()),
            CMatrix::identity(3, 3)
        );
        let d = CVector::from_vec(vec![c(0.6, 0.0), c(0.0, 0.8)]);
        let g = detector_gram(&DetectorConfig::identical(3, d).unwrap());
        assert!(g.iter().all(|z| (z - c(1.0, 0.0)).norm() < 1e-15));

        let h = std::f64::consts::FRAC_1_SQRT_2;
        let cfg = DetectorConfig::new(
            2,
            vec![
                CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
                CVector::from_vec(vec![c(h, 0.0), c(h, 0.0)]),
            ],
        )
        .unwrap();
        assert!((detector_gram(&cfg)[(0, 1)] - c(h, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn reduce_examples() {
        let rho = random_density(3, 3, 4).unwrap();
        let s = reduce_system(&rho, &DetectorConfig::orthonormal(3).unwrap()).unwrap();
        assert!(max_abs_diff(s.matrix(), dephase(&rho).matrix()) < 1e-15);

        let d = random_pure(2, 9).unwrap().amplitudes().clone();
        let s = reduce_system(&rho, &DetectorConfig::identical(3, d).unwrap()).unwrap();
        assert!(max_abs_diff(s.matrix(), rho.matrix()) < 1e-15);

        let plus = DensityMatrix::from_real_rows(&[&[0.5, 0.5], &[0.5, 0.5]]).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let cfg = DetectorConfig::new(
            2,
            vec![
                CVector::from_vec(vec![c(1.0, 0.0), c(0.0, 0.0)]),
                CVector::from_vec(vec![c(h, 0.0), c(h, 0.0)]),
            ],
        )
        .unwrap();
        let s = reduce_system(&plus, &cfg).unwrap();
        assert!((s.entry(0, 1) - c(0.5 * h, 0.0)).norm() < 1e-15);
        assert!((s.entry(1, 0) - c(0.5 * h, 0.0)).norm() < 1e-15);
        assert_eq!(s.entry(0, 0), c(0.5, 0.0));

        assert!(matches!(
            reduce_system(&plus, &DetectorConfig::orthonormal(3).unwrap()),
            Err(Error::DimMismatch { .. })
        ));
    }

    #[test]
    fn reduce_preserves_diagonal_and_damps_coherence() {
        for seed in 0..50 {
            let n = 2 + (seed as usize % 3);
            let rho = random_density(n, n, seed).unwrap();
            let cfg = random_detectors(n, 2, seed);
            let s = reduce_system(&rho, &cfg).unwrap();
            assert_eq!(diagonal(&s), diagonal(&rho));
            for i in 0..n {
                for j in 0..n {
                    assert!(s.entry(i, j).norm() <= rho.entry(i, j).norm() + 1e-15);
                }
            }
        }
    }

    #[test]
    fn attach_then_trace_matches_reduce() {
        for seed in 0..30 {
            let n = 2 + (seed as usize % 3);
            let m = 1 + (seed as usize % 3);
            let rho = random_density(n, 1 + seed as usize % n, seed).unwrap();
            let cfg = random_detectors(n, m, seed);
            let joint = attach_detectors(&rho, &cfg).unwrap();
            let traced = partial_trace_second(joint.matrix(), n, m);
            let reduced = reduce_system(&rho, &cfg).unwrap();
            assert!(max_abs_diff(&traced, reduced.matrix()) < 1e-12);
        }
    }

    #[test]
    fn attach_examples() {
        let rho = random_density(3, 2, 1).unwrap();
        let trivial = DetectorConfig::identical(3, CVector::from_element(1, c(1.0, 0.0))).unwrap();
        assert_eq!(attach_detectors(&rho, &trivial).unwrap().matrix(), rho.matrix());

        let zero = DensityMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, 0.0]]).unwrap();
        let joint = attach_detectors(&zero, &random_detectors(2, 3, 5)).unwrap();
        assert_eq!(joint.spectral().rank, 1);
    }

    #[test]
    fn inequality_examples() {
        let rho = random_density(3, 3, 8).unwrap();
        let d = random_pure(2, 1).unwrap().amplitudes().clone();
        let r = detector_inequality_report(&rho, &DetectorConfig::identical(3, d).unwrap()).unwrap();
        assert!(r.holds && (r.m_of_rho_s - r.m_of_rho).abs() < 1e-15);

        let r = detector_inequality_report(&rho, &DetectorConfig::orthonormal(3).unwrap()).unwrap();
        let f = SimplexFunction::builtin("l1").unwrap();
        assert!(r.holds);
        assert!((r.m_of_rho_s - f.evaluate(&diagonal(&rho))).abs() < 1e-15);
        assert!(r.mixed_sum <= 1.0 + 1e-12);
    }

    #[test]
    fn bad_detectors() {
        let v = CVector::from_vec(vec![c(1.0, 0.0), c(1.0, 0.0)]);
        assert!(DetectorConfig::new(2, vec![v.clone(), v]).is_err());
        assert!(DetectorConfig::new(2, vec![CVector::from_element(2, c(0.0, 0.0))]).is_err());
    }
}
