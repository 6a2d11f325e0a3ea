//! Worked l1 and fidelity identities, and the detector inequality.

use num_complex::Complex64;
use serde_json::json;

use super::{
    fold_trials, max_abs, run_check, sample_pure, sample_state, state_value, CheckRecord, CheckStatus, SuiteReport,
    Trial,
};
use crate::interferometer::{detector_inequality_report, reduce_system, DetectorConfig};
use crate::linalg::CVector;
use crate::measures::{coherence_l1, coherence_pure, mixedness, path_information, triality_report, Mode};
use crate::roof::{roof_minimize, RoofConfig};
use crate::simplex::{random_simplex_point, SimplexFunction};
use crate::states::{diagonal, DensityMatrix};
use crate::tol;

const RANDOM_CASES: usize = 200;
const ROOF_CASES: usize = 20;
const INCOHERENT_PROBES: usize = 200;

/// Evaluates the l1 and fidelity worked examples on fixed and random states.
pub fn run_example_suite(seed: u64) -> SuiteReport {
    let l1 = SimplexFunction::builtin("l1").expect("builtin");
    let fid = SimplexFunction::builtin("fidelity").expect("builtin");
    let mut checks: Vec<CheckRecord> = Vec::new();

    let fixed = DensityMatrix::from_real_rows(&[&[0.5, 0.3], &[0.3, 0.5]]).expect("valid state");
    let r = triality_report(&l1, &fixed, Mode::Direct, None).expect("l1 has a closed form");
    let gap = max_abs([r.c - 0.6, r.d, r.m - 0.4, r.sum - 1.0]);
    checks.push(fold_trials(
        "EX-l1-fixed",
        "l1 triality of [[0.5, 0.3], [0.3, 0.5]] is (0.6, 0, 0.4)",
        Some(2),
        tol::IDENTITY,
        vec![Trial::new(
            gap,
            json!({ "rho": state_value(&fixed), "C": r.c, "D": r.d, "M": r.m }),
        )],
    ));

    for dim in 2..=4 {
        checks.push(run_check(
            "EX-l1-closed-forms",
            "D_l1 = 1 - (1/(n-1)) sum_{i!=j} sqrt(rho_ii rho_jj) and M_l1 = (1/(n-1)) sum_{i!=j} (sqrt(rho_ii rho_jj) - |rho_ij|)",
            Some(dim),
            tol::IDENTITY,
            RANDOM_CASES,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                let n = dim as f64;
                let mut geo = 0.0;
                let mut off = 0.0;
                for i in 0..dim {
                    for j in 0..dim {
                        if i != j {
                            geo += (rho.entry(i, i).re.abs() * rho.entry(j, j).re.abs()).sqrt();
                            off += rho.entry(i, j).norm();
                        }
                    }
                }
                let d_closed = 1.0 - geo / (n - 1.0);
                let m_closed = (geo - off) / (n - 1.0);
                let gap = max_abs([
                    path_information(&l1, &rho) - d_closed,
                    mixedness(&l1, &rho, coherence_l1(&rho)) - m_closed,
                ]);
                Trial::new(gap, json!({ "rho": state_value(&rho) }))
            },
        ));

        checks.push(run_check(
            "EX-detector",
            "M_l1(rho_s) >= M_l1(rho), so C(rho_s) + D(rho_s) + M(rho) <= 1",
            Some(dim),
            tol::PROPERTY,
            RANDOM_CASES,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                let cfg = random_detectors(dim, rng);
                let r = detector_inequality_report(&rho, &cfg).expect("dimensions agree");
                let violation = (r.m_of_rho - r.m_of_rho_s).max(r.mixed_sum - 1.0);
                Trial::new(
                    violation,
                    json!({ "rho": state_value(&rho), "detectors": crate::io::detectors_to_value(&cfg) }),
                )
            },
        ));

        checks.push(run_check(
            "EX-fidelity-pure",
            "C_F(psi) = sqrt(1 - max_i |c_i|^2) is the minimum over incoherent states of sqrt(1 - F)",
            Some(dim),
            tol::IDENTITY,
            RANDOM_CASES,
            seed,
            |_, rng| {
                let psi = sample_pure(dim, rng);
                let pops = psi.populations();
                let c = coherence_pure(&fid, &psi);
                // For pure psi and diagonal sigma, F = sum_i sigma_i |c_i|^2.
                let distance = |sigma: &[f64]| {
                    let fidelity: f64 = sigma.iter().zip(pops.as_slice()).map(|(s, p)| s * p).sum();
                    (1.0 - fidelity).max(0.0).sqrt()
                };
                let mut best = f64::INFINITY;
                for i in 0..dim {
                    let mut e = vec![0.0; dim];
                    e[i] = 1.0;
                    best = best.min(distance(&e));
                }
                let vertex_gap = (best - c).abs();
                let mut below = 0.0f64;
                for _ in 0..INCOHERENT_PROBES {
                    let sigma = random_simplex_point(dim, rng);
                    below = below.max(c - distance(&sigma));
                }
                let duality = (c + path_information(&fid, &DensityMatrix::from_pure(&psi)) - 1.0).abs();
                Trial::new(
                    vertex_gap.max(below).max(duality),
                    json!({ "psi": crate::io::vector_to_value(psi.amplitudes()) }),
                )
            },
        ));

        checks.push(run_check(
            "EX-fidelity-D",
            "D_F(rho) = 1 - sqrt(1 - max_i rho_ii)",
            Some(dim),
            tol::IDENTITY,
            RANDOM_CASES,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                let max = diagonal(&rho).as_slice().iter().copied().fold(0.0, f64::max);
                let closed = 1.0 - (1.0 - max).sqrt();
                Trial::new(
                    (path_information(&fid, &rho) - closed).abs(),
                    json!({ "rho": state_value(&rho) }),
                )
            },
        ));
    }

    let roof_cfg = RoofConfig::with_seed(seed);
    checks.push(run_check(
        "EX-fidelity-M",
        "M_F = sqrt(1 - max_i rho_ii) - C_F(rho) is non-negative",
        Some(2),
        tol::ROOF_CONSISTENCY,
        ROOF_CASES,
        seed,
        |_, rng| {
            let rho = sample_state(2, rng);
            let max = diagonal(&rho).as_slice().iter().copied().fold(0.0, f64::max);
            let violation = match roof_minimize(&fid, &rho, &roof_cfg) {
                Ok(r) => r.value - (1.0 - max).sqrt(),
                Err(_) => f64::NAN,
            };
            Trial::new(violation, json!({ "rho": state_value(&rho) }))
        },
    ));

    let mut detector_sum = run_check(
        "EX-fidelity-detector",
        "C_F(rho_s) + D_F(rho_s) <= 1 with detectors (outcome recorded, not asserted)",
        Some(2),
        tol::ROOF_CONSISTENCY,
        ROOF_CASES,
        seed,
        |_, rng| {
            let rho = sample_state(2, rng);
            let cfg = random_detectors(2, rng);
            let rho_s = reduce_system(&rho, &cfg).expect("dimensions agree");
            let violation = match roof_minimize(&fid, &rho_s, &roof_cfg) {
                Ok(r) => r.value + path_information(&fid, &rho_s) - 1.0,
                Err(_) => f64::NAN,
            };
            Trial::new(
                violation,
                json!({ "rho": state_value(&rho), "detectors": crate::io::detectors_to_value(&cfg) }),
            )
        },
    );
    detector_sum.note = Some(format!(
        "{} of {} cases exceeded 1",
        detector_sum.failures, detector_sum.trials
    ));
    detector_sum.failures = 0;
    detector_sum.status = CheckStatus::Info;
    checks.push(detector_sum);

    SuiteReport::new("examples", None, None, &[2, 3, 4], RANDOM_CASES, seed, checks)
}

fn random_detectors<R: rand::Rng + ?Sized>(n: usize, rng: &mut R) -> DetectorConfig {
    let m = rng.random_range(1..=3usize);
    let detectors = (0..n)
        .map(|_| {
            if m == 1 {
                let phase: f64 = rng.random::<f64>() * std::f64::consts::TAU;
                CVector::from_element(1, Complex64::from_polar(1.0, phase))
            } else {
                sample_pure(m, rng).amplitudes().clone()
            }
        })
        .collect();
    DetectorConfig::new(m, detectors).expect("unit detectors")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_suite_passes() {
        let r = run_example_suite(7);
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        let det: usize = r
            .checks
            .iter()
            .filter(|c| c.id == "EX-detector")
            .map(|c| c.failures)
            .sum();
        assert_eq!(det, 0);
        let info = r.check("EX-fidelity-detector", Some(2)).unwrap();
        assert_eq!(info.status, CheckStatus::Info);
        assert_eq!(info.trials, ROOF_CASES);
    }
}
