//! Duality, the mixed-state bound, and the properties of the mixedness residual.

use rand::Rng;
use serde_json::json;

use super::{
    fold_trials, run_check, sample_isometry, sample_pure, sample_state, state_value, CheckRecord, CheckStatus,
    SuiteReport, Trial,
};
use crate::measures::{coherence_of, coherence_pure, path_information, quadratic_triality, Mode};
use crate::roof::{ensemble_from_isometry, roof_minimize, roof_objective, RoofConfig};
use crate::simplex::{DirectForm, SimplexFunction};
use crate::states::{self, diagonal, DensityMatrix, FamilyKind};
use crate::sweep::{monotonicity_violation, sweep};
use crate::tol;

const SWEEP_STEPS: usize = 21;

/// How mixed-state coherence is obtained in a run.
enum Coherence {
    Direct(DirectForm),
    Roof(RoofConfig),
}

impl Coherence {
    fn eval(&self, f: &SimplexFunction, rho: &DensityMatrix) -> f64 {
        match self {
            Self::Direct(form) => coherence_of(*form, rho),
            Self::Roof(cfg) => roof_minimize(f, rho, cfg).map(|r| r.value).unwrap_or(f64::NAN),
        }
    }

    fn mode(&self) -> Mode {
        match self {
            Self::Direct(_) => Mode::Direct,
            Self::Roof(_) => Mode::Roof,
        }
    }

    fn property_tol(&self) -> f64 {
        match self {
            Self::Direct(_) => tol::PROPERTY,
            Self::Roof(_) => tol::ROOF_PROPERTY,
        }
    }

    fn bound_tol(&self) -> f64 {
        match self {
            Self::Direct(_) => tol::PROPERTY,
            Self::Roof(_) => tol::ROOF_CONSISTENCY,
        }
    }

    fn sweep_tol(&self) -> f64 {
        match self {
            Self::Direct(_) => tol::SWEEP_DIRECT,
            Self::Roof(_) => tol::ROOF_PROPERTY,
        }
    }
}

/// Runs the duality and triality checks for one generator.
///
/// Checks that need mixed-state coherence are skipped (with a note) when
/// `mode` is direct and `f` has no closed form. `solver` defaults to the
/// standard roof configuration seeded with `seed`.
pub fn run_theorem_suite(
    f: &SimplexFunction,
    mode: Mode,
    dims: &[usize],
    samples: usize,
    seed: u64,
    solver: Option<&RoofConfig>,
) -> SuiteReport {
    let coherence = match mode {
        Mode::Direct => f.direct_form().map(Coherence::Direct),
        Mode::Roof => Some(Coherence::Roof(
            solver.cloned().unwrap_or_else(|| RoofConfig::with_seed(seed)),
        )),
        Mode::Quadratic => None,
    };
    let mut checks = Vec::new();
    for &dim in dims {
        checks.extend(exact_checks(f, dim, samples, seed));
        match &coherence {
            Some(c) => checks.extend(mixedness_checks(f, c, dim, samples, seed)),
            None => {
                let note = format!("no mixed-state coherence for `{}` in {mode} mode", f.name());
                for (id, anchor) in MIXEDNESS_CHECKS {
                    checks.push(CheckRecord::skipped(id, anchor, Some(dim), note.clone()));
                }
            }
        }
    }
    SuiteReport::new(
        "theorems",
        Some(f.name().to_string()),
        Some(mode),
        dims,
        samples,
        seed,
        checks,
    )
}

const MIXEDNESS_CHECKS: [(&str, &str); 7] = [
    ("roof-bound", "C + D <= 1 on mixed states"),
    ("M-pure-zero", "M = 0 on pure states"),
    ("M-max-mixed-one", "M = 1 on the maximally mixed state"),
    ("M-concave", "M is concave"),
    ("M-depolarize", "M non-increasing in p along p rho + (1-p) 1/n"),
    ("M-dephase-mix", "M non-increasing in p along p rho + (1-p) dephase(rho)"),
    (
        "M-antidephase",
        "M non-increasing in p along p rho + (1-p) (1/2 + rho - dephase(rho))",
    ),
];

/// Checks that need no mixed-state coherence: pure-state duality, the
/// ensemble form of the mixed-state bound, and the quadratic identity.
fn exact_checks(f: &SimplexFunction, dim: usize, samples: usize, seed: u64) -> Vec<CheckRecord> {
    let mut out = Vec::new();
    out.push(run_check(
        "pure-duality",
        "C + D = 1 on pure states",
        Some(dim),
        tol::IDENTITY,
        samples,
        seed,
        |_, rng| {
            let psi = sample_pure(dim, rng);
            let c = coherence_pure(f, &psi);
            let d = path_information(f, &DensityMatrix::from_pure(&psi));
            Trial::new(
                (c + d - 1.0).abs(),
                json!({ "psi": crate::io::vector_to_value(psi.amplitudes()) }),
            )
        },
    ));

    out.push(run_check(
        "ensemble-bound",
        "f(diag rho) >= sum_j p_j C_f(psi_j) for every pure-state ensemble",
        Some(dim),
        tol::PROPERTY,
        samples,
        seed,
        |_, rng| {
            let rho = sample_state(dim, rng);
            let v = sample_isometry(rho.spectral().rank, dim, rng);
            let ens = ensemble_from_isometry(&rho, &v).expect("isometry matches rank");
            let violation = roof_objective(f, &ens) - f.evaluate(&diagonal(&rho));
            Trial::new(
                violation,
                json!({ "rho": state_value(&rho), "isometry": crate::io::matrix_to_value(&v) }),
            )
        },
    ));

    out.push(run_check(
        "quadratic-identity",
        "sum rho_ii^2 + sum_{i!=j} |rho_ij|^2 + (1 - tr rho^2) = 1",
        Some(dim),
        tol::IDENTITY,
        samples,
        seed,
        |_, rng| {
            let rho = sample_state(dim, rng);
            Trial::new(quadratic_triality(&rho).residual(), json!({ "rho": state_value(&rho) }))
        },
    ));
    out
}

fn mixedness_checks(
    f: &SimplexFunction,
    coherence: &Coherence,
    dim: usize,
    samples: usize,
    seed: u64,
) -> Vec<CheckRecord> {
    let mix_m = |rho: &DensityMatrix| f.evaluate(&diagonal(rho)) - coherence.eval(f, rho);
    let mut out = Vec::new();
    let (id, anchor) = MIXEDNESS_CHECKS[0];
    out.push(run_check(
        id,
        anchor,
        Some(dim),
        coherence.bound_tol(),
        samples,
        seed,
        |_, rng| {
            let rho = sample_state(dim, rng);
            let c = coherence.eval(f, &rho);
            Trial::new(c + path_information(f, &rho) - 1.0, json!({ "rho": state_value(&rho) }))
        },
    ));

    let (id, anchor) = MIXEDNESS_CHECKS[1];
    out.push(run_check(
        id,
        anchor,
        Some(dim),
        tol::PROPERTY,
        samples,
        seed,
        |_, rng| {
            let psi = sample_pure(dim, rng);
            let rho = DensityMatrix::from_pure(&psi);
            Trial::new(
                mix_m(&rho).abs(),
                json!({ "psi": crate::io::vector_to_value(psi.amplitudes()) }),
            )
        },
    ));

    let (id, anchor) = MIXEDNESS_CHECKS[2];
    if f.is_normalized() {
        let at_center = mix_m(&states::max_mixed(dim));
        out.push(run_check(
            id,
            anchor,
            Some(dim),
            coherence.bound_tol(),
            samples,
            seed,
            |_, rng| {
                // The centre must hit 1 and no sampled state may exceed it.
                let rho = sample_state(dim, rng);
                let violation = (at_center - 1.0).abs().max(mix_m(&rho) - at_center);
                Trial::new(violation, json!({ "rho": state_value(&rho), "at_center": at_center }))
            },
        ));
    } else {
        out.push(CheckRecord::skipped(
            id,
            anchor,
            Some(dim),
            format!(
                "`{}` is not normalized (f(uniform) != 1); pass --normalize to test this",
                f.name()
            ),
        ));
    }

    let (id, anchor) = MIXEDNESS_CHECKS[3];
    out.push(run_check(
        id,
        anchor,
        Some(dim),
        coherence.property_tol(),
        samples,
        seed,
        |_, rng| {
            let a = sample_state(dim, rng);
            let b = sample_state(dim, rng);
            let lambda: f64 = rng.random();
            let mix = a.mix(&b, lambda).expect("same dimension");
            let violation = lambda * mix_m(&a) + (1.0 - lambda) * mix_m(&b) - mix_m(&mix);
            Trial::new(
                violation,
                json!({ "rho": state_value(&a), "sigma": state_value(&b), "lambda": lambda }),
            )
        },
    ));

    for (k, family) in [(4, FamilyKind::Depolarize), (5, FamilyKind::DephaseMix)] {
        let (id, anchor) = MIXEDNESS_CHECKS[k];
        out.push(run_check(
            id,
            anchor,
            Some(dim),
            coherence.sweep_tol(),
            samples,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                sweep_trial(f, coherence, &rho, family)
            },
        ));
    }

    let (id, anchor) = MIXEDNESS_CHECKS[6];
    if dim == 2 {
        out.extend(antidephase_checks(f, coherence, id, anchor, samples, seed));
    } else {
        out.push(CheckRecord::skipped(id, anchor, Some(dim), "defined for qubits only"));
    }
    out
}

fn sweep_trial(f: &SimplexFunction, coherence: &Coherence, rho: &DensityMatrix, family: FamilyKind) -> Trial {
    let solver = match coherence {
        Coherence::Roof(cfg) => Some(cfg),
        Coherence::Direct(_) => None,
    };
    let violation = match sweep(f, rho, family, coherence.mode(), SWEEP_STEPS, solver) {
        Ok(rows) => monotonicity_violation(&rows),
        Err(_) => f64::NAN,
    };
    Trial::new(violation, json!({ "rho": state_value(rho), "family": family.as_str() }))
}

/// The antidephasing family needs a PSD auxiliary state. Qubits where it is
/// not PSD are counted in a separate informational record.
fn antidephase_checks(
    f: &SimplexFunction,
    coherence: &Coherence,
    id: &str,
    anchor: &str,
    samples: usize,
    seed: u64,
) -> Vec<CheckRecord> {
    let dim = 2;
    let outcomes: Vec<Option<Trial>> = (0..samples)
        .map(|t| {
            let mut rng = super::trial_rng(seed, id, dim, t);
            let rho = sample_state(dim, &mut rng);
            states::family_anchor(FamilyKind::Antidephase, &rho)
                .ok()
                .map(|_| sweep_trial(f, coherence, &rho, FamilyKind::Antidephase))
        })
        .collect();
    let rejected = outcomes.iter().filter(|o| o.is_none()).count();
    let valid: Vec<Trial> = outcomes.into_iter().flatten().collect();
    let mut main = fold_trials(id, anchor, Some(dim), coherence.sweep_tol(), valid);
    main.note = Some(format!(
        "{} of {samples} sampled qubits had a PSD auxiliary state",
        samples - rejected
    ));
    let info = CheckRecord {
        id: format!("{id}-general"),
        anchor: "qubits whose auxiliary state is not PSD (outcome recorded, not asserted)".into(),
        dim: Some(dim),
        trials: rejected,
        failures: 0,
        worst_violation: 0.0,
        tolerance: 0.0,
        status: CheckStatus::Info,
        note: Some(format!("{rejected} qubits excluded")),
        witness: None,
    };
    vec![main, info]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn l1_direct_suite_passes() {
        let f = SimplexFunction::builtin("l1").unwrap();
        let r = run_theorem_suite(&f, Mode::Direct, &[2, 3, 4], 100, 3, None);
        assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        assert!(r
            .checks
            .iter()
            .filter(|c| c.status == CheckStatus::Skipped)
            .all(|c| c.id == "M-antidephase"));
    }

    #[test]
    fn entropy_direct_skips_mixedness_checks() {
        let f = SimplexFunction::builtin("entropy").unwrap();
        let r = run_theorem_suite(&f, Mode::Direct, &[2], 50, 3, None);
        assert!(r.pass);
        assert_eq!(r.check("M-concave", Some(2)).unwrap().status, CheckStatus::Skipped);
        assert_eq!(r.check("pure-duality", Some(2)).unwrap().status, CheckStatus::Pass);
    }

    #[test]
    fn unnormalized_fidelity_skips_center_check() {
        let f = SimplexFunction::builtin("fidelity").unwrap();
        let cfg = RoofConfig {
            restarts: 4,
            max_iters: 400,
            ..RoofConfig::with_seed(1)
        };
        let r = run_theorem_suite(&f, Mode::Roof, &[2], 4, 3, Some(&cfg));
        let c = r.check("M-max-mixed-one", Some(2)).unwrap();
        assert_eq!(c.status, CheckStatus::Skipped);
        assert!(c.note.as_ref().unwrap().contains("normalized"));
    }
}
