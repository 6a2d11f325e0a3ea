//! Requirements on wave (coherence-like) and particle (path-information-like)
//! quantifiers.

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use serde_json::json;

use super::{run_check, sample_permutation, sample_state, state_value, CheckRecord, SuiteReport, Trial};
use crate::measures::{coherence_l1, path_information, quadratic_triality};
use crate::simplex::SimplexFunction;
use crate::states::{self, dephase, special_state, DensityMatrix, SpecialKind};
use crate::tol;

/// A wave-feature quantifier under test.
#[derive(Clone)]
pub enum WaveMeasure {
    /// Closed-form l1 coherence.
    L1Direct,
    /// `sum_{i != j} |rho_ij|^2`.
    QuadraticW,
    Custom {
        name: String,
        eval: Arc<dyn Fn(&DensityMatrix) -> f64 + Send + Sync>,
    },
}

impl WaveMeasure {
    pub fn custom<F>(name: impl Into<String>, eval: F) -> Self
    where
        F: Fn(&DensityMatrix) -> f64 + Send + Sync + 'static,
    {
        Self::Custom {
            name: name.into(),
            eval: Arc::new(eval),
        }
    }

    pub fn name(&self) -> &str {
        match self {
            Self::L1Direct => "l1-direct",
            Self::QuadraticW => "quadratic-W",
            Self::Custom { name, .. } => name,
        }
    }

    pub fn evaluate(&self, rho: &DensityMatrix) -> f64 {
        match self {
            Self::L1Direct => coherence_l1(rho),
            Self::QuadraticW => quadratic_triality(rho).w,
            Self::Custom { eval, .. } => eval(rho),
        }
    }
}

impl fmt::Debug for WaveMeasure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// W(1)-W(4): minimal on classical states, maximal on the uniform
/// superposition, invariant under basis permutations, convex.
pub fn run_wave_axioms(measure: &WaveMeasure, dims: &[usize], samples: usize, seed: u64) -> SuiteReport {
    let t = tol::PROPERTY;
    let mut checks = Vec::new();
    for &dim in dims {
        let w = |rho: &DensityMatrix| measure.evaluate(rho);

        checks.push(run_check(
            "W1",
            "minimal (zero) on classical states; dephasing never increases it",
            Some(dim),
            t,
            samples,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                let classical = dephase(&rho);
                let wc = w(&classical);
                let violation = wc.abs().max(wc - w(&rho));
                Trial::new(violation, json!({ "rho": state_value(&rho) }))
            },
        ));

        let peak = w(&special_state(SpecialKind::MaxCoherent, dim, None).expect("dim >= 2"));
        checks.push(run_check(
            "W2",
            "maximal on the uniform superposition",
            Some(dim),
            t,
            samples,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                Trial::new(w(&rho) - peak, json!({ "rho": state_value(&rho) }))
            },
        ));

        checks.push(run_check(
            "W3",
            "invariant under permutations of the basis",
            Some(dim),
            t,
            samples,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                let perm = sample_permutation(dim, rng);
                let moved = rho.permuted(&perm).expect("valid permutation");
                Trial::new(
                    (w(&moved) - w(&rho)).abs(),
                    json!({ "rho": state_value(&rho), "permutation": perm }),
                )
            },
        ));

        checks.push(run_check("W4", "convex", Some(dim), t, samples, seed, |_, rng| {
            let a = sample_state(dim, rng);
            let b = sample_state(dim, rng);
            let lambda: f64 = rng.random();
            let mix = a.mix(&b, lambda).expect("same dimension");
            let violation = w(&mix) - (lambda * w(&a) + (1.0 - lambda) * w(&b));
            Trial::new(
                violation,
                json!({ "rho": state_value(&a), "sigma": state_value(&b), "lambda": lambda }),
            )
        }));
    }
    SuiteReport::new(
        "wave-axioms",
        Some(measure.name().to_string()),
        None,
        dims,
        samples,
        seed,
        checks,
    )
}

/// P(1)-P(4) for the path information `D_f = 1 - f(diag)`.
pub fn run_particle_axioms(f: &SimplexFunction, dims: &[usize], samples: usize, seed: u64) -> SuiteReport {
    let t = tol::PROPERTY;
    let d = |rho: &DensityMatrix| path_information(f, rho);
    let mut checks: Vec<CheckRecord> = Vec::new();
    for &dim in dims {
        let basis_gap = (0..dim)
            .map(|i| (d(&special_state(SpecialKind::Basis, dim, Some(i)).expect("index in range")) - 1.0).abs())
            .fold(0.0, f64::max);
        checks.push(run_check(
            "P1",
            "reaches its global maximum 1 on basis states",
            Some(dim),
            t,
            samples,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                Trial::new(basis_gap.max(d(&rho) - 1.0), json!({ "rho": state_value(&rho) }))
            },
        ));

        let floor = d(&states::max_mixed(dim));
        let floor_coherent = d(&special_state(SpecialKind::MaxCoherent, dim, None).expect("dim >= 2"));
        checks.push(run_check(
            "P2",
            "reaches its global minimum at a uniform diagonal",
            Some(dim),
            t,
            samples,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                let violation = (floor - d(&rho)).max((floor_coherent - floor).abs());
                Trial::new(violation, json!({ "rho": state_value(&rho), "minimum": floor }))
            },
        ));

        checks.push(run_check(
            "P3",
            "invariant under permutations of the diagonal",
            Some(dim),
            t,
            samples,
            seed,
            |_, rng| {
                let rho = sample_state(dim, rng);
                let perm = sample_permutation(dim, rng);
                let moved = rho.permuted(&perm).expect("valid permutation");
                Trial::new(
                    (d(&moved) - d(&rho)).abs(),
                    json!({ "rho": state_value(&rho), "permutation": perm }),
                )
            },
        ));

        checks.push(run_check("P4", "convex", Some(dim), t, samples, seed, |_, rng| {
            let a = sample_state(dim, rng);
            let b = sample_state(dim, rng);
            let lambda: f64 = rng.random();
            let mix = a.mix(&b, lambda).expect("same dimension");
            let violation = d(&mix) - (lambda * d(&a) + (1.0 - lambda) * d(&b));
            Trial::new(
                violation,
                json!({ "rho": state_value(&a), "sigma": state_value(&b), "lambda": lambda }),
            )
        }));
    }
    SuiteReport::new(
        "particle-axioms",
        Some(f.name().to_string()),
        None,
        dims,
        samples,
        seed,
        checks,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::matrix_from_value;
    use crate::states::DensityMatrix;

    #[test]
    fn builtin_wave_measures_pass() {
        for m in [WaveMeasure::L1Direct, WaveMeasure::QuadraticW] {
            let r = run_wave_axioms(&m, &[2, 3, 4], 300, 5);
            assert!(r.pass, "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn planted_nonconvex_measure_fails_w4_with_replayable_witness() {
        let planted = WaveMeasure::custom("sqrt-l1", |rho| coherence_l1(rho).sqrt());
        let r = run_wave_axioms(&planted, &[2], 300, 5);
        assert!(!r.pass);
        let w4 = r.check("W4", Some(2)).unwrap();
        assert!(w4.failures > 0);
        for id in ["W1", "W2", "W3"] {
            assert!(r.check(id, Some(2)).unwrap().passed(), "{id}");
        }

        let wit = w4.witness.as_ref().unwrap();
        let a = DensityMatrix::new(matrix_from_value(&wit["rho"], "rho").unwrap()).unwrap();
        let b = DensityMatrix::new(matrix_from_value(&wit["sigma"], "sigma").unwrap()).unwrap();
        let lambda = wit["lambda"].as_f64().unwrap();
        let mix = a.mix(&b, lambda).unwrap();
        let replay = planted.evaluate(&mix) - (lambda * planted.evaluate(&a) + (1.0 - lambda) * planted.evaluate(&b));
        assert_eq!(replay, w4.worst_violation);
    }

    #[test]
    fn particle_axioms_pass_for_builtins() {
        for name in ["l1", "entropy", "fidelity"] {
            let f = SimplexFunction::builtin(name).unwrap();
            let r = run_particle_axioms(&f, &[2, 3, 4], 200, 9);
            assert!(r.pass, "{name}: {:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn unnormalized_fidelity_minimum_is_positive() {
        let f = SimplexFunction::builtin("fidelity").unwrap();
        let r = run_particle_axioms(&f, &[2], 200, 1);
        assert!(r.check("P2", Some(2)).unwrap().passed());
        let floor = path_information(&f, &states::max_mixed(2));
        assert!((floor - (1.0 - 0.5f64.sqrt())).abs() < 1e-15);
    }
}
