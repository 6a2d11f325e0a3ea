//! Symmetric concave functions on the probability simplex.
//!
//! Each function generates a whole family of quantities: pure-state coherence
//! `f(|psi_i|^2)`, path information `1 - f(diag rho)`, and the mixedness residual.

use std::fmt;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::states::{ProbVector, MAX_DIM};
use crate::tol;

type Kernel = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Clone)]
enum Form {
    L1,
    Fidelity,
    Entropy,
    Custom(Kernel),
}

/// A closed form for mixed-state coherence, when the generator has one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DirectForm {
    /// `(1/(n-1)) sum_{i != j} |rho_ij|`.
    L1,
}

#[derive(Clone)]
pub struct SimplexFunction {
    name: String,
    form: Form,
    /// Divide by the value at the uniform vector of the argument's length.
    rescaled: bool,
    normalized: bool,
}

impl fmt::Debug for SimplexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SimplexFunction")
            .field("name", &self.name)
            .field("normalized", &self.normalized)
            .finish()
    }
}

impl SimplexFunction {
    /// Looks up a built-in generator: `l1`, `fidelity`, or `entropy`.
    pub fn builtin(name: &str) -> Result<Self> {
        let (form, normalized) = match name {
            "l1" => (Form::L1, true),
            "fidelity" => (Form::Fidelity, false),
            "entropy" => (Form::Entropy, true),
            other => return Err(Error::UnknownFunction(other.to_string())),
        };
        Ok(Self {
            name: name.to_string(),
            form,
            rescaled: false,
            normalized,
        })
    }

    /// Wraps an arbitrary kernel. Nothing about it is assumed; run
    /// [`check_f_conditions`] to find out whether it qualifies.
    pub fn custom<F>(name: impl Into<String>, normalized: bool, kernel: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            form: Form::Custom(Arc::new(kernel)),
            rescaled: false,
            normalized,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// True when `f(uniform) = 1` in every dimension.
    pub fn is_normalized(&self) -> bool {
        self.normalized
    }

    pub fn direct_form(&self) -> Option<DirectForm> {
        match self.form {
            Form::L1 => Some(DirectForm::L1),
            _ => None,
        }
    }

    pub fn evaluate(&self, x: &ProbVector) -> f64 {
        self.evaluate_slice(x.as_slice())
    }

    /// Evaluates on raw simplex coordinates. Callers guarantee `x` lies on the simplex.
    pub fn evaluate_slice(&self, x: &[f64]) -> f64 {
        let raw = self.raw(x);
        if self.rescaled {
            raw / self.raw_at_uniform(x.len())
        } else {
            raw
        }
    }

    /// Value at the uniform vector of dimension `dim`.
    pub fn max_value(&self, dim: usize) -> f64 {
        self.evaluate(&ProbVector::uniform(dim))
    }

    fn raw_at_uniform(&self, dim: usize) -> f64 {
        self.raw(ProbVector::uniform(dim).as_slice())
    }

    fn raw(&self, x: &[f64]) -> f64 {
        match &self.form {
            Form::L1 => l1_kernel(x),
            Form::Fidelity => fidelity_kernel(x),
            Form::Entropy => entropy_kernel(x),
            Form::Custom(k) => k(x),
        }
    }

    /// `f / f(uniform)`, scaled separately in each dimension.
    ///
    /// Already-normalized functions are returned unchanged.
    pub fn normalize(&self) -> Result<SimplexFunction> {
        if self.normalized {
            return Ok(self.clone());
        }
        for dim in 2..=MAX_DIM {
            let u = self.raw_at_uniform(dim);
            if !(u.is_finite() && u > 0.0) {
                return Err(Error::ZeroAtUniform {
                    name: self.name.clone(),
                    dim,
                });
            }
        }
        Ok(Self {
            name: format!("{}-normalized", self.name),
            form: self.form.clone(),
            rescaled: true,
            normalized: true,
        })
    }
}

fn l1_kernel(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let mut acc = 0.0;
    for i in 0..n {
        for j in (i + 1)..n {
            acc += (x[i] * x[j]).sqrt();
        }
    }
    2.0 * acc / (n - 1) as f64
}

fn fidelity_kernel(x: &[f64]) -> f64 {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    (1.0 - max).max(0.0).sqrt()
}

fn entropy_kernel(x: &[f64]) -> f64 {
    let n = x.len();
    if n < 2 {
        return 0.0;
    }
    let h: f64 = x.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum();
    h / (n as f64).ln()
}

/// Uniform (Dirichlet(1)) sample from the simplex.
pub fn random_simplex_point<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<f64> {
    loop {
        let e: Vec<f64> = (0..dim).map(|_| rng.sample::<f64, _>(Exp1)).collect();
        let s: f64 = e.iter().sum();
        if s > 0.0 {
            return e.into_iter().map(|v| v / s).collect();
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcavityWitness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub lambda: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PermutationWitness {
    pub x: Vec<f64>,
    pub permutation: Vec<usize>,
}

/// Outcome of the randomized check of the three generator conditions.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub function: String,
    pub dim: usize,
    pub samples: usize,
    pub seed: u64,
    pub zero_at_vertices: bool,
    pub worst_vertex_value: f64,
    pub permutation_invariant: bool,
    pub worst_permutation_gap: f64,
    pub permutation_witness: Option<PermutationWitness>,
    pub concave: bool,
    /// Largest `lambda f(x) + (1 - lambda) f(y) - f(lambda x + (1 - lambda) y)`.
    pub worst_concavity_gap: f64,
    pub concavity_witness: Option<ConcavityWitness>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.zero_at_vertices && self.permutation_invariant && self.concave
    }
}

/// Checks vanishing at vertices (exactly), permutation invariance, and concavity
/// (both statistically, over `samples` random probes).
pub fn check_f_conditions(f: &SimplexFunction, dim: usize, samples: usize, seed: u64) -> ConditionReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let worst_vertex_value = (0..dim)
        .map(|i| {
            let e = ProbVector::indicator(dim, i).expect("index in range");
            f.evaluate(&e).abs()
        })
        .fold(0.0, f64::max);

    let mut worst_perm = 0.0f64;
    let mut perm_witness = None;
    let mut perm: Vec<usize> = (0..dim).collect();
    for _ in 0..samples {
        let x = random_simplex_point(dim, &mut rng);
        perm.shuffle(&mut rng);
        let px: Vec<f64> = (0..dim).map(|i| x[perm[i]]).collect();
        let gap = (f.evaluate_slice(&px) - f.evaluate_slice(&x)).abs();
        if gap > worst_perm || gap.is_nan() {
            worst_perm = gap;
            perm_witness = Some(PermutationWitness {
                x: x.clone(),
                permutation: perm.clone(),
            });
        }
    }

    let mut worst_concave = f64::NEG_INFINITY;
    let mut concave_witness = None;
    for _ in 0..samples {
        let x = random_simplex_point(dim, &mut rng);
        let y = random_simplex_point(dim, &mut rng);
        let lambda: f64 = rng.random();
        let z: Vec<f64> = x.iter().zip(&y).map(|(a, b)| lambda * a + (1.0 - lambda) * b).collect();
        let gap = lambda * f.evaluate_slice(&x) + (1.0 - lambda) * f.evaluate_slice(&y) - f.evaluate_slice(&z);
        if gap > worst_concave || gap.is_nan() {
            worst_concave = gap;
            concave_witness = Some(ConcavityWitness { x, y, lambda });
        }
    }
    let worst_concave = worst_concave.max(0.0);

    ConditionReport {
        function: f.name().to_string(),
        dim,
        samples,
        seed,
        zero_at_vertices: worst_vertex_value == 0.0,
        worst_vertex_value,
        permutation_invariant: worst_perm <= tol::PROPERTY,
        worst_permutation_gap: worst_perm,
        permutation_witness: perm_witness.filter(|_| worst_perm > tol::PROPERTY),
        concave: worst_concave <= tol::PROPERTY,
        worst_concavity_gap: worst_concave,
        concavity_witness: concave_witness.filter(|_| worst_concave > tol::PROPERTY),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[f64]) -> ProbVector {
        ProbVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn builtin_values() {
        let l1 = SimplexFunction::builtin("l1").unwrap();
        assert_eq!(l1.evaluate(&p(&[0.5, 0.5])), 1.0);
        assert_eq!(l1.evaluate(&p(&[1.0, 0.0, 0.0])), 0.0);

        let fid = SimplexFunction::builtin("fidelity").unwrap();
        assert!((fid.evaluate(&p(&[0.5, 0.5])) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!(!fid.is_normalized());

        let ent = SimplexFunction::builtin("entropy").unwrap();
        for n in 2..=8 {
            assert!((ent.max_value(n) - 1.0).abs() < 1e-14);
        }
        assert!(matches!(
            SimplexFunction::builtin("renyi"),
            Err(Error::UnknownFunction(_))
        ));
    }

    #[test]
    fn normalize_behaviour() {
        let fid = SimplexFunction::builtin("fidelity").unwrap().normalize().unwrap();
        assert!(fid.is_normalized());
        assert_eq!(fid.evaluate(&p(&[0.5, 0.5])), 1.0);
        assert_eq!(fid.evaluate(&p(&[1.0, 0.0, 0.0, 0.0])), 0.0);
        for n in 2..=8 {
            assert!((fid.max_value(n) - 1.0).abs() < 1e-12);
        }

        let l1 = SimplexFunction::builtin("l1").unwrap();
        let l1n = l1.normalize().unwrap();
        let x = p(&[0.2, 0.3, 0.5]);
        assert_eq!(l1.evaluate(&x), l1n.evaluate(&x));
        assert_eq!(l1n.name(), "l1");

        let zero = SimplexFunction::custom("zero", false, |_| 0.0);
        assert!(matches!(zero.normalize(), Err(Error::ZeroAtUniform { dim: 2, .. })));
    }

    #[test]
    fn builtins_satisfy_conditions() {
        for name in ["l1", "entropy", "fidelity"] {
            let f = SimplexFunction::builtin(name).unwrap();
            for dim in [2, 3] {
                let r = check_f_conditions(&f, dim, 1000, 17);
                assert!(r.passed(), "{name} dim {dim}: {r:?}");
                assert!(r.concavity_witness.is_none());
            }
        }
    }

    #[test]
    fn planted_convex_function_fails_concavity() {
        let g = SimplexFunction::custom("sum_of_squares", false, |x| x.iter().map(|v| v * v).sum());
        let r = check_f_conditions(&g, 3, 1000, 17);
        assert!(!r.concave);
        assert!(r.permutation_invariant);
        // g(vertex) = 1, so the vertex condition fails as well.
        assert!(!r.zero_at_vertices);
        let w = r.concavity_witness.expect("witness recorded");
        let z: Vec<f64> =
            w.x.iter()
                .zip(&w.y)
                .map(|(a, b)| w.lambda * a + (1.0 - w.lambda) * b)
                .collect();
        let replay =
            w.lambda * g.evaluate_slice(&w.x) + (1.0 - w.lambda) * g.evaluate_slice(&w.y) - g.evaluate_slice(&z);
        assert_eq!(replay, r.worst_concavity_gap);
    }

    #[test]
    fn builtin_range_on_random_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        for name in ["l1", "entropy", "fidelity"] {
            let f = SimplexFunction::builtin(name).unwrap();
            for dim in 2..=8 {
                for i in 0..dim {
                    assert_eq!(f.evaluate(&ProbVector::indicator(dim, i).unwrap()), 0.0);
                }
                let max = f.max_value(dim);
                for _ in 0..1000 {
                    let x = random_simplex_point(dim, &mut rng);
                    let v = f.evaluate_slice(&x);
                    assert!(v >= 0.0 && v <= max + 1e-12, "{name} {dim} {v} > {max}");
                }
            }
        }
    }
}
