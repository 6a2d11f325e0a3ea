//! Dense complex linear algebra used across the crate.
//!
//! Storage and products come from `nalgebra`. The Hermitian eigensolver is a
//! cyclic complex Jacobi sweep: it is exact on already-diagonal input (no
//! rotation is applied when an off-diagonal entry is exactly zero), which keeps
//! eigen-ensembles of classical states made of basis vectors.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub(crate) const ONE: Complex64 = Complex64::new(1.0, 0.0);

const MAX_SWEEPS: usize = 64;

/// Eigenpairs of a Hermitian matrix, eigenvalues in descending order.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: CMatrix,
}

/// Diagonalizes a Hermitian matrix by cyclic Jacobi rotations.
///
/// Only the Hermitian part of `a` is used. Ties in the eigenvalues keep the
/// order in which the sweep left them, so the output is deterministic.
pub fn hermitian_eigen(a: &CMatrix) -> HermitianEigen {
    let n = a.nrows();
    assert_eq!(n, a.ncols(), "hermitian_eigen needs a square matrix");
    let mut m = hermitian_part(a);
    let mut v = CMatrix::identity(n, n);

    let scale: f64 = m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let threshold = (f64::EPSILON * 1e-2 * scale).powi(2);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| ((p + 1)..n).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum();
        if off <= threshold || off == 0.0 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut m, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).unwrap_or(std::cmp::Ordering::Equal));

    let eigenvalues = order.iter().map(|&i| diag[i]).collect();
    let eigenvectors = CMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    HermitianEigen {
        eigenvalues,
        eigenvectors,
    }
}

/// One Jacobi rotation annihilating `m[(p, q)]`.
fn rotate(m: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let b = m[(p, q)];
    let beta = b.norm();
    if beta == 0.0 {
        return;
    }
    let a_pp = m[(p, p)].re;
    let a_qq = m[(q, q)].re;
    let phase = b / beta;

    // Real symmetric rotation on [[a_pp, beta], [beta, a_qq]].
    let theta = (a_qq - a_pp) / (2.0 * beta);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    // J = diag(1, conj(phase)) * [[c, s], [-s, c]] on the (p, q) plane.
    let j_pp = Complex64::new(c, 0.0);
    let j_pq = Complex64::new(s, 0.0);
    let j_qp = -phase.conj() * s;
    let j_qq = phase.conj() * c;

    let n = m.nrows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * j_pp + mkq * j_qp;
        m[(k, q)] = mkp * j_pq + mkq * j_qq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = j_pp.conj() * mpk + j_qp.conj() * mqk;
        m[(q, k)] = j_pq.conj() * mpk + j_qq.conj() * mqk;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// `(a + a^dagger) / 2`.
pub fn hermitian_part(a: &CMatrix) -> CMatrix {
    let n = a.nrows();
    CMatrix::from_fn(n, n, |i, j| (a[(i, j)] + a[(j, i)].conj()) * 0.5)
}

/// `max_ij |a_ij - conj(a_ji)|`.
pub fn max_asymmetry(a: &CMatrix) -> f64 {
    let n = a.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((a[(i, j)] - a[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Max-norm distance between two equally shaped matrices.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Modified Gram-Schmidt on the columns, applied twice for stability.
///
/// Returns `None` when the columns are numerically dependent.
pub fn orthonormalize_columns(a: &CMatrix) -> Option<CMatrix> {
    let mut q = a.clone();
    let (rows, cols) = q.shape();
    for k in 0..cols {
        for _pass in 0..2 {
            for j in 0..k {
                let mut proj = ZERO;
                for r in 0..rows {
                    proj += q[(r, j)].conj() * q[(r, k)];
                }
                for r in 0..rows {
                    let qrj = q[(r, j)];
                    q[(r, k)] -= proj * qrj;
                }
            }
        }
        let norm: f64 = (0..rows).map(|r| q[(r, k)].norm_sqr()).sum::<f64>().sqrt();
        if !(norm.is_finite() && norm > 1e-300) {
            return None;
        }
        for r in 0..rows {
            q[(r, k)] /= norm;
        }
    }
    Some(q)
}

/// `max |V^dagger V - I|`.
pub fn isometry_defect(v: &CMatrix) -> f64 {
    let gram = v.adjoint() * v;
    let n = gram.nrows();
    max_abs_diff(&gram, &CMatrix::identity(n, n))
}

/// Standard complex Gaussian entry, `E|z|^2 = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // Fill row-major so the draw order does not depend on storage layout.
    let mut g = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for c in 0..cols {
            g[(r, c)] = complex_gaussian(rng);
        }
    }
    g
}

/// Haar-random `rows x cols` isometry (orthonormal columns).
pub fn random_isometry<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    assert!(rows >= cols);
    loop {
        let g = gaussian_matrix(rows, cols, rng);
        if let Some(q) = orthonormalize_columns(&g) {
            return q;
        }
    }
}

/// Traces out the second factor of a `(n*m) x (n*m)` operator on `C^n (x) C^m`.
pub fn partial_trace_second(joint: &CMatrix, n: usize, m: usize) -> CMatrix {
    assert_eq!(joint.nrows(), n * m);
    CMatrix::from_fn(n, n, |i, j| (0..m).map(|a| joint[(i * m + a, j * m + a)]).sum())
}

/// `P a P^dagger` for the permutation matrix sending basis vector `k` to `perm[k]`.
pub fn permute_conjugate(a: &CMatrix, perm: &[usize]) -> CMatrix {
    let n = a.nrows();
    assert_eq!(perm.len(), n);
    let mut out = CMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out[(perm[i], perm[j])] = a[(i, j)];
        }
    }
    out
}

pub(crate) fn real_trace(a: &CMatrix) -> f64 {
    (0..a.nrows()).map(|i| a[(i, i)].re).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let g = gaussian_matrix(n, n, rng);
        hermitian_part(&g)
    }

    #[test]
    fn eigen_reconstructs_random_hermitian() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for n in 1..=16 {
            for _ in 0..5 {
                let a = random_hermitian(n, &mut rng);
                let eig = hermitian_eigen(&a);
                let v = &eig.eigenvectors;
                let d = CMatrix::from_diagonal(&CVector::from_iterator(
                    n,
                    eig.eigenvalues.iter().map(|&x| Complex64::new(x, 0.0)),
                ));
                let rebuilt = v * d * v.adjoint();
                assert!(max_abs_diff(&rebuilt, &a) < 1e-12, "n={n}");
                assert!(isometry_defect(v) < 1e-12);
                assert!(eig.eigenvalues.windows(2).all(|w| w[0] >= w[1]));
            }
        }
    }

    #[test]
    fn diagonal_input_keeps_basis_vectors() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::new(0.5, 0.0),
            Complex64::new(0.5, 0.0),
        ]));
        let eig = hermitian_eigen(&a);
        assert_eq!(eig.eigenvectors, CMatrix::identity(2, 2));
        assert_eq!(eig.eigenvalues, vec![0.5, 0.5]);
    }

    #[test]
    fn two_by_two_spectrum() {
        // [[0.5, 0.6], [0.6, 0.5]] has eigenvalues 1.1 and -0.1.
        let a = CMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.5, 0.0),
                Complex64::new(0.6, 0.0),
                Complex64::new(0.6, 0.0),
                Complex64::new(0.5, 0.0),
            ],
        );
        let eig = hermitian_eigen(&a);
        assert!((eig.eigenvalues[0] - 1.1).abs() < 1e-15);
        assert!((eig.eigenvalues[1] + 0.1).abs() < 1e-15);
    }

    #[test]
    fn gram_schmidt_gives_isometry() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let v = random_isometry(6, 3, &mut rng);
        assert!(isometry_defect(&v) < 1e-14);
    }

    #[test]
    fn partial_trace_of_product() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_hermitian(3, &mut rng);
        let b = CMatrix::from_diagonal(&CVector::from_vec(vec![
            Complex64::new(0.25, 0.0),
            Complex64::new(0.75, 0.0),
        ]));
        let joint = a.kronecker(&b);
        assert!(max_abs_diff(&partial_trace_second(&joint, 3, 2), &a) < 1e-15);
    }
}
