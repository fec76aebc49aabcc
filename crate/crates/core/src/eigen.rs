//! Cyclic Jacobi eigendecomposition for real symmetric and complex Hermitian
//! matrices.
//!
//! Each rotation first removes the phase of the pivot a_pq (a diagonal unitary
//! acting on column q), which turns the 2×2 Hermitian block into a real
//! symmetric one, and then applies the classical real Jacobi rotation. The
//! combined transform is
//!
//! ```text
//! J = | c          s         |     e = a_pq / |a_pq|
//!     | -s·conj(e) c·conj(e) |
//! ```
//!
//! acting on the (p, q) plane, with A ← J* A J and V ← V J. For real input e is
//! ±1 and every operation stays in real arithmetic.
//!
//! Sweeps run over pairs (p, q), p < q, in a fixed order until the off-diagonal
//! Frobenius mass drops to `1e-13·‖A‖_F`, with a cap of 100 sweeps. The output
//! depends only on the input bits.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::HermitianMatrix;
use crate::matrix::Matrix;
use crate::scalar::Scalar;

pub const RELATIVE_TOLERANCE: f64 = 1e-13;
pub const MAX_SWEEPS: usize = 100;

/// Eigenvalues sorted non-increasing, eigenvector `i` in column `i`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenDecomposition<S> {
    pub eigenvalues: Vec<f64>,
    #[serde(skip)]
    pub eigenvectors: Matrix<S>,
}

impl<S: Scalar> EigenDecomposition<S> {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, i: usize) -> Vec<S> {
        self.eigenvectors.column(i)
    }

    /// λ_m − λ_{m+1} (1-based m).
    pub fn gap(&self, m: usize) -> f64 {
        self.eigenvalues[m - 1] - self.eigenvalues[m]
    }

    /// V·diag(λ)·V*.
    pub fn reconstruct(&self) -> Matrix<S> {
        let v = &self.eigenvectors;
        let scaled = Matrix::from_fn(v.rows(), v.cols(), |i, j| v[(i, j)].scale(self.eigenvalues[j]));
        &scaled * &v.adjoint()
    }
}

fn off_diagonal_norm<S: Scalar>(a: &Matrix<S>) -> f64 {
    let n = a.rows();
    let mut sum = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                sum += a[(i, j)].abs_sqr();
            }
        }
    }
    sum.sqrt()
}

fn rotate<S: Scalar>(a: &mut Matrix<S>, v: &mut Matrix<S>, p: usize, q: usize) {
    let apq = a[(p, q)];
    let g = apq.abs();
    if g == 0.0 {
        return;
    }
    let app = a[(p, p)].re();
    let aqq = a[(q, q)].re();
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.is_infinite() {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase = apq.scale(1.0 / g).conj();

    let jpp = S::from_real(c);
    let jpq = S::from_real(s);
    let jqp = phase.scale(-s);
    let jqq = phase.scale(c);

    let n = a.rows();
    // A ← A J
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * jpp + akq * jqp;
        a[(k, q)] = akp * jpq + akq * jqq;
    }
    // A ← J* A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = jpp.conj() * apk + jqp.conj() * aqk;
        a[(q, k)] = jpq.conj() * apk + jqq.conj() * aqk;
    }
    a[(p, q)] = S::zero();
    a[(q, p)] = S::zero();
    a[(p, p)] = S::from_real(a[(p, p)].re());
    a[(q, q)] = S::from_real(a[(q, q)].re());
    // V ← V J
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * jpp + vkq * jqp;
        v[(k, q)] = vkp * jpq + vkq * jqq;
    }
}

/// Full eigendecomposition of a Hermitian (real symmetric) matrix.
pub fn eigendecompose<S: Scalar>(matrix: &HermitianMatrix<S>) -> Result<EigenDecomposition<S>> {
    let mut a = matrix.as_matrix().clone();
    let n = a.rows();
    let mut v = Matrix::<S>::identity(n);
    let target = RELATIVE_TOLERANCE * a.frobenius_norm();

    let mut off = off_diagonal_norm(&a);
    let mut sweeps = 0;
    while off > target {
        if sweeps == MAX_SWEEPS {
            return Err(Error::EigenNoConvergence { residual: off });
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&a);
    }

    let raw: Vec<f64> = (0..n).map(|i| a[(i, i)].re()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    // stable: ties keep Jacobi output order
    order.sort_by(|&i, &j| raw[j].total_cmp(&raw[i]));

    let eigenvalues = order.iter().map(|&i| raw[i]).collect();
    let eigenvectors = Matrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
