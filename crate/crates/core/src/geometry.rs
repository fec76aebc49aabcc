//! Manifold data types, the Veronese–Whitney embedding and the nearest-point
//! projections onto spheres and Grassmannians.
//!
//! A subspace U of dimension m is embedded as the scaled orthogonal projector
//!
//! ```text
//! ι(U) = (1/√m) Σ u_i u_i*,     ‖ι(U)‖_F = 1,
//! ```
//!
//! which puts every Grassmannian on the unit sphere of the Hermitian (or real
//! symmetric) matrices. The chordal distance `‖ι(U) − ι(V)‖_F` is the
//! extrinsic metric; it ranges over `[0, √2]`.

use serde::{Deserialize, Serialize};

use crate::eigen::{eigendecompose, EigenDecomposition};
use crate::error::{Error, Result};
use crate::matrix::{gram_schmidt, Matrix};
use crate::scalar::{Scalar, ScalarField};

/// Tolerance within which constructors renormalize instead of rejecting.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-6;
/// Means with a norm at or below this are projected to the whole sphere.
pub const ZERO_VECTOR_THRESHOLD: f64 = 1e-12;
/// Relative eigengap below which the Grassmann projection is reported as non-unique.
pub const GAP_THRESHOLD: f64 = 1e-10;

/// A point on the unit sphere S^k ⊂ R^{k+1}.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(transparent)]
pub struct UnitVector(Vec<f64>);

impl UnitVector {
    /// Accepts coordinates whose norm is within 1e-6 of one and renormalizes them.
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.is_empty() {
            return Err(Error::EmptyData);
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = euclidean_norm(&coords);
        if (n - 1.0).abs() > RENORMALIZE_TOLERANCE {
            return Err(Error::NotUnitNorm { norm: n });
        }
        Ok(Self(coords.into_iter().map(|c| c / n).collect()))
    }

    /// Direction of an arbitrary non-zero finite vector.
    pub fn normalize(coords: &[f64]) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        let n = euclidean_norm(coords);
        if n <= ZERO_VECTOR_THRESHOLD {
            return Err(Error::ZeroMean);
        }
        Ok(Self(coords.iter().map(|c| c / n).collect()))
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn ambient_dim(&self) -> usize {
        self.0.len()
    }

    pub fn neg(&self) -> Self {
        Self(self.0.iter().map(|c| -c).collect())
    }

    /// Applies a matrix assumed orthogonal.
    pub fn rotated(&self, rotation: &Matrix<f64>) -> Self {
        Self(rotation.mul_vec(&self.0))
    }
}

/// A point in the ambient Euclidean space, such as a sample mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EuclideanPoint(Vec<f64>);

impl EuclideanPoint {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self(coords))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0.0; dim])
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn norm(&self) -> f64 {
        euclidean_norm(&self.0)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.0.iter().map(|c| c * c).sum()
    }

    pub fn distance_sqr(&self, other: &EuclideanPoint) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b) * (a - b)).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0.iter().map(|c| c * k).collect())
    }
}

impl From<&UnitVector> for EuclideanPoint {
    fn from(u: &UnitVector) -> Self {
        Self(u.0.clone())
    }
}

/// Hermitian (complex) or symmetric (real) square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix<S>(Matrix<S>);

impl<S: Scalar> HermitianMatrix<S> {
    /// Symmetrizes the input as (A + A*)/2.
    pub fn new(matrix: Matrix<S>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        if !matrix.is_finite() {
            return Err(Error::NonFinite);
        }
        let sym = (&matrix + &matrix.adjoint()).scaled(0.5);
        Ok(Self(sym))
    }

    pub fn zeros(dim: usize) -> Self {
        Self(Matrix::zeros(dim, dim))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn field(&self) -> ScalarField {
        S::FIELD
    }

    pub fn as_matrix(&self) -> &Matrix<S> {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix<S> {
        self.0
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.frobenius_norm()
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re()
    }

    pub fn eigen(&self) -> Result<EigenDecomposition<S>> {
        eigendecompose(self)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    pub fn scaled(&self, k: f64) -> Self {
        Self(self.0.scaled(k))
    }

    /// W A W* for a unitary W.
    pub fn conjugated(&self, unitary: &Matrix<S>) -> Self {
        let m = &(unitary * &self.0) * &unitary.adjoint();
        Self::new(m).expect("conjugation keeps the matrix square and finite")
    }

    pub(crate) fn add_outer(&mut self, x: &[S], weight: f64) {
        self.0.add_outer(x, weight);
    }
}

/// An m-dimensional subspace stored as a (d+1)×m orthonormal frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace<S> {
    frame: Matrix<S>,
}

impl<S: Scalar> Subspace<S> {
    /// Accepts a frame whose columns are orthonormal within 1e-6 and
    /// re-orthonormalizes it.
    pub fn from_orthonormal_frame(frame: Matrix<S>) -> Result<Self> {
        Self::check_shape(frame.rows(), frame.cols())?;
        if !frame.is_finite() {
            return Err(Error::NonFinite);
        }
        let defect = frame.orthonormality_defect();
        if defect > RENORMALIZE_TOLERANCE {
            return Err(Error::NotOrthonormal { defect });
        }
        Self::from_spanning_columns(&frame.columns())
    }

    /// Span of arbitrary linearly independent columns.
    pub fn from_spanning_columns(columns: &[Vec<S>]) -> Result<Self> {
        let m = columns.len();
        let ambient = columns.first().map_or(0, Vec::len);
        Self::check_shape(ambient, m)?;
        if columns.iter().any(|c| c.len() != ambient) {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: columns.iter().map(Vec::len).find(|&l| l != ambient).unwrap_or(0),
            });
        }
        if columns.iter().flatten().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite);
        }
        let basis = gram_schmidt(columns, 1e-10).ok_or(Error::DependentFrame)?;
        Ok(Self {
            frame: Matrix::from_columns(&basis),
        })
    }

    /// The line spanned by a non-zero vector.
    pub fn line(v: &[S]) -> Result<Self> {
        Self::from_spanning_columns(&[v.to_vec()])
    }

    /// span(e_i : i in `axes`) in an ambient space of dimension `ambient`.
    pub fn coordinate(ambient: usize, axes: &[usize]) -> Result<Self> {
        let cols: Vec<Vec<S>> = axes
            .iter()
            .map(|&a| (0..ambient).map(|i| if i == a { S::one() } else { S::zero() }).collect())
            .collect();
        Self::from_spanning_columns(&cols)
    }

    fn check_shape(ambient: usize, m: usize) -> Result<()> {
        if m == 0 || m >= ambient {
            return Err(Error::InvalidSubspaceDimension { m, ambient });
        }
        Ok(())
    }

    pub(crate) fn from_frame_unchecked(frame: Matrix<S>) -> Self {
        Self { frame }
    }

    pub fn frame(&self) -> &Matrix<S> {
        &self.frame
    }

    pub fn dim(&self) -> usize {
        self.frame.cols()
    }

    pub fn ambient_dim(&self) -> usize {
        self.frame.rows()
    }

    pub fn field(&self) -> ScalarField {
        S::FIELD
    }

    pub fn embed(&self) -> HermitianMatrix<S> {
        veronese_whitney_embed(self)
    }

    /// Same column span, tested through the embedding.
    pub fn same_span(&self, other: &Self) -> bool {
        extrinsic_distance(self, other).is_ok_and(|d| d < 1e-9)
    }

    /// Span of W·frame for a unitary W.
    pub fn transformed(&self, unitary: &Matrix<S>) -> Self {
        Self {
            frame: unitary * &self.frame,
        }
    }
}

/// ι(U) = (1/√m) Σ u_i u_i*.
pub fn veronese_whitney_embed<S: Scalar>(u: &Subspace<S>) -> HermitianMatrix<S> {
    let m = u.dim();
    let mut out = HermitianMatrix::zeros(u.ambient_dim());
    let w = 1.0 / (m as f64).sqrt();
    for j in 0..m {
        out.add_outer(&u.frame.column(j), w);
    }
    out
}

/// Extrinsic (chordal) distance ‖ι(U) − ι(V)‖_F.
pub fn extrinsic_distance<S: Scalar>(u: &Subspace<S>, v: &Subspace<S>) -> Result<f64> {
    if u.ambient_dim() != v.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: u.ambient_dim(),
            found: v.ambient_dim(),
        });
    }
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim(),
            found: v.dim(),
        });
    }
    Ok(u.embed().sub(&v.embed()).frobenius_norm())
}

/// Result of projecting a Euclidean point onto the sphere.
#[derive(Debug, Clone, PartialEq)]
pub enum SphereProjection {
    Point(UnitVector),
    /// π(0) is all of S^k.
    FullSphere,
}

impl SphereProjection {
    pub fn point(&self) -> Option<&UnitVector> {
        match self {
            Self::Point(p) => Some(p),
            Self::FullSphere => None,
        }
    }
}

pub fn project_to_sphere(p: &EuclideanPoint) -> SphereProjection {
    let n = p.norm();
    if n > ZERO_VECTOR_THRESHOLD {
        SphereProjection::Point(UnitVector(p.coords().iter().map(|c| c / n).collect()))
    } else {
        SphereProjection::FullSphere
    }
}

/// Result of projecting a Hermitian matrix onto Gr(m).
#[derive(Debug, Clone, PartialEq)]
pub enum GrassmannProjection<S> {
    Unique(Subspace<S>),
    NonUnique { gap: f64 },
}

impl<S> GrassmannProjection<S> {
    pub fn subspace(&self) -> Option<&Subspace<S>> {
        match self {
            Self::Unique(u) => Some(u),
            Self::NonUnique { .. } => None,
        }
    }
}

/// Span of the eigenvectors of the m largest eigenvalues, when that span is
/// well defined.
pub fn project_to_grassmann<S: Scalar>(a: &HermitianMatrix<S>, m: usize) -> Result<GrassmannProjection<S>> {
    if m == 0 || m >= a.dim() {
        return Err(Error::InvalidSubspaceDimension { m, ambient: a.dim() });
    }
    let eig = a.eigen()?;
    Ok(projection_from_eigen(&eig, m, a.frobenius_norm()))
}

pub(crate) fn projection_from_eigen<S: Scalar>(
    eig: &EigenDecomposition<S>,
    m: usize,
    frobenius: f64,
) -> GrassmannProjection<S> {
    let gap = eig.gap(m);
    if gap > GAP_THRESHOLD * frobenius.max(1.0) {
        let n = eig.dim();
        let frame = Matrix::from_fn(n, m, |i, j| eig.eigenvectors[(i, j)]);
        GrassmannProjection::Unique(Subspace::from_frame_unchecked(frame))
    } else {
        GrassmannProjection::NonUnique { gap }
    }
}

pub(crate) fn euclidean_norm(x: &[f64]) -> f64 {
    x.iter().map(|c| c * c).sum::<f64>().sqrt()
}

/// Angle between two non-zero vectors, computed as
/// atan2(‖x̂ − (x̂·ŷ)ŷ‖, x̂·ŷ) for accuracy near 0 and π.
pub fn angle_between(x: &[f64], y: &[f64]) -> f64 {
    let nx = euclidean_norm(x);
    let ny = euclidean_norm(y);
    let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>() / (nx * ny);
    let perp = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = a / nx - dot * b / ny;
            r * r
        })
        .sum::<f64>()
        .sqrt();
    perp.atan2(dot)
}
