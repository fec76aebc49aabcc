//! Confidence balls for the extrinsic mean on Gr(m, C^{d+1}) and
//! Gr(m, R^{d+1}) under the Veronese–Whitney embedding.
//!
//! With Z̄_n = (1/n) Σ ι(U_i), eigenvalues λ̂_1 ≥ … ≥ λ̂_{d+1} and
//! s = √(1 − ‖Z̄_n‖_F² + 1/(αn)), the region is the open ball of radius
//!
//! ```text
//! δ_n = √2·s / (√(αn)·(λ̂_m − λ̂_{m+1}) − s)
//! ```
//!
//! around μ̂_n in the extrinsic metric whenever λ̂_m − λ̂_{m+1} ≥ √(2s²/(αn));
//! otherwise it is the whole Grassmannian (the closed ball of radius √2).
//!
//! The radius follows from two perturbation facts: a gap of at least √2·ε
//! keeps the projection unique on an ε-ball (Wielandt–Hoffman), and the
//! projected ε-ball lies in the δ-ball with δ = √2·ε/(gap − ε) (Davis–Kahan).

use crate::eigen::EigenDecomposition;
use crate::error::{Error, Result};
use crate::euclidean::ConfidenceConfig;
use crate::geometry::{
    extrinsic_distance, projection_from_eigen, GrassmannProjection, HermitianMatrix, Subspace,
};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq)]
pub enum GrassmannRegionShape<S> {
    /// Open ball {V : d(V, center) < radius}.
    Ball { center: Subspace<S>, radius: f64 },
    /// The whole manifold; `center` is absent when the projection of Z̄_n is not unique.
    FullSpace { center: Option<Subspace<S>> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannDiagnostics {
    /// λ̂_m − λ̂_{m+1}
    pub eigengap: f64,
    /// √(2(1 − ‖Z̄_n‖_F² + 1/(αn))/(αn))
    pub gap_threshold: f64,
    pub mean_frobenius_norm: f64,
    pub spectrum: Vec<f64>,
    pub trivial_bound_exponential: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GrassmannConfidenceRegion<S> {
    pub shape: GrassmannRegionShape<S>,
    pub diagnostics: GrassmannDiagnostics,
}

impl<S: Scalar> GrassmannConfidenceRegion<S> {
    pub fn is_trivial(&self) -> bool {
        matches!(self.shape, GrassmannRegionShape::FullSpace { .. })
    }

    pub fn center(&self) -> Option<&Subspace<S>> {
        match &self.shape {
            GrassmannRegionShape::Ball { center, .. } => Some(center),
            GrassmannRegionShape::FullSpace { center } => center.as_ref(),
        }
    }

    /// δ_n for a ball, √2 for the whole space.
    pub fn radius(&self) -> f64 {
        match self.shape {
            GrassmannRegionShape::Ball { radius, .. } => radius,
            GrassmannRegionShape::FullSpace { .. } => std::f64::consts::SQRT_2,
        }
    }

    /// Whether `v` lies in the region (strict inequality for balls).
    pub fn contains(&self, v: &Subspace<S>) -> Result<bool> {
        match &self.shape {
            GrassmannRegionShape::FullSpace { .. } => Ok(true),
            GrassmannRegionShape::Ball { center, radius } => Ok(extrinsic_distance(center, v)? < *radius),
        }
    }

    /// Attaches the exponential trivial-set bound for a hypothesized population
    /// eigengap σ_m − σ_{m+1} and ‖EZ‖_F.
    pub fn with_hypothesized_mean(mut self, sigma_gap: f64, mean_norm: f64, cfg: &ConfidenceConfig) -> Self {
        self.diagnostics.trivial_bound_exponential = Some(grassmann_trivial_bound(sigma_gap, mean_norm, cfg));
        self
    }
}

fn check_common_shape<S: Scalar>(data: &[Subspace<S>]) -> Result<(usize, usize)> {
    let first = data.first().ok_or(Error::EmptyData)?;
    let (ambient, m) = (first.ambient_dim(), first.dim());
    for u in data {
        if u.ambient_dim() != ambient {
            return Err(Error::DimensionMismatch {
                expected: ambient,
                found: u.ambient_dim(),
            });
        }
        if u.dim() != m {
            return Err(Error::DimensionMismatch {
                expected: m,
                found: u.dim(),
            });
        }
    }
    Ok((ambient, m))
}

/// Z̄_n = (1/n) Σ ι(U_i).
pub fn grassmann_euclidean_mean<S: Scalar>(data: &[Subspace<S>]) -> Result<HermitianMatrix<S>> {
    let (ambient, _) = check_common_shape(data)?;
    let mut sum = HermitianMatrix::zeros(ambient);
    for u in data {
        let m = u.dim();
        let w = 1.0 / (m as f64).sqrt();
        for j in 0..m {
            sum.add_outer(&u.frame().column(j), w);
        }
    }
    Ok(sum.scaled(1.0 / data.len() as f64))
}

pub fn extrinsic_mean_grassmann<S: Scalar>(data: &[Subspace<S>]) -> Result<GrassmannProjection<S>> {
    let (_, m) = check_common_shape(data)?;
    crate::geometry::project_to_grassmann(&grassmann_euclidean_mean(data)?, m)
}

/// Confidence region from the data; `cfg.n()` must equal the number of observations.
pub fn grassmann_confidence_region<S: Scalar>(
    data: &[Subspace<S>],
    cfg: &ConfidenceConfig,
) -> Result<GrassmannConfidenceRegion<S>> {
    let (_, m) = check_common_shape(data)?;
    if data.len() != cfg.n() {
        return Err(Error::SampleSizeMismatch {
            expected: cfg.n(),
            found: data.len(),
        });
    }
    grassmann_region_from_mean(&grassmann_euclidean_mean(data)?, m, cfg)
}

/// Confidence region from a precomputed Euclidean mean of `cfg.n()` embedded
/// subspaces of dimension `m`.
pub fn grassmann_region_from_mean<S: Scalar>(
    mean: &HermitianMatrix<S>,
    m: usize,
    cfg: &ConfidenceConfig,
) -> Result<GrassmannConfidenceRegion<S>> {
    if m == 0 || m >= mean.dim() {
        return Err(Error::InvalidSubspaceDimension { m, ambient: mean.dim() });
    }
    let eig = mean.eigen()?;
    Ok(region_from_eigen(mean.frobenius_norm(), &eig, m, cfg))
}

fn region_from_eigen<S: Scalar>(
    frobenius: f64,
    eig: &EigenDecomposition<S>,
    m: usize,
    cfg: &ConfidenceConfig,
) -> GrassmannConfidenceRegion<S> {
    let a = cfg.a();
    let s = (1.0 - frobenius * frobenius + 1.0 / a).max(0.0).sqrt();
    let gap_threshold = (2.0 * s * s / a).sqrt();
    let eigengap = eig.gap(m);
    let diagnostics = GrassmannDiagnostics {
        eigengap,
        gap_threshold,
        mean_frobenius_norm: frobenius,
        spectrum: eig.eigenvalues.clone(),
        trivial_bound_exponential: None,
    };
    let projection = projection_from_eigen(eig, m, frobenius);
    let shape = match projection {
        GrassmannProjection::Unique(center) if eigengap >= gap_threshold => {
            let radius = std::f64::consts::SQRT_2 * s / (a.sqrt() * eigengap - s);
            GrassmannRegionShape::Ball { center, radius }
        }
        GrassmannProjection::Unique(center) => GrassmannRegionShape::FullSpace { center: Some(center) },
        GrassmannProjection::NonUnique { .. } => GrassmannRegionShape::FullSpace { center: None },
    };
    GrassmannConfidenceRegion { shape, diagnostics }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveRadius(eps))
    }
}

/// λ_m − λ_{m+1} ≥ √2·ε, the condition under which the projection is unique
/// on the whole ε-ball around `a`.
pub fn uniqueness_radius_check<S: Scalar>(a: &HermitianMatrix<S>, m: usize, eps: f64) -> Result<bool> {
    check_eps(eps)?;
    if m == 0 || m >= a.dim() {
        return Err(Error::InvalidSubspaceDimension { m, ambient: a.dim() });
    }
    Ok(a.eigen()?.gap(m) >= std::f64::consts::SQRT_2 * eps)
}

/// δ = √2·ε/(λ_m − λ_{m+1} − ε): the projection of the ε-ball around `a`
/// lies in the δ-ball around π(a).
pub fn projected_ball_radius<S: Scalar>(a: &HermitianMatrix<S>, m: usize, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    if m == 0 || m >= a.dim() {
        return Err(Error::InvalidSubspaceDimension { m, ambient: a.dim() });
    }
    let gap = a.eigen()?.gap(m);
    let required = std::f64::consts::SQRT_2 * eps;
    if gap < required {
        return Err(Error::GapConditionViolated { gap, required });
    }
    Ok(std::f64::consts::SQRT_2 * eps / (gap - eps))
}

/// exp(−½(√n·gap/√2 − √((1 + 1/(αn))/α) − √(1 − ‖EZ‖))²), or 1 when the
/// bracket is not positive.
///
/// `sigma_gap` and `mean_norm` describe the hypothesized population mean.
/// The √(1 − ‖EZ‖) term is taken as displayed in the statement of the bound;
/// its derivation arrives at √(1 − ‖EZ‖²). Diagnostic only.
pub fn grassmann_trivial_bound(sigma_gap: f64, mean_norm: f64, cfg: &ConfidenceConfig) -> f64 {
    let n = cfg.n() as f64;
    let alpha = cfg.alpha();
    let h = mean_norm.clamp(0.0, 1.0);
    let arg = n.sqrt() * sigma_gap / std::f64::consts::SQRT_2
        - ((1.0 + 1.0 / cfg.a()) / alpha).sqrt()
        - (1.0 - h).sqrt();
    if arg <= 0.0 {
        return 1.0;
    }
    (-0.5 * arg * arg).exp().clamp(0.0, 1.0)
}
