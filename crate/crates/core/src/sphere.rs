//! Confidence cones for the extrinsic mean of directional data on S^k.
//!
//! The extrinsic sample mean is μ̂_n = Z̄_n/‖Z̄_n‖ (all of S^k when Z̄_n = 0).
//! When ‖Z̄_n‖² ≥ 1/(αn) the projected Chebyshev ball is the open geodesic
//! ball around μ̂_n of radius
//!
//! ```text
//! arcsin √((1 − ‖Z̄_n‖² + 1/(αn)) / (αn ‖Z̄_n‖²)),
//! ```
//!
//! otherwise it is the whole sphere. Either way the region covers the
//! extrinsic population mean set with probability at least 1 − α, for every
//! distribution on the sphere and every n.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::euclidean::{euclidean_mean, max_projection_angle, ConfidenceConfig, ProjectionAngle};
use crate::geometry::{angle_between, project_to_sphere, EuclideanPoint, SphereProjection, UnitVector};
use crate::special::normal_quantile;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SphereRegionShape {
    /// Open geodesic ball {x : ∠(x, center) < angular_radius}.
    Cone { center: UnitVector, angular_radius: f64 },
    FullSphere,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereDiagnostics {
    /// ‖Z̄_n‖
    pub mean_norm: f64,
    /// 1/(αn); the region is a cone iff ‖Z̄_n‖² reaches it.
    pub threshold: f64,
    /// Bound on the trivial-set probability for a hypothesized ‖EZ‖.
    pub trivial_bound_exponential: Option<f64>,
    /// Set by the CLT construction, which carries no finite-n guarantee.
    pub asymptotic: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SphereConfidenceRegion {
    #[serde(flatten)]
    pub shape: SphereRegionShape,
    pub diagnostics: SphereDiagnostics,
}

impl SphereConfidenceRegion {
    pub fn is_trivial(&self) -> bool {
        matches!(self.shape, SphereRegionShape::FullSphere)
    }

    pub fn center(&self) -> Option<&UnitVector> {
        match &self.shape {
            SphereRegionShape::Cone { center, .. } => Some(center),
            SphereRegionShape::FullSphere => None,
        }
    }

    pub fn angular_radius(&self) -> Option<f64> {
        match self.shape {
            SphereRegionShape::Cone { angular_radius, .. } => Some(angular_radius),
            SphereRegionShape::FullSphere => None,
        }
    }

    /// Attaches the exponential trivial-set bound for a hypothesized ‖EZ‖.
    pub fn with_hypothesized_mean_norm(mut self, mean_norm: f64, cfg: &ConfidenceConfig) -> Self {
        if mean_norm > cfg.threshold() {
            self.diagnostics.trivial_bound_exponential = Some(trivial_set_probability_bound(mean_norm, cfg));
        }
        self
    }
}

fn check_sample_size(len: usize, cfg: &ConfidenceConfig) -> Result<()> {
    if len != cfg.n() {
        return Err(Error::SampleSizeMismatch {
            expected: cfg.n(),
            found: len,
        });
    }
    Ok(())
}

/// μ̂_n, or `FullSphere` when Z̄_n = 0.
pub fn extrinsic_mean_sphere(data: &[UnitVector]) -> Result<SphereProjection> {
    Ok(project_to_sphere(&euclidean_mean(data)?))
}

/// Confidence region from the data; `cfg.n()` must equal the number of observations.
pub fn sphere_confidence_region(data: &[UnitVector], cfg: &ConfidenceConfig) -> Result<SphereConfidenceRegion> {
    check_sample_size(data.len(), cfg)?;
    sphere_region_from_mean(&euclidean_mean(data)?, cfg)
}

/// Confidence region from an already computed Euclidean mean of `cfg.n()` observations.
pub fn sphere_region_from_mean(mean: &EuclideanPoint, cfg: &ConfidenceConfig) -> Result<SphereConfidenceRegion> {
    let diagnostics = SphereDiagnostics {
        mean_norm: mean.norm(),
        threshold: cfg.threshold(),
        trivial_bound_exponential: None,
        asymptotic: false,
    };
    let shape = match (max_projection_angle(mean, cfg), project_to_sphere(mean)) {
        (ProjectionAngle::Angle(angular_radius), SphereProjection::Point(center)) => {
            SphereRegionShape::Cone { center, angular_radius }
        }
        _ => SphereRegionShape::FullSphere,
    };
    Ok(SphereConfidenceRegion { shape, diagnostics })
}

/// Whether `x` lies in the region (strict inequality on the angle).
pub fn membership(region: &SphereConfidenceRegion, x: &UnitVector) -> Result<bool> {
    match &region.shape {
        SphereRegionShape::FullSphere => Ok(true),
        SphereRegionShape::Cone { center, angular_radius } => {
            if center.ambient_dim() != x.ambient_dim() {
                return Err(Error::DimensionMismatch {
                    expected: center.ambient_dim(),
                    found: x.ambient_dim(),
                });
            }
            Ok(angle_between(x.coords(), center.coords()) < *angular_radius)
        }
    }
}

/// exp(−(n/2)(‖EZ‖ − 1/(αn))²), or 1 when ‖EZ‖ ≤ 1/(αn).
///
/// The exponent compares the unsquared norm with 1/(αn), while the cone
/// condition compares ‖Z̄_n‖² with 1/(αn). The two events coincide only when
/// αn = 1, so this is a diagnostic, not a bound on the trivial-region
/// frequency in general.
pub fn trivial_set_probability_bound(hypothesized_mean_norm: f64, cfg: &ConfidenceConfig) -> f64 {
    let excess = hypothesized_mean_norm - cfg.threshold();
    if excess <= 0.0 {
        return 1.0;
    }
    (-(cfg.n() as f64) / 2.0 * excess * excess).exp().clamp(0.0, 1.0)
}

/// CLT-based cone {x : ∠(x, μ̂_n) < q_{1−α/2} √((1/n Σ sin²∠(Z_i, Z̄_n)) / (n‖Z̄_n‖²))}.
///
/// Asymptotic only: no finite-n coverage guarantee.
pub fn clt_asymptotic_region(data: &[UnitVector], cfg: &ConfidenceConfig) -> Result<SphereConfidenceRegion> {
    check_sample_size(data.len(), cfg)?;
    let mean = euclidean_mean(data)?;
    let center = match project_to_sphere(&mean) {
        SphereProjection::Point(c) => c,
        SphereProjection::FullSphere => return Err(Error::ZeroMean),
    };
    let n = data.len() as f64;
    let spread = data
        .iter()
        .map(|z| angle_between(z.coords(), mean.coords()).sin().powi(2))
        .sum::<f64>()
        / n;
    let q = normal_quantile(1.0 - cfg.alpha() / 2.0);
    let angular_radius = q * (spread / (n * mean.norm_sqr())).sqrt();
    Ok(SphereConfidenceRegion {
        shape: SphereRegionShape::Cone { center, angular_radius },
        diagnostics: SphereDiagnostics {
            mean_norm: mean.norm(),
            threshold: cfg.threshold(),
            trivial_bound_exponential: None,
            asymptotic: true,
        },
    })
}
