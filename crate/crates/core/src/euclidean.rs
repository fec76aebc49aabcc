//! Distribution-free confidence sets for the Euclidean mean of data on a
//! unit sphere, and the ball whose projection gives the extrinsic mean set.
//!
//! For i.i.d. Z_i with ‖Z_i‖ = 1, Chebyshev's inequality gives
//! `P(‖Z̄_n − EZ‖² ≥ (1 − ‖EZ‖²)/(αn)) ≤ α`. Inverting the test yields the
//! acceptance set
//!
//! ```text
//! C(p, a) = { q : ‖q‖ ≤ 1,  ‖p − q‖² < (1 − ‖q‖²)/a },   p = Z̄_n, a = αn,
//! ```
//!
//! whose image under the nearest-point projection equals the image of the
//! open ball B_ε(p) with ε² = (1/a)(1 − ‖p‖² + 1/a).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{EuclideanPoint, UnitVector};

/// Confidence level and sample size; `a = αn` is the one scale parameter
/// that enters every radius.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawConfig")]
pub struct ConfidenceConfig {
    alpha: f64,
    n: usize,
    a: f64,
}

#[derive(Deserialize)]
struct RawConfig {
    alpha: f64,
    n: usize,
}

impl TryFrom<RawConfig> for ConfidenceConfig {
    type Error = Error;

    fn try_from(raw: RawConfig) -> Result<Self> {
        Self::new(raw.alpha, raw.n)
    }
}

impl ConfidenceConfig {
    pub fn new(alpha: f64, n: usize) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidAlpha(alpha));
        }
        if n == 0 {
            return Err(Error::InvalidSampleSize);
        }
        Ok(Self {
            alpha,
            n,
            a: alpha * n as f64,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// αn
    pub fn a(&self) -> f64 {
        self.a
    }

    /// 1/(αn), the squared-norm threshold below which the region is trivial.
    pub fn threshold(&self) -> f64 {
        1.0 / self.a
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EuclideanConfidenceBall {
    pub center: EuclideanPoint,
    pub radius: f64,
    /// The origin lies inside the ball, so its projection is the whole manifold.
    pub covers_origin: bool,
}

/// Coordinate-wise arithmetic mean.
pub fn euclidean_mean(data: &[UnitVector]) -> Result<EuclideanPoint> {
    let first = data.first().ok_or(Error::EmptyData)?;
    let dim = first.ambient_dim();
    let mut sum = vec![0.0; dim];
    for z in data {
        if z.ambient_dim() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: z.ambient_dim(),
            });
        }
        for (s, c) in sum.iter_mut().zip(z.coords()) {
            *s += c;
        }
    }
    let n = data.len() as f64;
    EuclideanPoint::new(sum.into_iter().map(|s| s / n).collect())
}

/// Squared radius (1/a)(1 − ‖p‖² + 1/a) shared by the sphere and Grassmann
/// constructions.
pub fn squared_radius(mean_norm_sqr: f64, cfg: &ConfidenceConfig) -> f64 {
    let a = cfg.a();
    (1.0 - mean_norm_sqr + 1.0 / a) / a
}

fn check_norm(p: &EuclideanPoint) -> Result<()> {
    let n = p.norm();
    if n > 1.0 + 1e-9 {
        return Err(Error::NormExceedsOne { norm: n });
    }
    Ok(())
}

/// Whether the hypothesis EZ = q survives the level-α Chebyshev test, i.e.
/// whether q ∈ C(p, αn).
pub fn chebyshev_test(p: &EuclideanPoint, q: &EuclideanPoint, cfg: &ConfidenceConfig) -> Result<bool> {
    check_norm(q)?;
    if p.dim() != q.dim() {
        return Err(Error::DimensionMismatch {
            expected: p.dim(),
            found: q.dim(),
        });
    }
    Ok(p.distance_sqr(q) < (1.0 - q.norm_sqr()) / cfg.a())
}

pub fn confidence_ball(p: &EuclideanPoint, cfg: &ConfidenceConfig) -> Result<EuclideanConfidenceBall> {
    check_norm(p)?;
    let norm_sqr = p.norm_sqr();
    Ok(EuclideanConfidenceBall {
        center: p.clone(),
        radius: squared_radius(norm_sqr, cfg).sqrt(),
        covers_origin: norm_sqr < cfg.threshold(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ProjectionAngle {
    /// Supremum of ∠(p, q) over q ∈ C(p, a).
    Angle(f64),
    /// The origin is in the ball; every direction is attained.
    FullSpace,
}

/// arcsin(ε/‖p‖) when ‖p‖² ≥ 1/a, otherwise `FullSpace`.
pub fn max_projection_angle(p: &EuclideanPoint, cfg: &ConfidenceConfig) -> ProjectionAngle {
    let norm_sqr = p.norm_sqr();
    if norm_sqr < cfg.threshold() {
        return ProjectionAngle::FullSpace;
    }
    let ratio = (squared_radius(norm_sqr, cfg) / norm_sqr).sqrt();
    ProjectionAngle::Angle(ratio.min(1.0).asin())
}

/// Radius of the Hoeffding-type ball
/// (1/√n)(√(−2(1+‖EZ‖)² log α) + √(1−‖EZ‖²)).
///
/// `mean_norm` is the hypothesized ‖EZ‖ and is clamped to [0, 1]; the radius
/// is for comparison only, since ‖EZ‖ is unknown in practice.
pub fn hoeffding_radius(mean_norm: f64, cfg: &ConfidenceConfig) -> f64 {
    let m = mean_norm.clamp(0.0, 1.0);
    let n = cfg.n() as f64;
    let first = (-2.0 * (1.0 + m).powi(2) * cfg.alpha().ln()).sqrt();
    let second = (1.0 - m * m).sqrt();
    (first + second) / n.sqrt()
}
