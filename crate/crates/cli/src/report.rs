//! JSON reports for `analyze`.

use exc_core::euclidean::{euclidean_mean, ConfidenceConfig};
use exc_core::geometry::{SphereProjection, Subspace, UnitVector};
use exc_core::grassmann::{grassmann_euclidean_mean, grassmann_region_from_mean, GrassmannConfidenceRegion};
use exc_core::projective::{dehomogenize, quadric_region, ConicClass, HomogeneousPoint, QuadricRegion};
use exc_core::scalar::Scalar;
use exc_core::sphere::{sphere_region_from_mean, SphereRegionShape};
use serde::Serialize;
use serde_json::Value;

use crate::dataset::{frame_columns_json, matrix_rows_json, Dataset, Manifold};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub tool_version: &'static str,
    pub manifold: Manifold,
    pub alpha: f64,
    pub n: usize,
    pub ambient_dim: usize,
    /// Subspace dimension; 1 for the sphere and projective shape.
    pub m: usize,
    /// A vector for the sphere, matrix rows otherwise.
    pub euclidean_mean: Value,
    pub extrinsic_mean: ExtrinsicMean,
    pub region: RegionReport,
    pub diagnostics: Diagnostics,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub projective: Option<ProjectiveReport>,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ExtrinsicMean {
    pub unique: bool,
    /// Unit vector (sphere) or frame as an array of columns.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<Value>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RegionKind {
    Cone,
    FullSphere,
    Ball,
    FullSpace,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegionReport {
    pub kind: RegionKind,
    pub trivial: bool,
    /// Angular radius (sphere) or extrinsic-metric radius (Grassmann).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub radius_degrees: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
#[serde(untagged)]
pub enum Diagnostics {
    Sphere {
        mean_norm: f64,
        /// 1/(αn): the region is a cone iff mean_norm² ≥ threshold.
        threshold: f64,
    },
    Grassmann {
        eigengap: f64,
        gap_threshold: f64,
        mean_frobenius_norm: f64,
        spectrum: Vec<f64>,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct ProjectiveReport {
    /// Affine dimension of the shape space factor.
    pub dimension: usize,
    pub z: Vec<f64>,
    pub delta: f64,
    pub quadric: Vec<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub conic_class: Option<ConicClass>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub svg: Option<String>,
}

/// Everything computed by `analyze`, kept for SVG rendering.
pub struct Analysis {
    pub report: AnalysisReport,
    pub quadric: Option<QuadricRegion>,
    /// Affine data points for the projective-shape figure.
    pub affine_points: Vec<Vec<f64>>,
}

const LINE_ADVISORY: &str =
    "Gr(1, F^2) is isometric to a sphere (RP^1 ~ S^1, CP^1 ~ S^2); the sphere pipeline gives a direct angular region for this space";

pub fn analyze(dataset: &Dataset, alpha: f64) -> anyhow::Result<Analysis> {
    let n = dataset.len();
    let cfg = ConfidenceConfig::new(alpha, n)?;
    match dataset {
        Dataset::Sphere(data) => sphere(data, &cfg),
        Dataset::GrassmannReal { m, data } => {
            grassmann(data, *m, &cfg, Manifold::GrassmannReal).map(|report| Analysis {
                report,
                quadric: None,
                affine_points: Vec::new(),
            })
        }
        Dataset::GrassmannComplex { m, data } => {
            grassmann(data, *m, &cfg, Manifold::GrassmannComplex).map(|report| Analysis {
                report,
                quadric: None,
                affine_points: Vec::new(),
            })
        }
        Dataset::ProjectiveShape(data) => projective(data, &cfg),
    }
}

fn sphere(data: &[UnitVector], cfg: &ConfidenceConfig) -> anyhow::Result<Analysis> {
    let mean = euclidean_mean(data)?;
    let region = sphere_region_from_mean(&mean, cfg)?;
    let projection = exc_core::geometry::project_to_sphere(&mean);
    let (kind, radius) = match &region.shape {
        SphereRegionShape::Cone { angular_radius, .. } => (RegionKind::Cone, Some(*angular_radius)),
        SphereRegionShape::FullSphere => (RegionKind::FullSphere, None),
    };
    let report = AnalysisReport {
        tool_version: TOOL_VERSION,
        manifold: Manifold::Sphere,
        alpha: cfg.alpha(),
        n: cfg.n(),
        ambient_dim: mean.dim(),
        m: 1,
        euclidean_mean: Value::from(mean.coords().to_vec()),
        extrinsic_mean: ExtrinsicMean {
            unique: matches!(projection, SphereProjection::Point(_)),
            point: projection.point().map(|p| Value::from(p.coords().to_vec())),
        },
        region: RegionReport {
            kind,
            trivial: region.is_trivial(),
            radius,
            radius_degrees: radius.map(f64::to_degrees),
        },
        diagnostics: Diagnostics::Sphere {
            mean_norm: region.diagnostics.mean_norm,
            threshold: region.diagnostics.threshold,
        },
        projective: None,
        warnings: Vec::new(),
    };
    Ok(Analysis {
        report,
        quadric: None,
        affine_points: Vec::new(),
    })
}

fn grassmann_region<S: Scalar>(
    data: &[Subspace<S>],
    m: usize,
    cfg: &ConfidenceConfig,
) -> anyhow::Result<(exc_core::geometry::HermitianMatrix<S>, GrassmannConfidenceRegion<S>)> {
    let mean = grassmann_euclidean_mean(data)?;
    let region = grassmann_region_from_mean(&mean, m, cfg)?;
    Ok((mean, region))
}

fn grassmann<S: Scalar>(
    data: &[Subspace<S>],
    m: usize,
    cfg: &ConfidenceConfig,
    manifold: Manifold,
) -> anyhow::Result<AnalysisReport> {
    let (mean, region) = grassmann_region(data, m, cfg)?;
    let mut warnings = Vec::new();
    if m == 1 && mean.dim() == 2 {
        log::warn!("{LINE_ADVISORY}");
        warnings.push(LINE_ADVISORY.to_string());
    }
    Ok(grassmann_report(&mean, &region, m, cfg, manifold, warnings))
}

fn grassmann_report<S: Scalar>(
    mean: &exc_core::geometry::HermitianMatrix<S>,
    region: &GrassmannConfidenceRegion<S>,
    m: usize,
    cfg: &ConfidenceConfig,
    manifold: Manifold,
    warnings: Vec<String>,
) -> AnalysisReport {
    let d = &region.diagnostics;
    AnalysisReport {
        tool_version: TOOL_VERSION,
        manifold,
        alpha: cfg.alpha(),
        n: cfg.n(),
        ambient_dim: mean.dim(),
        m,
        euclidean_mean: matrix_rows_json(mean.as_matrix()),
        extrinsic_mean: ExtrinsicMean {
            unique: region.center().is_some(),
            point: region.center().map(|c| frame_columns_json(c.frame())),
        },
        region: RegionReport {
            kind: if region.is_trivial() {
                RegionKind::FullSpace
            } else {
                RegionKind::Ball
            },
            trivial: region.is_trivial(),
            radius: Some(region.radius()),
            radius_degrees: None,
        },
        diagnostics: Diagnostics::Grassmann {
            eigengap: d.eigengap,
            gap_threshold: d.gap_threshold,
            mean_frobenius_norm: d.mean_frobenius_norm,
            spectrum: d.spectrum.clone(),
        },
        projective: None,
        warnings,
    }
}

fn projective(data: &[HomogeneousPoint], cfg: &ConfidenceConfig) -> anyhow::Result<Analysis> {
    let lines: Vec<Subspace<f64>> = data.iter().map(|p| p.as_line().clone()).collect();
    let (mean, region) = grassmann_region(&lines, 1, cfg)?;
    let mut warnings = Vec::new();
    if mean.dim() == 2 {
        log::warn!("{LINE_ADVISORY}");
        warnings.push(LINE_ADVISORY.to_string());
    }
    let affine_points: Vec<Vec<f64>> = data.iter().filter_map(|p| dehomogenize(p).ok()).collect();
    if affine_points.len() < data.len() {
        let msg = format!(
            "{} observations lie on the hyperplane at infinity and are not drawn",
            data.len() - affine_points.len()
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    let quadric = match region.center() {
        None => {
            let msg = "extrinsic mean is not unique; no quadric is reported".to_string();
            log::warn!("{msg}");
            warnings.push(msg);
            None
        }
        Some(center) => {
            let center = HomogeneousPoint::from_line(center.clone())?;
            match quadric_region(&center, region.radius()) {
                Ok(q) => Some(q),
                Err(e) => {
                    let msg = format!("no quadric in inhomogeneous coordinates: {e}");
                    log::warn!("{msg}");
                    warnings.push(msg);
                    None
                }
            }
        }
    };
    let mut report = grassmann_report(&mean, &region, 1, cfg, Manifold::ProjectiveShape, warnings);
    report.projective = quadric.as_ref().map(|q| ProjectiveReport {
        dimension: q.m,
        z: q.z.clone(),
        delta: q.delta,
        quadric: q.coefficient_rows(),
        conic_class: q.conic_class,
        svg: None,
    });
    Ok(Analysis {
        report,
        quadric,
        affine_points,
    })
}
