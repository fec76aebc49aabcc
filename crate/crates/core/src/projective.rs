//! Projective shape: R^m embedded in RP^m through homogeneous coordinates,
//! confidence regions as quadrics in inhomogeneous coordinates, and SVG output
//! for the planar case.
//!
//! For [z:1] = μ̂ and radius δ, with x̃ = (x, 1) and z̃ = (z, 1),
//!
//! ```text
//! d²([x:1], [z:1]) < δ²  ⇔  2(x̃ᵗz̃)² − (2 − δ²)‖z̃‖²‖x̃‖² > 0
//! ```
//!
//! so the region is {x : x̃ᵗ Q x̃ > 0} with Q = 2 z̃z̃ᵗ − (2 − δ²)‖z̃‖² I.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::contour::{zero_contour, Polyline, Rect};
use crate::error::{Error, Result};
use crate::geometry::Subspace;
use crate::matrix::Matrix;

/// |X_{m+1}| at or below this on the unit representative is the hyperplane at infinity.
pub const INFINITY_TOLERANCE: f64 = 1e-9;

/// Relative threshold on determinants for the degenerate and parabolic cases.
pub const CONIC_TOLERANCE: f64 = 1e-12;

/// Seed used by the CLI and tests for the planar example data set.
pub const DEFAULT_SYNTHETIC_SEED: u64 = 0;

/// Cells per axis for boundary contouring.
pub const CONTOUR_GRID: usize = 512;

/// A point of RP^m: a line in R^{m+1}.
#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneousPoint(Subspace<f64>);

impl HomogeneousPoint {
    /// The ray through a non-zero representative.
    pub fn from_representative(x: &[f64]) -> Result<Self> {
        Subspace::line(x).map(Self)
    }

    pub fn from_line(line: Subspace<f64>) -> Result<Self> {
        if line.dim() != 1 {
            return Err(Error::InvalidSubspaceDimension {
                m: line.dim(),
                ambient: line.ambient_dim(),
            });
        }
        Ok(Self(line))
    }

    pub fn as_line(&self) -> &Subspace<f64> {
        &self.0
    }

    pub fn into_line(self) -> Subspace<f64> {
        self.0
    }

    /// m for a point of RP^m.
    pub fn dim(&self) -> usize {
        self.0.ambient_dim() - 1
    }

    /// Unit representative with non-negative last coordinate.
    pub fn representative(&self) -> Vec<f64> {
        let mut v = self.0.frame().column(0);
        if v[v.len() - 1] < 0.0 {
            v.iter_mut().for_each(|c| *c = -*c);
        }
        v
    }
}

/// x ↦ [x:1].
pub fn embed_affine(x: &[f64]) -> Result<HomogeneousPoint> {
    if x.is_empty() {
        return Err(Error::EmptyData);
    }
    let mut v = x.to_vec();
    v.push(1.0);
    HomogeneousPoint::from_representative(&v)
}

/// [X_1 : … : X_{m+1}] ↦ (X_1/X_{m+1}, …, X_m/X_{m+1}).
pub fn dehomogenize(p: &HomogeneousPoint) -> Result<Vec<f64>> {
    let v = p.representative();
    let (&last, head) = v.split_last().expect("ambient dimension is at least 2");
    if last.abs() <= INFINITY_TOLERANCE {
        return Err(Error::PointAtInfinity { last });
    }
    Ok(head.iter().map(|c| c / last).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConicClass {
    Ellipse,
    Parabola,
    Hyperbola,
    Degenerate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadricRegion {
    pub m: usize,
    /// Inhomogeneous coordinates of the center.
    pub z: Vec<f64>,
    pub delta: f64,
    /// Symmetric (m+1)×(m+1) coefficient matrix.
    pub q: Matrix<f64>,
    /// Present iff m = 2.
    pub conic_class: Option<ConicClass>,
}

impl QuadricRegion {
    /// x̃ᵗ Q x̃ for a homogeneous vector.
    pub fn form(&self, x: &[f64]) -> f64 {
        let qx = self.q.mul_vec(x);
        x.iter().zip(&qx).map(|(a, b)| a * b).sum()
    }

    /// x̃ᵗ Q x̃ with x̃ = (x, 1).
    pub fn affine_form(&self, x: &[f64]) -> f64 {
        let mut h = x.to_vec();
        h.push(1.0);
        self.form(&h)
    }

    pub fn contains(&self, x: &[f64]) -> Result<bool> {
        if x.len() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: x.len(),
            });
        }
        Ok(self.affine_form(x) > 0.0)
    }

    /// Membership for any point of RP^m, including points at infinity.
    pub fn contains_point(&self, p: &HomogeneousPoint) -> Result<bool> {
        if p.dim() != self.m {
            return Err(Error::DimensionMismatch {
                expected: self.m,
                found: p.dim(),
            });
        }
        Ok(self.form(&p.representative()) > 0.0)
    }

    /// Rows of Q.
    pub fn coefficient_rows(&self) -> Vec<Vec<f64>> {
        (0..=self.m).map(|i| (0..=self.m).map(|j| self.q[(i, j)]).collect()).collect()
    }
}

/// The region {x ∈ R^m : d([x:1], mean) < delta}.
///
/// `delta` ≥ √2 covers every affine point; such regions are classed degenerate.
pub fn quadric_region(mean: &HomogeneousPoint, delta: f64) -> Result<QuadricRegion> {
    if !(delta.is_finite() && delta > 0.0) {
        return Err(Error::InvalidDelta(delta));
    }
    let z = dehomogenize(mean)?;
    let m = z.len();
    let mut zt = z.clone();
    zt.push(1.0);
    let zt_sqr: f64 = zt.iter().map(|c| c * c).sum();
    let c = (2.0 - delta * delta) * zt_sqr;
    let q = Matrix::from_fn(m + 1, m + 1, |i, j| 2.0 * zt[i] * zt[j] - if i == j { c } else { 0.0 });
    let conic_class = (m == 2).then(|| classify_conic(&q, delta, zt_sqr));
    Ok(QuadricRegion {
        m,
        z,
        delta,
        q,
        conic_class,
    })
}

fn det2(a: f64, b: f64, c: f64, d: f64) -> f64 {
    a * d - b * c
}

fn det3(q: &Matrix<f64>) -> f64 {
    q[(0, 0)] * det2(q[(1, 1)], q[(1, 2)], q[(2, 1)], q[(2, 2)])
        - q[(0, 1)] * det2(q[(1, 0)], q[(1, 2)], q[(2, 0)], q[(2, 2)])
        + q[(0, 2)] * det2(q[(1, 0)], q[(1, 1)], q[(2, 0)], q[(2, 1)])
}

/// Sign of the leading 2×2 determinant; a vanishing 3×3 determinant, or
/// δ ≥ √2, makes the conic degenerate.
fn classify_conic(q: &Matrix<f64>, delta: f64, scale: f64) -> ConicClass {
    if delta * delta >= 2.0 || det3(q).abs() <= CONIC_TOLERANCE * scale.powi(3) {
        return ConicClass::Degenerate;
    }
    let lead = det2(q[(0, 0)], q[(0, 1)], q[(1, 0)], q[(1, 1)]);
    if lead.abs() <= CONIC_TOLERANCE * scale * scale {
        ConicClass::Parabola
    } else if lead > 0.0 {
        ConicClass::Ellipse
    } else {
        ConicClass::Hyperbola
    }
}

/// n points (10 + g_1, 10 + g_2) in R², with g_i independent standard
/// normals drawn in order g_1, g_2 per point from ChaCha8 seeded by `seed`
/// through `SeedableRng::seed_from_u64`.
pub fn synthesize_affine_points(seed: u64, n: usize) -> Vec<[f64; 2]> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let g1: f64 = StandardNormal.sample(&mut rng);
            let g2: f64 = StandardNormal.sample(&mut rng);
            [10.0 + g1, 10.0 + g2]
        })
        .collect()
}

/// [`synthesize_affine_points`] embedded in RP².
pub fn synthesize_planar_data(seed: u64, n: usize) -> Vec<HomogeneousPoint> {
    synthesize_affine_points(seed, n)
        .iter()
        .map(|x| embed_affine(x).expect("finite affine point"))
        .collect()
}

/// The 100-point planar example.
pub fn synthesize_example_data(seed: u64) -> Vec<HomogeneousPoint> {
    synthesize_planar_data(seed, 100)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Viewport {
    pub rect: Rect,
    pub width_px: u32,
    pub height_px: u32,
}

impl Viewport {
    pub fn new(x_min: f64, x_max: f64, y_min: f64, y_max: f64) -> Result<Self> {
        let ok = [x_min, x_max, y_min, y_max].iter().all(|v| v.is_finite()) && x_min < x_max && y_min < y_max;
        if !ok {
            return Err(Error::NonFinite);
        }
        Ok(Self {
            rect: Rect {
                x_min,
                x_max,
                y_min,
                y_max,
            },
            width_px: 600,
            height_px: 600,
        })
    }

    /// Square box around `points` padded by `margin` times the larger extent.
    pub fn fit(points: &[[f64; 2]], margin: f64) -> Result<Self> {
        let first = points.first().ok_or(Error::EmptyData)?;
        let (mut lo, mut hi) = (*first, *first);
        for p in points {
            for k in 0..2 {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let half = ((hi[0] - lo[0]).max(hi[1] - lo[1]) * (0.5 + margin)).max(1e-6);
        let cx = 0.5 * (lo[0] + hi[0]);
        let cy = 0.5 * (lo[1] + hi[1]);
        Self::new(cx - half, cx + half, cy - half, cy + half)
    }

    fn to_px(self, p: [f64; 2]) -> (f64, f64) {
        let r = &self.rect;
        (
            (p[0] - r.x_min) / r.width() * f64::from(self.width_px),
            (r.y_max - p[1]) / r.height() * f64::from(self.height_px),
        )
    }
}

/// The zero set of x̃ᵗQx̃ over the viewport on a `CONTOUR_GRID`² grid.
pub fn region_boundary(region: &QuadricRegion, viewport: &Viewport) -> Result<Vec<Polyline>> {
    if region.m != 2 {
        return Err(Error::UnsupportedDimension {
            expected: 2,
            found: region.m,
        });
    }
    Ok(zero_contour(&viewport.rect, CONTOUR_GRID, |x, y| region.affine_form(&[x, y])))
}

/// Data points, the center and the region boundary as an SVG 1.1 document.
/// Identical inputs give byte-identical output.
pub fn render_region_svg(region: &QuadricRegion, data: &[[f64; 2]], viewport: &Viewport) -> Result<String> {
    let boundary = region_boundary(region, viewport)?;
    let (w, h) = (viewport.width_px, viewport.height_px);
    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    let _ = writeln!(svg, r#"<rect x="0" y="0" width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        svg,
        r#"<g id="boundary" fill="none" stroke="black" stroke-width="1.5">"#
    );
    for line in &boundary {
        let mut d = String::new();
        for (k, &p) in line.points.iter().enumerate() {
            let (x, y) = viewport.to_px(p);
            let _ = write!(d, "{}{:.3},{:.3}", if k == 0 { "M" } else { " L" }, x, y);
        }
        if line.closed {
            d.push_str(" Z");
        }
        let _ = writeln!(svg, r#"<path d="{d}"/>"#);
    }
    let _ = writeln!(svg, "</g>");
    let _ = writeln!(svg, r#"<g id="data" fill="steelblue">"#);
    for &p in data {
        let (x, y) = viewport.to_px(p);
        let _ = writeln!(svg, r#"<circle cx="{x:.3}" cy="{y:.3}" r="2.5"/>"#);
    }
    let _ = writeln!(svg, "</g>");
    let (mx, my) = viewport.to_px([region.z[0], region.z[1]]);
    let _ = writeln!(
        svg,
        r#"<g id="mean" stroke="crimson" stroke-width="2"><line x1="{:.3}" y1="{my:.3}" x2="{:.3}" y2="{my:.3}"/><line x1="{mx:.3}" y1="{:.3}" x2="{mx:.3}" y2="{:.3}"/></g>"#,
        mx - 6.0,
        mx + 6.0,
        my - 6.0,
        my + 6.0
    );
    let _ = writeln!(svg, "</svg>");
    Ok(svg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::extrinsic_distance;

    #[test]
    fn embed_examples() {
        let o = embed_affine(&[0.0, 0.0]).unwrap();
        assert!(o.as_line().same_span(&Subspace::coordinate(3, &[2]).unwrap()));
        let p = embed_affine(&[3.0, 4.0]).unwrap();
        let r = p.representative();
        let s = 26f64.sqrt();
        for (a, b) in r.iter().zip([3.0 / s, 4.0 / s, 1.0 / s]) {
            assert!((a - b).abs() < 1e-15);
        }
        let back = dehomogenize(&p).unwrap();
        assert!((back[0] - 3.0).abs() < 1e-12 && (back[1] - 4.0).abs() < 1e-12);
    }

    #[test]
    fn dehomogenize_examples() {
        let inf = HomogeneousPoint::from_representative(&[1.0, 0.0, 0.0]).unwrap();
        assert!(matches!(dehomogenize(&inf), Err(Error::PointAtInfinity { .. })));
        let flipped = HomogeneousPoint::from_representative(&[-3.0, -4.0, -1.0]).unwrap();
        let x = dehomogenize(&flipped).unwrap();
        assert!((x[0] - 3.0).abs() < 1e-12 && (x[1] - 4.0).abs() < 1e-12);
        let scaled = HomogeneousPoint::from_representative(&[300.0, 400.0, 100.0]).unwrap();
        for (a, b) in scaled.representative().iter().zip(flipped.representative()) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn quadric_encodes_the_inequality() {
        let mean = embed_affine(&[1.5, -0.5]).unwrap();
        let delta = 0.7;
        let r = quadric_region(&mean, delta).unwrap();
        let z = &r.z;
        let zz = z[0] * z[0] + z[1] * z[1];
        for x in [[0.0, 0.0], [1.0, 2.0], [-3.0, 0.25], [1.5, -0.5]] {
            let xx = x[0] * x[0] + x[1] * x[1];
            let xz = x[0] * z[0] + x[1] * z[1];
            let k = 2.0 - delta * delta;
            let rhs = 2.0 * (xz + 1.0).powi(2) - k * xx * (zz + 1.0) - k * (zz + 1.0);
            assert!((r.affine_form(&x) - rhs).abs() < 1e-12 * (1.0 + rhs.abs()));
        }
    }

    #[test]
    fn centered_unit_disk() {
        let r = quadric_region(&embed_affine(&[0.0, 0.0]).unwrap(), 1.0).unwrap();
        assert_eq!(r.conic_class, Some(ConicClass::Ellipse));
        assert!(r.contains(&[0.99, 0.0]).unwrap());
        assert!(r.contains(&[0.0, -0.7]).unwrap());
        assert!(!r.contains(&[1.01, 0.0]).unwrap());
        assert!(!r.contains(&[0.8, 0.8]).unwrap());
    }

    #[test]
    fn membership_matches_distance() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let mean = embed_affine(&[0.4, -1.2]).unwrap();
        for delta in [0.2, 0.9, 1.3] {
            let r = quadric_region(&mean, delta).unwrap();
            for _ in 0..10_000 {
                let g: [f64; 2] = [StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng)];
                let x = [4.0 * g[0], 4.0 * g[1]];
                let d = extrinsic_distance(embed_affine(&x).unwrap().as_line(), mean.as_line()).unwrap();
                if (d - delta).abs() > 1e-9 {
                    assert_eq!(r.contains(&x).unwrap(), d < delta, "x = {x:?}, d = {d}");
                }
            }
        }
    }

    #[test]
    fn conic_classes() {
        let far = embed_affine(&[10.0447, 9.8422]).unwrap();
        assert_eq!(quadric_region(&far, 0.3713).unwrap().conic_class, Some(ConicClass::Hyperbola));
        assert_eq!(quadric_region(&far, 2f64.sqrt()).unwrap().conic_class, Some(ConicClass::Degenerate));
        assert_eq!(quadric_region(&far, 2.0).unwrap().conic_class, Some(ConicClass::Degenerate));
        // 2‖z‖² = (2 − δ²)(‖z‖² + 1) at ‖z‖ = 1, δ² = 1.
        let edge = embed_affine(&[1.0, 0.0]).unwrap();
        assert_eq!(quadric_region(&edge, 1.0).unwrap().conic_class, Some(ConicClass::Parabola));
        let three = embed_affine(&[1.0, 0.0, 0.0]).unwrap();
        assert_eq!(quadric_region(&three, 1.0).unwrap().conic_class, None);
    }

    #[test]
    fn large_delta_covers_everything() {
        let r = quadric_region(&embed_affine(&[2.0, 1.0]).unwrap(), 1.5).unwrap();
        for x in [[0.0, 0.0], [-100.0, 3.0], [1e4, -1e4]] {
            assert!(r.contains(&x).unwrap());
        }
        assert!(quadric_region(&embed_affine(&[2.0, 1.0]).unwrap(), 0.0).is_err());
    }

    #[test]
    fn rejects_center_at_infinity() {
        let inf = HomogeneousPoint::from_representative(&[0.0, 1.0, 0.0]).unwrap();
        assert!(matches!(quadric_region(&inf, 0.5), Err(Error::PointAtInfinity { .. })));
    }

    #[test]
    fn synthesized_points_are_affine() {
        for seed in 0..5 {
            let data = synthesize_example_data(seed);
            assert_eq!(data.len(), 100);
            for p in &data {
                let x = dehomogenize(p).unwrap();
                assert!(x.iter().all(|c| (5.0..=15.0).contains(c)));
            }
        }
        assert_eq!(synthesize_example_data(7), synthesize_example_data(7));
    }

    #[test]
    fn unit_disk_contour() {
        let r = quadric_region(&embed_affine(&[0.0, 0.0]).unwrap(), 1.0).unwrap();
        let vp = Viewport::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let lines = region_boundary(&r, &vp).unwrap();
        assert_eq!(lines.len(), 1);
        assert!(lines[0].closed);
        let cell = 4.0 / CONTOUR_GRID as f64;
        let worst = lines[0]
            .points
            .iter()
            .map(|p| ((p[0] * p[0] + p[1] * p[1]).sqrt() - 1.0).abs())
            .fold(0.0, f64::max);
        assert!(worst < 2.0 * cell);
    }

    #[test]
    fn svg_is_deterministic_and_requires_plane() {
        let r = quadric_region(&embed_affine(&[0.0, 0.0]).unwrap(), 1.0).unwrap();
        let vp = Viewport::new(-2.0, 2.0, -2.0, 2.0).unwrap();
        let a = render_region_svg(&r, &[], &vp).unwrap();
        assert_eq!(a, render_region_svg(&r, &[], &vp).unwrap());
        assert_eq!(a.matches("<path").count(), 1);
        assert!(!a.contains("<circle"));
        let with = render_region_svg(&r, &[[0.5, 0.5], [1.0, -1.0]], &vp).unwrap();
        assert_eq!(with.matches("<circle").count(), 2);
        let r3 = quadric_region(&embed_affine(&[0.0, 0.0, 0.0]).unwrap(), 1.0).unwrap();
        assert!(matches!(
            render_region_svg(&r3, &[], &vp),
            Err(Error::UnsupportedDimension { .. })
        ));
    }
}
