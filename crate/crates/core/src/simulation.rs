//! Monte Carlo coverage and rate experiments for the sphere and Grassmann
//! confidence regions.
//!
//! Replicate `r` of grid point `g` draws from `ChaCha8Rng::seed_from_u64(seed)`
//! with `set_stream((g << 32) | r)`, so a report depends only on the
//! configuration and never on the thread count. Results are gathered in
//! replicate order before any aggregation.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Beta, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::eigen::eigendecompose;
use crate::error::{Error, Result};
use crate::euclidean::ConfidenceConfig;
use crate::geometry::{extrinsic_distance, EuclideanPoint, HermitianMatrix, Subspace, UnitVector};
use crate::grassmann::{grassmann_region_from_mean, grassmann_trivial_bound, GrassmannRegionShape};
use crate::matrix::{gram_schmidt, Matrix};
use crate::scalar::{Scalar, ScalarField};
use crate::sphere::{membership, sphere_region_from_mean, trivial_set_probability_bound};

/// Intervals for Simpson quadrature of the sampler means.
const QUADRATURE_INTERVALS: usize = 20_000;

pub const MIN_COVERAGE_REPLICATES: usize = 100;

/// Data-generating distributions with analytically known Euclidean means.
///
/// Sphere samplers live on the unit sphere of the dimension of their vector
/// parameter. Subspace samplers draw m-dimensional subspaces of F^D around
/// U = span(e_1, …, e_m).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Sampler {
    /// Always returns `point`.
    PointMass { point: Vec<f64> },
    /// Uniform (surface measure) on the cap of angular radius `half_angle` around `center`.
    SphericalCapUniform { center: Vec<f64>, half_angle: f64 },
    /// ±`axis` with probability ½ each; EZ = 0.
    AntipodalMixture { axis: Vec<f64> },
    /// Density ∝ exp(κ xᵗμ), drawn by Wood's rejection scheme.
    LangevinLikeRejection { mean_direction: Vec<f64>, kappa: f64 },
    /// Frame columns cos θ_i e_i + sin θ_i w_i with θ_i ~ U[0, max_angle] and
    /// w a uniformly random orthonormal m-frame of U^⊥.
    SubspacePerturbation {
        field: ScalarField,
        ambient_dim: usize,
        m: usize,
        max_angle: f64,
    },
    /// span(e_1..e_m) or span(e_{m+1}..e_{2m}) with probability ½ each.
    SubspaceUniformPair {
        field: ScalarField,
        ambient_dim: usize,
        m: usize,
    },
}

/// EZ for a sampler.
#[derive(Debug, Clone, PartialEq)]
pub enum KnownMean {
    Sphere(EuclideanPoint),
    Real(HermitianMatrix<f64>),
    Complex(HermitianMatrix<Complex64>),
}

impl Sampler {
    pub fn is_sphere(&self) -> bool {
        matches!(
            self,
            Self::PointMass { .. }
                | Self::SphericalCapUniform { .. }
                | Self::AntipodalMixture { .. }
                | Self::LangevinLikeRejection { .. }
        )
    }

    pub fn known_euclidean_mean(&self) -> Result<KnownMean> {
        Ok(match prepare(self)? {
            Prepared::Sphere(s) => KnownMean::Sphere(s.mean),
            Prepared::Subspace(s) => match s.field {
                ScalarField::Real => KnownMean::Real(s.mean::<f64>()),
                ScalarField::Complex => KnownMean::Complex(s.mean::<Complex64>()),
            },
        })
    }

    /// `n` independent draws on the sphere; errors for subspace samplers.
    pub fn sample_sphere<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<UnitVector>> {
        match prepare(self)? {
            Prepared::Sphere(s) => (0..n).map(|_| UnitVector::new(s.draw(rng))).collect(),
            Prepared::Subspace(_) => Err(Error::InvalidExperiment("not a sphere sampler".into())),
        }
    }

    /// `n` independent subspaces over the scalar type `S`, which must match the
    /// sampler's field.
    pub fn sample_subspaces<S: Scalar, R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Result<Vec<Subspace<S>>> {
        match prepare(self)? {
            Prepared::Subspace(s) if s.field == S::FIELD => (0..n)
                .map(|_| Subspace::from_orthonormal_frame(Matrix::from_columns(&s.draw::<S, R>(rng))))
                .collect(),
            _ => Err(Error::InvalidExperiment("sampler does not produce subspaces over this field".into())),
        }
    }
}

enum Prepared {
    Sphere(SphereSampler),
    Subspace(SubspaceSampler),
}

struct SphereSampler {
    kind: SphereKind,
    mean: EuclideanPoint,
}

enum SphereKind {
    Point(Vec<f64>),
    Cap { center: Vec<f64>, half_angle: f64, sin_max: f64 },
    Antipodal(Vec<f64>),
    VonMises { mu: Vec<f64>, kappa: f64, b: f64, x0: f64, c: f64 },
}

#[derive(Clone, Copy)]
enum SubspaceKind {
    Perturbation { max_angle: f64 },
    Pair,
}

struct SubspaceSampler {
    kind: SubspaceKind,
    field: ScalarField,
    ambient: usize,
    m: usize,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidExperiment(msg.into())
}

fn unit(v: &[f64]) -> Result<Vec<f64>> {
    if v.len() < 2 {
        return Err(invalid("sphere samplers need at least two coordinates"));
    }
    Ok(UnitVector::normalize(v)?.coords().to_vec())
}

fn scaled(v: &[f64], k: f64) -> EuclideanPoint {
    EuclideanPoint::new(v.iter().map(|c| c * k).collect()).expect("finite")
}

fn simpson(a: f64, b: f64, f: impl Fn(f64) -> f64) -> f64 {
    let n = QUADRATURE_INTERVALS;
    let h = (b - a) / n as f64;
    let inner: f64 = (1..n).map(|i| f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 }).sum();
    (f(a) + f(b) + inner) * h / 3.0
}

fn prepare(sampler: &Sampler) -> Result<Prepared> {
    Ok(match sampler {
        Sampler::PointMass { point } => {
            let p = unit(point)?;
            Prepared::Sphere(SphereSampler {
                mean: scaled(&p, 1.0),
                kind: SphereKind::Point(p),
            })
        }
        Sampler::SphericalCapUniform { center, half_angle } => {
            let c = unit(center)?;
            let t = *half_angle;
            if !(t > 0.0 && t <= std::f64::consts::PI) {
                return Err(invalid("half_angle must lie in (0, π]"));
            }
            let k = (c.len() - 2) as i32;
            // E cos φ with φ ∝ sin^k φ on [0, t]; the numerator integrates in closed form.
            let mass = simpson(0.0, t, |phi| phi.sin().powi(k));
            let mean_cos = t.sin().powi(k + 1) / f64::from(k + 1) / mass;
            Prepared::Sphere(SphereSampler {
                mean: scaled(&c, mean_cos),
                kind: SphereKind::Cap {
                    center: c,
                    half_angle: t,
                    sin_max: t.min(std::f64::consts::FRAC_PI_2).sin(),
                },
            })
        }
        Sampler::AntipodalMixture { axis } => {
            let a = unit(axis)?;
            Prepared::Sphere(SphereSampler {
                mean: EuclideanPoint::zeros(a.len()),
                kind: SphereKind::Antipodal(a),
            })
        }
        Sampler::LangevinLikeRejection { mean_direction, kappa } => {
            let mu = unit(mean_direction)?;
            let kappa = *kappa;
            if !(kappa > 0.0 && kappa.is_finite()) {
                return Err(invalid("kappa must be positive"));
            }
            let k = (mu.len() - 2) as i32;
            let weight = |phi: f64| (kappa * (phi.cos() - 1.0)).exp() * phi.sin().powi(k);
            let pi = std::f64::consts::PI;
            let mean_cos = simpson(0.0, pi, |phi| phi.cos() * weight(phi)) / simpson(0.0, pi, weight);
            let p1 = (mu.len() - 1) as f64;
            let b = p1 / (2.0 * kappa + (4.0 * kappa * kappa + p1 * p1).sqrt());
            let x0 = (1.0 - b) / (1.0 + b);
            let c = kappa * x0 + p1 * (1.0 - x0 * x0).ln();
            Prepared::Sphere(SphereSampler {
                mean: scaled(&mu, mean_cos),
                kind: SphereKind::VonMises { mu, kappa, b, x0, c },
            })
        }
        Sampler::SubspacePerturbation {
            field,
            ambient_dim,
            m,
            max_angle,
        } => {
            let s = SubspaceSampler {
                kind: SubspaceKind::Perturbation { max_angle: *max_angle },
                field: *field,
                ambient: *ambient_dim,
                m: *m,
            };
            if *m == 0 || 2 * m > *ambient_dim {
                return Err(invalid("subspace_perturbation needs 1 ≤ m and 2m ≤ ambient_dim"));
            }
            if !(*max_angle >= 0.0 && max_angle.is_finite()) {
                return Err(invalid("max_angle must be non-negative"));
            }
            let (top, rest) = s.spectrum();
            if top <= rest {
                return Err(invalid("max_angle too large: the population mean is not unique"));
            }
            Prepared::Subspace(s)
        }
        Sampler::SubspaceUniformPair { field, ambient_dim, m } => {
            if *m == 0 || 2 * m > *ambient_dim {
                return Err(invalid("subspace_uniform_pair needs 1 ≤ m and 2m ≤ ambient_dim"));
            }
            Prepared::Subspace(SubspaceSampler {
                kind: SubspaceKind::Pair,
                field: *field,
                ambient: *ambient_dim,
                m: *m,
            })
        }
    })
}

/// A unit vector orthogonal to the unit vector `mu`, uniformly distributed.
fn orthogonal_direction<R: Rng + ?Sized>(mu: &[f64], rng: &mut R) -> Vec<f64> {
    loop {
        let mut g: Vec<f64> = (0..mu.len()).map(|_| StandardNormal.sample(rng)).collect();
        let d: f64 = g.iter().zip(mu).map(|(a, b)| a * b).sum();
        g.iter_mut().zip(mu).for_each(|(a, b)| *a -= d * b);
        let norm = g.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return g.into_iter().map(|a| a / norm).collect();
        }
    }
}

fn tilt(mu: &[f64], w: &[f64], cos: f64, sin: f64) -> Vec<f64> {
    mu.iter().zip(w).map(|(a, b)| cos * a + sin * b).collect()
}

impl SphereSampler {
    fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match &self.kind {
            SphereKind::Point(p) => p.clone(),
            SphereKind::Antipodal(a) => {
                if rng.random::<bool>() {
                    a.clone()
                } else {
                    a.iter().map(|c| -c).collect()
                }
            }
            SphereKind::Cap {
                center,
                half_angle,
                sin_max,
            } => {
                let k = (center.len() - 2) as i32;
                let phi = loop {
                    let phi = rng.random::<f64>() * half_angle;
                    if k == 0 || rng.random::<f64>() < (phi.sin() / sin_max).powi(k) {
                        break phi;
                    }
                };
                tilt(center, &orthogonal_direction(center, rng), phi.cos(), phi.sin())
            }
            SphereKind::VonMises { mu, kappa, b, x0, c } => {
                let half = (mu.len() - 1) as f64 / 2.0;
                let beta = Beta::new(half, half).expect("positive shape");
                let p1 = 2.0 * half;
                let t = loop {
                    let z: f64 = beta.sample(rng);
                    let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
                    let u: f64 = rng.random();
                    if kappa * w + p1 * (1.0 - x0 * w).ln() - c >= u.ln() {
                        break w;
                    }
                };
                tilt(mu, &orthogonal_direction(mu, rng), t, (1.0 - t * t).max(0.0).sqrt())
            }
        }
    }
}

impl SubspaceSampler {
    /// (λ_1 = … = λ_m, λ_{m+1} = …) of EZ for the perturbation family.
    fn spectrum(&self) -> (f64, f64) {
        let root_m = (self.m as f64).sqrt();
        match self.kind {
            SubspaceKind::Perturbation { max_angle } => {
                let c = if max_angle == 0.0 {
                    1.0
                } else {
                    0.5 * (1.0 + (2.0 * max_angle).sin() / (2.0 * max_angle))
                };
                let rest = (1.0 - c) * self.m as f64 / (self.ambient - self.m) as f64;
                (c / root_m, rest / root_m)
            }
            SubspaceKind::Pair => (0.5 / root_m, 0.0),
        }
    }

    fn mean<S: Scalar>(&self) -> HermitianMatrix<S> {
        let (top, rest) = self.spectrum();
        let k = self.mean_set_dim();
        let diag: Vec<f64> = (0..self.ambient).map(|i| if i < k { top } else { rest }).collect();
        HermitianMatrix::new(Matrix::diagonal(&diag)).expect("diagonal is Hermitian")
    }

    /// The extrinsic mean set is every m-subspace of span(e_1, …, e_k).
    fn mean_set_dim(&self) -> usize {
        match self.kind {
            SubspaceKind::Perturbation { .. } => self.m,
            SubspaceKind::Pair => 2 * self.m,
        }
    }

    fn draw<S: Scalar, R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Vec<S>> {
        let (d, m) = (self.ambient, self.m);
        let axis = |i: usize| -> Vec<S> { (0..d).map(|j| if j == i { S::one() } else { S::zero() }).collect() };
        match self.kind {
            SubspaceKind::Pair => {
                let offset = if rng.random::<bool>() { 0 } else { m };
                (0..m).map(|i| axis(offset + i)).collect()
            }
            SubspaceKind::Perturbation { max_angle } => {
                let w = loop {
                    let g = Matrix::<S>::random_gaussian(d - m, m, rng);
                    if let Some(w) = gram_schmidt(&g.columns(), 1e-8) {
                        break w;
                    }
                };
                (0..m)
                    .map(|i| {
                        let theta = rng.random::<f64>() * max_angle;
                        let mut v = axis(i);
                        v[i] = S::from_real(theta.cos());
                        for (k, wk) in w[i].iter().enumerate() {
                            v[m + k] = wk.scale(theta.sin());
                        }
                        v
                    })
                    .collect()
            }
        }
    }
}

/// Shared settings for both experiment kinds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoverageExperiment {
    pub sampler: Sampler,
    pub alpha: f64,
    pub n: usize,
    pub replicates: usize,
    #[serde(default)]
    pub seed: u64,
    /// Worker threads; 0 uses the rayon default.
    #[serde(default)]
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateExperiment {
    pub sampler: Sampler,
    pub alpha: f64,
    pub n_grid: Vec<usize>,
    pub replicates_per_n: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub threads: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "snake_case")]
pub enum ExperimentConfig {
    Coverage(CoverageExperiment),
    Rate(RateExperiment),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    pub n: usize,
    pub replicates: usize,
    pub coverage_frequency: f64,
    pub trivial_frequency: f64,
    /// Over non-trivial replicates only.
    pub median_radius: Option<f64>,
    pub radius_quantiles: Option<[f64; 2]>,
    /// Exponential bound on the trivial-set probability at this n.
    pub trivial_bound: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    /// Total replicates over the whole grid.
    pub replicates: usize,
    pub coverage_frequency: f64,
    pub trivial_frequency: f64,
    /// Pooled over non-trivial replicates of every grid point.
    pub median_radius: Option<f64>,
    /// 5% and 95% quantiles, pooled likewise.
    pub radius_quantiles: Option<[f64; 2]>,
    /// Least-squares slope of log median radius against log n.
    pub rate_slope: Option<f64>,
    pub grid: Vec<GridPoint>,
    pub config: ExperimentConfig,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Outcome {
    covered: bool,
    /// None for a region equal to the whole manifold.
    radius: Option<f64>,
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    match config {
        ExperimentConfig::Coverage(c) => run_coverage_experiment(c),
        ExperimentConfig::Rate(r) => run_rate_experiment(r),
    }
}

pub fn run_coverage_experiment(exp: &CoverageExperiment) -> Result<ExperimentReport> {
    if exp.replicates < MIN_COVERAGE_REPLICATES {
        return Err(invalid(format!(
            "at least {MIN_COVERAGE_REPLICATES} replicates are required"
        )));
    }
    let cfg = ConfidenceConfig::new(exp.alpha, exp.n)?;
    let prepared = prepare(&exp.sampler)?;
    let outcomes = with_pool(exp.threads, || replicate_outcomes(&prepared, &cfg, exp.seed, 0, exp.replicates))??;
    let point = grid_point(&prepared, &cfg, &outcomes)?;
    Ok(pooled_report(vec![point], &[outcomes], None, ExperimentConfig::Coverage(exp.clone())))
}

pub fn run_rate_experiment(exp: &RateExperiment) -> Result<ExperimentReport> {
    let (lo, hi) = match (exp.n_grid.iter().min(), exp.n_grid.iter().max()) {
        (Some(&lo), Some(&hi)) if lo > 0 => (lo, hi),
        _ => return Err(invalid("n_grid must contain positive sample sizes")),
    };
    if (hi as f64) < 100.0 * lo as f64 {
        return Err(invalid("n_grid must span at least two decades"));
    }
    if exp.replicates_per_n == 0 {
        return Err(invalid("replicates_per_n must be positive"));
    }
    let prepared = prepare(&exp.sampler)?;
    if !prepared.has_unique_mean() {
        return Err(invalid("rate experiments need a sampler with a unique extrinsic mean"));
    }
    let mut points = Vec::new();
    let mut all = Vec::new();
    for (g, &n) in exp.n_grid.iter().enumerate() {
        let cfg = ConfidenceConfig::new(exp.alpha, n)?;
        let outcomes = with_pool(exp.threads, || {
            replicate_outcomes(&prepared, &cfg, exp.seed, g as u64, exp.replicates_per_n)
        })??;
        let point = grid_point(&prepared, &cfg, &outcomes)?;
        if point.median_radius.is_none() {
            return Err(invalid(format!(
                "every replicate at n = {n} gave the whole manifold; use larger sample sizes"
            )));
        }
        points.push(point);
        all.push(outcomes);
    }
    let xs: Vec<f64> = points.iter().map(|p| (p.n as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.median_radius.expect("checked").ln()).collect();
    let slope = least_squares_slope(&xs, &ys);
    Ok(pooled_report(points, &all, Some(slope), ExperimentConfig::Rate(exp.clone())))
}

fn with_pool<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| invalid(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

fn replicate_outcomes(
    prepared: &Prepared,
    cfg: &ConfidenceConfig,
    seed: u64,
    grid_index: u64,
    replicates: usize,
) -> Result<Vec<Outcome>> {
    (0..replicates)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream((grid_index << 32) | r as u64);
            prepared.replicate(cfg, &mut rng)
        })
        .collect()
}

impl Prepared {
    fn has_unique_mean(&self) -> bool {
        match self {
            Prepared::Sphere(s) => s.mean.norm() > 0.0,
            Prepared::Subspace(s) => s.mean_set_dim() == s.m,
        }
    }

    fn trivial_bound(&self, cfg: &ConfidenceConfig) -> Option<f64> {
        match self {
            Prepared::Sphere(s) => {
                let h = s.mean.norm();
                (h > 0.0).then(|| trivial_set_probability_bound(h, cfg))
            }
            Prepared::Subspace(s) if s.mean_set_dim() == s.m => {
                let (top, rest) = s.spectrum();
                let frob = (s.m as f64 * top * top + (s.ambient - s.m) as f64 * rest * rest).sqrt();
                Some(grassmann_trivial_bound(top - rest, frob, cfg))
            }
            Prepared::Subspace(_) => None,
        }
    }

    fn replicate(&self, cfg: &ConfidenceConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        match self {
            Prepared::Sphere(s) => s.replicate(cfg, rng),
            Prepared::Subspace(s) => match s.field {
                ScalarField::Real => s.replicate::<f64>(cfg, rng),
                ScalarField::Complex => s.replicate::<Complex64>(cfg, rng),
            },
        }
    }
}

impl SphereSampler {
    fn replicate(&self, cfg: &ConfidenceConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let dim = self.mean.dim();
        let mut sum = vec![0.0; dim];
        for _ in 0..cfg.n() {
            sum.iter_mut().zip(self.draw(rng)).for_each(|(a, b)| *a += b);
        }
        let n = cfg.n() as f64;
        let zbar = EuclideanPoint::new(sum.into_iter().map(|a| a / n).collect())?;
        let region = sphere_region_from_mean(&zbar, cfg)?;
        let radius = region.angular_radius();
        let covered = if region.is_trivial() {
            true
        } else if self.mean.norm() == 0.0 {
            false
        } else {
            membership(&region, &UnitVector::normalize(self.mean.coords())?)?
        };
        Ok(Outcome { covered, radius })
    }
}

impl SubspaceSampler {
    fn replicate<S: Scalar>(&self, cfg: &ConfidenceConfig, rng: &mut ChaCha8Rng) -> Result<Outcome> {
        let weight = 1.0 / (self.m as f64).sqrt();
        let mut sum = HermitianMatrix::<S>::zeros(self.ambient);
        for _ in 0..cfg.n() {
            for col in self.draw::<S, _>(rng) {
                sum.add_outer(&col, weight);
            }
        }
        let zbar = sum.scaled(1.0 / cfg.n() as f64);
        let region = grassmann_region_from_mean(&zbar, self.m, cfg)?;
        let (covered, radius) = match &region.shape {
            GrassmannRegionShape::FullSpace { .. } => (true, None),
            GrassmannRegionShape::Ball { center, radius } => {
                (self.farthest_mean_distance(center)? < *radius, Some(*radius))
            }
        };
        Ok(Outcome { covered, radius })
    }

    /// max d(center, V) over m-subspaces V of span(e_1, …, e_k): with F_k the
    /// first k rows of the center's frame, the minimum of tr(P_C P_V) is the sum
    /// of the m smallest eigenvalues of F_k F_k*.
    fn farthest_mean_distance<S: Scalar>(&self, center: &Subspace<S>) -> Result<f64> {
        let k = self.mean_set_dim();
        let frame = center.frame();
        if k == self.m {
            let mean = Subspace::<S>::coordinate(self.ambient, &(0..k).collect::<Vec<_>>())?;
            return extrinsic_distance(center, &mean);
        }
        let fk = Matrix::from_fn(k, self.m, |i, j| frame[(i, j)]);
        let compressed = HermitianMatrix::new(&fk * &fk.adjoint())?;
        let eig = eigendecompose(&compressed)?;
        let smallest: f64 = eig.eigenvalues[k - self.m..].iter().sum();
        Ok((2.0 * (1.0 - smallest / self.m as f64)).max(0.0).sqrt())
    }
}

fn grid_point(prepared: &Prepared, cfg: &ConfidenceConfig, outcomes: &[Outcome]) -> Result<GridPoint> {
    let total = outcomes.len() as f64;
    let mut radii: Vec<f64> = outcomes.iter().filter_map(|o| o.radius).collect();
    radii.sort_by(f64::total_cmp);
    Ok(GridPoint {
        n: cfg.n(),
        replicates: outcomes.len(),
        coverage_frequency: outcomes.iter().filter(|o| o.covered).count() as f64 / total,
        trivial_frequency: outcomes.iter().filter(|o| o.radius.is_none()).count() as f64 / total,
        median_radius: quantile(&radii, 0.5),
        radius_quantiles: quantile(&radii, 0.05).zip(quantile(&radii, 0.95)).map(|(a, b)| [a, b]),
        trivial_bound: prepared.trivial_bound(cfg),
    })
}

fn pooled_report(grid: Vec<GridPoint>, outcomes: &[Vec<Outcome>], slope: Option<f64>, config: ExperimentConfig) -> ExperimentReport {
    let all: Vec<Outcome> = outcomes.iter().flatten().copied().collect();
    let total = all.len() as f64;
    let mut radii: Vec<f64> = all.iter().filter_map(|o| o.radius).collect();
    radii.sort_by(f64::total_cmp);
    ExperimentReport {
        replicates: all.len(),
        coverage_frequency: all.iter().filter(|o| o.covered).count() as f64 / total,
        trivial_frequency: all.iter().filter(|o| o.radius.is_none()).count() as f64 / total,
        median_radius: quantile(&radii, 0.5),
        radius_quantiles: quantile(&radii, 0.05).zip(quantile(&radii, 0.95)).map(|(a, b)| [a, b]),
        rate_slope: slope,
        grid,
        config,
    }
}

/// Linear interpolation between order statistics of sorted data.
pub fn quantile(sorted: &[f64], p: f64) -> Option<f64> {
    let last = sorted.len().checked_sub(1)?;
    let h = p.clamp(0.0, 1.0) * last as f64;
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(last);
    Some(sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo]))
}

pub fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}
