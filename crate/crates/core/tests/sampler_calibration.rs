//! Each sampler's stated Euclidean mean agrees with the average of 10⁶ draws.

use exc_core::geometry::HermitianMatrix;
use exc_core::grassmann::grassmann_euclidean_mean;
use exc_core::scalar::{Scalar, ScalarField};
use exc_core::simulation::{KnownMean, Sampler};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const DRAWS: usize = 1_000_000;
const CHUNK: usize = 10_000;
const TOLERANCE: f64 = 5e-3;

fn sphere_mean(sampler: &Sampler, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut sum: Vec<f64> = Vec::new();
    for _ in 0..DRAWS / CHUNK {
        for x in sampler.sample_sphere(CHUNK, rng).unwrap() {
            if sum.is_empty() {
                sum = vec![0.0; x.ambient_dim()];
            }
            sum.iter_mut().zip(x.coords()).for_each(|(a, b)| *a += b);
        }
    }
    sum.into_iter().map(|a| a / DRAWS as f64).collect()
}

fn subspace_mean<S: Scalar>(sampler: &Sampler, rng: &mut ChaCha8Rng) -> HermitianMatrix<S> {
    let mut total: Option<HermitianMatrix<S>> = None;
    for _ in 0..DRAWS / CHUNK {
        let chunk = grassmann_euclidean_mean(&sampler.sample_subspaces::<S, _>(CHUNK, rng).unwrap()).unwrap();
        total = Some(match total {
            None => chunk,
            Some(t) => t.add(&chunk),
        });
    }
    total.unwrap().scaled((CHUNK as f64) / DRAWS as f64)
}

fn check(sampler: Sampler, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let err = match sampler.known_euclidean_mean().unwrap() {
        KnownMean::Sphere(p) => {
            let emp = sphere_mean(&sampler, &mut rng);
            p.coords().iter().zip(&emp).map(|(a, b)| (a - b).powi(2)).sum::<f64>().sqrt()
        }
        KnownMean::Real(z) => subspace_mean::<f64>(&sampler, &mut rng).sub(&z).frobenius_norm(),
        KnownMean::Complex(z) => subspace_mean::<Complex64>(&sampler, &mut rng).sub(&z).frobenius_norm(),
    };
    assert!(err < TOLERANCE, "{sampler:?}: error {err}");
}

#[test]
fn point_mass() {
    check(Sampler::PointMass { point: vec![0.6, 0.0, 0.8] }, 1);
}

#[test]
fn spherical_cap() {
    check(
        Sampler::SphericalCapUniform {
            center: vec![0.0, 0.0, 1.0],
            half_angle: 0.8f64.acos(),
        },
        2,
    );
    check(
        Sampler::SphericalCapUniform {
            center: vec![1.0, 1.0, 0.0, 0.0, 1.0],
            half_angle: 1.2,
        },
        3,
    );
    check(
        Sampler::SphericalCapUniform {
            center: vec![0.0, 1.0],
            half_angle: 2.5,
        },
        4,
    );
}

#[test]
fn antipodal_mixture() {
    check(Sampler::AntipodalMixture { axis: vec![1.0, 2.0, 2.0] }, 5);
}

#[test]
fn langevin_like() {
    check(
        Sampler::LangevinLikeRejection {
            mean_direction: vec![0.0, 0.0, 1.0],
            kappa: 3.0,
        },
        6,
    );
    check(
        Sampler::LangevinLikeRejection {
            mean_direction: vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0],
            kappa: 10.0,
        },
        7,
    );
    check(
        Sampler::LangevinLikeRejection {
            mean_direction: vec![1.0, -1.0],
            kappa: 0.5,
        },
        8,
    );
}

#[test]
fn subspace_perturbation() {
    check(
        Sampler::SubspacePerturbation {
            field: ScalarField::Real,
            ambient_dim: 3,
            m: 1,
            max_angle: 0.55,
        },
        9,
    );
    check(
        Sampler::SubspacePerturbation {
            field: ScalarField::Complex,
            ambient_dim: 5,
            m: 2,
            max_angle: 0.7,
        },
        10,
    );
}

#[test]
fn subspace_uniform_pair() {
    check(
        Sampler::SubspaceUniformPair {
            field: ScalarField::Complex,
            ambient_dim: 4,
            m: 2,
        },
        11,
    );
    check(
        Sampler::SubspaceUniformPair {
            field: ScalarField::Real,
            ambient_dim: 3,
            m: 1,
        },
        12,
    );
}
