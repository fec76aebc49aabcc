use exc_core::euclidean::ConfidenceConfig;
use exc_core::geometry::{extrinsic_distance, HermitianMatrix, Subspace, UnitVector};
use exc_core::grassmann::{grassmann_confidence_region, grassmann_euclidean_mean};
use exc_core::matrix::{random_unitary, Matrix};
use exc_core::projective::{dehomogenize, embed_affine, quadric_region, HomogeneousPoint};
use exc_core::scalar::Scalar;
use exc_core::sphere::sphere_confidence_region;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn random_subspace<S: Scalar>(ambient: usize, m: usize, rng: &mut ChaCha8Rng) -> Subspace<S> {
    Subspace::from_spanning_columns(&Matrix::<S>::random_gaussian(ambient, m, rng).columns()).unwrap()
}

fn random_unit(dim: usize, rng: &mut ChaCha8Rng) -> UnitVector {
    UnitVector::normalize(Matrix::<f64>::random_gaussian(dim, 1, rng).as_slice()).unwrap()
}

fn concentrated_sphere_data(dim: usize, n: usize, rng: &mut ChaCha8Rng) -> Vec<UnitVector> {
    let center = random_unit(dim, rng);
    (0..n)
        .map(|_| {
            let noise = Matrix::<f64>::random_gaussian(dim, 1, rng);
            let v: Vec<f64> = center.coords().iter().zip(noise.as_slice()).map(|(c, e)| c + 0.3 * e).collect();
            UnitVector::normalize(&v).unwrap()
        })
        .collect()
}

fn frame_rotation_invariance<S: Scalar>(seed: u64, ambient: usize, m: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = random_subspace::<S>(ambient, m, &mut rng);
    let w = random_unitary::<S, _>(m, &mut rng);
    let rotated = Subspace::from_orthonormal_frame(u.frame() * &w).unwrap();
    let diff = u.embed().sub(&rotated.embed()).frobenius_norm();
    assert!(diff < 1e-12, "diff = {diff}");
}

fn unitary_equivariance<S: Scalar>(seed: u64, ambient: usize, m: usize) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let reference = random_subspace::<S>(ambient, m, &mut rng);
    let data: Vec<Subspace<S>> = (0..60)
        .map(|_| {
            let noise = Matrix::<S>::random_gaussian(ambient, m, &mut rng).scaled(0.15);
            Subspace::from_spanning_columns(&(reference.frame() + &noise).columns()).unwrap()
        })
        .collect();
    let w = random_unitary::<S, _>(ambient, &mut rng);
    let moved: Vec<Subspace<S>> = data.iter().map(|u| u.transformed(&w)).collect();
    let cfg = ConfidenceConfig::new(0.1, 60).unwrap();
    let a = grassmann_confidence_region(&data, &cfg).unwrap();
    let b = grassmann_confidence_region(&moved, &cfg).unwrap();
    assert!((a.radius() - b.radius()).abs() < 1e-9);
    assert_eq!(a.is_trivial(), b.is_trivial());
    if let (Some(ca), Some(cb)) = (a.center(), b.center()) {
        assert!(extrinsic_distance(&ca.transformed(&w), cb).unwrap() < 1e-8);
    }
    let za = grassmann_euclidean_mean(&data).unwrap().conjugated(&w);
    let zb = grassmann_euclidean_mean(&moved).unwrap();
    assert!(za.sub(&zb).frobenius_norm() < 1e-12);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn embedding_ignores_choice_of_basis(seed in any::<u64>(), ambient in 2usize..8, m_frac in 0.0f64..1.0) {
        let m = 1 + (m_frac * (ambient - 1) as f64) as usize % (ambient - 1);
        frame_rotation_invariance::<f64>(seed, ambient, m);
        frame_rotation_invariance::<Complex64>(seed, ambient, m);
    }

    #[test]
    fn embedded_subspaces_have_unit_norm_and_trace(seed in any::<u64>(), ambient in 2usize..8, m_frac in 0.0f64..1.0) {
        let m = 1 + (m_frac * (ambient - 1) as f64) as usize % (ambient - 1);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let z = random_subspace::<Complex64>(ambient, m, &mut rng).embed();
        prop_assert!((z.frobenius_norm() - 1.0).abs() < 1e-12);
        prop_assert!((z.trace() - (m as f64).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn distance_is_a_bounded_symmetric_metric(seed in any::<u64>(), ambient in 2usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = 1 + (seed as usize) % (ambient - 1);
        let [u, v, w] = [0, 1, 2].map(|_| random_subspace::<Complex64>(ambient, m, &mut rng));
        let uv = extrinsic_distance(&u, &v).unwrap();
        prop_assert!((uv - extrinsic_distance(&v, &u).unwrap()).abs() < 1e-14);
        prop_assert!(uv <= 2f64.sqrt() + 1e-12);
        prop_assert!(extrinsic_distance(&u, &u).unwrap() < 1e-7);
        let uw = extrinsic_distance(&u, &w).unwrap();
        let wv = extrinsic_distance(&w, &v).unwrap();
        prop_assert!(uv <= uw + wv + 1e-12);
    }

    #[test]
    fn grassmann_region_is_unitarily_equivariant(seed in any::<u64>(), ambient in 3usize..6) {
        let m = 1 + (seed as usize) % (ambient - 1);
        unitary_equivariance::<f64>(seed, ambient, m);
        unitary_equivariance::<Complex64>(seed, ambient, m);
    }

    #[test]
    fn sphere_region_is_rotation_equivariant(seed in any::<u64>(), dim in 2usize..6, n in 5usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = concentrated_sphere_data(dim, n, &mut rng);
        let q = random_unitary::<f64, _>(dim, &mut rng);
        let moved: Vec<UnitVector> = data.iter().map(|x| x.rotated(&q)).collect();
        let cfg = ConfidenceConfig::new(0.1, n).unwrap();
        let a = sphere_confidence_region(&data, &cfg).unwrap();
        let b = sphere_confidence_region(&moved, &cfg).unwrap();
        prop_assert_eq!(a.is_trivial(), b.is_trivial());
        if let (Some(ra), Some(rb)) = (a.angular_radius(), b.angular_radius()) {
            prop_assert!((ra - rb).abs() < 1e-9);
            let ca = a.center().unwrap().rotated(&q);
            let cb = b.center().unwrap();
            let gap: f64 = ca.coords().iter().zip(cb.coords()).map(|(x, y)| (x - y).powi(2)).sum();
            prop_assert!(gap.sqrt() < 1e-9);
        }
    }

    #[test]
    fn sphere_radius_shrinks_with_alpha(seed in any::<u64>(), n in 20usize..200) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = concentrated_sphere_data(3, n, &mut rng);
        let lo = sphere_confidence_region(&data, &ConfidenceConfig::new(0.05, n).unwrap()).unwrap();
        let hi = sphere_confidence_region(&data, &ConfidenceConfig::new(0.1, n).unwrap()).unwrap();
        if let (Some(a), Some(b)) = (lo.angular_radius(), hi.angular_radius()) {
            prop_assert!(b < a);
        }
        prop_assert!(!(lo.angular_radius().is_some() && hi.is_trivial()));
    }

    #[test]
    fn quadric_agrees_with_distance(
        z in prop::array::uniform2(-20.0f64..20.0),
        delta in 0.01f64..1.41,
        x in prop::array::uniform2(-50.0f64..50.0),
    ) {
        let mean = embed_affine(&z).unwrap();
        let region = quadric_region(&mean, delta).unwrap();
        let d = extrinsic_distance(embed_affine(&x).unwrap().as_line(), mean.as_line()).unwrap();
        prop_assume!((d - delta).abs() > 1e-9);
        prop_assert_eq!(region.contains(&x).unwrap(), d < delta);
        prop_assert!(region.contains(&region.z).unwrap());
    }

    #[test]
    fn homogeneous_scaling_is_invisible(
        x in prop::array::uniform2(-100.0f64..100.0),
        k in prop_oneof![-1e3f64..-1e-3, 1e-3f64..1e3],
        delta in 0.05f64..1.4,
    ) {
        let p = embed_affine(&x).unwrap();
        let scaled = HomogeneousPoint::from_representative(&[k * x[0], k * x[1], k]).unwrap();
        let a = dehomogenize(&p).unwrap();
        let b = dehomogenize(&scaled).unwrap();
        for i in 0..2 {
            prop_assert!((a[i] - b[i]).abs() <= 1e-12 * (1.0 + x[i].abs()));
        }
        let region = quadric_region(&embed_affine(&[1.0, -2.0]).unwrap(), delta).unwrap();
        prop_assert_eq!(region.contains_point(&p).unwrap(), region.contains_point(&scaled).unwrap());
    }

    #[test]
    fn hermitian_constructor_symmetrizes(seed in any::<u64>(), dim in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = Matrix::<Complex64>::random_gaussian(dim, dim, &mut rng);
        let h = HermitianMatrix::new(g).unwrap();
        prop_assert!(h.as_matrix().hermitian_defect() < 1e-15);
    }
}
