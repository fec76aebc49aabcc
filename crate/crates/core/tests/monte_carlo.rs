use exc_core::scalar::ScalarField;
use exc_core::simulation::{run_coverage_experiment, run_rate_experiment, CoverageExperiment, RateExperiment, Sampler};

fn cap_09() -> Sampler {
    Sampler::SphericalCapUniform {
        center: vec![0.0, 0.0, 1.0],
        half_angle: 0.8f64.acos(),
    }
}

fn perturbation() -> Sampler {
    Sampler::SubspacePerturbation {
        field: ScalarField::Real,
        ambient_dim: 3,
        m: 1,
        max_angle: 0.55,
    }
}

fn coverage(sampler: Sampler, alpha: f64, n: usize, replicates: usize, seed: u64) -> CoverageExperiment {
    CoverageExperiment {
        sampler,
        alpha,
        n,
        replicates,
        seed,
        threads: 0,
    }
}

fn stderr(p: f64, reps: usize) -> f64 {
    (p * (1.0 - p) / reps as f64).sqrt()
}

#[test]
fn concentrated_cap_is_covered() {
    let r = run_coverage_experiment(&coverage(cap_09(), 0.05, 100, 10_000, 1)).unwrap();
    assert!(r.coverage_frequency >= 0.95, "{}", r.coverage_frequency);
    let [lo, hi] = r.radius_quantiles.unwrap();
    assert!(lo <= r.median_radius.unwrap() && r.median_radius.unwrap() <= hi);
}

#[test]
fn antipodal_data_mostly_gives_whole_sphere() {
    let alpha = 0.1;
    let reps = 10_000;
    let s = Sampler::AntipodalMixture { axis: vec![0.0, 1.0, 0.0] };
    let r = run_coverage_experiment(&coverage(s, alpha, 30, reps, 2)).unwrap();
    assert!(r.trivial_frequency >= 1.0 - alpha - 3.0 * stderr(alpha, reps));
    assert_eq!(r.coverage_frequency, r.trivial_frequency);
}

#[test]
fn equal_eigenvalues_mostly_give_whole_grassmannian() {
    let alpha = 0.1;
    let reps = 5_000;
    let s = Sampler::SubspaceUniformPair {
        field: ScalarField::Complex,
        ambient_dim: 4,
        m: 2,
    };
    let r = run_coverage_experiment(&coverage(s, alpha, 40, reps, 3)).unwrap();
    assert!(r.trivial_frequency >= 1.0 - alpha - 3.0 * stderr(alpha, reps));
}

#[test]
fn trivial_frequency_respects_exponential_bounds() {
    let reps = 4_000;
    let cases = [
        (cap_09(), 0.05, 25),
        (cap_09(), 0.05, 40),
        (cap_09(), 0.2, 8),
        (perturbation(), 0.05, 40),
        (perturbation(), 0.1, 60),
        (perturbation(), 0.2, 30),
    ];
    for (k, (sampler, alpha, n)) in cases.into_iter().enumerate() {
        let r = run_coverage_experiment(&coverage(sampler, alpha, n, reps, 10 + k as u64)).unwrap();
        let bound = r.grid[0].trivial_bound.unwrap();
        if bound < 1.0 {
            let f = r.trivial_frequency;
            assert!(f <= bound + 3.0 * stderr(bound.max(1.0 / reps as f64), reps), "case {k}: {f} > {bound}");
        }
    }
}

#[test]
fn larger_alpha_shrinks_median_radius() {
    for sampler in [cap_09(), perturbation()] {
        let a = run_coverage_experiment(&coverage(sampler.clone(), 0.05, 400, 200, 4)).unwrap();
        let b = run_coverage_experiment(&coverage(sampler, 0.1, 400, 200, 4)).unwrap();
        assert!(b.median_radius.unwrap() < a.median_radius.unwrap());
    }
}

#[test]
fn rate_report_has_one_row_per_n() {
    let r = run_rate_experiment(&RateExperiment {
        sampler: cap_09(),
        alpha: 0.2,
        n_grid: vec![100, 1000, 10_000],
        replicates_per_n: 30,
        seed: 5,
        threads: 0,
    })
    .unwrap();
    assert_eq!(r.grid.len(), 3);
    assert_eq!(r.replicates, 90);
    let slope = r.rate_slope.unwrap();
    assert!((-0.7..-0.4).contains(&slope), "{slope}");
}
