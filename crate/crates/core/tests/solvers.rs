mod common;

use common::{random_point, rng};
use manifold_tv::synth::{synth_s2_image, tangent_gaussian_noise};
use manifold_tv::{
    denoise, functional_value, Algorithm, DataTerm, DenoiseParams, Euclidean, Execution, Huber,
    Image, Manifold, Regularizer, Shape, Sphere,
};
use nalgebra::DVector;
use proptest::prelude::*;

fn scalar_image(shape: Shape, values: &[f64]) -> Image<DVector<f64>> {
    Image::new(shape, values.iter().map(|&v| DVector::from_element(1, v)).collect()).unwrap()
}

fn algorithms() -> impl Strategy<Value = Algorithm> {
    prop_oneof![Just(Algorithm::Cyclic), Just(Algorithm::Parallel), Just(Algorithm::ParallelFast)]
}

fn regularizers() -> impl Strategy<Value = Regularizer> {
    prop_oneof![Just(Regularizer::Tv), Just(Regularizer::Tv2), Just(Regularizer::Huber(Huber::default()))]
}

fn noisy_s2(seed: u64) -> Image<nalgebra::Vector3<f64>> {
    let clean = synth_s2_image(6, 5).unwrap();
    tangent_gaussian_noise(&Sphere, &clean, 0.2, seed, Execution::Sequential).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn output_stays_in_the_data_range(values in prop::collection::vec(-5.0..5.0f64, 12),
                                      alg in algorithms(), reg in regularizers(), alpha in 0.0..2.0f64) {
        let f = scalar_image(Shape::grid(3, 4), &values);
        let params = DenoiseParams { alpha, regularizer: reg, algorithm: alg, iterations: 40, ..Default::default() };
        let out = denoise(&Euclidean::new(1), &f, &params).unwrap().output;
        let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        for p in out.pixels() {
            prop_assert!(p[0] >= lo - 1e-12 && p[0] <= hi + 1e-12);
        }
    }

    #[test]
    fn functional_decreases_overall(seed in 0u64..1000, alg in algorithms()) {
        let f = noisy_s2(seed);
        let params = DenoiseParams { alpha: 0.3, algorithm: alg, iterations: 200, ..Default::default() };
        let report = denoise(&Sphere, &f, &params).unwrap();
        let at = |it: usize| report.trace.iter().find(|t| t.iteration == it).unwrap().value;
        let f0 = functional_value(&Sphere, &f, &f, &params).unwrap();
        prop_assert!(at(10) <= f0);
        prop_assert!(at(100) <= at(10) + 1e-9);
        prop_assert!(at(200) <= at(100) + 1e-9);
    }

    #[test]
    fn constant_images_are_fixed_points(seed: u64, alg in algorithms(), reg in regularizers()) {
        let p = random_point(&Sphere, 1.0, &mut rng(seed));
        let f = Image::from_fn(Shape::grid(4, 3), |_, _| p);
        let params = DenoiseParams { alpha: 1.0, regularizer: reg, algorithm: alg, iterations: 20, ..Default::default() };
        let out = denoise(&Sphere, &f, &params).unwrap().output;
        for q in out.pixels() {
            prop_assert!(Sphere.dist(q, &p) < 1e-12);
        }
    }
}

#[test]
fn parallel_exact_mode_commutes_with_transposition() {
    let f = noisy_s2(3);
    let params = DenoiseParams { alpha: 0.4, algorithm: Algorithm::Parallel, iterations: 60, ..Default::default() };
    let a = denoise(&Sphere, &f, &params).unwrap().output.transpose();
    let b = denoise(&Sphere, &f.transpose(), &params).unwrap().output;
    let err = a.pixels().iter().zip(b.pixels()).map(|(p, q)| Sphere.dist(p, q)).fold(0.0, f64::max);
    assert!(err <= 1e-9, "transpose mismatch {err:e}");
}

#[test]
fn runs_are_deterministic_across_execution_modes() {
    let f = noisy_s2(5);
    for alg in [Algorithm::Cyclic, Algorithm::Parallel, Algorithm::ParallelFast] {
        let seq = DenoiseParams { algorithm: alg, iterations: 30, execution: Execution::Sequential, ..Default::default() };
        let par = DenoiseParams { execution: Execution::Parallel, ..seq.clone() };
        let a = denoise(&Sphere, &f, &seq).unwrap();
        let b = denoise(&Sphere, &f, &par).unwrap();
        let c = denoise(&Sphere, &f, &par).unwrap();
        assert_eq!(a.output, b.output, "{alg:?}");
        assert_eq!(b.output, c.output, "{alg:?}");
        assert_eq!(a.trace, c.trace);
    }
}

#[test]
fn parallel_and_cyclic_reach_the_same_minimizer() {
    let m = Euclidean::new(1);
    let f = Image::signal(vec![0.0, 0.0, 1.0, 1.0].into_iter().map(|v| DVector::from_element(1, v)).collect());
    let base = DenoiseParams { alpha: 0.25, iterations: 2000, ..Default::default() };
    let cyc = denoise(&m, &f, &DenoiseParams { algorithm: Algorithm::Cyclic, ..base.clone() }).unwrap();
    let par = denoise(&m, &f, &DenoiseParams { algorithm: Algorithm::Parallel, ..base }).unwrap();
    for (a, b) in cyc.output.pixels().iter().zip(par.output.pixels()) {
        assert!((a[0] - b[0]).abs() <= 1e-2, "{} vs {}", a[0], b[0]);
    }
}

#[test]
fn l1_data_keeps_a_large_jump() {
    // TV with ℓ¹ data preserves a step of height above the threshold
    let m = Euclidean::new(1);
    let f = Image::signal((0..10).map(|i| DVector::from_element(1, if i < 5 { 0.0 } else { 1.0 })).collect());
    let params = DenoiseParams { data_term: DataTerm::L1, alpha: 0.5, iterations: 500, ..Default::default() };
    let out = denoise(&m, &f, &params).unwrap().output;
    for (o, g) in out.pixels().iter().zip(f.pixels()) {
        assert!((o[0] - g[0]).abs() < 1e-2);
    }
}

#[test]
fn invalid_parameters_are_rejected() {
    let f = scalar_image(Shape::grid(2, 2), &[0.0, 1.0, 2.0, 3.0]);
    let m = Euclidean::new(1);
    assert!(denoise(&m, &f, &DenoiseParams { alpha: -1.0, ..Default::default() }).is_err());
    assert!(denoise(&m, &f, &DenoiseParams { iterations: 0, ..Default::default() }).is_err());
}
