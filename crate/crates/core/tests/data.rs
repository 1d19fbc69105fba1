mod common;

use common::{random_point, rng, Base};
use manifold_tv::io::{lch_to_rgb, read_csv, read_image, rgb_to_lch, write_csv, write_image, RawMvf};
use manifold_tv::metrics::delta_snr;
use manifold_tv::synth::{rician_corrupt, tangent_gaussian_noise, vmf_noise};
use manifold_tv::{
    Circle, Euclidean, Execution, Image, Lch, Manifold, Rotations, Shape, Spd, Sphere,
};
use nalgebra::Vector3;
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;

#[test]
fn rician_noise_on_zero_signal_is_rayleigh() {
    let sigma = 3.0;
    let img = Image::signal(vec![0.0; 1_000_000]);
    let noisy = rician_corrupt(&img, sigma, 21).unwrap();
    let mean = noisy.pixels().iter().sum::<f64>() / noisy.len() as f64;
    let want = sigma * (PI / 2.0).sqrt();
    assert!((mean - want).abs() / want < 0.01, "mean {mean}, want {want}");
    assert!(noisy.pixels().iter().all(|&v| v >= 0.0));
}

#[test]
fn concentrated_vmf_stays_close() {
    let img = Image::from_fn(Shape::grid(50, 40), |r, c| {
        let (t, p) = (0.05 * r as f64, 0.1 * c as f64);
        Vector3::new(t.sin() * p.cos(), t.sin() * p.sin(), t.cos())
    });
    let noisy = vmf_noise(&img, 1e6, 4, Execution::Parallel).unwrap();
    for (a, b) in img.pixels().iter().zip(noisy.pixels()) {
        assert!(Sphere.dist(a, b) < 0.01);
        assert!((b.norm() - 1.0).abs() < 1e-12);
    }
}

fn mean_noise_distance<M: Base>(m: &M, sigma: f64) -> f64 {
    let p = m.base();
    let img = Image::signal(vec![p; 4000]);
    let noisy = tangent_gaussian_noise(m, &img, sigma, 9, Execution::Parallel).unwrap();
    img.pixels().iter().zip(noisy.pixels()).map(|(a, b)| m.dist(a, b)).sum::<f64>() / img.len() as f64
}

#[test]
fn tangent_noise_distance_grows_with_sigma() {
    fn check<M: Base>(m: &M) {
        let d: Vec<f64> = [0.02, 0.05, 0.1, 0.2].iter().map(|&s| mean_noise_distance(m, s)).collect();
        assert!(d.windows(2).all(|w| w[0] < w[1]), "{:?}: {d:?}", m.kind());
    }
    check(&Circle);
    check(&Sphere);
    check(&Rotations);
    check(&Spd);
    check(&Euclidean::new(3));
    check(&Lch::new());
}

#[test]
fn noise_is_reproducible_and_seed_dependent() {
    let img = Image::signal(vec![Spd.base(); 64]);
    let a = tangent_gaussian_noise(&Spd, &img, 0.3, 1, Execution::Sequential).unwrap();
    let b = tangent_gaussian_noise(&Spd, &img, 0.3, 1, Execution::Parallel).unwrap();
    let c = tangent_gaussian_noise(&Spd, &img, 0.3, 2, Execution::Parallel).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    for p in a.pixels() {
        Spd.check_point(p).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dsnr_is_invariant_under_rotations(seed: u64) {
        let mut r = rng(seed);
        let g: Vec<Vector3<f64>> = (0..20).map(|_| random_point(&Sphere, 0.5, &mut r)).collect();
        let f: Vec<Vector3<f64>> = g.iter().map(|p| Sphere.exp(p, &Sphere.sample_tangent(p, 0.3, &mut r))).collect();
        let x: Vec<Vector3<f64>> = g.iter().map(|p| Sphere.exp(p, &Sphere.sample_tangent(p, 0.1, &mut r))).collect();
        let q = random_point(&Rotations, 1.0, &mut r);
        let rot = |v: &[Vector3<f64>]| Image::signal(v.iter().map(|p| q * p).collect());
        let plain = delta_snr(&Sphere, &Image::signal(g.clone()), &Image::signal(f.clone()), &Image::signal(x.clone()))
            .unwrap().value.value();
        let turned = delta_snr(&Sphere, &rot(&g), &rot(&f), &rot(&x)).unwrap().value.value();
        prop_assert!((plain - turned).abs() < 1e-8);
    }

    #[test]
    fn mvf_round_trip_is_bit_exact(seed: u64, rows in 1usize..5, cols in 1usize..5) {
        let mut r = rng(seed);
        let img = Image::from_fn(Shape::grid(rows, cols), |_, _| random_point(&Rotations, 1.0, &mut r));
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x.mvf");
        write_image(&Rotations, &img, &path).unwrap();
        prop_assert_eq!(read_image(&Rotations, &path).unwrap(), img);
    }

    #[test]
    fn csv_round_trip_is_lossless(seed: u64) {
        let mut r = rng(seed);
        let img = Image::from_fn(Shape::grid(3, 2), |_, _| random_point(&Lch::new(), 10.0, &mut r));
        let raw = RawMvf::from_image(&Lch::new(), &img);
        let mut buf = Vec::new();
        write_csv(&raw, &mut buf).unwrap();
        let back = read_csv(buf.as_slice(), raw.kind.clone(), Some(raw.shape)).unwrap();
        prop_assert_eq!(back.data, raw.data);
    }
}

#[test]
fn colour_round_trip() {
    let mut r = rng(77);
    for _ in 0..1000 {
        let rgb = Vector3::new(r.random::<f64>(), r.random::<f64>(), r.random::<f64>());
        let (l, c, h) = rgb_to_lch(&rgb);
        let (back, clamped) = lch_to_rgb(l, c, h);
        assert!(!clamped);
        assert!((back - rgb).amax() <= 1e-6, "{rgb:?} -> {back:?}");
    }
}

#[test]
fn white_and_black() {
    let (l, c, _) = rgb_to_lch(&Vector3::new(1.0, 1.0, 1.0));
    assert!((l - 100.0).abs() < 1e-9 && c < 1e-6);
    let (l, c, _) = rgb_to_lch(&Vector3::zeros());
    assert!(l.abs() < 1e-9 && c < 1e-9);
}

#[test]
fn corrupted_files_are_rejected() {
    let img = Image::signal(vec![Vector3::x(), Vector3::y()]);
    let bytes = RawMvf::from_image(&Sphere, &img).encode();
    assert!(RawMvf::decode(&bytes[..bytes.len() - 3]).is_err());
    let mut raw = RawMvf::decode(&bytes).unwrap();
    raw.data[0] = 2.0;
    assert!(raw.validate().is_err());
    assert!(raw.to_image(&Circle).is_err());
}
