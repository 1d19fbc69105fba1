#![allow(dead_code)]

use manifold_tv::{Circle, Euclidean, Lch, Manifold, Rotations, Spd, Sphere};
use nalgebra::{DVector, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A reproducible "interesting" base point for each manifold.
pub trait Base: Manifold {
    fn base(&self) -> Self::Point;
}

impl Base for Circle {
    fn base(&self) -> f64 {
        0.7
    }
}

impl Base for Sphere {
    fn base(&self) -> Vector3<f64> {
        Vector3::new(1.0, 2.0, 2.0) / 3.0
    }
}

impl Base for Rotations {
    fn base(&self) -> Matrix3<f64> {
        *nalgebra::Rotation3::from_scaled_axis(Vector3::new(0.3, -0.5, 0.2)).matrix()
    }
}

impl Base for Spd {
    fn base(&self) -> Matrix3<f64> {
        Matrix3::new(2.0, 0.3, 0.1, 0.3, 1.0, -0.2, 0.1, -0.2, 0.5)
    }
}

impl Base for Euclidean {
    fn base(&self) -> DVector<f64> {
        DVector::from_fn(self.element_len(), |i, _| i as f64 * 0.5 - 1.0)
    }
}

impl Base for Lch {
    fn base(&self) -> (DVector<f64>, f64) {
        Lch::point_from(50.0, 30.0, 1.0)
    }
}

/// A random point at tangent spread `sigma` around the base point.
pub fn random_point<M: Base, R: Rng>(m: &M, sigma: f64, rng: &mut R) -> M::Point {
    let b = m.base();
    let v = m.sample_tangent(&b, sigma, rng);
    m.exp(&b, &v)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}
