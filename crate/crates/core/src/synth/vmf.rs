use std::f64::consts::TAU;

use nalgebra::{Matrix3, Vector3};
use rand::Rng;

/// Draws a unit vector from the von Mises–Fisher distribution on S² with
/// mean direction `mu` and concentration `kappa > 0`, by Wood's rejection
/// sampler for the cosine of the angle to `mu`.
pub fn vmf_sample<R: Rng + ?Sized>(mu: &Vector3<f64>, kappa: f64, rng: &mut R) -> Vector3<f64> {
    let w = sample_cosine(kappa, rng);
    let phi = TAU * rng.random::<f64>();
    let s = (1.0 - w * w).max(0.0).sqrt();
    let local = Vector3::new(s * phi.cos(), s * phi.sin(), w);
    (pole_to(mu) * local).normalize()
}

// Wood (1994) with m = 3: the Beta((m-1)/2, (m-1)/2) proposal is uniform.
fn sample_cosine<R: Rng + ?Sized>(kappa: f64, rng: &mut R) -> f64 {
    // b = (-2κ + √(4κ² + 4)) / 2, written without cancellation
    let b = 2.0 / ((4.0 * kappa * kappa + 4.0).sqrt() + 2.0 * kappa);
    let x0 = (1.0 - b) / (1.0 + b);
    let c = kappa * x0 + 2.0 * (1.0 - x0 * x0).ln();
    loop {
        let z: f64 = rng.random();
        let u: f64 = rng.random();
        let w = (1.0 - (1.0 + b) * z) / (1.0 - (1.0 - b) * z);
        if kappa * w + 2.0 * (1.0 - x0 * w).ln() - c >= u.ln() {
            return w;
        }
    }
}

// Householder reflection taking e_z to `mu`.
fn pole_to(mu: &Vector3<f64>) -> Matrix3<f64> {
    let u = Vector3::z() - mu;
    let n2 = u.norm_squared();
    if n2 < 1e-30 {
        return Matrix3::identity();
    }
    Matrix3::identity() - u * u.transpose() * (2.0 / n2)
}
