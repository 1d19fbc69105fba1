use nalgebra::Vector3;

use super::rng::pixel_rng;
use super::vmf::vmf_sample;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::manifold::Manifold;
use crate::par::{map_indexed, Execution};

/// Replaces every pixel `x` by `exp_x(W)` with `W` an isotropic Gaussian
/// tangent vector of per-coordinate standard deviation `sigma`.
pub fn tangent_gaussian_noise<M: Manifold>(
    m: &M,
    img: &Image<M::Point>,
    sigma: f64,
    seed: u64,
    exec: Execution,
) -> Result<Image<M::Point>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Argument(format!("noise level must be nonnegative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.clone());
    }
    let px = img.pixels();
    let out = map_indexed(px.len(), exec, |i| {
        let mut rng = pixel_rng(seed, i as u64);
        let w = m.sample_tangent(&px[i], sigma, &mut rng);
        m.exp(&px[i], &w)
    });
    Image::new(img.shape(), out)
}

/// Replaces every direction `x` by a von Mises–Fisher sample centred at `x`.
pub fn vmf_noise(
    img: &Image<Vector3<f64>>,
    kappa: f64,
    seed: u64,
    exec: Execution,
) -> Result<Image<Vector3<f64>>> {
    if !(kappa > 0.0) || kappa.is_nan() {
        return Err(Error::Argument(format!("concentration must be positive, got {kappa}")));
    }
    let px = img.pixels();
    let out = map_indexed(px.len(), exec, |i| vmf_sample(&px[i], kappa, &mut pixel_rng(seed, i as u64)));
    Image::new(img.shape(), out)
}
