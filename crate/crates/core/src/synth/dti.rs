//! Diffusion tensor synthesis: Stejskal–Tanner forward model, Rician
//! corruption of the weighted images and log-linear least-squares refit.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector, Matrix3, SVD, Vector3};
use rand_distr::{Distribution, Normal};

use super::rng::pixel_rng;
use crate::error::{Error, Result};
use crate::image::Image;
use crate::linalg::SymmetricEigen;
use crate::par::{map_indexed, Execution};

/// Weighted images below this fraction of `A0` are raised to it before the
/// logarithm.
pub const DWI_FLOOR_FRACTION: f64 = 1e-3;

/// Relative eigenvalue floor applied when projecting fitted tensors to SPD.
const EIGEN_FLOOR: f64 = 1e-6;
const ABSOLUTE_EIGEN_FLOOR: f64 = 1e-9;

/// `n` nearly uniform unit vectors on a Fibonacci spiral.
pub fn fibonacci_directions(n: usize) -> Vec<Vector3<f64>> {
    let golden = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = 1.0 - (2 * i + 1) as f64 / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector3::new(r * phi.cos(), r * phi.sin(), z).normalize()
        })
        .collect()
}

/// Gradient directions, b-value and unweighted signal of an acquisition.
#[derive(Debug, Clone)]
pub struct DwiProtocol {
    directions: Vec<Vector3<f64>>,
    pub b: f64,
    pub a0: f64,
    /// Pseudo-inverse of the 6-column design matrix.
    fit: DMatrix<f64>,
}

impl DwiProtocol {
    pub fn new(directions: Vec<Vector3<f64>>, b: f64, a0: f64) -> Result<Self> {
        if !(b > 0.0 && a0 > 0.0) {
            return Err(Error::Config(format!("b ({b}) and A0 ({a0}) must be positive")));
        }
        if directions.len() < 6 {
            return Err(Error::Config(format!(
                "tensor fitting needs at least 6 directions, got {}",
                directions.len()
            )));
        }
        if let Some(v) = directions.iter().find(|v| (v.norm() - 1.0).abs() > 1e-12) {
            return Err(Error::Config(format!("gradient direction {v:?} is not a unit vector")));
        }
        let design = DMatrix::from_fn(directions.len(), 6, |r, c| design_row(&directions[r])[c]);
        let svd = SVD::new(design, true, true);
        let smax = svd.singular_values.max();
        let smin = svd.singular_values.min();
        if !(smin > 1e-10 * smax) {
            return Err(Error::Config("gradient directions give a rank-deficient design".into()));
        }
        let fit = svd
            .pseudo_inverse(0.0)
            .map_err(|e| Error::Config(format!("pseudo-inverse failed: {e}")))?;
        Ok(Self { directions, b, a0, fit })
    }

    /// Fifteen Fibonacci directions with b = 800 and A0 = 1000.
    pub fn standard() -> Self {
        Self::with_directions(15, 800.0, 1000.0).expect("standard protocol is well posed")
    }

    pub fn with_directions(n: usize, b: f64, a0: f64) -> Result<Self> {
        Self::new(fibonacci_directions(n), b, a0)
    }

    pub fn directions(&self) -> &[Vector3<f64>] {
        &self.directions
    }

    /// `A0 · exp(−b vᵀSv)` for one direction.
    pub fn signal(&self, s: &Matrix3<f64>, v: &Vector3<f64>) -> f64 {
        self.a0 * (-self.b * v.dot(&(s * v))).exp()
    }
}

// vᵀSv = [x², y², z², 2xy, 2xz, 2yz] · [Sxx, Syy, Szz, Sxy, Sxz, Syz]
fn design_row(v: &Vector3<f64>) -> [f64; 6] {
    [v.x * v.x, v.y * v.y, v.z * v.z, 2.0 * v.x * v.y, 2.0 * v.x * v.z, 2.0 * v.y * v.z]
}

/// One diffusion weighted image per gradient direction.
pub fn stejskal_tanner_forward(tensors: &Image<Matrix3<f64>>, proto: &DwiProtocol) -> Vec<Image<f64>> {
    proto
        .directions
        .iter()
        .map(|v| tensors.map(|s| proto.signal(s, v)))
        .collect()
}

/// `√((X + D)² + Y²)` with `X, Y ~ N(0, σ²)`, one stream per pixel.
pub fn rician_corrupt(img: &Image<f64>, sigma: f64, seed: u64) -> Result<Image<f64>> {
    rician_with_offset(img, sigma, seed, 0)
}

/// Corrupts a stack of images; image `k` uses streams `k·2³² + pixel`.
pub fn rician_corrupt_all(imgs: &[Image<f64>], sigma: f64, seed: u64) -> Result<Vec<Image<f64>>> {
    imgs.iter()
        .enumerate()
        .map(|(k, img)| rician_with_offset(img, sigma, seed, (k as u64) << 32))
        .collect()
}

fn rician_with_offset(img: &Image<f64>, sigma: f64, seed: u64, offset: u64) -> Result<Image<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) {
        return Err(Error::Argument(format!("noise level must be nonnegative, got {sigma}")));
    }
    if sigma == 0.0 {
        return Ok(img.map(|v| v.abs()));
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::Argument(e.to_string()))?;
    let px = img.pixels();
    let out = map_indexed(px.len(), Execution::Parallel, |i| {
        let mut rng = pixel_rng(seed, offset + i as u64);
        let x = normal.sample(&mut rng);
        let y = normal.sample(&mut rng);
        (x + px[i]).hypot(y)
    });
    Image::new(img.shape(), out)
}

/// Per-pixel log-linear least-squares fit of the tensor from weighted
/// images, projected to SPD by flooring eigenvalues at 10⁻⁶ × the largest.
pub fn dti_ls_fit(dwis: &[Image<f64>], proto: &DwiProtocol) -> Result<Image<Matrix3<f64>>> {
    if dwis.len() != proto.directions.len() {
        return Err(Error::Config(format!(
            "{} weighted images for {} directions",
            dwis.len(),
            proto.directions.len()
        )));
    }
    let first = &dwis[0];
    if dwis.iter().any(|d| !d.same_shape(first)) {
        return Err(Error::Argument("weighted images differ in shape".into()));
    }
    let floor = DWI_FLOOR_FRACTION * proto.a0;
    let out = map_indexed(first.len(), Execution::Parallel, |i| {
        let y = DVector::from_fn(dwis.len(), |k, _| {
            let signal = dwis[k].pixels()[i].max(floor);
            -(signal / proto.a0).ln() / proto.b
        });
        let s = &proto.fit * y;
        let tensor = Matrix3::new(s[0], s[3], s[4], s[3], s[1], s[5], s[4], s[5], s[2]);
        project_spd(&tensor)
    });
    Image::new(first.shape(), out)
}

fn project_spd(s: &Matrix3<f64>) -> Matrix3<f64> {
    let e = SymmetricEigen::new(s);
    let largest = e.values.max();
    let floor = if largest > 0.0 { EIGEN_FLOOR * largest } else { ABSOLUTE_EIGEN_FLOOR };
    if e.min_value() >= floor {
        return *s;
    }
    e.map(|x| x.max(floor))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::Shape;
    use crate::manifold::Manifold;
    use crate::manifolds::Spd;

    #[test]
    fn standard_protocol() {
        let p = DwiProtocol::standard();
        assert_eq!(p.directions().len(), 15);
        assert_eq!((p.b, p.a0), (800.0, 1000.0));
    }

    #[test]
    fn rejects_degenerate_designs() {
        assert!(DwiProtocol::with_directions(5, 800.0, 1000.0).is_err());
        let same = vec![Vector3::x(); 8];
        assert!(matches!(DwiProtocol::new(same, 800.0, 1000.0), Err(Error::Config(_))));
        assert!(DwiProtocol::with_directions(6, 0.0, 1000.0).is_err());
    }

    #[test]
    fn isotropic_tensor_gives_equal_signals() {
        let p = DwiProtocol::standard();
        let img = Image::from_fn(Shape::grid(1, 1), |_, _| Matrix3::identity() * 1e-3);
        let dwis = stejskal_tanner_forward(&img, &p);
        let want = 1000.0 * (-0.8f64).exp();
        for d in &dwis {
            assert!((d.pixels()[0] - want).abs() < 1e-9);
        }
    }

    #[test]
    fn zero_sigma_is_identity() {
        let img = Image::signal(vec![0.0, 3.5, 1000.0]);
        assert_eq!(rician_corrupt(&img, 0.0, 9).unwrap(), img);
    }

    #[test]
    fn nonpositive_signal_is_floored() {
        let p = DwiProtocol::standard();
        let dwis: Vec<Image<f64>> = (0..15).map(|_| Image::signal(vec![-5.0])).collect();
        let fitted = dti_ls_fit(&dwis, &p).unwrap();
        // every direction sees A0·1e-3 so the fit is isotropic ln(1000)/b
        let want = (1000f64).ln() / 800.0;
        assert!((fitted.pixels()[0] - Matrix3::identity() * want).amax() < 1e-12);
    }

    #[test]
    fn projection_floors_negative_eigenvalues() {
        let s = Matrix3::from_diagonal(&Vector3::new(1e-3, -1e-4, 5e-4));
        let p = project_spd(&s);
        assert!(Spd.check_point(&p).is_ok());
        assert!((p[(1, 1)] - 1e-9).abs() < 1e-15);
        let all_negative = -Matrix3::identity();
        assert_eq!(project_spd(&all_negative), Matrix3::identity() * 1e-9);
    }
}
