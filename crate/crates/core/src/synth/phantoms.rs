//! Deterministic piecewise-smooth test fields with sharp edges.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Rotation3, Vector3};

use crate::error::{Error, Result};
use crate::image::{Image, Shape};
use crate::manifolds::{hat, rodrigues};

/// Index of the first sample after the jump in [`synth_so3_series`] when the
/// series has more than 50 samples.
pub const SO3_JUMP_INDEX: usize = 50;

fn require_size(name: &str, n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::Argument(format!("{name} must be at least 2, got {n}")));
    }
    Ok(())
}

/// Diffusion tensors with eigenvalues of order 10⁻³ whose principal axes
/// rotate smoothly across the image. The left and right halves (split at
/// column `cols/2`) use different eigenvalues and rotation axes.
pub fn synth_pos3_image(rows: usize, cols: usize) -> Result<Image<Matrix3<f64>>> {
    require_size("rows", rows)?;
    require_size("cols", cols)?;
    let split = cols / 2;
    Ok(Image::from_fn(Shape::grid(rows, cols), |r, c| {
        let u = r as f64 / (rows - 1) as f64;
        let v = c as f64 / (cols - 1) as f64;
        let (axis, angle, diag) = if c < split {
            (Vector3::z_axis(), 0.5 * PI * (u + v) / 2.0, Vector3::new(1.7e-3, 0.4e-3, 0.3e-3))
        } else {
            (Vector3::x_axis(), 0.25 * PI * (1.0 + u - v), Vector3::new(0.5e-3, 1.2e-3, 0.9e-3))
        };
        let q = Rotation3::from_axis_angle(&axis, angle).into_inner();
        let d = q * Matrix3::from_diagonal(&diag) * q.transpose();
        (d + d.transpose()) * 0.5
    }))
}

/// Unit vectors in four latitude bands of rows; the azimuth drifts slowly
/// with the column.
pub fn synth_s2_image(rows: usize, cols: usize) -> Result<Image<Vector3<f64>>> {
    require_size("rows", rows)?;
    require_size("cols", cols)?;
    Ok(Image::from_fn(Shape::grid(rows, cols), |r, c| {
        let band = (4 * r / rows) as f64;
        let polar = PI / 8.0 + band * PI / 5.0;
        let azimuth = 0.5 * PI * c as f64 / (cols - 1) as f64;
        let s = polar.sin();
        Vector3::new(s * azimuth.cos(), s * azimuth.sin(), polar.cos()).normalize()
    }))
}

/// `n` rotations on two geodesic segments separated by a jump of rotation
/// angle 1 just before [`SO3_JUMP_INDEX`] (before `n/2` for n ≤ 50).
pub fn synth_so3_series(n: usize) -> Result<Image<Matrix3<f64>>> {
    require_size("n", n)?;
    let jump = if n > SO3_JUMP_INDEX { SO3_JUMP_INDEX } else { n / 2 };
    let rot = |w: Vector3<f64>| rodrigues(&hat(&w));
    let end_a = rot(Vector3::new(0.8, 0.0, 0.0));
    let start_b = rot(Vector3::new(0.0, 0.0, 1.0)) * end_a;
    let data = (0..n)
        .map(|i| {
            if i < jump {
                let t = segment_time(i, jump);
                rot(Vector3::new(0.8 * t, 0.0, 0.0))
            } else {
                let t = segment_time(i - jump, n - jump);
                rot(Vector3::new(0.0, 0.7 * t, 0.0)) * start_b
            }
        })
        .collect();
    Ok(Image::signal(data))
}

fn segment_time(i: usize, len: usize) -> f64 {
    if len <= 1 {
        0.0
    } else {
        i as f64 / (len - 1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::image::validate;
    use crate::manifold::Manifold;
    use crate::manifolds::{Rotations, Spd, Sphere};

    #[test]
    fn phantoms_are_valid() {
        validate(&Spd, &synth_pos3_image(8, 9).unwrap()).unwrap();
        validate(&Sphere, &synth_s2_image(7, 5).unwrap()).unwrap();
        validate(&Rotations, &synth_so3_series(130).unwrap()).unwrap();
        validate(&Rotations, &synth_so3_series(2).unwrap()).unwrap();
    }

    #[test]
    fn jump_is_the_largest_step() {
        for (n, at) in [(130, 50), (40, 20)] {
            let s = synth_so3_series(n).unwrap();
            let px = s.pixels();
            let steps: Vec<f64> = px.windows(2).map(|w| Rotations.dist(&w[0], &w[1])).collect();
            let argmax = steps
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .unwrap()
                .0;
            assert_eq!(argmax + 1, at);
            assert!((steps[argmax] - 2f64.sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn tiny_sizes_rejected() {
        assert!(synth_pos3_image(1, 4).is_err());
        assert!(synth_s2_image(4, 1).is_err());
        assert!(synth_so3_series(1).is_err());
    }

    #[test]
    fn deterministic() {
        assert_eq!(synth_pos3_image(4, 4).unwrap(), synth_pos3_image(4, 4).unwrap());
    }
}
