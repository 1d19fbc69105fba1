use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use nalgebra::{Matrix3, Vector3};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::linalg::{from_row_major, push_row_major};
use crate::manifold::{Manifold, ManifoldKind};

/// Rotation angles within this distance of π are treated as cut locus.
pub const SO3_CUT_TOL: f64 = 1e-6;

const ORTHO_TOL: f64 = 1e-10;

/// Below this angle the Rodrigues coefficients switch to Taylor series.
const SMALL_ANGLE: f64 = 1e-4;

/// Skew-symmetric matrix with `[w]× x = w × x`.
pub fn hat(w: &Vector3<f64>) -> Matrix3<f64> {
    Matrix3::new(0.0, -w.z, w.y, w.z, 0.0, -w.x, -w.y, w.x, 0.0)
}

/// Inverse of [`hat`], reading the skew part of `m`.
pub fn vee(m: &Matrix3<f64>) -> Vector3<f64> {
    Vector3::new(
        0.5 * (m[(2, 1)] - m[(1, 2)]),
        0.5 * (m[(0, 2)] - m[(2, 0)]),
        0.5 * (m[(1, 0)] - m[(0, 1)]),
    )
}

/// Matrix exponential of a skew-symmetric matrix by the Rodrigues formula,
/// with rotation angle θ = ‖W‖_F / √2.
pub fn rodrigues(w: &Matrix3<f64>) -> Matrix3<f64> {
    let theta = w.norm() / SQRT_2;
    let theta2 = theta * theta;
    let (a, b) = if theta < SMALL_ANGLE {
        (
            1.0 - theta2 / 6.0 + theta2 * theta2 / 120.0,
            0.5 - theta2 / 24.0 + theta2 * theta2 / 720.0,
        )
    } else {
        (theta.sin() / theta, (1.0 - theta.cos()) / theta2)
    };
    Matrix3::identity() + w * a + w * w * b
}

/// Rotation angle of `r` in [0, π], robust for small angles.
pub fn rotation_angle(r: &Matrix3<f64>) -> f64 {
    let c = 0.5 * (r.trace() - 1.0);
    let s = (r - r.transpose()).norm() / (2.0 * SQRT_2);
    s.atan2(c)
}

/// Principal logarithm of a rotation matrix, returning it with its angle.
pub fn rotation_log(r: &Matrix3<f64>) -> (Matrix3<f64>, f64) {
    let theta = rotation_angle(r);
    let factor = if theta < SMALL_ANGLE {
        let t2 = theta * theta;
        0.5 * (1.0 + t2 / 6.0 + 7.0 * t2 * t2 / 360.0)
    } else {
        theta / (2.0 * theta.sin())
    };
    ((r - r.transpose()) * factor, theta)
}

// One Björck step towards the nearest orthogonal matrix.
fn reorthonormalize(r: &Matrix3<f64>) -> Matrix3<f64> {
    r * (Matrix3::identity() * 3.0 - r.transpose() * r) * 0.5
}

/// The rotation group SO(3) with the bi-invariant metric. Tangent vectors
/// at P are skew matrices W acting by `exp_P(W) = exp(W)·P`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Rotations;

impl Manifold for Rotations {
    type Point = Matrix3<f64>;
    type Tangent = Matrix3<f64>;

    fn kind(&self) -> ManifoldKind {
        ManifoldKind::Rotations
    }

    fn exp(&self, base: &Matrix3<f64>, v: &Matrix3<f64>) -> Matrix3<f64> {
        if v.iter().all(|&x| x == 0.0) {
            return *base;
        }
        reorthonormalize(&(rodrigues(v) * base))
    }

    fn log(&self, base: &Matrix3<f64>, target: &Matrix3<f64>) -> Result<Matrix3<f64>> {
        let r = target * base.transpose();
        let (w, theta) = rotation_log(&r);
        if PI - theta < SO3_CUT_TOL {
            return Err(Error::cut_locus(base, target));
        }
        Ok(w)
    }

    fn norm(&self, _base: &Matrix3<f64>, v: &Matrix3<f64>) -> f64 {
        v.norm()
    }

    fn dist(&self, a: &Matrix3<f64>, b: &Matrix3<f64>) -> f64 {
        SQRT_2 * rotation_angle(&(b * a.transpose()))
    }

    fn zero_tangent(&self, _base: &Matrix3<f64>) -> Matrix3<f64> {
        Matrix3::zeros()
    }

    fn scale(&self, v: &Matrix3<f64>, s: f64) -> Matrix3<f64> {
        v * s
    }

    fn add(&self, a: &Matrix3<f64>, b: &Matrix3<f64>) -> Matrix3<f64> {
        a + b
    }

    fn check_point(&self, p: &Matrix3<f64>) -> Result<(), String> {
        let err = (p.transpose() * p - Matrix3::identity()).amax();
        if !(err <= ORTHO_TOL) {
            return Err(format!("not orthogonal (|QᵀQ - I| = {err:e})"));
        }
        let det = p.determinant();
        if (det - 1.0).abs() > ORTHO_TOL {
            return Err(format!("determinant {det} is not 1"));
        }
        Ok(())
    }

    fn check_tangent(&self, _base: &Matrix3<f64>, v: &Matrix3<f64>) -> Result<(), String> {
        let err = (v + v.transpose()).amax();
        if err <= ORTHO_TOL {
            Ok(())
        } else {
            Err(format!("tangent not skew-symmetric ({err:e})"))
        }
    }

    fn write_coords(&self, p: &Matrix3<f64>, out: &mut Vec<f64>) {
        push_row_major(p, out);
    }

    fn read_coords(&self, coords: &[f64]) -> Matrix3<f64> {
        from_row_major(coords)
    }

    fn sample_tangent<R: Rng + ?Sized>(
        &self,
        _base: &Matrix3<f64>,
        sigma: f64,
        rng: &mut R,
    ) -> Matrix3<f64> {
        // hat(e_k)/√2 is orthonormal in the Frobenius inner product
        let w = Vector3::from_fn(|_, _| sigma * rng.sample::<f64, _>(StandardNormal));
        let v = hat(&w) / SQRT_2;
        let n = v.norm();
        if n > FRAC_PI_2 {
            v * (FRAC_PI_2 / n)
        } else {
            v
        }
    }
}
