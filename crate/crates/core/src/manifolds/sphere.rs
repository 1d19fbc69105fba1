use std::f64::consts::FRAC_PI_2;

use nalgebra::Vector3;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::manifold::{Manifold, ManifoldKind};

/// Inner products at or below `-1 + SPHERE_CUT_TOL` count as antipodal.
pub const SPHERE_CUT_TOL: f64 = 1e-12;

const UNIT_TOL: f64 = 1e-12;
const TANGENT_TOL: f64 = 1e-10;

/// The unit sphere S² ⊂ ℝ³.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Sphere;

impl Sphere {
    /// Orthonormal basis of the tangent plane at `a`.
    pub fn tangent_basis(a: &Vector3<f64>) -> (Vector3<f64>, Vector3<f64>) {
        let helper = if a.x.abs() <= a.y.abs() && a.x.abs() <= a.z.abs() {
            Vector3::x()
        } else if a.y.abs() <= a.z.abs() {
            Vector3::y()
        } else {
            Vector3::z()
        };
        let e1 = (helper - a * a.dot(&helper)).normalize();
        let e2 = a.cross(&e1);
        (e1, e2)
    }
}

impl Manifold for Sphere {
    type Point = Vector3<f64>;
    type Tangent = Vector3<f64>;

    fn kind(&self) -> ManifoldKind {
        ManifoldKind::Sphere
    }

    fn exp(&self, base: &Vector3<f64>, v: &Vector3<f64>) -> Vector3<f64> {
        let n = v.norm();
        if n == 0.0 {
            return *base;
        }
        (base * n.cos() + v * (n.sin() / n)).normalize()
    }

    fn log(&self, base: &Vector3<f64>, target: &Vector3<f64>) -> Result<Vector3<f64>> {
        let c = base.dot(target);
        if c <= -1.0 + SPHERE_CUT_TOL {
            return Err(Error::cut_locus(base, target));
        }
        let w = target - base * c;
        let s = w.norm();
        if s == 0.0 {
            return Ok(Vector3::zeros());
        }
        let theta = base.cross(target).norm().atan2(c);
        Ok(w * (theta / s))
    }

    fn norm(&self, _base: &Vector3<f64>, v: &Vector3<f64>) -> f64 {
        v.norm()
    }

    fn dist(&self, a: &Vector3<f64>, b: &Vector3<f64>) -> f64 {
        a.cross(b).norm().atan2(a.dot(b))
    }

    fn zero_tangent(&self, _base: &Vector3<f64>) -> Vector3<f64> {
        Vector3::zeros()
    }

    fn scale(&self, v: &Vector3<f64>, s: f64) -> Vector3<f64> {
        v * s
    }

    fn add(&self, a: &Vector3<f64>, b: &Vector3<f64>) -> Vector3<f64> {
        a + b
    }

    fn check_point(&self, p: &Vector3<f64>) -> Result<(), String> {
        let n = p.norm();
        if (n - 1.0).abs() <= UNIT_TOL {
            Ok(())
        } else {
            Err(format!("norm {n} is not 1"))
        }
    }

    fn check_tangent(&self, base: &Vector3<f64>, v: &Vector3<f64>) -> Result<(), String> {
        let ip = base.dot(v);
        if ip.abs() <= TANGENT_TOL * v.norm().max(1.0) {
            Ok(())
        } else {
            Err(format!("tangent not orthogonal to base (inner product {ip})"))
        }
    }

    fn write_coords(&self, p: &Vector3<f64>, out: &mut Vec<f64>) {
        out.extend(p.iter());
    }

    fn read_coords(&self, coords: &[f64]) -> Vector3<f64> {
        Vector3::new(coords[0], coords[1], coords[2])
    }

    fn sample_tangent<R: Rng + ?Sized>(
        &self,
        base: &Vector3<f64>,
        sigma: f64,
        rng: &mut R,
    ) -> Vector3<f64> {
        let (e1, e2) = Self::tangent_basis(base);
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        let v = (e1 * a + e2 * b) * sigma;
        let n = v.norm();
        if n > FRAC_PI_2 {
            v * (FRAC_PI_2 / n)
        } else {
            v
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quarter_great_circle() {
        let m = Sphere;
        let z = Vector3::z();
        let x = Vector3::x();
        let v = m.log(&z, &x).unwrap();
        assert!((v - Vector3::new(FRAC_PI_2, 0.0, 0.0)).norm() < 1e-15);
        assert!((m.exp(&z, &Vector3::new(FRAC_PI_2, 0.0, 0.0)) - x).norm() < 1e-15);
        assert_eq!(m.log(&z, &z).unwrap(), Vector3::zeros());
        assert!((m.dist(&z, &x) - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn great_circle_parametrization() {
        // exp along e_x from the pole traces (sin t, 0, cos t)
        let m = Sphere;
        for t in [0.1, 0.7, 1.3, 2.9] {
            let p = m.exp(&Vector3::z(), &Vector3::new(t, 0.0, 0.0));
            assert!((p - Vector3::new(t.sin(), 0.0, t.cos())).norm() < 1e-15);
        }
    }

    #[test]
    fn antipodes_are_cut_locus() {
        let m = Sphere;
        let err = m.log(&Vector3::z(), &-Vector3::z()).unwrap_err();
        assert!(matches!(err, Error::CutLocus { .. }));
        assert!((m.dist(&Vector3::z(), &-Vector3::z()) - PI).abs() < 1e-15);
    }

    #[test]
    fn tangent_basis_is_orthonormal() {
        for a in [Vector3::x(), Vector3::y(), Vector3::z(), Vector3::new(1.0, 2.0, -3.0).normalize()] {
            let (e1, e2) = Sphere::tangent_basis(&a);
            assert!(e1.dot(&a).abs() < 1e-15 && e2.dot(&a).abs() < 1e-15);
            assert!(e1.dot(&e2).abs() < 1e-15);
            assert!((e1.norm() - 1.0).abs() < 1e-15 && (e2.norm() - 1.0).abs() < 1e-15);
        }
    }
}
