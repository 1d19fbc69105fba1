use std::f64::consts::{FRAC_PI_2, PI, TAU};

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::manifold::{Manifold, ManifoldKind};

/// Angle gaps within this distance of π are treated as antipodal.
pub const CIRCLE_CUT_TOL: f64 = 1.5e-6;

/// Maps an angle to (−π, π]. Angles already in range are returned unchanged.
pub fn wrap_angle(x: f64) -> f64 {
    if x > -PI && x <= PI {
        return x;
    }
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        PI
    } else {
        y
    }
}

/// The unit circle S¹, points stored as angles in (−π, π].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Circle;

impl Manifold for Circle {
    type Point = f64;
    type Tangent = f64;

    fn kind(&self) -> ManifoldKind {
        ManifoldKind::Circle
    }

    fn exp(&self, base: &f64, v: &f64) -> f64 {
        if *v == 0.0 {
            return *base;
        }
        wrap_angle(base + v)
    }

    fn log(&self, base: &f64, target: &f64) -> Result<f64> {
        let gap = wrap_angle(target - base);
        if gap.abs() > PI - CIRCLE_CUT_TOL {
            return Err(Error::cut_locus(base, target));
        }
        Ok(gap)
    }

    fn norm(&self, _base: &f64, v: &f64) -> f64 {
        v.abs()
    }

    fn dist(&self, a: &f64, b: &f64) -> f64 {
        wrap_angle(b - a).abs()
    }

    fn zero_tangent(&self, _base: &f64) -> f64 {
        0.0
    }

    fn scale(&self, v: &f64, s: f64) -> f64 {
        v * s
    }

    fn add(&self, a: &f64, b: &f64) -> f64 {
        a + b
    }

    fn check_point(&self, p: &f64) -> Result<(), String> {
        if p.is_finite() && *p > -PI && *p <= PI {
            Ok(())
        } else {
            Err(format!("angle {p} outside (-pi, pi]"))
        }
    }

    fn check_tangent(&self, _base: &f64, v: &f64) -> Result<(), String> {
        if v.is_finite() {
            Ok(())
        } else {
            Err(format!("non-finite tangent {v}"))
        }
    }

    fn write_coords(&self, p: &f64, out: &mut Vec<f64>) {
        out.push(*p);
    }

    fn read_coords(&self, coords: &[f64]) -> f64 {
        coords[0]
    }

    fn sample_tangent<R: Rng + ?Sized>(&self, _base: &f64, sigma: f64, rng: &mut R) -> f64 {
        let z: f64 = rng.sample(StandardNormal);
        (sigma * z).clamp(-FRAC_PI_2, FRAC_PI_2)
    }
}
