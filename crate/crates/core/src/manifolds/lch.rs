use nalgebra::DVector;
use rand::Rng;

use super::{Circle, Euclidean};
use crate::error::Result;
use crate::manifold::{Manifold, ManifoldKind, Product};

/// The LCh colour cylinder ℝ² × S¹ with coordinates (L, C, h).
///
/// Luminance and chroma are nonnegative; exp clamps them at zero.
#[derive(Debug, Clone, PartialEq)]
pub struct Lch {
    inner: Product<Euclidean, Circle>,
}

impl Default for Lch {
    fn default() -> Self {
        Self::new()
    }
}

impl Lch {
    pub fn new() -> Self {
        Self { inner: Product::new(Euclidean::new(2), Circle) }
    }

    pub fn point_from(l: f64, c: f64, h: f64) -> (DVector<f64>, f64) {
        (DVector::from_column_slice(&[l, c]), h)
    }
}

type Point = (DVector<f64>, f64);

impl Manifold for Lch {
    type Point = Point;
    type Tangent = Point;

    fn kind(&self) -> ManifoldKind {
        ManifoldKind::lch()
    }

    fn exp(&self, base: &Point, v: &Point) -> Point {
        let (mut lc, h) = self.inner.exp(base, v);
        lc.iter_mut().for_each(|x| *x = x.max(0.0));
        (lc, h)
    }

    fn log(&self, base: &Point, target: &Point) -> Result<Point> {
        self.inner.log(base, target)
    }

    fn norm(&self, base: &Point, v: &Point) -> f64 {
        self.inner.norm(base, v)
    }

    fn dist(&self, a: &Point, b: &Point) -> f64 {
        self.inner.dist(a, b)
    }

    fn zero_tangent(&self, base: &Point) -> Point {
        self.inner.zero_tangent(base)
    }

    fn scale(&self, v: &Point, s: f64) -> Point {
        self.inner.scale(v, s)
    }

    fn add(&self, a: &Point, b: &Point) -> Point {
        self.inner.add(a, b)
    }

    fn check_point(&self, p: &Point) -> Result<(), String> {
        self.inner.check_point(p)?;
        if p.0.iter().all(|&x| x >= 0.0) {
            Ok(())
        } else {
            Err(format!("negative luminance or chroma ({}, {})", p.0[0], p.0[1]))
        }
    }

    fn check_tangent(&self, base: &Point, v: &Point) -> Result<(), String> {
        self.inner.check_tangent(base, v)
    }

    fn write_coords(&self, p: &Point, out: &mut Vec<f64>) {
        self.inner.write_coords(p, out)
    }

    fn read_coords(&self, coords: &[f64]) -> Point {
        self.inner.read_coords(coords)
    }

    fn sample_tangent<R: Rng + ?Sized>(&self, base: &Point, sigma: f64, rng: &mut R) -> Point {
        let (mut lc, h) = self.inner.sample_tangent(base, sigma, rng);
        for (v, x) in lc.iter_mut().zip(base.0.iter()) {
            *v = v.max(-x);
        }
        (lc, h)
    }
}
