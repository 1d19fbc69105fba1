use nalgebra::DVector;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::manifold::{Manifold, ManifoldKind};

/// Flat space ℝᵏ.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Euclidean {
    pub dim: usize,
}

impl Euclidean {
    pub fn new(dim: usize) -> Self {
        Self { dim }
    }
}

impl Manifold for Euclidean {
    type Point = DVector<f64>;
    type Tangent = DVector<f64>;

    fn kind(&self) -> ManifoldKind {
        ManifoldKind::Euclidean(self.dim)
    }

    fn exp(&self, base: &DVector<f64>, v: &DVector<f64>) -> DVector<f64> {
        base + v
    }

    fn log(&self, base: &DVector<f64>, target: &DVector<f64>) -> Result<DVector<f64>> {
        Ok(target - base)
    }

    fn norm(&self, _base: &DVector<f64>, v: &DVector<f64>) -> f64 {
        v.norm()
    }

    fn dist(&self, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
        (b - a).norm()
    }

    fn zero_tangent(&self, _base: &DVector<f64>) -> DVector<f64> {
        DVector::zeros(self.dim)
    }

    fn scale(&self, v: &DVector<f64>, s: f64) -> DVector<f64> {
        v * s
    }

    fn add(&self, a: &DVector<f64>, b: &DVector<f64>) -> DVector<f64> {
        a + b
    }

    fn check_point(&self, p: &DVector<f64>) -> Result<(), String> {
        if p.len() != self.dim {
            return Err(format!("expected {} coordinates, got {}", self.dim, p.len()));
        }
        if p.iter().all(|x| x.is_finite()) {
            Ok(())
        } else {
            Err("non-finite coordinate".into())
        }
    }

    fn check_tangent(&self, base: &DVector<f64>, v: &DVector<f64>) -> Result<(), String> {
        self.check_point(base)?;
        self.check_point(v)
    }

    fn write_coords(&self, p: &DVector<f64>, out: &mut Vec<f64>) {
        out.extend(p.iter());
    }

    fn read_coords(&self, coords: &[f64]) -> DVector<f64> {
        DVector::from_column_slice(coords)
    }

    fn sample_tangent<R: Rng + ?Sized>(
        &self,
        _base: &DVector<f64>,
        sigma: f64,
        rng: &mut R,
    ) -> DVector<f64> {
        DVector::from_fn(self.dim, |_, _| sigma * rng.sample::<f64, _>(StandardNormal))
    }
}
