//! Riemannian means: the intrinsic (Karcher) mean by gradient descent and a
//! cheap five-point approximation built from nested geodesic averages.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::Manifold;

/// Stopping rule for [`karcher_mean`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanConfig {
    /// Bound on the norm of the mean tangent update.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for MeanConfig {
    fn default() -> Self {
        Self { tol: 1e-10, max_iter: 100 }
    }
}

impl MeanConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) || self.max_iter == 0 {
            return Err(Error::Argument(format!(
                "mean tolerance must be positive and max_iter at least 1 ({self:?})"
            )));
        }
        Ok(())
    }
}

/// `(1/N) Σ log_x(p_i)` and its norm at `x`.
pub fn mean_gradient<M: Manifold>(
    m: &M,
    x: &M::Point,
    points: &[M::Point],
) -> Result<(M::Tangent, f64)> {
    let w = 1.0 / points.len() as f64;
    let mut g = m.zero_tangent(x);
    for p in points {
        g = m.add(&g, &m.scale(&m.log(x, p)?, w));
    }
    let r = m.norm(x, &g);
    Ok((g, r))
}

/// Intrinsic mean `argmin_z Σ d(z, p_i)²` by the fixed-point iteration
/// `x ← exp_x((1/N) Σ log_x p_i)`, started at the first point.
pub fn karcher_mean<M: Manifold>(m: &M, points: &[M::Point], cfg: &MeanConfig) -> Result<M::Point> {
    let first = points
        .first()
        .ok_or_else(|| Error::Argument("mean of an empty point set".into()))?;
    if points.len() == 1 {
        return Ok(first.clone());
    }
    let mut x = first.clone();
    let mut residual = f64::INFINITY;
    for _ in 0..cfg.max_iter {
        let (g, r) = mean_gradient(m, &x, points)?;
        residual = r;
        if r <= cfg.tol {
            return Ok(x);
        }
        x = m.exp(&x, &g);
    }
    let (_, r) = mean_gradient(m, &x, points)?;
    if r <= cfg.tol {
        return Ok(x);
    }
    Err(Error::NonConverged { residual: r.min(residual), iterations: cfg.max_iter })
}

/// `[a, b]_{s·d(a,b)}`: the point a fraction `s` of the way from `a` to `b`.
fn geodesic_fraction<M: Manifold>(m: &M, a: &M::Point, b: &M::Point, s: f64) -> Result<M::Point> {
    if a == b {
        return Ok(a.clone());
    }
    let d = m.dist(a, b);
    m.geodesic_point(a, b, s * d)
}

/// Geodesic analogue of the Euclidean identity
/// `mean(z₁..z₅) = conv_0.2(conv_0.5(conv_0.5(z₁,z₂), conv_0.5(z₃,z₄)), z₅)`.
pub fn approx_mean5<M: Manifold>(m: &M, z: &[M::Point; 5]) -> Result<M::Point> {
    let left = geodesic_fraction(m, &z[0], &z[1], 0.5)?;
    let right = geodesic_fraction(m, &z[2], &z[3], 0.5)?;
    let four = geodesic_fraction(m, &left, &right, 0.5)?;
    geodesic_fraction(m, &four, &z[4], 0.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{Circle, Euclidean};
    use nalgebra::DVector;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn pts(values: &[f64]) -> Vec<DVector<f64>> {
        values.iter().map(|&v| DVector::from_element(1, v)).collect()
    }

    #[test]
    fn single_point_mean() {
        let p = pts(&[3.5]);
        assert_eq!(karcher_mean(&Euclidean::new(1), &p, &MeanConfig::default()).unwrap(), p[0]);
    }

    #[test]
    fn euclidean_mean_in_one_step() {
        let m = Euclidean::new(1);
        let mean = karcher_mean(&m, &pts(&[0.0, 2.0]), &MeanConfig::default()).unwrap();
        assert_eq!(mean[0], 1.0);
    }

    #[test]
    fn circle_midpoint() {
        let mean = karcher_mean(&Circle, &[0.0, FRAC_PI_2], &MeanConfig::default()).unwrap();
        assert!((mean - FRAC_PI_4).abs() < 1e-12);
    }

    #[test]
    fn approx_mean_examples() {
        let m = Euclidean::new(1);
        let z: [DVector<f64>; 5] = pts(&[0.0, 1.0, 2.0, 3.0, 4.0]).try_into().unwrap();
        assert!((approx_mean5(&m, &z).unwrap()[0] - 2.0).abs() < 1e-12);
        let z: [DVector<f64>; 5] = pts(&[4.0, 3.0, 2.0, 1.0, 0.0]).try_into().unwrap();
        assert!((approx_mean5(&m, &z).unwrap()[0] - 2.0).abs() < 1e-12);
        let same: [f64; 5] = [0.3; 5];
        assert_eq!(approx_mean5(&Circle, &same).unwrap(), 0.3);
    }

    #[test]
    fn reports_non_convergence() {
        let cfg = MeanConfig { tol: 1e-300, max_iter: 2 };
        let pts = [
            nalgebra::Vector3::new(1.0, 0.0, 0.0),
            nalgebra::Vector3::new(0.0, 1.0, 0.0),
            nalgebra::Vector3::new(0.0, 0.6, 0.8),
        ];
        let err = karcher_mean(&crate::manifolds::Sphere, &pts, &cfg).unwrap_err();
        assert!(matches!(err, Error::NonConverged { .. }));
    }

    #[test]
    fn empty_input_is_rejected() {
        let none: Vec<f64> = vec![];
        assert!(karcher_mean(&Circle, &none, &MeanConfig::default()).is_err());
    }
}
