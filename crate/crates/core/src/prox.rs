//! Proximal maps of the data term and of the neighbour coupling terms.
//!
//! All of them move points along geodesics; the only term-specific part is
//! the arc length travelled, computed in closed form from the step size λ
//! and the distance between the points involved.

use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::{require_same_shape, Image};
use crate::manifold::Manifold;
use crate::par::{try_map_indexed, Execution};

/// Quadratic near zero, linear beyond `ω / (√2 τ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Huber {
    pub tau: f64,
    pub omega: f64,
}

impl Default for Huber {
    fn default() -> Self {
        Self { tau: SQRT_2, omega: 1.0 }
    }
}

impl Huber {
    pub fn new(tau: f64, omega: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite() && omega > 0.0 && omega.is_finite()) {
            return Err(Error::Argument(format!(
                "Huber parameters must be positive (tau = {tau}, omega = {omega})"
            )));
        }
        Ok(Self { tau, omega })
    }

    /// `h(s) = τ²s²` for `s < ω/(√2τ)`, `√2ωτs − ω²/2` otherwise.
    pub fn value(&self, s: f64) -> f64 {
        let Huber { tau, omega } = *self;
        if s < omega / (SQRT_2 * tau) {
            tau * tau * s * s
        } else {
            omega * SQRT_2 * tau * s - 0.5 * omega * omega
        }
    }

    fn linear_step(&self, lambda: f64) -> f64 {
        SQRT_2 * lambda * self.omega * self.tau
    }
}

/// Data fidelity term `Σ g(d(x_ij, f_ij))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DataTerm {
    /// g(s) = s
    L1,
    /// g(s) = s²/2
    L2,
    Huber(Huber),
}

/// Coupling term `Σ g(d(x_ij, x_neighbour))`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Regularizer {
    /// g(s) = s
    Tv,
    /// g(s) = s²/2
    Tv2,
    Huber(Huber),
}

impl DataTerm {
    pub fn penalty(&self, d: f64) -> f64 {
        match self {
            DataTerm::L1 => d,
            DataTerm::L2 => 0.5 * d * d,
            DataTerm::Huber(h) => h.value(d),
        }
    }

    /// Arc length `t ∈ [0, d]` travelled from `x` towards `f` by the prox of
    /// `λ g(d(·, f))` at `x`, where `d = d(x, f)`.
    pub fn step_length(&self, lambda: f64, d: f64) -> f64 {
        let t = match self {
            DataTerm::L1 => lambda.min(d),
            DataTerm::L2 => lambda / (1.0 + lambda) * d,
            DataTerm::Huber(h) => {
                let k = 2.0 * lambda * h.tau * h.tau;
                if d < h.omega * (1.0 + k) / (SQRT_2 * h.tau) {
                    k / (1.0 + k) * d
                } else {
                    d.min(h.linear_step(lambda))
                }
            }
        };
        t.clamp(0.0, d)
    }
}

impl Regularizer {
    pub fn penalty(&self, d: f64) -> f64 {
        match self {
            Regularizer::Tv => d,
            Regularizer::Tv2 => 0.5 * d * d,
            Regularizer::Huber(h) => h.value(d),
        }
    }

    /// Arc length `t ∈ [0, d/2]` each endpoint of a neighbour pair moves
    /// towards the other under the prox of `λ g(d(·, ·))`.
    pub fn step_length(&self, lambda: f64, d: f64) -> f64 {
        let half = 0.5 * d;
        let t = match self {
            Regularizer::Tv => lambda.min(half),
            Regularizer::Tv2 => lambda / (1.0 + 2.0 * lambda) * d,
            Regularizer::Huber(h) => {
                let k = 2.0 * lambda * h.tau * h.tau;
                if d < h.omega * (1.0 + 2.0 * k) / (SQRT_2 * h.tau) {
                    k / (1.0 + 2.0 * k) * d
                } else {
                    half.min(h.linear_step(lambda))
                }
            }
        };
        t.clamp(0.0, half)
    }
}

/// Pixelwise prox of `λ F`: each `x_ij` moves towards `f_ij`.
pub fn prox_data<M: Manifold>(
    m: &M,
    x: &Image<M::Point>,
    f: &Image<M::Point>,
    lambda: f64,
    term: DataTerm,
    exec: Execution,
) -> Result<Image<M::Point>> {
    require_same_shape(x, f)?;
    let (xs, fs) = (x.pixels(), f.pixels());
    let out = try_map_indexed(xs.len(), exec, |i| {
        data_step(m, &xs[i], &fs[i], lambda, term).map_err(|e| {
            let (r, c) = x.position(i);
            e.at("data prox", r, c)
        })
    })?;
    Image::new(x.shape(), out)
}

pub(crate) fn data_step<M: Manifold>(
    m: &M,
    x: &M::Point,
    f: &M::Point,
    lambda: f64,
    term: DataTerm,
) -> Result<M::Point> {
    let d = m.dist(x, f);
    m.geodesic_point(x, f, term.step_length(lambda, d))
}

/// Prox of a single coupling term: both points move `t` towards each other.
pub fn prox_pair<M: Manifold>(
    m: &M,
    a: &M::Point,
    b: &M::Point,
    t: f64,
) -> Result<(M::Point, M::Point)> {
    if t == 0.0 {
        return Ok((a.clone(), b.clone()));
    }
    let d = m.dist(a, b);
    if t > 0.5 * d * (1.0 + 1e-12) {
        return Err(Error::Argument(format!("pair step {t} exceeds half the distance {d}")));
    }
    Ok((m.geodesic_point(a, b, t)?, m.geodesic_point(b, a, t)?))
}

/// Direction of neighbour pairs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    /// Pairs `(i, j), (i, j + 1)`.
    Horizontal,
    /// Pairs `(i, j), (i + 1, j)`.
    Vertical,
}

/// Which pairs of an axis a coupling family contains: those whose first
/// (0-based) index along the axis is even or odd.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    fn matches(self, k: usize) -> bool {
        k.is_multiple_of(2) == (self == Parity::Even)
    }
}

/// Moves `x` along the geodesic towards its neighbour `y`, by the coupling
/// step for `d(x, y)`. The distance is always measured from the pixel with
/// the lower index so both members of a pair use the same step.
pub(crate) fn coupling_step<M: Manifold>(
    m: &M,
    x: &M::Point,
    y: &M::Point,
    x_first: bool,
    lambda: f64,
    reg: Regularizer,
) -> Result<M::Point> {
    let d = if x_first { m.dist(x, y) } else { m.dist(y, x) };
    m.geodesic_point(x, y, reg.step_length(lambda, d))
}

/// Prox of one even/odd family of coupling terms along an axis. The pairs of
/// a family are disjoint; pixels outside every pair are returned unchanged.
pub fn prox_coupling<M: Manifold>(
    m: &M,
    x: &Image<M::Point>,
    lambda: f64,
    reg: Regularizer,
    axis: Axis,
    parity: Parity,
    exec: Execution,
) -> Result<Image<M::Point>> {
    let (rows, cols) = (x.rows(), x.cols());
    let out = try_map_indexed(x.len(), exec, |i| {
        let (r, c) = x.position(i);
        let (k, extent) = match axis {
            Axis::Horizontal => (c, cols),
            Axis::Vertical => (r, rows),
        };
        let neighbour = |k2: usize| match axis {
            Axis::Horizontal => x.get(r, k2),
            Axis::Vertical => x.get(k2, c),
        };
        let here = &x.pixels()[i];
        let moved = if parity.matches(k) && k + 1 < extent {
            coupling_step(m, here, neighbour(k + 1), true, lambda, reg)
        } else if k >= 1 && parity.matches(k - 1) {
            coupling_step(m, here, neighbour(k - 1), false, lambda, reg)
        } else {
            return Ok(here.clone());
        };
        moved.map_err(|e| e.at("coupling prox", r, c))
    })?;
    Image::new(x.shape(), out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifolds::{Circle, Euclidean};
    use nalgebra::DVector;
    use std::f64::consts::FRAC_PI_2;

    fn huber() -> Huber {
        Huber::default()
    }

    #[test]
    fn data_steps() {
        for term in [DataTerm::L1, DataTerm::L2, DataTerm::Huber(huber())] {
            assert_eq!(term.step_length(0.0, 5.0), 0.0);
        }
        assert_eq!(DataTerm::L1.step_length(0.5, 2.0), 0.5);
        assert_eq!(DataTerm::L1.step_length(0.5, 0.2), 0.2);
        assert!((DataTerm::Huber(huber()).step_length(0.25, 0.5) - 0.25).abs() < 1e-15);
        assert!((DataTerm::Huber(huber()).step_length(0.25, 2.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn coupling_steps() {
        assert_eq!(Regularizer::Tv.step_length(2.0, 1.0), 0.5);
        assert_eq!(Regularizer::Tv2.step_length(1.0, 3.0), 1.0);
        let h = Regularizer::Huber(huber());
        assert!((h.step_length(0.25, 1.0) - 1.0 / 3.0).abs() < 1e-15);
        assert!((h.step_length(0.25, 3.0) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn huber_threshold_uses_linear_branch() {
        // at d = ω(1+2λτ²)/(√2τ) both branches give the same length
        let h = huber();
        let lambda = 0.3;
        let k = 2.0 * lambda * h.tau * h.tau;
        let d = h.omega * (1.0 + k) / (SQRT_2 * h.tau);
        let t = DataTerm::Huber(h).step_length(lambda, d);
        assert!((t - d.min(SQRT_2 * lambda * h.omega * h.tau)).abs() < 1e-15);
        assert!((t - k / (1.0 + k) * d).abs() < 1e-12);
    }

    #[test]
    fn huber_is_continuous() {
        let h = Huber::new(0.7, 1.3).unwrap();
        let s0 = h.omega / (SQRT_2 * h.tau);
        assert!((h.value(s0 - 1e-12) - h.value(s0)).abs() < 1e-10);
        assert!(Huber::new(0.0, 1.0).is_err());
        assert!(Huber::new(1.0, -1.0).is_err());
    }

    fn line(values: &[f64]) -> Image<DVector<f64>> {
        Image::new(
            crate::image::Shape::grid(1, values.len()),
            values.iter().map(|&v| DVector::from_element(1, v)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn data_prox_examples() {
        let m = Euclidean::new(1);
        let x = line(&[0.0]);
        let f = line(&[4.0]);
        let out = prox_data(&m, &x, &f, 1.0, DataTerm::L2, Execution::Sequential).unwrap();
        assert_eq!(out.pixels()[0][0], 2.0);
        let same = prox_data(&m, &f, &f, 1.0, DataTerm::L1, Execution::Sequential).unwrap();
        assert_eq!(same, f);

        let s1x = Image::signal(vec![0.0]);
        let s1f = Image::signal(vec![FRAC_PI_2]);
        let out = prox_data(&Circle, &s1x, &s1f, 10.0, DataTerm::L1, Execution::Sequential).unwrap();
        assert_eq!(out.pixels()[0], FRAC_PI_2);
    }

    #[test]
    fn pair_prox_examples() {
        let m = Euclidean::new(1);
        let a = DVector::from_element(1, 0.0);
        let b = DVector::from_element(1, 4.0);
        assert_eq!(prox_pair(&m, &a, &b, 0.0).unwrap(), (a.clone(), b.clone()));
        let (a2, b2) = prox_pair(&m, &a, &b, 1.0).unwrap();
        assert_eq!((a2[0], b2[0]), (1.0, 3.0));
        assert_eq!(prox_pair(&m, &a, &a, 0.0).unwrap(), (a.clone(), a.clone()));
        assert!(matches!(prox_pair(&m, &a, &b, 2.5), Err(Error::Argument(_))));
    }

    #[test]
    fn coupling_prox_examples() {
        let m = Euclidean::new(1);
        let run = |img: &Image<DVector<f64>>, parity| {
            prox_coupling(&m, img, 1.0, Regularizer::Tv, Axis::Horizontal, parity, Execution::Sequential)
                .unwrap()
        };
        let out = run(&line(&[0.0, 4.0]), Parity::Even);
        assert_eq!(out, line(&[1.0, 3.0]));
        // odd family has no pair in a 1×2 image
        assert_eq!(run(&line(&[0.0, 4.0]), Parity::Odd), line(&[0.0, 4.0]));
        assert_eq!(run(&line(&[2.0]), Parity::Even), line(&[2.0]));
        assert_eq!(run(&line(&[1.0, 1.0, 1.0]), Parity::Even), line(&[1.0, 1.0, 1.0]));
        // odd pairs: (1,2); pixels 0 and 3 untouched
        let out = run(&line(&[0.0, 0.0, 4.0, 4.0]), Parity::Odd);
        assert_eq!(out, line(&[0.0, 1.0, 3.0, 4.0]));
    }

    #[test]
    fn cut_locus_reports_pixel() {
        let x = Image::signal(vec![0.0]);
        let f = Image::signal(vec![std::f64::consts::PI]);
        let err = prox_data(&Circle, &x, &f, 1.0, DataTerm::L1, Execution::Sequential).unwrap_err();
        match err {
            Error::AtPixel { location, source, .. } => {
                assert_eq!((location.row, location.col), (0, 0));
                assert!(matches!(*source, Error::CutLocus { .. }));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
