//! Reconstruction quality in decibels.

use std::fmt;

use nalgebra::Vector3;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::image::{require_same_shape, Image};
use crate::manifold::Manifold;

/// A decibel value, or the perfect-reconstruction sentinel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Db {
    Finite(f64),
    Infinite,
}

impl Db {
    fn from_ratio(num: f64, den: f64) -> Self {
        if den == 0.0 {
            Db::Infinite
        } else {
            Db::Finite(10.0 * (num / den).log10())
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Db::Finite(v) => v,
            Db::Infinite => f64::INFINITY,
        }
    }

    pub fn is_infinite(self) -> bool {
        self == Db::Infinite
    }
}

impl fmt::Display for Db {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Db::Finite(v) => write!(f, "{v:.6} dB"),
            Db::Infinite => f.write_str("inf dB"),
        }
    }
}

// Reports carry "inf" as a string so JSON output stays valid.
impl Serialize for Db {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Db::Finite(v) => s.serialize_f64(*v),
            Db::Infinite => s.serialize_str("inf"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub name: String,
    pub value: Db,
    pub pixel_count: usize,
}

impl fmt::Display for MetricReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {} over {} pixels", self.name, self.value, self.pixel_count)
    }
}

/// `10 log₁₀(Σ d(g, f)² / Σ d(g, x)²)` for ground truth `g`, noisy data `f`
/// and reconstruction `x`.
pub fn delta_snr<M: Manifold>(
    m: &M,
    g: &Image<M::Point>,
    f: &Image<M::Point>,
    x: &Image<M::Point>,
) -> Result<MetricReport> {
    require_same_shape(g, f)?;
    require_same_shape(g, x)?;
    let sq = |a: &Image<M::Point>| -> f64 {
        g.pixels().iter().zip(a.pixels()).map(|(p, q)| m.dist(p, q).powi(2)).sum()
    };
    let noise = sq(f);
    if noise == 0.0 {
        return Err(Error::Argument("ground truth and noisy data are identical".into()));
    }
    let value = if f == x { Db::Finite(0.0) } else { Db::from_ratio(noise, sq(x)) };
    Ok(MetricReport { name: "dsnr".into(), value, pixel_count: g.len() })
}

/// `10 log₁₀(3mn · max|g|² / Σ |g − x|²)` over all RGB channels.
pub fn psnr_rgb(g: &Image<Vector3<f64>>, x: &Image<Vector3<f64>>) -> Result<MetricReport> {
    require_same_shape(g, x)?;
    let peak = g.pixels().iter().map(|p| p.amax()).fold(0.0, f64::max);
    let err: f64 = g.pixels().iter().zip(x.pixels()).map(|(a, b)| (a - b).norm_squared()).sum();
    let value = Db::from_ratio(3.0 * g.len() as f64 * peak * peak, err);
    Ok(MetricReport { name: "psnr".into(), value, pixel_count: g.len() })
}
