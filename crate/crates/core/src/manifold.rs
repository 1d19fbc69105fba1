//! The manifold interface every solver is generic over.
//!
//! A [`Manifold`] supplies closed-form exponential and logarithm maps, the
//! Riemannian norm of tangent vectors and the geodesic distance. Everything
//! else (unit-speed geodesic points, proximal maps, means) is built on top
//! of those four operations.

use std::fmt::{self, Debug};

use rand::Rng;

use crate::error::{Error, Result};

/// Relative slack allowed when a requested arc length exceeds the distance
/// between two points by rounding error only.
const ARC_LENGTH_SLACK: f64 = 1e-12;

/// Runtime description of a manifold, used by the file format and the CLI.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ManifoldKind {
    /// S¹, stored as an angle in (−π, π].
    Circle,
    /// S², stored as a unit 3-vector.
    Sphere,
    /// SO(3), stored as a row-major 3×3 rotation matrix.
    Rotations,
    /// Pos₃, stored as a row-major 3×3 symmetric positive-definite matrix.
    Spd,
    Euclidean(usize),
    Product(Vec<ManifoldKind>),
}

impl ManifoldKind {
    /// The LCh colour cylinder ℝ² × S¹ with coordinates ordered (L, C, h).
    pub fn lch() -> Self {
        ManifoldKind::Product(vec![ManifoldKind::Euclidean(2), ManifoldKind::Circle])
    }

    /// Number of scalars per point.
    pub fn element_len(&self) -> usize {
        match self {
            ManifoldKind::Circle => 1,
            ManifoldKind::Sphere => 3,
            ManifoldKind::Rotations | ManifoldKind::Spd => 9,
            ManifoldKind::Euclidean(k) => *k,
            ManifoldKind::Product(parts) => parts.iter().map(ManifoldKind::element_len).sum(),
        }
    }

    pub fn tag(&self) -> String {
        match self {
            ManifoldKind::Circle => "s1".into(),
            ManifoldKind::Sphere => "s2".into(),
            ManifoldKind::Rotations => "so3".into(),
            ManifoldKind::Spd => "pos3".into(),
            ManifoldKind::Euclidean(k) => format!("euclidean:{k}"),
            p if *p == ManifoldKind::lch() => "lch".into(),
            ManifoldKind::Product(parts) => {
                let inner: Vec<String> = parts.iter().map(ManifoldKind::tag).collect();
                format!("product({})", inner.join(","))
            }
        }
    }

    pub fn from_tag(tag: &str) -> Result<Self> {
        let kind = match tag {
            "s1" => ManifoldKind::Circle,
            "s2" => ManifoldKind::Sphere,
            "so3" => ManifoldKind::Rotations,
            "pos3" => ManifoldKind::Spd,
            "lch" => ManifoldKind::lch(),
            other => {
                let k = other
                    .strip_prefix("euclidean:")
                    .and_then(|k| k.parse::<usize>().ok())
                    .filter(|&k| k > 0)
                    .ok_or_else(|| Error::Format(format!("unknown manifold tag {other:?}")))?;
                ManifoldKind::Euclidean(k)
            }
        };
        Ok(kind)
    }
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.tag())
    }
}

/// A Riemannian manifold with closed-form exponential and logarithm maps.
///
/// Points and tangent vectors are plain values; every operation returns a
/// fresh value, so manifolds and points can be shared freely across threads.
pub trait Manifold: Clone + Debug + Send + Sync {
    type Point: Clone + PartialEq + Debug + Send + Sync;
    type Tangent: Clone + Debug + Send + Sync;

    fn kind(&self) -> ManifoldKind;

    fn element_len(&self) -> usize {
        self.kind().element_len()
    }

    /// Follows the geodesic from `base` with initial velocity `v` for unit time.
    fn exp(&self, base: &Self::Point, v: &Self::Tangent) -> Self::Point;

    /// Inverse of [`Manifold::exp`]; fails with [`Error::CutLocus`] when
    /// `target` is (numerically) conjugate to `base`.
    fn log(&self, base: &Self::Point, target: &Self::Point) -> Result<Self::Tangent>;

    /// Length of `v` in the Riemannian metric at `base`.
    fn norm(&self, base: &Self::Point, v: &Self::Tangent) -> f64;

    /// Geodesic distance. Defined on the cut locus as well.
    fn dist(&self, a: &Self::Point, b: &Self::Point) -> f64;

    fn zero_tangent(&self, base: &Self::Point) -> Self::Tangent;
    fn scale(&self, v: &Self::Tangent, s: f64) -> Self::Tangent;
    fn add(&self, a: &Self::Tangent, b: &Self::Tangent) -> Self::Tangent;

    /// Checks the point invariants, returning a description of the first violation.
    fn check_point(&self, p: &Self::Point) -> Result<(), String>;

    /// Checks that `v` lies in the tangent space at `base`.
    fn check_tangent(&self, base: &Self::Point, v: &Self::Tangent) -> Result<(), String>;

    /// Appends the ambient coordinates of `p` (exactly `element_len` scalars).
    fn write_coords(&self, p: &Self::Point, out: &mut Vec<f64>);

    /// Builds a point from exactly `element_len` ambient coordinates, without
    /// validating it.
    fn read_coords(&self, coords: &[f64]) -> Self::Point;

    /// Draws an isotropic Gaussian tangent vector at `base` with standard
    /// deviation `sigma` per coordinate of an orthonormal tangent basis.
    fn sample_tangent<R: Rng + ?Sized>(&self, base: &Self::Point, sigma: f64, rng: &mut R)
        -> Self::Tangent;

    /// Builds and validates a point from ambient coordinates.
    fn point(&self, coords: &[f64]) -> Result<Self::Point> {
        if coords.len() != self.element_len() {
            return Err(Error::Argument(format!(
                "{} expects {} coordinates, got {}",
                self.kind(),
                self.element_len(),
                coords.len()
            )));
        }
        let p = self.read_coords(coords);
        self.check_point(&p).map_err(Error::Domain)?;
        Ok(p)
    }

    fn coords(&self, p: &Self::Point) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.element_len());
        self.write_coords(p, &mut out);
        out
    }

    /// The point `[a, b]_t` at arc length `t` along the unit-speed geodesic
    /// from `a` towards `b`, for `0 ≤ t ≤ d(a, b)`.
    fn geodesic_point(&self, a: &Self::Point, b: &Self::Point, t: f64) -> Result<Self::Point> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Argument(format!("arc length {t} must be finite and nonnegative")));
        }
        if t == 0.0 {
            return Ok(a.clone());
        }
        let v = self.log(a, b)?;
        let d = self.norm(a, &v);
        if t > d * (1.0 + ARC_LENGTH_SLACK) + f64::MIN_POSITIVE {
            return Err(Error::Argument(format!(
                "arc length {t} exceeds the geodesic length {d}"
            )));
        }
        if t >= d {
            return Ok(b.clone());
        }
        Ok(self.exp(a, &self.scale(&v, t / d)))
    }
}

/// Cartesian product of two manifolds with the product metric.
#[derive(Debug, Clone, PartialEq)]
pub struct Product<A, B> {
    pub first: A,
    pub second: B,
}

impl<A, B> Product<A, B> {
    pub fn new(first: A, second: B) -> Self {
        Self { first, second }
    }
}

impl<A: Manifold, B: Manifold> Manifold for Product<A, B> {
    type Point = (A::Point, B::Point);
    type Tangent = (A::Tangent, B::Tangent);

    fn kind(&self) -> ManifoldKind {
        ManifoldKind::Product(vec![self.first.kind(), self.second.kind()])
    }

    fn exp(&self, base: &Self::Point, v: &Self::Tangent) -> Self::Point {
        (self.first.exp(&base.0, &v.0), self.second.exp(&base.1, &v.1))
    }

    fn log(&self, base: &Self::Point, target: &Self::Point) -> Result<Self::Tangent> {
        Ok((self.first.log(&base.0, &target.0)?, self.second.log(&base.1, &target.1)?))
    }

    fn norm(&self, base: &Self::Point, v: &Self::Tangent) -> f64 {
        self.first.norm(&base.0, &v.0).hypot(self.second.norm(&base.1, &v.1))
    }

    fn dist(&self, a: &Self::Point, b: &Self::Point) -> f64 {
        self.first.dist(&a.0, &b.0).hypot(self.second.dist(&a.1, &b.1))
    }

    fn zero_tangent(&self, base: &Self::Point) -> Self::Tangent {
        (self.first.zero_tangent(&base.0), self.second.zero_tangent(&base.1))
    }

    fn scale(&self, v: &Self::Tangent, s: f64) -> Self::Tangent {
        (self.first.scale(&v.0, s), self.second.scale(&v.1, s))
    }

    fn add(&self, a: &Self::Tangent, b: &Self::Tangent) -> Self::Tangent {
        (self.first.add(&a.0, &b.0), self.second.add(&a.1, &b.1))
    }

    fn check_point(&self, p: &Self::Point) -> Result<(), String> {
        self.first.check_point(&p.0)?;
        self.second.check_point(&p.1)
    }

    fn check_tangent(&self, base: &Self::Point, v: &Self::Tangent) -> Result<(), String> {
        self.first.check_tangent(&base.0, &v.0)?;
        self.second.check_tangent(&base.1, &v.1)
    }

    fn write_coords(&self, p: &Self::Point, out: &mut Vec<f64>) {
        self.first.write_coords(&p.0, out);
        self.second.write_coords(&p.1, out);
    }

    fn read_coords(&self, coords: &[f64]) -> Self::Point {
        let (a, b) = coords.split_at(self.first.element_len());
        (self.first.read_coords(a), self.second.read_coords(b))
    }

    fn sample_tangent<R: Rng + ?Sized>(
        &self,
        base: &Self::Point,
        sigma: f64,
        rng: &mut R,
    ) -> Self::Tangent {
        (
            self.first.sample_tangent(&base.0, sigma, rng),
            self.second.sample_tangent(&base.1, sigma, rng),
        )
    }
}
