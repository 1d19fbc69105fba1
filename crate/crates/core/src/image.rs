//! Rectangular grids of manifold-valued samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::Manifold;

/// Grid shape. One-dimensional signals are laid out as `n × 1` images so
/// that only vertical neighbour pairs exist.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Shape {
    Signal(usize),
    Grid { rows: usize, cols: usize },
}

impl Shape {
    pub fn grid(rows: usize, cols: usize) -> Self {
        Shape::Grid { rows, cols }
    }

    pub fn rows(&self) -> usize {
        match *self {
            Shape::Signal(n) => n,
            Shape::Grid { rows, .. } => rows,
        }
    }

    pub fn cols(&self) -> usize {
        match *self {
            Shape::Signal(_) => 1,
            Shape::Grid { cols, .. } => cols,
        }
    }

    pub fn len(&self) -> usize {
        self.rows() * self.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Dimensions as written in file headers: `[n]` or `[rows, cols]`.
    pub fn dims(&self) -> Vec<usize> {
        match *self {
            Shape::Signal(n) => vec![n],
            Shape::Grid { rows, cols } => vec![rows, cols],
        }
    }

    pub fn from_dims(dims: &[usize]) -> Result<Self> {
        match *dims {
            [n] => Ok(Shape::Signal(n)),
            [rows, cols] => Ok(Shape::Grid { rows, cols }),
            _ => Err(Error::Format(format!("shape must have 1 or 2 dimensions, got {dims:?}"))),
        }
    }
}

impl std::fmt::Display for Shape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Shape::Signal(n) => write!(f, "{n}"),
            Shape::Grid { rows, cols } => write!(f, "{rows}x{cols}"),
        }
    }
}

/// A signal or image with samples of type `P`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Image<P> {
    shape: Shape,
    data: Vec<P>,
}

impl<P> Image<P> {
    pub fn new(shape: Shape, data: Vec<P>) -> Result<Self> {
        if data.len() != shape.len() {
            return Err(Error::Argument(format!(
                "shape {shape} needs {} samples, got {}",
                shape.len(),
                data.len()
            )));
        }
        Ok(Self { shape, data })
    }

    pub fn signal(data: Vec<P>) -> Self {
        Self { shape: Shape::Signal(data.len()), data }
    }

    pub fn from_fn(shape: Shape, mut f: impl FnMut(usize, usize) -> P) -> Self {
        let mut data = Vec::with_capacity(shape.len());
        for r in 0..shape.rows() {
            for c in 0..shape.cols() {
                data.push(f(r, c));
            }
        }
        Self { shape, data }
    }

    pub fn shape(&self) -> Shape {
        self.shape
    }

    pub fn rows(&self) -> usize {
        self.shape.rows()
    }

    pub fn cols(&self) -> usize {
        self.shape.cols()
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn index(&self, row: usize, col: usize) -> usize {
        row * self.cols() + col
    }

    /// Row and column of a linear index.
    pub fn position(&self, index: usize) -> (usize, usize) {
        (index / self.cols(), index % self.cols())
    }

    pub fn get(&self, row: usize, col: usize) -> &P {
        &self.data[self.index(row, col)]
    }

    pub fn pixels(&self) -> &[P] {
        &self.data
    }

    pub fn pixels_mut(&mut self) -> &mut [P] {
        &mut self.data
    }

    pub fn into_pixels(self) -> Vec<P> {
        self.data
    }

    pub fn same_shape<Q>(&self, other: &Image<Q>) -> bool {
        self.rows() == other.rows() && self.cols() == other.cols()
    }

    pub fn map<Q>(&self, f: impl FnMut(&P) -> Q) -> Image<Q> {
        Image { shape: self.shape, data: self.data.iter().map(f).collect() }
    }

    /// Swaps rows and columns. Signals become `1 × n` grids.
    pub fn transpose(&self) -> Self
    where
        P: Clone,
    {
        let (rows, cols) = (self.rows(), self.cols());
        Image::from_fn(Shape::grid(cols, rows), |r, c| self.data[c * cols + r].clone())
    }
}

/// Checks every pixel against the manifold's point invariants.
pub fn validate<M: Manifold>(m: &M, image: &Image<M::Point>) -> Result<()> {
    for (i, p) in image.pixels().iter().enumerate() {
        m.check_point(p).map_err(|reason| Error::Invariant {
            manifold: m.kind().tag(),
            pixel: i,
            reason,
        })?;
    }
    Ok(())
}

pub(crate) fn require_same_shape<P, Q>(a: &Image<P>, b: &Image<Q>) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::Argument(format!("shape mismatch: {} vs {}", a.shape(), b.shape())))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn signal_is_a_column() {
        let s = Image::signal(vec![1, 2, 3]);
        assert_eq!((s.rows(), s.cols()), (3, 1));
        assert_eq!(*s.get(2, 0), 3);
        assert_eq!(s.shape().dims(), vec![3]);
    }

    #[test]
    fn transpose_swaps_indices() {
        let img = Image::from_fn(Shape::grid(2, 3), |r, c| 10 * r + c);
        let t = img.transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
        for r in 0..2 {
            for c in 0..3 {
                assert_eq!(img.get(r, c), t.get(c, r));
            }
        }
        assert_eq!(t.transpose(), img);
    }

    #[test]
    fn length_must_match_shape() {
        assert!(Image::new(Shape::grid(2, 2), vec![0; 3]).is_err());
        assert!(Shape::from_dims(&[1, 2, 3]).is_err());
    }
}
