//! Total-variation type regularization for signals and images whose samples
//! lie on a Riemannian manifold.
//!
//! The objective `Σ g(d(x_ij, f_ij)) + α Σ h(d(x_ij, x_neighbour))` is
//! minimized by proximal point iterations whose elementary steps are moves
//! along geodesics, so a manifold only needs closed-form exp and log maps.
//! Supported manifolds: S¹, S², SO(3), Pos₃, ℝᵏ and the LCh colour cylinder.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod averaging;
pub mod error;
pub mod image;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod manifolds;
pub mod metrics;
pub mod par;
pub mod prox;
pub mod solvers;
pub mod synth;

pub use averaging::{approx_mean5, karcher_mean, MeanConfig};
pub use error::{Error, ErrorClass, Result};
pub use image::{Image, Shape};
pub use manifold::{Manifold, ManifoldKind, Product};
pub use manifolds::{Circle, Euclidean, Lch, Rotations, Spd, Sphere};
pub use par::Execution;
pub use prox::{DataTerm, Huber, Regularizer};
pub use solvers::{
    cyclic_ppa, denoise, functional_value, parallel_ppa, Algorithm, DenoiseParams, LambdaSchedule,
    SolveReport,
};
