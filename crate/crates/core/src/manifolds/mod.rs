//! Closed-form exponential and logarithm maps for the supported manifolds.

mod circle;
mod euclidean;
mod lch;
mod rotations;
mod sphere;
mod spd;

pub use circle::{wrap_angle, Circle, CIRCLE_CUT_TOL};
pub use euclidean::Euclidean;
pub use lch::Lch;
pub use rotations::{hat, rodrigues, rotation_angle, rotation_log, vee, Rotations, SO3_CUT_TOL};
pub use sphere::{Sphere, SPHERE_CUT_TOL};
pub use spd::Spd;
