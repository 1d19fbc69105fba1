//! Synthetic test data: phantoms and noise models.
//!
//! Every random operation takes a 64-bit seed and draws each pixel from its
//! own ChaCha20 stream, so serial and parallel runs produce identical output.

mod dti;
mod noise;
mod phantoms;
mod rng;
mod vmf;

pub use dti::{
    dti_ls_fit, fibonacci_directions, rician_corrupt, rician_corrupt_all, stejskal_tanner_forward,
    DwiProtocol, DWI_FLOOR_FRACTION,
};
pub use noise::{tangent_gaussian_noise, vmf_noise};
pub use phantoms::{synth_pos3_image, synth_s2_image, synth_so3_series, SO3_JUMP_INDEX};
pub use rng::{pixel_rng, RNG_NAME};
pub use vmf::vmf_sample;
