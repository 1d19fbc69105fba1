use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Identifies the per-pixel random stream construction. Change the version
/// suffix whenever the mapping from (seed, stream) to samples changes.
pub const RNG_NAME: &str = "chacha20-stream/1";

/// Independent generator for substream `stream` of `seed`.
pub fn pixel_rng(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}
