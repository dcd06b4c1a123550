//! Seeded random streams.
//!
//! Every sampler takes an explicit generator. Parallel work derives disjoint
//! ChaCha streams from a master seed plus a tuple of integer labels, so a run
//! is reproducible for a fixed `(seed, sample count)` no matter how the blocks
//! are scheduled.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used throughout the crate.
pub type SimRng = ChaCha8Rng;

/// Fixed number of realizations handled by one sub-stream.
pub const BLOCK_SIZE: usize = 1024;

/// Creates the generator for stream `labels` under `seed`.
pub fn substream(seed: u64, labels: &[u64]) -> SimRng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream_id(labels));
    rng
}

fn stream_id(labels: &[u64]) -> u64 {
    labels
        .iter()
        .fold(0x9e37_79b9_7f4a_7c15_u64, |acc, &l| splitmix64(acc ^ splitmix64(l)))
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Splits `n` items into `(block_index, start, len)` chunks of [`BLOCK_SIZE`].
pub fn blocks(n: usize) -> impl Iterator<Item = (u64, usize, usize)> {
    (0..n.div_ceil(BLOCK_SIZE)).map(move |b| {
        let start = b * BLOCK_SIZE;
        (b as u64, start, BLOCK_SIZE.min(n - start))
    })
}

/// Draws a uniform in the open interval (0, 1).
#[inline]
pub fn open01(rng: &mut SimRng) -> f64 {
    use rand::Rng;
    loop {
        let u: f64 = rng.random();
        if u > 0.0 {
            return u;
        }
    }
}
