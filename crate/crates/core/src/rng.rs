//! Seeded pseudo-random streams.
//!
//! Every random object in the crate is drawn from a [`Prng`], a ChaCha8
//! stream cipher generator (counter based) keyed through
//! `ChaCha8Rng::seed_from_u64`. Independent sub-streams (restarts, trials,
//! pipeline stages) are obtained with [`derive_seed`], which mixes a parent
//! seed with a stream index through SplitMix64:
//!
//! ```text
//! derive_seed(seed, stream) = splitmix64(seed ^ splitmix64(stream))
//! splitmix64(x): z = x + 0x9E3779B97F4A7C15
//!                z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//!                z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//!                return z ^ (z >> 31)
//! ```
//!
//! Test vectors: `splitmix64(0) = 0xE220A8397B1DCDAF`,
//! `derive_seed(0, 0) = 0xA706DD2F4D197E6F` (see the unit tests).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type Prng = ChaCha8Rng;

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// One SplitMix64 step applied to `x` (stateless form).
pub fn splitmix64(x: u64) -> u64 {
    let mut z = x.wrapping_add(GOLDEN_GAMMA);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the `stream`-th child of `seed`.
pub fn derive_seed(seed: u64, stream: u64) -> u64 {
    splitmix64(seed ^ splitmix64(stream))
}

pub fn rng_from_seed(seed: u64) -> Prng {
    ChaCha8Rng::seed_from_u64(seed)
}
