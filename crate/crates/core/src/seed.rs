//! Seed splitting.
//!
//! A campaign is driven by one master seed. Each (grid point, repetition)
//! work unit gets a population seed mixed from the master seed and its
//! coordinates; each receiver of the population then uses its own ChaCha
//! stream of that seed. No draw depends on the order in which units or
//! receivers are evaluated.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of the population drawn for grid point `grid_idx`, repetition `rep`.
pub fn population_seed(master: u64, grid_idx: u64, rep: u64) -> u64 {
    let a = mix64(master.wrapping_add(GOLDEN));
    let b = mix64(a ^ grid_idx.wrapping_add(1).wrapping_mul(GOLDEN));
    mix64(b ^ rep.wrapping_add(1).wrapping_mul(0xD1B5_4A32_D192_ED03))
}

/// Random stream of receiver `index` within a population.
pub fn receiver_rng(pop_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(pop_seed);
    rng.set_stream(index);
    rng
}
