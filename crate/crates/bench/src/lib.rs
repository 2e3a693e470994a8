//! Shared fixtures for the criterion benchmarks.

use rand::SeedableRng;
use sdsearch_core::gf2::{self, BinaryCode};
use sdsearch_core::gf4::{self, AdditiveF4Code};

pub fn golay() -> BinaryCode {
    gf2::families::extended_golay()
}

pub fn random_self_dual_72() -> BinaryCode {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
    gf2::random_self_dual(72, &mut rng)
}

pub fn additive_batch(n: usize, count: usize) -> Vec<AdditiveF4Code> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    (0..count)
        .map(|_| gf4::random_trace_self_dual(n, &mut rng))
        .collect()
}
