//! Seeded sampling shared by the Monte Carlo estimators.
//!
//! Every sampler owns a `ChaCha8Rng` seeded with `seed_from_u64`, so a given
//! seed reproduces the same draws bit for bit.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type SeededRng = ChaCha8Rng;

pub fn rng_from_seed(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Inverse-CDF draw over `probs` in the given order. `probs` should sum to
/// one; any rounding shortfall is assigned to the last outcome with nonzero
/// probability.
pub fn draw_index<R: Rng + ?Sized>(probs: &[f64], rng: &mut R) -> usize {
    let u: f64 = rng.gen();
    let mut acc = 0.0;
    for (i, &p) in probs.iter().enumerate() {
        acc += p;
        if u < acc && p > 0.0 {
            return i;
        }
    }
    probs.iter().rposition(|&p| p > 0.0).unwrap_or(probs.len() - 1)
}
