//! Benchmark inputs shared by the criterion targets.

use ncdiff_core::sample::Sampler;
use ncdiff_core::{Algebra, Element};

/// `n` seeded random elements with words up to `max_len` letters.
pub fn random_elements(alg: &Algebra, seed: u64, n: usize, max_len: u32) -> Vec<Element> {
    let mut rng = Sampler::new(seed, Sampler::standard_pool(alg));
    (0..n).map(|_| rng.element(alg, max_len)).collect()
}
