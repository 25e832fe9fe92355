//! Seeded random elements for property checks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{Algebra, Element, Sym, Word};
use crate::coeff::Coeff;

/// Environment variable that fixes the seed of randomized checks.
pub const SEED_VAR: &str = "NCDIFF_SEED";

pub const DEFAULT_SEED: u64 = 20_240_601;

/// The seed from `NCDIFF_SEED`, or [`DEFAULT_SEED`].
pub fn seed_from_env() -> u64 {
    std::env::var(SEED_VAR)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_SEED)
}

pub struct Sampler {
    rng: ChaCha8Rng,
    pool: Vec<Coeff>,
}

impl Sampler {
    /// Coefficients are drawn from `pool`, which must be non-empty.
    pub fn new(seed: u64, pool: Vec<Coeff>) -> Self {
        assert!(!pool.is_empty(), "empty coefficient pool");
        Sampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            pool,
        }
    }

    /// The pool `{1, -1, p, q^-1}`, with missing parameters dropped.
    pub fn standard_pool(alg: &Algebra) -> Vec<Coeff> {
        let mut pool = vec![Coeff::one(), Coeff::from_integer(-1)];
        if alg.params().contains("p") {
            pool.push(Coeff::param("p"));
        }
        if alg.params().contains("q") {
            pool.push(Coeff::param("q").inv().expect("nonzero"));
        }
        pool
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn coeff(&mut self) -> Coeff {
        let k = self.rng.gen_range(0..self.pool.len());
        self.pool[k].clone()
    }

    /// A uniformly random word of length at most `max_len` over all symbols.
    pub fn word(&mut self, alg: &Algebra, max_len: u32) -> Word {
        let len = self.rng.gen_range(0..=max_len);
        let n = alg.table().symbol_count() as Sym;
        Word::from_letters(
            (0..len)
                .map(|_| self.rng.gen_range(0..n))
                .collect::<Vec<_>>(),
        )
    }

    /// One to three terms, words of length at most `max_len`.
    pub fn element(&mut self, alg: &Algebra, max_len: u32) -> Element {
        let terms = self.rng.gen_range(1..=3);
        let mut out = Element::zero();
        for _ in 0..terms {
            let c = self.coeff();
            let w = self.word(alg, max_len);
            out.add_scaled(&c, &alg.word(&w));
        }
        out
    }
}
