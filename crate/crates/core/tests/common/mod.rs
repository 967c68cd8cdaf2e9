#![allow(dead_code)]

use mippc::Code;
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const CORPUS_SIZE: u64 = 1000;

/// A random code with distinct codewords drawn uniformly from `[q]^n`.
pub fn random_code(n: usize, q: u32, m: usize, rng: &mut ChaCha8Rng) -> Code {
    let space = (q as usize).pow(n as u32);
    let words = sample(rng, space, m.min(space))
        .into_iter()
        .map(|mut x| {
            let mut w = vec![0; n];
            for s in w.iter_mut().rev() {
                *s = (x % q as usize) as u32;
                x /= q as usize;
            }
            w
        })
        .collect();
    Code::new(n, q, words).unwrap()
}

/// Seeded `(2, M, q)` codes with `q <= 5` and `M <= 10`.
pub fn length_two_corpus() -> Vec<Code> {
    (0..CORPUS_SIZE)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = rng.gen_range(2..=5u32);
            let m = rng.gen_range(1..=10.min((q * q) as usize));
            random_code(2, q, m, &mut rng)
        })
        .collect()
}

/// Seeded codes of length 2, 3 or 4 over small alphabets, `M <= 8`.
pub fn mixed_length_corpus() -> Vec<Code> {
    (0..CORPUS_SIZE)
        .map(|seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
            let n = rng.gen_range(2..=4usize);
            let q = rng.gen_range(2..=3u32);
            let m = rng.gen_range(1..=8usize);
            random_code(n, q, m, &mut rng)
        })
        .collect()
}
