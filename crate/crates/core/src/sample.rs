//! Seeded random words for sampling-based checks.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::amalgam::Side;
use crate::freegroup::{Letter, Word};

/// Independent stream for sample `index` under `seed`, so that sample ranges
/// can be split across workers without changing results.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Uniform length in `min_len..=max_len`, then uniformly random letters
/// that never cancel the previous one.
pub fn reduced_letters<R: Rng>(rng: &mut R, rank: usize, min_len: usize, max_len: usize) -> Vec<Letter> {
    assert!(rank > 0 || max_len == 0);
    let len = rng.random_range(min_len..=max_len);
    let mut out: Vec<Letter> = Vec::with_capacity(len);
    while out.len() < len {
        let l = Letter::new(rng.random_range(0..rank), rng.random_bool(0.5));
        if out.last().is_some_and(|&p| p.cancels(l)) {
            continue;
        }
        out.push(l);
    }
    out
}

pub fn random_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    Word::reduce(rank, reduced_letters(rng, rank, 0, max_len)).expect("letters in range")
}

pub fn random_nonidentity_word<R: Rng>(rng: &mut R, rank: usize, max_len: usize) -> Word {
    Word::reduce(rank, reduced_letters(rng, rank, 1, max_len)).expect("letters in range")
}

/// Random product of `1..=max_syllables` factor words, each in a random
/// copy. Adjacent items may share a copy.
pub fn random_syllable_word<R: Rng>(
    rng: &mut R,
    rank: usize,
    max_syllables: usize,
    max_word_len: usize,
) -> Vec<(Side, Word)> {
    let k = rng.random_range(1..=max_syllables);
    (0..k)
        .map(|_| {
            let side = if rng.random_bool(0.5) { Side::One } else { Side::Two };
            (side, random_word(rng, rank, max_word_len))
        })
        .collect()
}

/// Every freely reduced word of length `<= max_len` in `rank` generators,
/// in shortlex order.
pub fn all_words(rank: usize, max_len: usize) -> Vec<Word> {
    let mut out = vec![Word::identity(rank)];
    let mut layer = vec![Vec::<Letter>::new()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &layer {
            for gen in 0..rank {
                for inverse in [false, true] {
                    let l = Letter::new(gen, inverse);
                    if w.last().is_some_and(|&p| p.cancels(l)) {
                        continue;
                    }
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        out.extend(
            next.iter()
                .map(|v| Word::reduce(rank, v.iter().copied()).expect("in range")),
        );
        layer = next;
    }
    out
}
