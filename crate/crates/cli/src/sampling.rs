//! Seeded generators for randomized checks.

use rand::Rng;
use takagi_core::expansion::Tail;
use takagi_core::omega::{enumerate_breakpoints, BreakpointKind, BreakpointWord};
use takagi_core::BinaryExpansion;

/// Tails whose partial deficiencies never drop below zero.
const NONNEG_TAILS: [&[u8]; 4] = [&[0, 1], &[0, 0, 1], &[0, 0, 1, 1], &[0, 1, 0, 0, 1, 1]];

/// `k / 2^n` with `n <= max_depth`, returned as `(k, n)`.
pub fn random_dyadic<R: Rng>(rng: &mut R, max_depth: u32) -> (u128, u32) {
    let n = rng.gen_range(0..=max_depth);
    (rng.gen_range(0..=(1u128 << n)), n)
}

/// An expansion with a random prefix and a random finite or periodic tail.
pub fn random_expansion<R: Rng>(rng: &mut R, max_prefix: usize) -> BinaryExpansion {
    let len = rng.gen_range(0..=max_prefix);
    let prefix: Vec<u8> = (0..len).map(|_| rng.gen_range(0..=1)).collect();
    let tail = match rng.gen_range(0..4) {
        0 => Tail::Zeros,
        1 => Tail::Ones,
        _ => {
            let period = rng.gen_range(2..=6);
            let word: Vec<u8> = (0..period).map(|_| rng.gen_range(0..=1)).collect();
            return BinaryExpansion::periodic(prefix.clone(), word)
                .unwrap_or_else(|_| BinaryExpansion::new(prefix, Tail::Zeros).expect("finite expansion"));
        }
    };
    BinaryExpansion::new(prefix, tail).expect("valid expansion")
}

/// A point of `Ω^L`: a nonnegative-deficiency prefix and a nonnegative tail.
pub fn random_omega_point<R: Rng>(rng: &mut R, max_prefix: usize) -> BinaryExpansion {
    let len = rng.gen_range(0..=max_prefix);
    let mut d = 0i64;
    let prefix: Vec<u8> = (0..len)
        .map(|_| {
            let bit = if d == 0 { 0 } else { rng.gen_range(0..=1) };
            d += if bit == 0 { 1 } else { -1 };
            bit
        })
        .collect();
    match rng.gen_range(0..=NONNEG_TAILS.len()) {
        0 => BinaryExpansion::new(prefix, Tail::Zeros).expect("finite expansion"),
        i => BinaryExpansion::periodic(prefix, NONNEG_TAILS[i - 1].to_vec()).expect("periodic expansion"),
    }
}

/// A uniformly chosen full breakpoint word of half-length at most `max_m`.
pub fn random_breakpoint<R: Rng>(rng: &mut R, max_m: usize) -> BreakpointWord {
    let words = enumerate_breakpoints(rng.gen_range(0..=max_m), BreakpointKind::Full);
    words[rng.gen_range(0..words.len())].clone()
}

/// A base word and an ordered pair of `Ω^L` points for the self-similarity law.
pub fn selfsimilar_case<R: Rng>(rng: &mut R, max_m: usize) -> (BreakpointWord, BinaryExpansion, BinaryExpansion) {
    let base = random_breakpoint(rng, max_m);
    let a = random_omega_point(rng, 12);
    let b = random_omega_point(rng, 12);
    if a.to_rational() <= b.to_rational() {
        (base, a, b)
    } else {
        (base, b, a)
    }
}
