//! Exact evaluation of the Takagi function `τ(x) = Σ_n ⟨2^n x⟩ / 2^n`.
//!
//! Finite prefixes are summed digit by digit: appending digit `b` after a
//! prefix of length `n` with deficiency `D` adds `b (1 + D) / 2^(n+1)`. A
//! periodic tail is handled by applying the dyadic self-similarity relation
//! once over the period and solving the resulting linear equation for `τ(w)`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{inv_pow2, pow2, word_value, BinaryExpansion, Tail};

/// `τ(0.word)` as `numerator / 2^|word|`, together with `D_|word|`.
pub(crate) fn tau_word(word: &[u8]) -> (BigInt, i64) {
    let mut num = BigInt::zero();
    let mut d = 0i64;
    for &b in word {
        num <<= 1u32;
        if b == 1 {
            num += 1 + d;
            d -= 1;
        } else {
            d += 1;
        }
    }
    (num, d)
}

/// `τ(0.word 000…)`.
pub fn tau_of_word(word: &[u8]) -> BigRational {
    let (num, _) = tau_word(word);
    BigRational::new(num, pow2(word.len()))
}

/// Numerator of `τ(k / 2^n)` over `2^n`, for `k <= 2^n` and `n <= 126`.
fn tau_dyadic_numerator(k: u128, n: u32) -> u128 {
    let modulus = 1u128 << n;
    let mut r = k % modulus;
    let mut sum = 0u128;
    for j in 0..n {
        // ⟨r / 2^n⟩ / 2^j with r a multiple of 2^j
        let dist = r.min(modulus - r);
        sum += dist >> j;
        r = (r << 1) % modulus;
    }
    sum
}

/// `τ(k / 2^n)` via the finite sum `Σ_{j<n} ⟨2^j k / 2^n⟩ / 2^j`.
pub fn tau_dyadic(k: u128, n: u32) -> Result<BigRational> {
    if n > 126 || k > 1u128 << n {
        return Err(Error::DyadicOutOfRange { k, n });
    }
    Ok(BigRational::new(BigInt::from(tau_dyadic_numerator(k, n)), BigInt::from(1u128 << n)))
}

/// Largest grid depth accepted by [`tau_grid_numerators`].
pub const MAX_GRID_DEPTH: u32 = 26;

/// `2^n τ(k / 2^n)` for `k = 0, …, 2^n`.
pub fn tau_grid_numerators(n: u32) -> Result<Vec<u128>> {
    if n > MAX_GRID_DEPTH {
        return Err(Error::Parameter(format!("grid depth {n} exceeds {MAX_GRID_DEPTH}")));
    }
    Ok((0..=(1u128 << n)).into_par_iter().map(|k| tau_dyadic_numerator(k, n)).collect())
}

/// `τ(0.(w))` for a pure periodic word, solving
/// `τ(w) = τ(w0) + 2^-q (τ(w) + D_q(w0) w)`.
fn tau_pure_periodic(word: &[u8]) -> BigRational {
    let q = word.len();
    let (t_num, delta) = tau_word(word);
    let period = pow2(q) - BigInt::one();
    // τ(w) = (T (2^q - 1) + Δ W) / (2^q - 1)^2 with τ(w0) = T / 2^q, w = W / (2^q - 1)
    let w_num = BigInt::from(word_value(word));
    BigRational::new(t_num * &period + w_num * delta, &period * &period)
}

/// Exact `τ(x)` for any representable expansion.
pub fn tau(x: &BinaryExpansion) -> BigRational {
    match x.tail() {
        Tail::Zeros => tau_of_word(x.prefix()),
        // τ depends only on the real value
        Tail::Ones => match x.carry_normalized() {
            c if c.tail() == &Tail::Ones => BigRational::zero(),
            c => tau_of_word(c.prefix()),
        },
        Tail::Periodic(word) => {
            let prefix = x.prefix();
            let n = prefix.len();
            let (t_num, d) = tau_word(prefix);
            let w = x.suffix_after(n).to_rational();
            let tau_w = tau_pure_periodic(word);
            BigRational::new(t_num, pow2(n)) + (tau_w + w * BigInt::from(d)) * inv_pow2(n)
        }
    }
}

/// Envelope of `τ` over the dyadic interval fixed by a finite prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TauBounds {
    /// Left endpoint numerator `k` of `[k/2^n, (k+1)/2^n]`.
    pub k: BigInt,
    pub depth: usize,
    pub deficiency: i64,
    /// `τ` at the left endpoint.
    pub tau_left: BigRational,
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Unclamped envelope `τ(x0) + 2^-n [min(0, D), 2/3 + max(0, D)]`.
pub(crate) fn raw_bounds(tau_left: &BigRational, d: i64, n: usize) -> (BigRational, BigRational) {
    let scale = inv_pow2(n);
    let two_thirds = BigRational::new(2.into(), 3.into());
    let lo = tau_left + BigRational::from(BigInt::from(d.min(0))) * &scale;
    let hi = tau_left + (two_thirds + BigRational::from(BigInt::from(d.max(0)))) * &scale;
    (lo, hi)
}

pub(crate) fn clamp_bounds(lo: BigRational, hi: BigRational) -> (BigRational, BigRational) {
    let two_thirds = BigRational::new(2.into(), 3.into());
    let lo = if lo.is_negative() { BigRational::zero() } else { lo };
    let hi = if hi > two_thirds { two_thirds } else { hi };
    (lo, hi)
}

pub fn tau_bounds(prefix: &[u8]) -> TauBounds {
    let (num, d) = tau_word(prefix);
    let n = prefix.len();
    let tau_left = BigRational::new(num, pow2(n));
    let (lo, hi) = raw_bounds(&tau_left, d, n);
    let (lo, hi) = clamp_bounds(lo, hi);
    TauBounds { k: BigInt::from(word_value(prefix)), depth: n, deficiency: d, tau_left, lo, hi }
}

impl TauBounds {
    pub fn contains(&self, y: &BigRational) -> bool {
        &self.lo <= y && y <= &self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }
}

/// Checks `τ(x) = τ(1 - x)` and `2 τ(x/2) = τ(x) + x` exactly.
pub fn verify_functional_equations(x: &BinaryExpansion) -> bool {
    let t = tau(x);
    let reflected = tau(&x.complement());
    let halved = tau(&x.halve());
    t == reflected && halved * BigInt::from(2) == &t + x.to_rational()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> BinaryExpansion {
        s.parse().unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    /// Direct partial sum of `⟨2^j x⟩ / 2^j` over `j < terms`.
    fn series(x: &BigRational, terms: usize) -> BigRational {
        let half = q(1, 2);
        let mut sum = BigRational::zero();
        let mut scaled = x.clone();
        for j in 0..terms {
            let frac = &scaled - scaled.floor();
            let dist = if frac > half { BigRational::one() - &frac } else { frac };
            sum += dist * inv_pow2(j);
            scaled *= BigInt::from(2);
        }
        sum
    }

    #[test]
    fn dyadic_values() {
        assert_eq!(tau_dyadic(1, 1).unwrap(), q(1, 2));
        assert_eq!(tau_dyadic(3, 3).unwrap(), q(5, 8));
        assert_eq!(tau_dyadic(1, 3).unwrap(), q(3, 8));
        assert_eq!(tau_dyadic(0, 5).unwrap(), q(0, 1));
        assert_eq!(tau_dyadic(32, 5).unwrap(), q(0, 1));
        assert!(tau_dyadic(33, 5).is_err());
    }

    #[test]
    fn dyadic_matches_series_exhaustively() {
        for n in 0..=10u32 {
            for k in 0..=(1u128 << n) {
                let v = BigRational::new(BigInt::from(k), BigInt::from(1u128 << n));
                let expected = series(&v, n as usize + 1);
                assert_eq!(tau_dyadic(k, n).unwrap(), expected);
                assert_eq!(tau(&BinaryExpansion::from_dyadic(k, n)), expected);
            }
        }
    }

    #[test]
    fn grid_matches_pointwise() {
        let grid = tau_grid_numerators(8).unwrap();
        assert_eq!(grid.len(), 257);
        for (k, num) in grid.iter().enumerate() {
            assert_eq!(BigRational::new(BigInt::from(*num), BigInt::from(256)), tau_dyadic(k as u128, 8).unwrap());
        }
        assert!(tau_grid_numerators(27).is_err());
    }

    #[test]
    fn periodic_values() {
        assert_eq!(tau(&x("0.(01)")), q(2, 3));
        assert_eq!(tau(&x("0.0(01)")), q(1, 2));
        assert_eq!(tau(&x("0.0011(01)")) - tau(&x("0.01")), q(1, 24));
        // series converges to the exact value
        let exact = tau(&x("0.(01)"));
        let approx = series(&q(1, 3), 42);
        assert!((exact - approx).abs() < inv_pow2(40));
    }

    #[test]
    fn ones_tail_uses_real_value() {
        assert_eq!(tau(&x("0.0101(1)")), tau(&x("0.011")));
        assert_eq!(tau(&x("0.(1)")), q(0, 1));
    }

    #[test]
    fn bounds_examples() {
        let b = tau_bounds(&[0, 1]);
        assert_eq!((b.lo.clone(), b.hi.clone()), (q(1, 2), q(2, 3)));
        let b = tau_bounds(&[]);
        assert_eq!((b.lo.clone(), b.hi.clone()), (q(0, 1), q(2, 3)));
        let b = tau_bounds(&[0, 0]);
        assert_eq!(b.deficiency, 2);
        assert_eq!((b.lo.clone(), b.hi.clone()), (q(0, 1), q(2, 3)));
    }

    #[test]
    fn functional_equation_examples() {
        assert!(verify_functional_equations(&x("0.0110")));
        assert!(verify_functional_equations(&BinaryExpansion::zero()));
        assert!(verify_functional_equations(&x("0.(01)")));
        assert_eq!(tau(&x("0.00110")) * BigInt::from(2), q(1, 1));
    }
}
