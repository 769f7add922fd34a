//! Closed rational intervals and certified enclosures of `log2` and `ln`.
//!
//! `log2 N` is bracketed by running the square-and-halve digit algorithm on
//! the mantissa twice, once with every rounding downward and once upward.
//! Each path keeps an invariant against the true mantissa power, so the two
//! results enclose the exact value regardless of accumulated rounding.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::expansion::{fmt_rational, inv_pow2};

const FRAC_BITS: u32 = 60;
/// Number of binary digits of `log2` produced per path.
const RESULT_BITS: usize = 50;

/// `ln 2` lies in `[LN2_NUM, LN2_NUM + 1] / 10^20`.
const LN2_NUM: u128 = 69_314_718_055_994_530_941;
const LN2_DEN: u128 = 100_000_000_000_000_000_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: BigRational,
    pub hi: BigRational,
}

/// Outcome of comparing two enclosures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Certified {
    True,
    False,
    Unknown,
}

impl Certified {
    pub fn as_str(self) -> &'static str {
        match self {
            Certified::True => "true",
            Certified::False => "false",
            Certified::Unknown => "unknown",
        }
    }
}

impl Interval {
    pub fn new(lo: BigRational, hi: BigRational) -> Self {
        assert!(lo <= hi, "interval endpoints out of order");
        Interval { lo, hi }
    }

    pub fn point(v: BigRational) -> Self {
        Interval { lo: v.clone(), hi: v }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn width(&self) -> BigRational {
        &self.hi - &self.lo
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.lo <= v && v <= &self.hi
    }

    pub fn add(&self, other: &Interval) -> Interval {
        Interval { lo: &self.lo + &other.lo, hi: &self.hi + &other.hi }
    }

    pub fn neg(&self) -> Interval {
        Interval { lo: -&self.hi, hi: -&self.lo }
    }

    /// Product with a scalar of either sign.
    pub fn scale(&self, c: &BigRational) -> Interval {
        let (a, b) = (&self.lo * c, &self.hi * c);
        if a <= b {
            Interval { lo: a, hi: b }
        } else {
            Interval { lo: b, hi: a }
        }
    }

    /// Product of two intervals with nonnegative endpoints.
    pub fn mul_nonneg(&self, other: &Interval) -> Interval {
        assert!(!self.lo.is_negative() && !other.lo.is_negative());
        Interval { lo: &self.lo * &other.lo, hi: &self.hi * &other.hi }
    }

    /// `self > other` for every choice of points.
    pub fn certainly_gt(&self, other: &Interval) -> Certified {
        if self.lo > other.hi {
            Certified::True
        } else if self.hi <= other.lo {
            Certified::False
        } else {
            Certified::Unknown
        }
    }

    pub fn midpoint_f64(&self) -> f64 {
        ((&self.lo + &self.hi) / BigInt::from(2)).to_f64().unwrap_or(f64::NAN)
    }

    pub fn cmp_lo(&self, other: &Interval) -> Ordering {
        self.lo.cmp(&other.lo)
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", fmt_rational(&self.lo), fmt_rational(&self.hi))
    }
}

/// Digits of `log2` of a mantissa in `[1, 2)` given as a fixed-point value
/// with `FRAC_BITS` fractional bits; `round_up` selects the rounding path.
fn log2_mantissa_digits(mantissa: u128, round_up: bool) -> u64 {
    let one = 1u128 << FRAC_BITS;
    let two = one << 1;
    let mut y = mantissa;
    let mut acc = 0u64;
    for _ in 0..RESULT_BITS {
        let sq = y * y;
        y = sq >> FRAC_BITS;
        if round_up && sq & (one - 1) != 0 {
            y += 1;
        }
        acc <<= 1;
        if y >= two {
            acc |= 1;
            let odd = y & 1;
            y >>= 1;
            if round_up {
                y += odd;
            }
        }
    }
    acc
}

/// Certified enclosure of `log2 n`.
pub fn log2_interval(n: &BigUint) -> Result<Interval> {
    if n.is_zero() {
        return Err(Error::Parameter("log2 of zero".into()));
    }
    let e = n.bits() - 1;
    let exponent = BigRational::from(BigInt::from(e));
    if n.count_ones() == 1 {
        return Ok(Interval::point(exponent));
    }
    // mantissa n / 2^e as fixed point, rounded both ways
    let (m_lo, m_hi) = if e <= u64::from(FRAC_BITS) {
        let m = (n << (u64::from(FRAC_BITS) - e)).to_u128().expect("fits");
        (m, m)
    } else {
        let shift = e - u64::from(FRAC_BITS);
        let m = (n >> shift).to_u128().expect("fits");
        let exact = (n.trailing_zeros().unwrap_or(0)) >= shift;
        (m, if exact { m } else { m + 1 })
    };
    let scale = inv_pow2(RESULT_BITS);
    let lo = BigRational::from(BigInt::from(log2_mantissa_digits(m_lo, false))) * &scale;
    let hi = BigRational::from(BigInt::from(log2_mantissa_digits(m_hi, true) + 1)) * &scale;
    Ok(Interval::new(&exponent + lo, &exponent + hi))
}

pub fn ln2_interval() -> Interval {
    let den = BigInt::from(LN2_DEN);
    Interval::new(
        BigRational::new(BigInt::from(LN2_NUM), den.clone()),
        BigRational::new(BigInt::from(LN2_NUM + 1), den),
    )
}

/// Certified enclosure of `ln n`.
pub fn ln_interval(n: &BigUint) -> Result<Interval> {
    Ok(log2_interval(n)?.mul_nonneg(&ln2_interval()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn powers_of_two_are_exact() {
        for e in [0u32, 1, 5, 64, 200] {
            let iv = log2_interval(&(BigUint::from(1u8) << e)).unwrap();
            assert!(iv.is_point());
            assert_eq!(iv.lo, BigRational::from(BigInt::from(e)));
        }
    }

    #[test]
    fn encloses_float_values() {
        for n in [3u64, 5, 7, 10, 1000, 123_456_789, u64::MAX] {
            let iv = log2_interval(&BigUint::from(n)).unwrap();
            let f = (n as f64).log2();
            assert!(iv.lo.to_f64().unwrap() <= f + 1e-12 && f - 1e-12 <= iv.hi.to_f64().unwrap(), "{n}");
            assert!(iv.width() < inv_pow2(45));
        }
    }

    #[test]
    fn brackets_agree_with_integer_powers() {
        // 2^floor(q lo) <= n^q <= 2^ceil(q hi)
        let q = 1u32 << 12;
        for n in [3u32, 5, 6, 7, 11] {
            let iv = log2_interval(&BigUint::from(n)).unwrap();
            let power = BigUint::from(n).pow(q);
            let lo = (&iv.lo * BigInt::from(q)).floor().to_integer().to_u64().unwrap();
            let hi = (&iv.hi * BigInt::from(q)).ceil().to_integer().to_u64().unwrap();
            assert!(BigUint::from(1u8) << lo <= power);
            assert!(power <= BigUint::from(1u8) << hi);
        }
    }

    #[test]
    fn ln_values() {
        let iv = ln_interval(&BigUint::from(10u8)).unwrap();
        let f = 10f64.ln();
        assert!(iv.lo.to_f64().unwrap() <= f && f <= iv.hi.to_f64().unwrap());
        assert!(iv.certainly_gt(&Interval::point(BigRational::from(BigInt::from(2)))) == Certified::True);
    }
}
