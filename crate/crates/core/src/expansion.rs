//! Binary expansions of points in `[0, 1]` and their digit statistics.
//!
//! An expansion is a finite prefix followed by a tail that is all zeros, all
//! ones, or a repeating word. The two expansions of a dyadic rational
//! (`0.011000…` and `0.010111…`) are distinct values of [`BinaryExpansion`];
//! [`BinaryExpansion::real_equal`] compares by real value instead.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// The infinite part of an expansion.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Tail {
    Zeros,
    Ones,
    /// A primitive repeating word containing both digits.
    Periodic(Vec<u8>),
}

impl Tail {
    /// The repeating word; `[0]` for `Zeros` and `[1]` for `Ones`.
    pub fn word(&self) -> &[u8] {
        match self {
            Tail::Zeros => &[0],
            Tail::Ones => &[1],
            Tail::Periodic(w) => w,
        }
    }

    fn flipped(&self) -> Tail {
        match self {
            Tail::Zeros => Tail::Ones,
            Tail::Ones => Tail::Zeros,
            Tail::Periodic(w) => Tail::Periodic(flip_word(w)),
        }
    }
}

/// Digit counts over the first `j` digits of an expansion.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DigitProfile {
    pub j: usize,
    pub ones: usize,
    pub zeros: usize,
    /// `zeros - ones`, i.e. `j - 2 * ones`.
    pub deficiency: i64,
}

#[derive(Clone, Debug)]
pub struct BinaryExpansion {
    prefix: Vec<u8>,
    tail: Tail,
}

pub fn flip_word(word: &[u8]) -> Vec<u8> {
    word.iter().map(|b| 1 - b).collect()
}

/// Deficiency `D_len(word)` of a finite word.
pub fn word_deficiency(word: &[u8]) -> i64 {
    word.iter().map(|&b| if b == 0 { 1 } else { -1 }).sum()
}

pub fn render_word(word: &[u8]) -> String {
    word.iter().map(|&b| if b == 0 { '0' } else { '1' }).collect()
}

pub fn parse_word(text: &str) -> Result<Vec<u8>> {
    text.chars()
        .map(|c| match c {
            '0' => Ok(0),
            '1' => Ok(1),
            _ => Err(Error::MalformedExpansion {
                literal: text.to_string(),
                reason: "digits must be 0 or 1",
            }),
        })
        .collect()
}

fn check_digits(word: &[u8]) -> Result<()> {
    match word.iter().find(|&&b| b > 1) {
        Some(&b) => Err(Error::InvalidDigit(b)),
        None => Ok(()),
    }
}

/// Shortest word whose repetition gives `word`.
fn primitive_root(word: &[u8]) -> &[u8] {
    let q = word.len();
    for d in 1..=q {
        if q.is_multiple_of(d) && (d..q).all(|i| word[i] == word[i - d]) {
            return &word[..d];
        }
    }
    word
}

/// Integer value of a word read as a binary numeral.
pub fn word_value(word: &[u8]) -> BigUint {
    let mut v = BigUint::zero();
    for &b in word {
        v <<= 1u32;
        if b == 1 {
            v += 1u32;
        }
    }
    v
}

pub fn pow2(n: usize) -> BigInt {
    BigInt::one() << n
}

/// `1 / 2^n` as an exact rational.
pub fn inv_pow2(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), pow2(n))
}

impl BinaryExpansion {
    /// Builds an expansion, normalizing periodic tails: constant words become
    /// `Zeros`/`Ones`, the word is reduced to its primitive root, and trailing
    /// prefix digits that continue the period are absorbed into it.
    pub fn new(prefix: Vec<u8>, tail: Tail) -> Result<Self> {
        check_digits(&prefix)?;
        let tail = match tail {
            Tail::Periodic(w) => {
                check_digits(&w)?;
                if w.is_empty() {
                    return Err(Error::MalformedExpansion {
                        literal: render_word(&prefix),
                        reason: "empty periodic word",
                    });
                }
                if w.iter().all(|&b| b == 0) {
                    Tail::Zeros
                } else if w.iter().all(|&b| b == 1) {
                    Tail::Ones
                } else {
                    let mut prefix = prefix;
                    let mut word = primitive_root(&w).to_vec();
                    while prefix.last().is_some() && prefix.last() == word.last() {
                        prefix.pop();
                        word.rotate_right(1);
                    }
                    return Ok(BinaryExpansion { prefix, tail: Tail::Periodic(word) });
                }
            }
            t => t,
        };
        Ok(BinaryExpansion { prefix, tail })
    }

    /// `0.prefix 000…`
    pub fn dyadic(prefix: Vec<u8>) -> Result<Self> {
        Self::new(prefix, Tail::Zeros)
    }

    pub fn zero() -> Self {
        BinaryExpansion { prefix: Vec::new(), tail: Tail::Zeros }
    }

    /// `0.111…`, the only expansion of 1 in the grammar.
    pub fn one() -> Self {
        BinaryExpansion { prefix: Vec::new(), tail: Tail::Ones }
    }

    /// `k / 2^n` written with exactly `n` prefix digits and a zero tail;
    /// `k = 2^n` yields `0.(1)`.
    pub fn from_dyadic(k: u128, n: u32) -> Self {
        if n < 128 && k == 1u128 << n {
            return Self::one();
        }
        let prefix = (0..n).rev().map(|i| ((k >> i) & 1) as u8).collect();
        BinaryExpansion { prefix, tail: Tail::Zeros }
    }

    pub fn periodic(prefix: Vec<u8>, word: Vec<u8>) -> Result<Self> {
        Self::new(prefix, Tail::Periodic(word))
    }

    pub fn prefix(&self) -> &[u8] {
        &self.prefix
    }

    pub fn tail(&self) -> &Tail {
        &self.tail
    }

    /// Digit `b_j`, 1-indexed.
    pub fn digit(&self, j: usize) -> u8 {
        assert!(j >= 1, "digits are 1-indexed");
        let n = self.prefix.len();
        if j <= n {
            self.prefix[j - 1]
        } else {
            let w = self.tail.word();
            w[(j - n - 1) % w.len()]
        }
    }

    /// The first `n` digits.
    pub fn digits(&self, n: usize) -> Vec<u8> {
        (1..=n).map(|j| self.digit(j)).collect()
    }

    /// Deficiency `D_j`, with `D_0 = 0`.
    pub fn deficiency(&self, j: usize) -> i64 {
        (1..=j).map(|i| if self.digit(i) == 0 { 1 } else { -1 }).sum()
    }

    pub fn digit_profile(&self, j: usize) -> DigitProfile {
        let ones = (1..=j).filter(|&i| self.digit(i) == 1).count();
        DigitProfile { j, ones, zeros: j - ones, deficiency: j as i64 - 2 * ones as i64 }
    }

    /// The expansion `0.b_{c+1} b_{c+2} …`.
    pub fn suffix_after(&self, c: usize) -> BinaryExpansion {
        let n = self.prefix.len();
        if c <= n {
            return BinaryExpansion { prefix: self.prefix[c..].to_vec(), tail: self.tail.clone() };
        }
        match &self.tail {
            Tail::Periodic(w) => {
                let mut w = w.clone();
                let shift = (c - n) % w.len();
                w.rotate_left(shift);
                BinaryExpansion { prefix: Vec::new(), tail: Tail::Periodic(w) }
            }
            t => BinaryExpansion { prefix: Vec::new(), tail: t.clone() },
        }
    }

    /// `0.word b_1 b_2 …`, i.e. `word / 2^|word| + x / 2^|word|`.
    pub fn prepend(&self, word: &[u8]) -> BinaryExpansion {
        let mut prefix = word.to_vec();
        prefix.extend_from_slice(&self.prefix);
        BinaryExpansion::new(prefix, self.tail.clone()).expect("digits already validated")
    }

    /// Digit-wise complement, the expansion of `1 - x`.
    pub fn complement(&self) -> BinaryExpansion {
        BinaryExpansion::new(flip_word(&self.prefix), self.tail.flipped())
            .expect("digits already validated")
    }

    /// Right shift by one digit, the expansion of `x / 2`.
    pub fn halve(&self) -> BinaryExpansion {
        self.prepend(&[0])
    }

    /// True when the real value is a dyadic rational.
    pub fn is_dyadic(&self) -> bool {
        !matches!(self.tail, Tail::Periodic(_))
    }

    /// For a `Ones` tail, the other expansion of the same dyadic rational
    /// (`Zeros` tail). The value 1 has no such expansion and is returned as is.
    pub fn carry_normalized(&self) -> BinaryExpansion {
        if self.tail != Tail::Ones {
            return self.clone();
        }
        match self.prefix.iter().rposition(|&b| b == 0) {
            None => Self::one(),
            Some(i) => {
                let mut prefix = self.prefix[..i].to_vec();
                prefix.push(1);
                BinaryExpansion { prefix, tail: Tail::Zeros }
            }
        }
    }

    /// Same digit sequence with redundant trailing prefix digits dropped
    /// (`0.0100` becomes `0.01`).
    pub fn trimmed(&self) -> BinaryExpansion {
        BinaryExpansion { prefix: self.canonical_prefix().to_vec(), tail: self.tail.clone() }
    }

    pub fn to_rational(&self) -> BigRational {
        let n = self.prefix.len();
        let head = BigRational::new(BigInt::from(word_value(&self.prefix)), pow2(n));
        let tail = match &self.tail {
            Tail::Zeros => BigRational::zero(),
            Tail::Ones => BigRational::one(),
            Tail::Periodic(w) => {
                BigRational::new(BigInt::from(word_value(w)), pow2(w.len()) - BigInt::one())
            }
        };
        head + tail * inv_pow2(n)
    }

    pub fn real_equal(&self, other: &BinaryExpansion) -> bool {
        self.to_rational() == other.to_rational()
    }

    /// Prefix with trailing digits equal to a constant tail removed; two
    /// expansions are the same digit sequence iff their canonical forms agree.
    fn canonical_prefix(&self) -> &[u8] {
        let strip = match self.tail {
            Tail::Zeros => 0,
            Tail::Ones => 1,
            Tail::Periodic(_) => return &self.prefix,
        };
        let end = self.prefix.iter().rposition(|&b| b != strip).map_or(0, |i| i + 1);
        &self.prefix[..end]
    }

    pub fn render(&self) -> String {
        let mut s = String::from("0.");
        s.push_str(&render_word(&self.prefix));
        match &self.tail {
            Tail::Zeros => {
                if self.prefix.is_empty() {
                    s.push('0');
                }
            }
            Tail::Ones => s.push_str("(1)"),
            Tail::Periodic(w) => {
                s.push('(');
                s.push_str(&render_word(w));
                s.push(')');
            }
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self> {
        let malformed = |reason| Error::MalformedExpansion { literal: text.to_string(), reason };
        let body = text.trim().strip_prefix("0.").ok_or_else(|| malformed("must start with \"0.\""))?;
        let (head, periodic) = match body.find('(') {
            None => (body, None),
            Some(i) => {
                let rest = &body[i + 1..];
                let inner = rest.strip_suffix(')').ok_or_else(|| malformed("unterminated period"))?;
                if inner.is_empty() {
                    return Err(malformed("empty periodic word"));
                }
                (&body[..i], Some(inner))
            }
        };
        if head.is_empty() && periodic.is_none() {
            return Err(malformed("no digits"));
        }
        let prefix = parse_word(head).map_err(|_| malformed("digits must be 0 or 1"))?;
        match periodic {
            None => Ok(BinaryExpansion { prefix, tail: Tail::Zeros }),
            Some(w) => {
                let word = parse_word(w).map_err(|_| malformed("digits must be 0 or 1"))?;
                Self::new(prefix, Tail::Periodic(word))
            }
        }
    }

    /// The expansion of a rational in `[0, 1]`; dyadic values get a zero tail
    /// and 1 becomes `0.(1)`.
    pub fn from_rational(v: &BigRational) -> Result<Self> {
        if v < &BigRational::zero() || v > &BigRational::one() {
            return Err(Error::Parameter(format!("{} is outside [0, 1]", fmt_rational(v))));
        }
        if v.is_one() {
            return Ok(Self::one());
        }
        let q = v.denom().clone();
        let mut rem = v.numer().clone();
        let mut seen: HashMap<BigInt, usize> = HashMap::new();
        let mut digits = Vec::new();
        while !rem.is_zero() {
            if let Some(&start) = seen.get(&rem) {
                let word = digits.split_off(start);
                return Self::new(digits, Tail::Periodic(word));
            }
            seen.insert(rem.clone(), digits.len());
            rem <<= 1u32;
            if rem >= q {
                rem -= &q;
                digits.push(1);
            } else {
                digits.push(0);
            }
        }
        Self::new(digits, Tail::Zeros)
    }

    /// Parses an expansion literal (`0.01(10)`) or a rational (`p/q`).
    pub fn parse_point(text: &str) -> Result<Self> {
        let text = text.trim();
        if text.starts_with("0.") {
            Self::parse(text)
        } else {
            Self::from_rational(&parse_rational(text)?)
        }
    }

    /// Number of digits after which every later digit lies in the periodic tail,
    /// together with the repeating word.
    pub fn eventual_period(&self) -> (usize, &[u8]) {
        (self.prefix.len(), self.tail.word())
    }
}

impl PartialEq for BinaryExpansion {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_prefix() == other.canonical_prefix() && self.tail == other.tail
    }
}

impl Eq for BinaryExpansion {}

impl Hash for BinaryExpansion {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_prefix().hash(state);
        self.tail.hash(state);
    }
}

/// Lexicographic order on digit sequences.
impl Ord for BinaryExpansion {
    fn cmp(&self, other: &Self) -> Ordering {
        let q1 = self.tail.word().len();
        let q2 = other.tail.word().len();
        let horizon = self.prefix.len().max(other.prefix.len()) + q1.lcm(&q2);
        for j in 1..=horizon {
            match self.digit(j).cmp(&other.digit(j)) {
                Ordering::Equal => continue,
                ord => return ord,
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for BinaryExpansion {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryExpansion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

impl FromStr for BinaryExpansion {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

/// Renders a rational as `p/q`, always with an explicit denominator.
pub fn fmt_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `p/q` or an integer `p`.
pub fn parse_rational(text: &str) -> Result<BigRational> {
    let bad = || Error::Parameter(format!("not a rational: {text:?}"));
    let text = text.trim();
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| bad())?;
    let q: BigInt = q.trim().parse().map_err(|_| bad())?;
    if q.is_zero() {
        return Err(bad());
    }
    Ok(BigRational::new(p, q))
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

    #[test]
    fn rationals_to_expansions() {
        let cases = [(1, 3, "0.(01)"), (3, 8, "0.011"), (0, 1, "0.0"), (1, 1, "0.(1)"), (5, 24, "0.001(10)"), (1, 6, "0.0(01)")];
        for (p, d, lit) in cases {
            let e = BinaryExpansion::from_rational(&q(p, d)).unwrap();
            assert_eq!(e, x(lit), "{p}/{d}");
            assert_eq!(e.to_rational(), q(p, d));
        }
        for d in 1..60 {
            for p in 0..=d {
                assert_eq!(BinaryExpansion::from_rational(&q(p, d)).unwrap().to_rational(), q(p, d));
            }
        }
        assert!(BinaryExpansion::from_rational(&q(3, 2)).is_err());
        assert_eq!(BinaryExpansion::parse_point("1/3").unwrap(), x("0.(01)"));
        assert_eq!(BinaryExpansion::parse_point("0.0110").unwrap(), x("0.011"));
    }

    #[test]
    fn parse_structure() {
        let a = x("0.(01)");
        assert!(a.prefix().is_empty());
        assert_eq!(a.tail(), &Tail::Periodic(vec![0, 1]));

        let b = x("0.0110");
        assert_eq!(b.prefix(), &[0, 1, 1, 0]);
        assert_eq!(b.tail(), &Tail::Zeros);

        let c = x("0.01(1)");
        assert_eq!(c.prefix(), &[0, 1]);
        assert_eq!(c.tail(), &Tail::Ones);
    }

    #[test]
    fn parse_rejects_malformed() {
        for bad in ["", "0.", "1.0", "0.012", "0.()", "0.(01", "0.(0a)", ".01", "0.01)"] {
            assert!(BinaryExpansion::parse(bad).is_err(), "{bad} accepted");
        }
    }

    #[test]
    fn periodic_normalization() {
        assert_eq!(x("0.(0101)").tail(), &Tail::Periodic(vec![0, 1]));
        // trailing prefix digit continuing the period is absorbed
        let a = x("0.1(01)");
        assert!(a.prefix().is_empty());
        assert_eq!(a.tail(), &Tail::Periodic(vec![1, 0]));
        let b = x("0.0011(01)");
        assert_eq!(b.prefix(), &[0, 0, 1]);
        assert_eq!(b.tail(), &Tail::Periodic(vec![1, 0]));
        assert_eq!(b.render(), "0.001(10)");
        assert_eq!(x("0.01(0)").tail(), &Tail::Zeros);
    }

    #[test]
    fn rational_values() {
        assert_eq!(x("0.(01)").to_rational(), q(1, 3));
        assert_eq!(x("0.0110").to_rational(), q(3, 8));
        assert_eq!(x("0.0011(01)").to_rational(), q(5, 24));
        assert_eq!(x("0.(1)").to_rational(), q(1, 1));
        assert_eq!(x("0.0").to_rational(), q(0, 1));
    }

    #[test]
    fn digit_profiles() {
        let a = x("0.0110");
        assert_eq!(a.digit_profile(2).deficiency, 0);
        assert_eq!(a.digit_profile(3).deficiency, -1);
        let p = a.digit_profile(6);
        assert_eq!((p.ones, p.zeros), (2, 4));
        let third = x("0.(01)");
        for k in 1..40 {
            assert_eq!(third.deficiency(2 * k), 0);
        }
    }

    #[test]
    fn real_equality() {
        assert!(x("0.0110").real_equal(&x("0.0101(1)")));
        assert!(x("0.0110").real_equal(&x("0.0110")));
        assert!(!x("0.(01)").real_equal(&x("0.0101")));
        // distinct as expansions
        assert_ne!(x("0.0110"), x("0.0101(1)"));
        assert_eq!(x("0.0110"), x("0.011"));
    }

    #[test]
    fn shifts_and_complements() {
        let a = x("0.0011(01)");
        assert_eq!(a.complement().to_rational(), q(19, 24));
        assert_eq!(a.halve().to_rational(), q(5, 48));
        assert_eq!(a.suffix_after(4), x("0.(01)"));
        assert_eq!(a.suffix_after(7), x("0.(10)"));
        assert_eq!(x("0.0101(1)").carry_normalized(), x("0.011"));
        assert_eq!(x("0.(1)").carry_normalized(), x("0.(1)"));
    }

    #[test]
    fn lexicographic_order() {
        assert!(x("0.0101") < x("0.0110"));
        assert!(x("0.0101(1)") < x("0.011"));
        assert!(x("0.(01)") < x("0.011"));
        assert_eq!(x("0.(01)").cmp(&x("0.01(01)")), Ordering::Equal);
    }

    #[test]
    fn rational_strings() {
        assert_eq!(fmt_rational(&q(2, 3)), "2/3");
        assert_eq!(fmt_rational(&q(1, 1)), "1/1");
        assert_eq!(parse_rational("10/16").unwrap(), q(5, 8));
        assert_eq!(parse_rational("0").unwrap(), q(0, 1));
        assert!(parse_rational("1/0").is_err());
    }
}
