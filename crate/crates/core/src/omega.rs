//! The deficient digit set `Ω^L = {x : D_j(x) >= 0 for all j}`.
//!
//! `Ω^L` is `[0, 1)` with the open intervals `I_B` removed, one for each small
//! breakpoint word `B` plus `I_∅ = (1/3, 1)`. Balanced nonnegative words
//! (Dyck paths) index both the removed intervals and the fine partition
//! cells of `Ω^L`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::{inv_pow2, render_word, BinaryExpansion};
use crate::takagi::tau;
use crate::walk::first_deficiency_below;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    Member,
    NonMember { first_violation: usize },
}

impl Membership {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member)
    }
}

/// Decides `x ∈ Ω^L` exactly, reporting the first `j` with `D_j(x) < 0`.
pub fn omega_membership(x: &BinaryExpansion) -> Membership {
    match first_deficiency_below(x, 0, 0) {
        None => Membership::Member,
        Some(j) => Membership::NonMember { first_violation: j },
    }
}

/// `x ∈ ½Ω^L`, i.e. `D_j(x) > 0` for every `j >= 1`.
pub fn in_half_omega(x: &BinaryExpansion) -> bool {
    first_deficiency_below(x, 0, 1).is_none()
}

/// All words of length `len` with `D_len = 0` and `D_j >= min_interior` for
/// `1 <= j < len`, in lexicographic order.
pub(crate) fn balanced_words(len: usize, min_interior: i64) -> Vec<Vec<u8>> {
    fn extend(word: &mut Vec<u8>, d: i64, len: usize, min_interior: i64, out: &mut Vec<Vec<u8>>) {
        let j = word.len();
        if j == len {
            if d == 0 {
                out.push(word.clone());
            }
            return;
        }
        let remaining = (len - j - 1) as i64;
        for (digit, next) in [(0u8, d + 1), (1u8, d - 1)] {
            let last = j + 1 == len;
            let ok = if last { next == 0 } else { next >= min_interior && next <= remaining };
            if ok {
                word.push(digit);
                extend(word, next, len, min_interior, out);
                word.pop();
            }
        }
    }
    let mut out = Vec::new();
    if len % 2 == 1 {
        return out;
    }
    extend(&mut Vec::with_capacity(len), 0, len, min_interior, &mut out);
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BreakpointKind {
    /// Member of the breakpoint set: balanced, all prefix deficiencies `>= 0`.
    Full,
    /// Member of the small breakpoint set: additionally ends in `11`.
    Small,
}

/// A balanced dyadic rational in `Ω^L`, kept as its digit word. The empty word
/// stands for `B_∅ = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BreakpointWord {
    word: Vec<u8>,
    kind: BreakpointKind,
}

pub fn is_full_breakpoint(word: &[u8]) -> bool {
    let mut d = 0i64;
    for &b in word {
        d += if b == 0 { 1 } else { -1 };
        if d < 0 {
            return false;
        }
    }
    d == 0
}

fn is_small_breakpoint(word: &[u8]) -> bool {
    word.is_empty() || (is_full_breakpoint(word) && word.ends_with(&[1, 1]))
}

impl BreakpointWord {
    pub fn new(word: Vec<u8>, kind: BreakpointKind) -> Result<Self> {
        if word.iter().any(|&b| b > 1) || !is_full_breakpoint(&word) {
            return Err(Error::NotBreakpoint { word: render_word(&word) });
        }
        if kind == BreakpointKind::Small && !is_small_breakpoint(&word) {
            return Err(Error::NotSmallBreakpoint { word: render_word(&word) });
        }
        Ok(BreakpointWord { word, kind })
    }

    pub fn parse(text: &str, kind: BreakpointKind) -> Result<Self> {
        let word = crate::expansion::parse_word(text)?;
        Self::new(word, kind)
    }

    pub fn empty(kind: BreakpointKind) -> Self {
        BreakpointWord { word: Vec::new(), kind }
    }

    pub fn word(&self) -> &[u8] {
        &self.word
    }

    pub fn kind(&self) -> BreakpointKind {
        self.kind
    }

    pub fn is_empty(&self) -> bool {
        self.word.is_empty()
    }

    /// Half the word length.
    pub fn m(&self) -> usize {
        self.word.len() / 2
    }

    pub fn as_expansion(&self) -> BinaryExpansion {
        BinaryExpansion::dyadic(self.word.clone()).expect("validated digits")
    }

    pub fn value(&self) -> BigRational {
        self.as_expansion().to_rational()
    }

    pub fn render(&self) -> String {
        if self.word.is_empty() {
            "empty".to_string()
        } else {
            render_word(&self.word)
        }
    }
}

/// All breakpoint words of length `2m` of the given kind, lexicographically.
/// For `m = 0` both kinds yield the single empty word `B_∅`.
pub fn enumerate_breakpoints(m: usize, kind: BreakpointKind) -> Vec<BreakpointWord> {
    let mut words = balanced_words(2 * m, 0);
    if kind == BreakpointKind::Small && m > 0 {
        words.retain(|w| w.ends_with(&[1, 1]));
    }
    words.into_iter().map(|word| BreakpointWord { word, kind }).collect()
}

pub fn binomial(n: u64, k: u64) -> BigUint {
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc = acc * BigUint::from(n - i) / BigUint::from(i + 1);
    }
    acc
}

/// The `m`-th Catalan number `binom(2m, m) / (m + 1)`.
pub fn catalan(m: u64) -> BigUint {
    binomial(2 * m, m) / BigUint::from(m + 1)
}

/// One open interval removed from `[0, 1]` in building `Ω^L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovedInterval {
    pub breakpoint: BreakpointWord,
    /// Decomposition `B = b_1 … b_l 0 1^k`; `None` for `B_∅`.
    pub l: Option<usize>,
    pub k: Option<usize>,
    pub left: BinaryExpansion,
    pub right: BinaryExpansion,
    pub length: BigRational,
}

impl RemovedInterval {
    pub fn left_value(&self) -> BigRational {
        self.left.to_rational()
    }

    pub fn right_value(&self) -> BigRational {
        self.right.to_rational()
    }

    /// Whether `v` lies in the open interval.
    pub fn contains_value(&self, v: &BigRational) -> bool {
        &self.left_value() < v && v < &self.right_value()
    }
}

/// The interval `I_B = (x(B)⁻, x(B)⁺)` for a small breakpoint `B`, with
/// `x(B)⁻ = 0.b_1…b_l 0 1^k (01)^∞` and `x(B)⁺ = 0.b_1…b_l 1 0^k`.
pub fn removed_interval(b: &BreakpointWord) -> Result<RemovedInterval> {
    if !is_small_breakpoint(&b.word) {
        return Err(Error::NotSmallBreakpoint { word: render_word(&b.word) });
    }
    let small = BreakpointWord { word: b.word.clone(), kind: BreakpointKind::Small };
    if b.is_empty() {
        return Ok(RemovedInterval {
            breakpoint: small,
            l: None,
            k: None,
            left: BinaryExpansion::periodic(Vec::new(), vec![0, 1])?,
            right: BinaryExpansion::one(),
            length: BigRational::new(2.into(), 3.into()),
        });
    }
    let word = &b.word;
    let k = word.iter().rev().take_while(|&&d| d == 1).count();
    let l = word.len() - k - 1;
    let left = BinaryExpansion::periodic(word.clone(), vec![0, 1])?;
    let mut right_digits = word[..l].to_vec();
    right_digits.push(1);
    right_digits.extend(std::iter::repeat_n(0, k));
    let right = BinaryExpansion::dyadic(right_digits)?;
    let length = inv_pow2(k + l) / BigInt::from(3);

    let (lv, rv) = (left.to_rational(), right.to_rational());
    assert_eq!(&rv - &lv, length, "removed interval width for {}", b.render());
    assert_eq!(tau(&left) - tau(&right), length, "removed interval drop for {}", b.render());

    Ok(RemovedInterval { breakpoint: small, l: Some(l), k: Some(k), left, right, length })
}

/// `I_∅` and every `I_B` with `|B| <= max_len`, ordered by left endpoint.
pub fn removed_intervals(max_len: usize) -> Vec<RemovedInterval> {
    let mut out: Vec<RemovedInterval> = (0..=max_len / 2)
        .flat_map(|m| enumerate_breakpoints(m, BreakpointKind::Small))
        .map(|b| removed_interval(&b).expect("enumerated words are small breakpoints"))
        .collect();
    out.sort_by_cached_key(|iv| iv.left_value());
    out
}

/// Total length of `I_∅` and every `I_B` with `|B| <= max_len`.
pub fn removed_length_partial_sum(max_len: usize) -> BigRational {
    let mut sum = BigRational::new(2.into(), 3.into());
    for m in 2..=max_len / 2 {
        for b in enumerate_breakpoints(m, BreakpointKind::Small) {
            let k = b.word.iter().rev().take_while(|&&d| d == 1).count();
            let l = b.word.len() - k - 1;
            sum += inv_pow2(k + l) / BigInt::from(3);
        }
    }
    sum
}

/// Closed components of `[0, 1)` minus the removed intervals with
/// `|B| <= max_len`; their endpoints all lie in `Ω^L`.
pub fn coarse_cover(max_len: usize) -> Vec<(BinaryExpansion, BinaryExpansion)> {
    let mut out = Vec::new();
    let mut start = BinaryExpansion::zero();
    for iv in removed_intervals(max_len) {
        out.push((start, iv.left.clone()));
        start = iv.right.clone();
    }
    out
}

/// The fine partition cell `Ω^L(B') = B' + 2^{-2m} · ½Ω^L`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinePartitionCell {
    pub base: BreakpointWord,
    /// `2^{-2m}`.
    pub scale: BigRational,
}

pub fn fine_partition_cell(base: &BreakpointWord) -> FinePartitionCell {
    let base = BreakpointWord { word: base.word.clone(), kind: BreakpointKind::Full };
    let scale = inv_pow2(base.word.len());
    FinePartitionCell { base, scale }
}

impl FinePartitionCell {
    /// `x` starts with `B'` and `D_j(x) > 0` for every `j > 2m`.
    pub fn contains(&self, x: &BinaryExpansion) -> bool {
        let len = self.base.word.len();
        x.digits(len) == self.base.word && first_deficiency_below(x, len, 1).is_none()
    }

    /// Convex hull `[B', B' + 2^{-2m}/6]`; `½Ω^L ⊆ [0, 1/6]`.
    pub fn hull(&self) -> (BigRational, BigRational) {
        let lo = self.base.value();
        let hi = &lo + &self.scale / BigInt::from(6);
        (lo, hi)
    }

    /// The point `B' + 2^{-2m} · (x'/2)` for `x' ∈ Ω^L`.
    pub fn point(&self, x_prime: &BinaryExpansion) -> BinaryExpansion {
        x_prime.halve().prepend(&self.base.word)
    }
}

/// Number of words of length `2m` with nonnegative deficiency returning to
/// zero, by dynamic programming over the deficiency (independent of the
/// backtracking enumerator).
pub fn count_breakpoints_dp(m: usize) -> BigUint {
    let len = 2 * m;
    let mut ways = vec![BigUint::zero(); len + 2];
    ways[0] = BigUint::one();
    for _ in 0..len {
        let mut next = vec![BigUint::zero(); len + 2];
        for d in 0..=len {
            if ways[d].is_zero() {
                continue;
            }
            next[d + 1] += &ways[d];
            if d > 0 {
                next[d - 1] += &ways[d];
            }
        }
        ways = next;
    }
    ways[0].clone()
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

    fn words(bs: &[BreakpointWord]) -> Vec<String> {
        bs.iter().map(|b| b.render()).collect()
    }

    #[test]
    fn membership_examples() {
        assert_eq!(omega_membership(&x("0.(01)")), Membership::Member);
        assert_eq!(omega_membership(&x("0.0110")), Membership::NonMember { first_violation: 3 });
        assert_eq!(omega_membership(&BinaryExpansion::zero()), Membership::Member);
        assert_eq!(omega_membership(&BinaryExpansion::one()), Membership::NonMember { first_violation: 1 });
        // 1/4 is a member, its ones-tail twin is not
        assert!(omega_membership(&x("0.01")).is_member());
        assert_eq!(omega_membership(&x("0.00(1)")), Membership::NonMember { first_violation: 5 });
        // negative drift fails eventually
        assert_eq!(omega_membership(&x("0.0000(011)")), Membership::NonMember { first_violation: 19 });
    }

    #[test]
    fn breakpoint_enumeration() {
        assert_eq!(words(&enumerate_breakpoints(1, BreakpointKind::Full)), ["01"]);
        assert_eq!(words(&enumerate_breakpoints(2, BreakpointKind::Full)), ["0011", "0101"]);
        assert_eq!(words(&enumerate_breakpoints(2, BreakpointKind::Small)), ["0011"]);
        assert!(enumerate_breakpoints(1, BreakpointKind::Small).is_empty());
        assert_eq!(words(&enumerate_breakpoints(3, BreakpointKind::Small)), ["000111", "001011", "010011"]);
        assert_eq!(enumerate_breakpoints(0, BreakpointKind::Full).len(), 1);
    }

    #[test]
    fn catalan_values() {
        assert_eq!(catalan(0), BigUint::from(1u32));
        assert_eq!(catalan(3), BigUint::from(5u32));
        assert_eq!(catalan(4), BigUint::from(14u32));
        for m in 0..=10 {
            assert_eq!(BigUint::from(enumerate_breakpoints(m, BreakpointKind::Full).len()), catalan(m as u64));
            assert_eq!(count_breakpoints_dp(m), catalan(m as u64));
        }
    }

    #[test]
    fn removed_interval_examples() {
        let empty = removed_interval(&BreakpointWord::empty(BreakpointKind::Small)).unwrap();
        assert_eq!((empty.left_value(), empty.right_value()), (q(1, 3), q(1, 1)));
        assert_eq!(empty.length, q(2, 3));

        let b = BreakpointWord::parse("0011", BreakpointKind::Small).unwrap();
        let iv = removed_interval(&b).unwrap();
        assert_eq!((iv.l, iv.k), (Some(1), Some(2)));
        assert_eq!((iv.left_value(), iv.right_value()), (q(5, 24), q(1, 4)));
        assert_eq!(iv.length, q(1, 24));

        let not_small = BreakpointWord::parse("0101", BreakpointKind::Full).unwrap();
        assert!(removed_interval(&not_small).is_err());
        assert!(BreakpointWord::parse("0110", BreakpointKind::Full).is_err());
    }

    #[test]
    fn partial_sums() {
        assert_eq!(removed_length_partial_sum(0), q(2, 3));
        assert_eq!(removed_length_partial_sum(4), q(17, 24));
        let mut prev = removed_length_partial_sum(2);
        for len in (4..=20).step_by(2) {
            let s = removed_length_partial_sum(len);
            assert!(s > prev && s < q(1, 1));
            prev = s;
        }
    }

    #[test]
    fn cell_membership() {
        let root = fine_partition_cell(&BreakpointWord::empty(BreakpointKind::Full));
        assert!(root.contains(&x("0.0(01)")));
        assert!(!root.contains(&x("0.(01)")));
        let c01 = fine_partition_cell(&BreakpointWord::parse("01", BreakpointKind::Full).unwrap());
        let (lo, hi) = c01.hull();
        assert_eq!(lo, q(1, 4));
        assert!(hi <= q(1, 4) + q(1, 8));
        // D stays positive after j = 2
        assert!(c01.contains(&x("0.010(01)")));
        // returns to zero at j = 4, 6, …
        assert!(!c01.contains(&x("0.01(01)")));
    }

    #[test]
    fn coarse_cover_endpoints_are_members() {
        for (a, b) in coarse_cover(10) {
            assert!(omega_membership(&a).is_member(), "{a}");
            assert!(omega_membership(&b).is_member(), "{b}");
            assert!(a.to_rational() <= b.to_rational());
        }
    }
}
