//! Balance sets, local level sets and certified covers of global level sets.
//!
//! Two expansions are equivalent when they share the balance set `Z(x)` (the
//! zeros of `D_j`) and agree block by block up to flipping every digit of a
//! block. Flipping a block negates `D` on it, so every member of a local level
//! set has the same `|D_j|` profile; the leftmost member is the one whose
//! deficiency is `|D_j|` itself.

use std::collections::BTreeMap;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{flip_word, inv_pow2, pow2, render_word, BinaryExpansion};
use crate::omega::{balanced_words, binomial};
use crate::walk::{deficiency_zeros, ZeroStructure};

/// Largest depth accepted by [`enumerate_level_cover`].
pub const MAX_COVER_DEPTH: u32 = 64;
/// Largest number of independent block choices enumerated at once.
pub const MAX_BLOCK_CHOICES: usize = 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ZTail {
    /// Finitely many balance points; the final block is infinite.
    FiniteZ,
    /// Balance points recur with `period` beyond `start`.
    InfiniteZ { start: usize, period: usize },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlockDecomposition {
    /// `c_0 = 0` followed by every balance point up to the requested horizon.
    pub balance_points: Vec<usize>,
    pub tail_kind: ZTail,
    /// Block `k` holds digits `c_k + 1 ..= c_{k+1}`.
    pub blocks: Vec<Vec<u8>>,
    /// Digits after the last listed balance point.
    pub rest: BinaryExpansion,
}

impl BlockDecomposition {
    pub fn is_finite(&self) -> bool {
        self.tail_kind == ZTail::FiniteZ
    }

    pub fn render_blocks(&self) -> Vec<String> {
        self.blocks.iter().map(|b| render_word(b)).collect()
    }
}

fn split_blocks(x: &BinaryExpansion, points: &[usize]) -> Vec<Vec<u8>> {
    let last = points.last().copied().unwrap_or(0);
    let digits = x.digits(last);
    points.windows(2).map(|w| digits[w[0]..w[1]].to_vec()).collect()
}

fn decomposition(x: &BinaryExpansion, zeros: &ZeroStructure, listed: &[usize]) -> BlockDecomposition {
    let mut balance_points = Vec::with_capacity(listed.len() + 1);
    balance_points.push(0);
    balance_points.extend_from_slice(listed);
    let blocks = split_blocks(x, &balance_points);
    let last = *balance_points.last().expect("c_0 present");
    let tail_kind = match &zeros.recurrence {
        None => ZTail::FiniteZ,
        Some(rec) => ZTail::InfiniteZ { start: rec.start, period: rec.period },
    };
    BlockDecomposition { balance_points, tail_kind, blocks, rest: x.suffix_after(last) }
}

/// Balance points `c <= j_max` together with the exact tail classification.
pub fn balance_set(x: &BinaryExpansion, j_max: usize) -> BlockDecomposition {
    let zeros = deficiency_zeros(x);
    decomposition(x, &zeros, &zeros.up_to(j_max))
}

/// Rewrites digits `from + 1 ..= to` so that the deficiency becomes `|D_j|`.
fn fold_digits(x: &BinaryExpansion, from: usize, to: usize, mut d: i64) -> Vec<u8> {
    (from + 1..=to)
        .map(|j| {
            let next = d + if x.digit(j) == 0 { 1 } else { -1 };
            let digit = if next.abs() > d.abs() { 0 } else { 1 };
            d = next;
            digit
        })
        .collect()
}

/// Minimum of the local level set of `x`: every block replaced by whichever of
/// it and its flip starts with `0`.
pub fn leftmost_equivalent(x: &BinaryExpansion) -> BinaryExpansion {
    let zeros = deficiency_zeros(x);
    match &zeros.recurrence {
        Some(rec) => {
            let prefix = fold_digits(x, 0, rec.start, 0);
            let word = fold_digits(x, rec.start, rec.start + rec.period, 0);
            BinaryExpansion::periodic(prefix, word).expect("binary digits")
        }
        None => {
            let last = zeros.explicit.last().copied().unwrap_or(0);
            let prefix = fold_digits(x, 0, last, 0);
            let rest = x.suffix_after(last);
            let rest = if rest.digit(1) == 1 { rest.complement() } else { rest };
            rest.prepend(&prefix)
        }
    }
}

/// Members of the local level set of `x`, sorted by value then digits.
///
/// With finitely many balance points and `block_limit` at least their number,
/// the result is the whole set, including both orientations of the infinite
/// final block. Otherwise only the first `block_limit` blocks vary and the
/// remaining digits are copied from `x`.
pub fn enumerate_local_level_set(x: &BinaryExpansion, block_limit: usize) -> Result<Vec<BinaryExpansion>> {
    let zeros = deficiency_zeros(x);
    let complete = !zeros.is_infinite() && zeros.explicit.len() <= block_limit;
    let listed = zeros.first(block_limit);
    let choices = listed.len() + usize::from(complete);
    if choices > MAX_BLOCK_CHOICES {
        return Err(Error::Parameter(format!(
            "local level set needs 2^{choices} members, limit is 2^{MAX_BLOCK_CHOICES}"
        )));
    }

    let decomp = decomposition(x, &zeros, &listed);
    let flipped: Vec<Vec<u8>> = decomp.blocks.iter().map(|b| flip_word(b)).collect();
    let rests = if complete {
        vec![decomp.rest.clone(), decomp.rest.complement()]
    } else {
        vec![decomp.rest.clone()]
    };

    let mut members = Vec::with_capacity(1 << choices);
    for mask in 0u32..(1u32 << listed.len()) {
        let mut prefix = Vec::with_capacity(listed.last().copied().unwrap_or(0));
        for (i, (block, flip)) in decomp.blocks.iter().zip(&flipped).enumerate() {
            prefix.extend_from_slice(if mask >> i & 1 == 1 { flip } else { block });
        }
        members.extend(rests.iter().map(|r| r.prepend(&prefix)));
    }
    members.sort_by_cached_key(|m| (m.to_rational(), m.clone()));
    Ok(members)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Cardinality {
    /// Number of binary expansions in the set.
    Finite(BigUint),
    Uncountable,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalLevelSet {
    pub representative: BinaryExpansion,
    pub block_structure: BlockDecomposition,
    pub cardinality: Cardinality,
}

/// Summary of the local level set of `x`. The block structure lists every
/// balance point when `Z(x)` is finite, and one full period otherwise.
pub fn local_level_set(x: &BinaryExpansion) -> LocalLevelSet {
    let zeros = deficiency_zeros(x);
    let (horizon, cardinality) = match &zeros.recurrence {
        Some(rec) => (rec.start + rec.period, Cardinality::Uncountable),
        None => {
            let k = zeros.explicit.len();
            (zeros.explicit.last().copied().unwrap_or(0), Cardinality::Finite(BigUint::one() << (k + 1)))
        }
    };
    LocalLevelSet {
        representative: leftmost_equivalent(x),
        block_structure: decomposition(x, &zeros, &zeros.up_to(horizon)),
        cardinality,
    }
}

/// `[k / 2^depth, (k + 1) / 2^depth]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DyadicInterval {
    pub k: u128,
    pub depth: u32,
}

impl DyadicInterval {
    pub fn left(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k), pow2(self.depth as usize))
    }

    pub fn right(&self) -> BigRational {
        BigRational::new(BigInt::from(self.k + 1), pow2(self.depth as usize))
    }

    pub fn contains(&self, v: &BigRational) -> bool {
        &self.left() <= v && v <= &self.right()
    }

    pub fn prefix(&self) -> Vec<u8> {
        (0..self.depth).rev().map(|i| (self.k >> i & 1) as u8).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConfirmedPoint {
    pub point: BinaryExpansion,
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCover {
    pub level: BigRational,
    pub depth: u32,
    /// Surviving depth-`depth` intervals, left to right.
    pub possible: Vec<DyadicInterval>,
    /// Exact solutions, sorted by value.
    pub confirmed: Vec<ConfirmedPoint>,
    pub out_of_range: bool,
}

impl LevelCover {
    /// Whether the real `v` lies in the certified superset of `L(y)`.
    pub fn covers(&self, v: &BigRational) -> bool {
        self.confirmed.iter().any(|c| &c.value == v) || self.possible.iter().any(|i| i.contains(v))
    }

    /// Total length of the possible intervals.
    pub fn possible_measure(&self) -> BigRational {
        BigRational::from(BigInt::from(self.possible.len())) * inv_pow2(self.depth as usize)
    }
}

/// Node of the bisection: `τ(k / 2^n) = num / 2^n` and `D_n = d`.
#[derive(Clone, Copy, Debug)]
struct Node {
    k: u128,
    n: u32,
    num: i128,
    d: i64,
}

enum Verdict {
    Drop,
    Keep,
    /// `y` equals the envelope floor, which is attained only at endpoints.
    Floor,
}

impl Node {
    fn value(&self, num_over: i128, denom_extra: u32) -> BigRational {
        BigRational::new(BigInt::from(num_over), pow2(self.n as usize + denom_extra as usize))
    }

    fn judge(&self, y: &BigRational) -> Verdict {
        // On this interval τ = τ(x0) + 2^-n (τ(w) + D w) with w in [0, 1].
        let lo = self.value(self.num + i128::from(self.d.min(0)), 0);
        let hi = self.value(3 * (self.num + i128::from(self.d.max(0))) + 2, 0) / BigInt::from(3);
        if y < &lo || y > &hi {
            Verdict::Drop
        } else if y == &lo {
            Verdict::Floor
        } else if y == &hi && self.d != 0 {
            // τ(w) = 2/3 and D w = max(0, D) cannot hold together.
            Verdict::Drop
        } else {
            Verdict::Keep
        }
    }

    fn children(&self) -> [Node; 2] {
        let left = Node { k: self.k << 1, n: self.n + 1, num: self.num << 1, d: self.d + 1 };
        let right = Node {
            k: (self.k << 1) | 1,
            n: self.n + 1,
            num: (self.num << 1) + 1 + i128::from(self.d),
            d: self.d - 1,
        };
        [left, right]
    }

    /// Left endpoint and `τ` there.
    fn left_point(&self) -> (ConfirmedPoint, BigRational) {
        let point = BinaryExpansion::from_dyadic(self.k, self.n).trimmed();
        let value = point.to_rational();
        (ConfirmedPoint { point, value }, self.value(self.num, 0))
    }

    /// Right endpoint and `τ` there.
    fn right_point(&self) -> (ConfirmedPoint, BigRational) {
        let point = BinaryExpansion::from_dyadic(self.k + 1, self.n).carry_normalized().trimmed();
        let value = point.to_rational();
        (ConfirmedPoint { point, value }, self.value(self.num + i128::from(self.d), 0))
    }

    /// Exact solutions among the two endpoints and `x0 + 2^-n/3`, `x0 + 2^-n 2/3`.
    fn probe(&self, y: &BigRational) -> Vec<ConfirmedPoint> {
        let prefix = DyadicInterval { k: self.k, depth: self.n }.prefix();
        let scale: BigInt = pow2(self.n as usize) * 3;
        // τ(1/3) = τ(2/3) = 2/3
        let at_third = BigRational::new(BigInt::from(3 * self.num + 2 + i128::from(self.d)), scale.clone());
        let at_two_thirds = BigRational::new(BigInt::from(3 * self.num + 2 + 2 * i128::from(self.d)), scale);
        let periodic = [([0u8, 1], at_third), ([1u8, 0], at_two_thirds)].map(|(word, t)| {
            let point = BinaryExpansion::periodic(prefix.clone(), word.to_vec()).expect("binary digits");
            let value = point.to_rational();
            (ConfirmedPoint { point, value }, t)
        });
        [self.left_point(), self.right_point()]
            .into_iter()
            .chain(periodic)
            .filter(|(_, t)| t == y)
            .map(|(p, _)| p)
            .collect()
    }

    fn floor_points(&self) -> Vec<ConfirmedPoint> {
        match self.d.signum() {
            1 => vec![self.left_point().0],
            -1 => vec![self.right_point().0],
            _ => vec![self.left_point().0, self.right_point().0],
        }
    }
}

/// Branch-and-bound cover of `L(y)` by dyadic intervals of length `2^-depth`.
///
/// Every solution lies in a returned interval or among the confirmed points.
/// Confirmed points solve `τ(x) = y` exactly.
pub fn enumerate_level_cover(y: &BigRational, depth: u32) -> Result<LevelCover> {
    if depth > MAX_COVER_DEPTH {
        return Err(Error::Parameter(format!("depth {depth} exceeds {MAX_COVER_DEPTH}")));
    }
    let mut cover = LevelCover {
        level: y.clone(),
        depth,
        possible: Vec::new(),
        confirmed: Vec::new(),
        out_of_range: false,
    };
    let two_thirds = BigRational::new(2.into(), 3.into());
    if y < &BigRational::zero() || y > &two_thirds {
        cover.out_of_range = true;
        return Ok(cover);
    }

    let mut confirmed: BTreeMap<BigRational, BinaryExpansion> = BTreeMap::new();
    let mut record = |points: Vec<ConfirmedPoint>| {
        for p in points {
            confirmed.entry(p.value).or_insert(p.point);
        }
    };

    let root = Node { k: 0, n: 0, num: 0, d: 0 };
    let mut frontier = match root.judge(y) {
        Verdict::Keep => vec![root],
        Verdict::Floor => {
            record(root.floor_points());
            Vec::new()
        }
        Verdict::Drop => Vec::new(),
    };
    for _ in 0..depth {
        let step: Vec<(Option<Node>, Vec<ConfirmedPoint>)> = frontier
            .par_iter()
            .flat_map_iter(|node| node.children())
            .map(|child| match child.judge(y) {
                Verdict::Keep => (Some(child), Vec::new()),
                Verdict::Floor => (None, child.floor_points()),
                Verdict::Drop => (None, Vec::new()),
            })
            .collect();
        frontier = Vec::with_capacity(step.len());
        for (node, points) in step {
            frontier.extend(node);
            record(points);
        }
    }

    let probes: Vec<Vec<ConfirmedPoint>> = frontier.par_iter().map(|n| n.probe(y)).collect();
    probes.into_iter().for_each(&mut record);
    cover.possible = frontier.iter().map(|n| DyadicInterval { k: n.k, depth: n.n }).collect();
    cover.confirmed = confirmed.into_iter().map(|(value, point)| ConfirmedPoint { point, value }).collect();
    Ok(cover)
}

/// `L_m = binom(2m, m)`, the number of balanced words of length `2m`.
pub fn level_count(m: usize) -> BigUint {
    binomial(2 * m as u64, m as u64)
}

/// Counts balanced words of length `2m` by walking every lattice path.
pub fn level_count_by_paths(m: usize) -> u64 {
    fn walk(steps_left: usize, d: i64) -> u64 {
        if d.unsigned_abs() as usize > steps_left {
            return 0;
        }
        if steps_left == 0 {
            return 1;
        }
        walk(steps_left - 1, d + 1) + walk(steps_left - 1, d - 1)
    }
    walk(2 * m, 0)
}

/// `Σ 2^r(B)` over balanced nonnegative words `B` of length `2m`.
pub fn flip_class_total(m: usize) -> BigUint {
    balanced_words(2 * m, 0)
        .iter()
        .map(|w| BigUint::one() << r_of(w).expect("balanced nonnegative word"))
        .sum()
}

/// Number of `j >= 1` with `D_j(B) = 0` for a balanced nonnegative word.
pub fn r_of(word: &[u8]) -> Result<usize> {
    let mut d = 0i64;
    let mut zeros = 0;
    for &b in word {
        d += match b {
            0 => 1,
            1 => -1,
            other => return Err(Error::InvalidDigit(other)),
        };
        if d < 0 {
            break;
        }
        if d == 0 {
            zeros += 1;
        }
    }
    if d != 0 {
        return Err(Error::NotBreakpoint { word: render_word(word) });
    }
    Ok(zeros)
}

/// `S_M = Σ_{m <= M} L_m / 2^(2m+1)`.
pub fn expected_cardinality_partial(max_m: usize) -> BigRational {
    let mut sum = BigRational::zero();
    for m in 0..=max_m {
        let l_m = level_count(m);
        if m <= 8 {
            assert_eq!(l_m, BigUint::from(level_count_by_paths(m)), "lattice count mismatch at m={m}");
        }
        sum += BigRational::new(BigInt::from(l_m), pow2(2 * m + 1));
    }
    sum
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::takagi::tau;

    fn x(s: &str) -> BinaryExpansion {
        s.parse().unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn balance_sets() {
        let b = balance_set(&x("0.0110"), 50);
        assert_eq!(b.balance_points, vec![0, 2, 4]);
        assert!(b.is_finite());
        assert_eq!(b.render_blocks(), vec!["01", "10"]);
        assert_eq!(b.rest, BinaryExpansion::zero());

        let b = balance_set(&x("0.(01)"), 8);
        assert_eq!(b.balance_points, vec![0, 2, 4, 6, 8]);
        assert_eq!(b.tail_kind, ZTail::InfiniteZ { start: 2, period: 2 });

        let b = balance_set(&x("0.(000111)"), 20);
        assert_eq!(b.balance_points, vec![0, 6, 12, 18]);
        assert!(!b.is_finite());
    }

    #[test]
    fn leftmost() {
        assert_eq!(leftmost_equivalent(&x("0.0110")), x("0.0101"));
        assert_eq!(leftmost_equivalent(&x("0.1001")), x("0.0101"));
        assert_eq!(leftmost_equivalent(&x("0.(01)")), x("0.(01)"));
        assert_eq!(leftmost_equivalent(&x("0.(10)")), x("0.(01)"));
        assert_eq!(leftmost_equivalent(&x("0.(1)")), BinaryExpansion::zero());
        assert_eq!(leftmost_equivalent(&x("0.10(110100)")), x("0.01(001011)"));
    }

    #[test]
    fn local_set_of_0110() {
        let members = enumerate_local_level_set(&x("0.0110"), 10).unwrap();
        assert_eq!(members.len(), 8);
        let mut reals: Vec<BigRational> = members.iter().map(|m| m.to_rational()).collect();
        reals.dedup();
        let expected: Vec<BigRational> = [5, 6, 7, 9, 10, 11].iter().map(|&n| q(n, 16)).collect();
        assert_eq!(reals, expected);
        assert!(members.iter().all(|m| tau(m) == q(5, 8)));
        let summary = local_level_set(&x("0.0110"));
        assert_eq!(summary.cardinality, Cardinality::Finite(BigUint::from(8u32)));
        assert_eq!(summary.representative, x("0.0101"));
    }

    #[test]
    fn local_set_small_cases() {
        let members = enumerate_local_level_set(&BinaryExpansion::zero(), 4).unwrap();
        assert_eq!(members, vec![BinaryExpansion::zero(), BinaryExpansion::one()]);

        let members = enumerate_local_level_set(&x("0.(01)"), 3).unwrap();
        assert_eq!(members.len(), 8);
        assert!(members.iter().all(|m| tau(m) == q(2, 3)));
        assert_eq!(local_level_set(&x("0.(01)")).cardinality, Cardinality::Uncountable);
    }

    #[test]
    fn cover_examples() {
        let cover = enumerate_level_cover(&q(5, 8), 12).unwrap();
        for n in [5, 6, 7, 9, 10, 11] {
            assert!(cover.confirmed.iter().any(|c| c.value == q(n, 16)), "{n}/16 missing");
        }
        assert!(cover.confirmed.iter().all(|c| tau(&c.point) == q(5, 8)));

        let cover = enumerate_level_cover(&BigRational::zero(), 12).unwrap();
        assert!(cover.possible.is_empty());
        let values: Vec<BigRational> = cover.confirmed.iter().map(|c| c.value.clone()).collect();
        assert_eq!(values, vec![q(0, 1), q(1, 1)]);

        let cover = enumerate_level_cover(&q(2, 3), 12).unwrap();
        assert!(cover.covers(&q(1, 3)) && cover.covers(&q(2, 3)));
        assert!(cover.possible.iter().all(|i| i.left() >= q(1, 4) && i.right() <= q(3, 4)));

        assert!(enumerate_level_cover(&q(3, 4), 4).unwrap().out_of_range);
        assert!(enumerate_level_cover(&q(1, 2), 65).is_err());
    }

    #[test]
    fn cover_contains_brute_force_solutions() {
        // every dyadic solution at depth 10 must be confirmed
        let n = 10u32;
        for y in [q(1, 2), q(3, 8), q(17, 32), q(1, 4)] {
            let cover = enumerate_level_cover(&y, n).unwrap();
            for k in 0..=(1u128 << n) {
                let p = BinaryExpansion::from_dyadic(k, n);
                if tau(&p) == y {
                    assert!(cover.confirmed.iter().any(|c| c.value == p.to_rational()), "{p} for {y}");
                }
            }
        }
    }

    #[test]
    fn expected_cardinality() {
        assert_eq!(expected_cardinality_partial(0), q(1, 2));
        assert_eq!(expected_cardinality_partial(1), q(3, 4));
        assert_eq!(expected_cardinality_partial(2), q(15, 16));
        for m in 0..=8 {
            assert_eq!(flip_class_total(m), level_count(m));
        }
    }

    #[test]
    fn r_values() {
        assert_eq!(r_of(&[0, 1]).unwrap(), 1);
        assert_eq!(r_of(&[0, 1, 0, 1]).unwrap(), 2);
        assert_eq!(r_of(&[0, 0, 1, 1]).unwrap(), 1);
        assert_eq!(r_of(&[]).unwrap(), 0);
        assert!(r_of(&[0, 0, 1]).is_err());
    }
}
