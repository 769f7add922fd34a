//! The self-similar sets `Γ_{2r}` and their dimension spectrum.
//!
//! `Γ_{2r}` consists of the expansions whose balance set is exactly `2rℕ` and
//! whose deficiency is positive everywhere else. It is a product of copies of
//! the block alphabet `X_{2r}`, so box counts at scales `2^(-2rk)` are exact
//! powers of `|X_{2r}|`.

use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expansion::{pow2, BinaryExpansion};
use crate::interval::{ln_interval, log2_interval, Certified, Interval};
use crate::level::enumerate_local_level_set;
use crate::omega::{balanced_words, catalan};
use crate::takagi::tau;

/// Largest point set produced by [`enumerate_gamma_points`].
pub const MAX_GAMMA_POINTS: usize = 1 << 20;
/// Largest `r` for which spectrum counts are also enumerated word by word.
pub const SPECTRUM_ENUMERATION_LIMIT: usize = 10;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlphabetX2r {
    pub r: usize,
    pub words: Vec<Vec<u8>>,
    pub count: usize,
}

fn check_r(r: usize) -> Result<()> {
    if r == 0 {
        return Err(Error::Parameter("r must be at least 1".into()));
    }
    Ok(())
}

/// Words of length `2r` with `D_j > 0` for `j < 2r` and `D_{2r} = 0`.
pub fn alphabet_x(r: usize) -> Result<AlphabetX2r> {
    check_r(r)?;
    let words = balanced_words(2 * r, 1);
    Ok(AlphabetX2r { r, count: words.len(), words })
}

/// `|X_{2r}|` by dynamic programming over the deficiency.
pub fn alphabet_count(r: usize) -> BigUint {
    let len = 2 * r;
    let mut ways = vec![BigUint::zero(); len + 2];
    ways[0] = BigUint::one();
    for j in 1..=len {
        let mut next = vec![BigUint::zero(); len + 2];
        for (d, w) in ways.iter().enumerate().filter(|(_, w)| !w.is_zero()) {
            for nd in [d + 1, d.wrapping_sub(1)] {
                let allowed = if j == len { nd == 0 } else { nd >= 1 && nd <= len };
                if allowed {
                    next[nd] += w;
                }
            }
        }
        ways = next;
    }
    ways.swap_remove(0)
}

/// Every concatenation of `k` alphabet words, closed off by repeating the
/// last word, in increasing order.
pub fn enumerate_gamma_points(r: usize, k: usize) -> Result<Vec<BinaryExpansion>> {
    if k == 0 {
        return Err(Error::Parameter("k must be at least 1".into()));
    }
    let alphabet = alphabet_x(r)?;
    let total = (alphabet.count as u128).checked_pow(k as u32).unwrap_or(u128::MAX);
    if total > MAX_GAMMA_POINTS as u128 {
        return Err(Error::Parameter(format!("{total} points exceed the limit {MAX_GAMMA_POINTS}")));
    }
    let words = &alphabet.words;
    let mut prefixes: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 1..k {
        prefixes = prefixes
            .iter()
            .flat_map(|p| words.iter().map(move |w| [p.as_slice(), w].concat()))
            .collect();
    }
    let mut points: Vec<BinaryExpansion> = prefixes
        .par_iter()
        .flat_map_iter(|p| {
            words.iter().map(move |w| BinaryExpansion::periodic(p.clone(), w.clone()).expect("binary digits"))
        })
        .collect();
    points.sort();
    Ok(points)
}

/// Membership in `Γ_{2r}`: `D_j > 0` off multiples of `2r`, `D_{2rk} = 0`.
pub fn in_gamma(x: &BinaryExpansion, r: usize) -> bool {
    if r == 0 {
        return false;
    }
    let (n, word) = x.eventual_period();
    let block = 2 * r;
    let joint = word.len().lcm(&block);
    // past the prefix D repeats with drift; two joint periods expose any drift
    let horizon = n.div_ceil(block) * block + 2 * joint;
    let mut d = 0i64;
    for j in 1..=horizon {
        d += if x.digit(j) == 0 { 1 } else { -1 };
        let ok = if j % block == 0 { d == 0 } else { d > 0 };
        if !ok {
            return false;
        }
    }
    true
}

fn require_gamma(x: &BinaryExpansion, r: usize) -> Result<()> {
    if in_gamma(x, r) {
        Ok(())
    } else {
        Err(Error::NotInGamma { point: x.render(), two_r: 2 * r })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slope {
    Exact(BigRational),
    Bounded(Interval),
}

impl Slope {
    pub fn enclosure(&self) -> Interval {
        match self {
            Slope::Exact(v) => Interval::point(v.clone()),
            Slope::Bounded(iv) => iv.clone(),
        }
    }
}

/// `log2(count) / depth` as an exact value when `count` is a power of two.
fn log_ratio(count: &BigUint, depth: usize) -> Slope {
    let iv = log2_interval(count).expect("positive count").scale(&BigRational::new(BigInt::one(), depth.into()));
    if iv.is_point() {
        Slope::Exact(iv.lo)
    } else {
        Slope::Bounded(iv)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DimensionEstimate {
    pub r: usize,
    /// `(depth, box_count)` at depths `2r k`.
    pub scales: Vec<(usize, BigUint)>,
    /// `log2(N) / depth` at the finest scale.
    pub slope: Slope,
    /// `log2|X_{2r}| / (2r)`.
    pub theoretical: Slope,
}

/// Distinct `floor(v 2^depth)` over the given values.
fn box_count(values: &[BigRational], depth: usize) -> usize {
    let scale = BigRational::from(pow2(depth));
    values.iter().map(|v| (v * &scale).floor().to_integer()).collect::<BTreeSet<BigInt>>().len()
}

/// Box counts of the depth-`k_max` point set of `Γ_{2r}`.
pub fn box_dimension_gamma(r: usize, k_max: usize) -> Result<DimensionEstimate> {
    let points = enumerate_gamma_points(r, k_max)?;
    let values: Vec<BigRational> = points.iter().map(|p| p.to_rational()).collect();
    let scales: Vec<(usize, BigUint)> =
        (1..=k_max).map(|k| (2 * r * k, BigUint::from(box_count(&values, 2 * r * k)))).collect();
    let (depth, count) = scales.last().expect("k_max >= 1").clone();
    let alphabet = alphabet_x(r)?;
    Ok(DimensionEstimate {
        r,
        slope: log_ratio(&count, depth),
        theoretical: log_ratio(&BigUint::from(alphabet.count), 2 * r),
        scales,
    })
}

/// Box counts of `{τ(x)}` over the same point set and scales.
pub fn image_box_counts(r: usize, k_max: usize) -> Result<Vec<(usize, usize)>> {
    let points = enumerate_gamma_points(r, k_max)?;
    let values: Vec<BigRational> = points.par_iter().map(tau).collect();
    Ok((1..=k_max).map(|k| (2 * r * k, box_count(&values, 2 * r * k))).collect())
}

/// Lower bound `1/(2r)` for the dimension of local level sets through `Γ_{2r}`.
pub fn local_dim_lower(r: usize) -> Result<BigRational> {
    check_r(r)?;
    Ok(BigRational::new(BigInt::one(), BigInt::from(2 * r)))
}

/// Distinct depth-`2rk` prefixes among members of the local level set of `x`.
pub fn local_branch_count(x: &BinaryExpansion, r: usize, k: usize) -> Result<usize> {
    require_gamma(x, r)?;
    let members = enumerate_local_level_set(x, k)?;
    Ok(members.iter().map(|m| m.digits(2 * r * k)).collect::<BTreeSet<_>>().len())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BiLipschitz {
    pub ok: bool,
    /// `(τ(x2) - τ(x1)) / (x2 - x1)`.
    pub ratio: BigRational,
    pub lower: BigRational,
    pub upper: BigRational,
}

/// Checks `2^(-2r) <= (τ(x2) - τ(x1)) / (x2 - x1) <= 2^(2r)` exactly.
pub fn bilipschitz_check(r: usize, x1: &BinaryExpansion, x2: &BinaryExpansion) -> Result<BiLipschitz> {
    require_gamma(x1, r)?;
    require_gamma(x2, r)?;
    let (v1, v2) = (x1.to_rational(), x2.to_rational());
    if v1 == v2 {
        return Err(Error::DegeneratePair);
    }
    if v1 > v2 {
        return Err(Error::ReversedInterval { a: x1.render(), b: x2.render() });
    }
    let ratio = (tau(x2) - tau(x1)) / (v2 - v1);
    let upper = BigRational::from(pow2(2 * r));
    let lower = upper.recip();
    Ok(BiLipschitz { ok: lower <= ratio && ratio <= upper, ratio, lower, upper })
}

/// `y = τ(x)` for `x ∈ Γ_{2r}`.
pub fn level_image_point(r: usize, x: &BinaryExpansion) -> Result<BigRational> {
    require_gamma(x, r)?;
    Ok(tau(x))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumRow {
    pub r: usize,
    pub alpha: BigRational,
    /// `|X_{2r}|`.
    pub count: BigUint,
    /// Whether `count` was confirmed by listing every word.
    pub enumerated: bool,
    /// `C_r`, printed next to the enumerated count for comparison.
    pub catalan_r: BigUint,
    pub gamma_dim: Interval,
    /// `1 - 2 ln(r) / r`.
    pub paper_bound: Interval,
    /// `1 - 2 ln(r) / (2r)`.
    pub ordinate_bound: Interval,
    pub exceeds_bound: Certified,
}

fn one_minus_log_ratio(r: usize, denom: usize) -> Result<Interval> {
    let ln_r = ln_interval(&BigUint::from(r))?;
    let c = BigRational::new(BigInt::from(-2), BigInt::from(denom));
    Ok(ln_r.scale(&c).add(&Interval::point(BigRational::one())))
}

pub fn spectrum_row(r: usize) -> Result<SpectrumRow> {
    check_r(r)?;
    let count = alphabet_count(r);
    let enumerated = r <= SPECTRUM_ENUMERATION_LIMIT;
    if enumerated {
        let listed = alphabet_x(r)?.count;
        if BigUint::from(listed) != count {
            return Err(Error::Parameter(format!("alphabet count mismatch at r={r}: {listed} vs {count}")));
        }
    }
    let gamma_dim = log_ratio(&count, 2 * r).enclosure();
    let paper_bound = one_minus_log_ratio(r, r)?;
    let exceeds_bound = gamma_dim.certainly_gt(&paper_bound);
    Ok(SpectrumRow {
        r,
        alpha: BigRational::new(BigInt::one(), BigInt::from(2 * r)),
        count,
        enumerated,
        catalan_r: catalan(r as u64),
        gamma_dim,
        paper_bound,
        ordinate_bound: one_minus_log_ratio(r, 2 * r)?,
        exceeds_bound,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumTable {
    pub rows: Vec<SpectrumRow>,
    /// Least `r0` such that every row with `r >= r0` certifiably exceeds the bound.
    pub r0: Option<usize>,
}

pub fn spectrum_table(r_max: usize) -> Result<SpectrumTable> {
    if r_max < 2 {
        return Err(Error::Parameter("r_max must be at least 2".into()));
    }
    let rows: Vec<SpectrumRow> = (1..=r_max).into_par_iter().map(spectrum_row).collect::<Result<_>>()?;
    let r0 = rows
        .iter()
        .rev()
        .take_while(|row| row.exceeds_bound == Certified::True)
        .last()
        .map(|row| row.r);
    Ok(SpectrumTable { rows, r0 })
}
