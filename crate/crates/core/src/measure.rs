//! The singular function `τ^S` and its measure `μ_S`.
//!
//! On `Ω^L`, `τ^S(x) = τ(x) + x`; elsewhere `τ^S` is constant on each removed
//! interval and equal to its value at the interval's left endpoint, which is
//! the greatest point of `Ω^L` below `x`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::expansion::{fmt_rational, inv_pow2, BinaryExpansion};
use crate::omega::{catalan, coarse_cover, fine_partition_cell, omega_membership, BreakpointWord, Membership};
use crate::takagi::tau;

/// Greatest element of `Ω^L` that is `<= x`.
pub fn sup_omega_below(x: &BinaryExpansion) -> BinaryExpansion {
    let x = x.carry_normalized();
    match omega_membership(&x) {
        Membership::Member => x,
        // D_{j-1} = 0 and b_j = 1; putting 0 there and completing greedily
        // alternates 1, 0, 1, …
        Membership::NonMember { first_violation: j } => {
            BinaryExpansion::periodic(x.digits(j - 1), vec![0, 1]).expect("binary digits")
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    InOmega,
    /// Left endpoint of the removed interval containing the point.
    SupWitness(BinaryExpansion),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularValue {
    pub point: BinaryExpansion,
    pub value: BigRational,
    pub witness: Witness,
}

pub fn tau_s(x: &BinaryExpansion) -> SingularValue {
    let w = sup_omega_below(x);
    let value = tau(&w) + w.to_rational();
    let witness = if w.real_equal(x) { Witness::InOmega } else { Witness::SupWitness(w) };
    SingularValue { point: x.clone(), value, witness }
}

/// `μ_S([a, b]) = τ^S(b) - τ^S(a)`.
pub fn mu_s_interval(a: &BinaryExpansion, b: &BinaryExpansion) -> Result<BigRational> {
    let (av, bv) = (a.to_rational(), b.to_rational());
    if av > bv {
        return Err(Error::ReversedInterval { a: fmt_rational(&av), b: fmt_rational(&bv) });
    }
    Ok(tau_s(b).value - tau_s(a).value)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FineMass {
    /// `τ(Ω^L(B'))`, a closed interval of length `mass`.
    pub tau_image: (BigRational, BigRational),
    pub mass: BigRational,
}

/// Mass `2^-(2m+1)` of the fine partition cell of `B'` and its image under `τ`.
///
/// The image endpoints are evaluated at the extreme points `x' = 0` and
/// `x' = 1/3` of `Ω^L`, where `τ^S` takes the values 0 and 1.
pub fn fine_partition_mass(base: &BreakpointWord) -> FineMass {
    let cell = fine_partition_cell(base);
    let mass = inv_pow2(base.word().len() + 1);
    let lo = tau(&cell.point(&BinaryExpansion::zero()));
    let hi = tau(&cell.point(&"0.(01)".parse().expect("literal")));
    debug_assert_eq!(&hi - &lo, mass);
    FineMass { tau_image: (lo, hi), mass }
}

/// Upper bound for the mass of the cell of `B'` from the depth-`2n` cover of
/// `Ω^L`: the sum of `μ_S` over the images of the cover components. Equals
/// `2^-(2m+1) (1 + meas P_{2n})`, which decreases to the cell mass.
pub fn fine_partition_mass_bound(base: &BreakpointWord, n: usize) -> BigRational {
    let cell = fine_partition_cell(base);
    coarse_cover(2 * n)
        .iter()
        .map(|(a, b)| mu_s_interval(&cell.point(a), &cell.point(b)).expect("ordered components"))
        .sum()
}

/// Both sides of the self-similarity law for the cell of `B'`:
/// `μ_S([x1, x2])` and `2^-(2m+1) (μ_S([x1', x2']) + x2' - x1')` where
/// `x_i = B' + 2^-(2m+1) x_i'`.
pub fn selfsimilar_sides(
    base: &BreakpointWord,
    x1p: &BinaryExpansion,
    x2p: &BinaryExpansion,
) -> Result<(BigRational, BigRational)> {
    for p in [x1p, x2p] {
        if !omega_membership(&p.carry_normalized()).is_member() {
            return Err(Error::NotInOmega(p.render()));
        }
    }
    let inner = mu_s_interval(x1p, x2p)?;
    let cell = fine_partition_cell(base);
    let lhs = mu_s_interval(&cell.point(x1p), &cell.point(x2p))?;
    let rhs = (inner + x2p.to_rational() - x1p.to_rational()) * inv_pow2(base.word().len() + 1);
    Ok((lhs, rhs))
}

pub fn verify_selfsimilar_measure(base: &BreakpointWord, x1p: &BinaryExpansion, x2p: &BinaryExpansion) -> Result<bool> {
    selfsimilar_sides(base, x1p, x2p).map(|(l, r)| l == r)
}

/// `Σ_{m <= M} C_m 2^-(2m+1)`.
pub fn mass_partial_sum(max_m: usize) -> BigRational {
    (0..=max_m).map(|m| mass_level(m).1).sum()
}

/// `(C_m, C_m 2^-(2m+1))`: cell count and total mass at level `m`.
pub fn mass_level(m: usize) -> (BigUint, BigRational) {
    let c = catalan(m as u64);
    let total = BigRational::from(BigInt::from(c.clone())) * inv_pow2(2 * m + 1);
    (c, total)
}

/// `τ^S(0) = 0` and `τ^S(1) = 1`.
pub fn normalization_holds() -> bool {
    tau_s(&BinaryExpansion::zero()).value.is_zero() && tau_s(&BinaryExpansion::one()).value.is_one()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::omega::{enumerate_breakpoints, removed_intervals, BreakpointKind};

    fn x(s: &str) -> BinaryExpansion {
        s.parse().unwrap()
    }

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(p.into(), d.into())
    }

    #[test]
    fn sup_examples() {
        assert_eq!(sup_omega_below(&x("0.0110")).to_rational(), q(1, 3));
        assert_eq!(sup_omega_below(&x("0.1")), x("0.(01)"));
        assert_eq!(sup_omega_below(&x("0.(01)")), x("0.(01)"));
        assert_eq!(sup_omega_below(&x("0.00(1)")), x("0.01"));
        assert_eq!(sup_omega_below(&BinaryExpansion::one()), x("0.(01)"));
    }

    #[test]
    fn sup_matches_removed_interval_table() {
        let table = removed_intervals(12);
        for k in 0..1024u128 {
            let p = BinaryExpansion::from_dyadic(k, 10);
            let v = p.to_rational();
            if let Some(iv) = table.iter().find(|iv| iv.contains_value(&v)) {
                assert_eq!(sup_omega_below(&p), iv.left, "{p}");
            }
        }
    }

    #[test]
    fn singular_values() {
        assert!(normalization_holds());
        assert_eq!(tau_s(&x("0.1")).value, q(1, 1));
        assert_eq!(tau_s(&x("0.(01)")).value, q(1, 1));
        assert_eq!(tau_s(&x("0.(01)")).witness, Witness::InOmega);
        assert!(matches!(tau_s(&x("0.1")).witness, Witness::SupWitness(_)));
    }

    #[test]
    fn interval_measures() {
        let one = BinaryExpansion::one();
        assert_eq!(mu_s_interval(&BinaryExpansion::zero(), &one).unwrap(), q(1, 1));
        assert_eq!(mu_s_interval(&x("0.(01)"), &one).unwrap(), q(0, 1));
        assert!(mu_s_interval(&one, &BinaryExpansion::zero()).is_err());
        for iv in removed_intervals(10) {
            assert!(mu_s_interval(&iv.left, &iv.right).unwrap().is_zero());
        }
    }

    #[test]
    fn fine_masses() {
        let empty = BreakpointWord::empty(BreakpointKind::Full);
        assert_eq!(fine_partition_mass(&empty).mass, q(1, 2));
        let b = BreakpointWord::parse("01", BreakpointKind::Full).unwrap();
        let fm = fine_partition_mass(&b);
        assert_eq!(fm.mass, q(1, 8));
        assert_eq!(fm.tau_image, (q(1, 2), q(5, 8)));
    }

    #[test]
    fn mass_bound_formula() {
        for m in 0..=2 {
            for b in enumerate_breakpoints(m, BreakpointKind::Full) {
                for n in 1..=4 {
                    let cover_len: BigRational =
                        coarse_cover(2 * n).iter().map(|(a, c)| c.to_rational() - a.to_rational()).sum();
                    let expected = inv_pow2(2 * m + 1) * (BigRational::one() + cover_len);
                    assert_eq!(fine_partition_mass_bound(&b, n), expected);
                }
            }
        }
    }

    #[test]
    fn selfsimilarity() {
        let b = BreakpointWord::parse("01", BreakpointKind::Full).unwrap();
        let (l, r) = selfsimilar_sides(&b, &BinaryExpansion::zero(), &x("0.(01)")).unwrap();
        assert_eq!((l.clone(), r), (q(1, 6), q(1, 6)));
        let empty = BreakpointWord::empty(BreakpointKind::Full);
        assert!(verify_selfsimilar_measure(&empty, &x("0.0(01)"), &x("0.01")).unwrap());
        assert!(verify_selfsimilar_measure(&empty, &x("0.0011"), &x("0.01")).unwrap());
        assert!(verify_selfsimilar_measure(&b, &x("0.01"), &x("0.01")).unwrap());
        assert!(verify_selfsimilar_measure(&b, &x("0.1"), &x("0.1")).is_err());
    }

    #[test]
    fn mass_sums() {
        assert_eq!(mass_partial_sum(0), q(1, 2));
        assert_eq!(mass_partial_sum(1), q(5, 8));
        assert_eq!(mass_partial_sum(2), q(11, 16));
    }
}
