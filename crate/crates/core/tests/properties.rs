use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use takagi_core::level::{enumerate_level_cover, enumerate_local_level_set, leftmost_equivalent};
use takagi_core::measure::{mu_s_interval, sup_omega_below, tau_s};
use takagi_core::omega::{omega_membership, removed_intervals};
use takagi_core::{tau, tau_bounds, tau_dyadic, verify_functional_equations, BigRational, BinaryExpansion, Tail};

fn bits(max: usize) -> impl Strategy<Value = Vec<u8>> {
    prop::collection::vec(0u8..=1, 0..=max)
}

fn expansion() -> impl Strategy<Value = BinaryExpansion> {
    (bits(20), 0u8..3, prop::collection::vec(0u8..=1, 2..=6)).prop_map(|(prefix, t, word)| match t {
        0 => BinaryExpansion::new(prefix, Tail::Zeros).unwrap(),
        1 => BinaryExpansion::new(prefix, Tail::Ones).unwrap(),
        _ => BinaryExpansion::periodic(prefix.clone(), word)
            .unwrap_or_else(|_| BinaryExpansion::new(prefix, Tail::Zeros).unwrap()),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn render_parse_roundtrip(x in expansion()) {
        prop_assert_eq!(BinaryExpansion::parse(&x.render()).unwrap(), x);
    }

    #[test]
    fn rational_roundtrip(x in expansion()) {
        prop_assert!(BinaryExpansion::from_rational(&x.to_rational()).unwrap().real_equal(&x));
    }

    #[test]
    fn digit_profile_is_consistent(x in expansion(), j in 0usize..60) {
        let p = x.digit_profile(j);
        prop_assert_eq!(p.zeros + p.ones, j);
        prop_assert_eq!(x.deficiency(j), p.zeros as i64 - p.ones as i64);
    }

    #[test]
    fn functional_equations(x in expansion()) {
        prop_assert!(verify_functional_equations(&x));
    }

    #[test]
    fn dyadic_paths_agree(n in 0u32..40, seed in any::<u64>()) {
        let k = (seed as u128) % ((1u128 << n) + 1);
        prop_assert_eq!(tau_dyadic(k, n).unwrap(), tau(&BinaryExpansion::from_dyadic(k, n)));
    }

    #[test]
    fn range_and_envelopes(x in expansion(), n in 0usize..24) {
        let t = tau(&x);
        prop_assert!(!t.is_negative() && t <= BigRational::new(2.into(), 3.into()));
        prop_assert!(tau_bounds(&x.digits(n)).contains(&t));
    }

    #[test]
    fn singular_function_is_monotone(a in expansion(), b in expansion()) {
        let (a, b) = if a.to_rational() <= b.to_rational() { (a, b) } else { (b, a) };
        prop_assert!(tau_s(&a).value <= tau_s(&b).value);
        let s = tau_s(&a).value;
        prop_assert!(!s.is_negative() && s <= BigRational::one());
    }

    #[test]
    fn sup_below_lies_in_omega(x in expansion()) {
        let s = sup_omega_below(&x);
        prop_assert!(omega_membership(&s.carry_normalized()).is_member());
        prop_assert!(s.to_rational() <= x.to_rational());
    }

    #[test]
    fn flip_equivalents_share_the_level(x in expansion()) {
        let level = tau(&x);
        let members = enumerate_local_level_set(&x, 5).unwrap();
        prop_assert!(members.iter().any(|m| m.real_equal(&x)));
        for m in &members {
            prop_assert_eq!(tau(m), level.clone());
        }
        let left = leftmost_equivalent(&x);
        prop_assert!(omega_membership(&left).is_member());
        prop_assert!(members.iter().all(|m| left.to_rational() <= m.to_rational()));
    }

    #[test]
    fn cover_never_loses_a_solution(prefix in bits(12)) {
        let x = BinaryExpansion::dyadic(prefix).unwrap();
        let cover = enumerate_level_cover(&tau(&x), 8).unwrap();
        prop_assert!(cover.covers(&x.to_rational()));
    }
}

#[test]
fn removed_intervals_carry_no_mass() {
    for iv in removed_intervals(10) {
        assert!(mu_s_interval(&iv.left, &iv.right).unwrap().is_zero(), "{}", iv.breakpoint.render());
    }
}
