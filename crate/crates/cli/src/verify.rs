//! Seeded invariant suites behind `takagi verify`.

use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use takagi_core::dimension::{
    alphabet_count, alphabet_x, bilipschitz_check, box_dimension_gamma, enumerate_gamma_points, in_gamma,
    spectrum_table, Slope,
};
use takagi_core::expansion::inv_pow2;
use takagi_core::interval::Certified;
use takagi_core::level::{
    enumerate_level_cover, enumerate_local_level_set, expected_cardinality_partial, leftmost_equivalent, level_count,
    level_count_by_paths,
};
use takagi_core::measure::{
    fine_partition_mass, mass_partial_sum, mu_s_interval, normalization_holds, selfsimilar_sides, sup_omega_below,
    tau_s,
};
use takagi_core::omega::{
    catalan, count_breakpoints_dp, enumerate_breakpoints, omega_membership, removed_intervals,
    removed_length_partial_sum, BreakpointKind, BreakpointWord,
};
use takagi_core::takagi::tau_grid_numerators;
use takagi_core::{
    fmt_rational, tau, tau_bounds, tau_dyadic, verify_functional_equations, BigInt, BigRational, BigUint,
    BinaryExpansion,
};

use crate::args::Suite;
use crate::sampling::{random_dyadic, random_expansion, random_omega_point, selfsimilar_case};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Recorder {
    suite: &'static str,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: &'static str) -> Self {
        Recorder { suite, checks: Vec::new() }
    }

    fn check(&mut self, name: &'static str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { suite: self.suite, name, passed, detail: detail.into() });
    }

    /// Records the number of failures among `total` cases.
    fn tally(&mut self, name: &'static str, failures: usize, total: usize) {
        self.check(name, failures == 0, format!("{failures} failures in {total} cases"));
    }
}

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

const ORDER: [(Suite, &str); 6] = [
    (Suite::Arith, "arith"),
    (Suite::Takagi, "takagi"),
    (Suite::Level, "level"),
    (Suite::Omega, "omega"),
    (Suite::Measure, "measure"),
    (Suite::Dim, "dim"),
];

/// Runs the selected suites. Each suite draws from its own stream derived
/// from `seed`, so a suite gives the same result alone or within `all`.
pub fn run_suites(suite: Suite, samples: usize, seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, (s, name)) in ORDER.iter().enumerate() {
        if suite != Suite::All && suite != *s {
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(i as u64 + 1);
        let mut rec = Recorder::new(name);
        match s {
            Suite::Arith => arith(&mut rec, &mut rng, samples),
            Suite::Takagi => takagi(&mut rec, &mut rng, samples),
            Suite::Level => level(&mut rec, &mut rng, samples),
            Suite::Omega => omega(&mut rec, &mut rng, samples),
            Suite::Measure => measure(&mut rec, &mut rng, samples),
            Suite::Dim => dim(&mut rec),
            Suite::All => unreachable!("not listed in ORDER"),
        }
        out.extend(rec.checks);
    }
    out
}

fn arith(rec: &mut Recorder, rng: &mut ChaCha8Rng, samples: usize) {
    let xs: Vec<BinaryExpansion> = (0..samples).map(|_| random_expansion(rng, 24)).collect();
    let fails = xs.iter().filter(|x| BinaryExpansion::parse(&x.render()).ok().as_ref() != Some(*x)).count();
    rec.tally("render_parse_roundtrip", fails, xs.len());

    let fails = xs
        .par_iter()
        .filter(|x| match BinaryExpansion::from_rational(&x.to_rational()) {
            Ok(y) => !y.real_equal(x),
            Err(_) => true,
        })
        .count();
    rec.tally("rational_roundtrip", fails, xs.len());

    let fails = xs.iter().filter(|x| x.to_rational() + x.complement().to_rational() != BigRational::one()).count();
    rec.tally("complement_sums_to_one", fails, xs.len());

    let fails = xs.iter().filter(|x| x.halve().to_rational() * BigInt::from(2) != x.to_rational()).count();
    rec.tally("halving", fails, xs.len());

    let fails = xs
        .iter()
        .filter(|x| {
            let (n0, n1) = (1..=40).fold((0i64, 0i64), |(a, b), j| if x.digit(j) == 0 { (a + 1, b) } else { (a, b + 1) });
            x.deficiency(40) != n0 - n1
        })
        .count();
    rec.tally("deficiency_counts_digits", fails, xs.len());
}

fn takagi(rec: &mut Recorder, rng: &mut ChaCha8Rng, samples: usize) {
    let points: Vec<(u128, u32)> = (0..samples).map(|_| random_dyadic(rng, 24)).collect();
    let fails = points
        .par_iter()
        .filter(|(k, n)| !verify_functional_equations(&BinaryExpansion::from_dyadic(*k, *n)))
        .count();
    rec.tally("functional_equations_dyadic", fails, points.len());

    let fails = points
        .par_iter()
        .filter(|(k, n)| tau_dyadic(*k, *n).ok() != Some(tau(&BinaryExpansion::from_dyadic(*k, *n))))
        .count();
    rec.tally("integer_path_matches_rational", fails, points.len());

    let xs: Vec<BinaryExpansion> = (0..samples / 10).map(|_| random_expansion(rng, 16)).collect();
    let fails = xs.par_iter().filter(|x| !verify_functional_equations(x)).count();
    rec.tally("functional_equations_periodic", fails, xs.len());

    let fails = xs
        .par_iter()
        .filter(|x| {
            let t = tau(x);
            (0..=20).any(|n| !tau_bounds(&x.digits(n)).contains(&t))
        })
        .count();
    rec.tally("interval_bounds_enclose", fails, xs.len());

    let max = tau(&"0.(01)".parse().expect("literal"));
    rec.check("maximum_value", max == rat(2, 3), format!("tau(0.(01)) = {}", fmt_rational(&max)));

    match tau_grid_numerators(20) {
        Ok(grid) => {
            let best = grid.iter().copied().max().unwrap_or(0);
            let v = BigRational::new(BigInt::from(best), BigInt::from(1u64 << 20));
            let ok = v < rat(2, 3) && v >= rat(2, 3) - inv_pow2(18);
            rec.check("grid_maximum_depth_20", ok, format!("max = {}", fmt_rational(&v)));
        }
        Err(e) => rec.check("grid_maximum_depth_20", false, e.to_string()),
    }
}

fn level(rec: &mut Recorder, rng: &mut ChaCha8Rng, samples: usize) {
    let xs: Vec<BinaryExpansion> = (0..(samples / 100).max(10)).map(|_| random_expansion(rng, 16)).collect();
    let results: Vec<(bool, bool)> = xs
        .par_iter()
        .map(|x| {
            let level = tau(x);
            let members = enumerate_local_level_set(x, 6).unwrap_or_default();
            let same_level = !members.is_empty() && members.iter().all(|m| tau(m) == level);
            let left = leftmost_equivalent(x);
            let leftmost_ok = omega_membership(&left).is_member()
                && tau(&left) == level
                && members.iter().all(|m| left.to_rational() <= m.to_rational());
            (same_level, leftmost_ok)
        })
        .collect();
    rec.tally("local_members_share_level", results.iter().filter(|r| !r.0).count(), xs.len());
    rec.tally("leftmost_in_omega", results.iter().filter(|r| !r.1).count(), xs.len());

    let cases: Vec<(u128, u32)> = (0..100).map(|_| random_dyadic(rng, 16)).collect();
    let fails = cases
        .par_iter()
        .filter(|(k, n)| {
            let x = BinaryExpansion::from_dyadic(*k, *n);
            match enumerate_level_cover(&tau(&x), 10) {
                Ok(cover) => !cover.covers(&x.to_rational()),
                Err(_) => true,
            }
        })
        .count();
    rec.tally("cover_soundness", fails, cases.len());

    let fails = (0..=10).filter(|&m| level_count(m) != BigUint::from(level_count_by_paths(m))).count();
    rec.tally("balanced_word_count", fails, 11);

    let s = |m| expected_cardinality_partial(m);
    let ratio = s(1024) / s(256);
    let ok = ratio > rat(18, 10) && ratio < rat(22, 10);
    rec.check("expected_cardinality_growth", ok, format!("S_1024 / S_256 ~ {:.4}", to_f64(&ratio)));
}

fn to_f64(v: &BigRational) -> f64 {
    use num_traits::ToPrimitive;
    v.to_f64().unwrap_or(f64::NAN)
}

fn omega(rec: &mut Recorder, rng: &mut ChaCha8Rng, samples: usize) {
    let ivs = removed_intervals(16);
    let fails = ivs
        .iter()
        .filter(|iv| {
            iv.right_value() - iv.left_value() != iv.length || tau(&iv.left) - tau(&iv.right) != iv.length
        })
        .count();
    rec.tally("removed_interval_identities", fails, ivs.len());
    let overlaps = ivs.windows(2).filter(|w| w[0].right_value() > w[1].left_value()).count();
    rec.tally("removed_intervals_disjoint", overlaps, ivs.len());

    let sums: Vec<BigRational> = (0..=16).step_by(2).map(removed_length_partial_sum).collect();
    let increasing = sums.windows(2).skip(1).all(|w| w[0] < w[1]) && sums.iter().all(|s| s < &BigRational::one());
    rec.check("partial_sums_increase_below_one", increasing, format!("sum at 16 = {}", fmt_rational(&sums[8])));
    rec.check("partial_sum_at_4", sums[2] == rat(17, 24), fmt_rational(&sums[2]));

    let fails = (0..=10)
        .filter(|&m| {
            let c = catalan(m as u64);
            BigUint::from(enumerate_breakpoints(m, BreakpointKind::Full).len()) != c || count_breakpoints_dp(m) != c
        })
        .count();
    rec.tally("catalan_law", fails, 11);

    let xs: Vec<BinaryExpansion> = (0..samples / 10).map(|_| random_expansion(rng, 24)).collect();
    let fails = xs
        .par_iter()
        .filter(|x| {
            let s = sup_omega_below(x);
            !omega_membership(&s.carry_normalized()).is_member() || s.to_rational() > x.to_rational()
        })
        .count();
    rec.tally("sup_below_is_member", fails, xs.len());
}

fn measure(rec: &mut Recorder, rng: &mut ChaCha8Rng, samples: usize) {
    let half = tau_s(&"0.1".parse().expect("literal")).value;
    rec.check("normalization", normalization_holds() && half.is_one(), format!("tau_S(1/2) = {}", fmt_rational(&half)));

    let mut xs: Vec<BinaryExpansion> = (0..samples).map(|_| random_expansion(rng, 20)).collect();
    xs.sort_by_cached_key(|x| x.to_rational());
    let values: Vec<BigRational> = xs.par_iter().map(|x| tau_s(x).value).collect();
    let drops = values.windows(2).filter(|w| w[0] > w[1]).count();
    rec.tally("monotone", drops, values.len());

    let fails = xs
        .par_windows(3)
        .step_by(3)
        .filter(|w| {
            let ab = mu_s_interval(&w[0], &w[1]).expect("sorted");
            let bc = mu_s_interval(&w[1], &w[2]).expect("sorted");
            mu_s_interval(&w[0], &w[2]).expect("sorted") != ab + bc
        })
        .count();
    rec.tally("additive", fails, xs.len() / 3);

    let ivs = removed_intervals(12);
    let fails = ivs.iter().filter(|iv| !mu_s_interval(&iv.left, &iv.right).is_ok_and(|m| m.is_zero())).count();
    rec.tally("removed_intervals_null", fails, ivs.len());

    let cases: Vec<_> = (0..(samples / 100).max(10)).map(|_| selfsimilar_case(rng, 5)).collect();
    let fails = cases
        .par_iter()
        .filter(|(b, x1, x2)| !matches!(selfsimilar_sides(b, x1, x2), Ok((l, r)) if l == r))
        .count();
    rec.tally("self_similarity", fails, cases.len());

    let cells_ok = fine_partition_mass(&BreakpointWord::empty(BreakpointKind::Full)).mass == rat(1, 2)
        && fine_partition_mass(&BreakpointWord::parse("01", BreakpointKind::Full).expect("literal")).mass
            == rat(1, 8);
    rec.check("cell_masses", cells_ok, "1/2 and 1/8 for the empty word and 01");

    let partial: Vec<BigRational> = (0..=2).map(mass_partial_sum).collect();
    let ok = partial == [rat(1, 2), rat(5, 8), rat(11, 16)];
    let rest = BigRational::one() - mass_partial_sum(100);
    let tail_ok = rest > rat(3, 100) && rest < rat(9, 100);
    rec.check("mass_partial_sums", ok && tail_ok, format!("1 - sum to 100 ~ {:.5}", to_f64(&rest)));

    let pts: Vec<BinaryExpansion> = (0..samples / 10).map(|_| random_omega_point(rng, 16)).collect();
    let fails = pts.iter().filter(|p| !omega_membership(&p.carry_normalized()).is_member()).count();
    rec.tally("omega_sampler_members", fails, pts.len());
}

fn dim(rec: &mut Recorder) {
    let counts: Vec<u64> = (1..=5).map(|r| alphabet_x(r).map_or(0, |a| a.count as u64)).collect();
    let dp_ok = (1..=5).all(|r| alphabet_count(r) == BigUint::from(counts[r - 1]));
    rec.check("alphabet_counts", counts == [1, 1, 2, 5, 14] && dp_ok, format!("{counts:?}"));

    match box_dimension_gamma(3, 5) {
        Ok(est) => {
            let boxes_ok = est.scales.iter().enumerate().all(|(i, (_, n))| *n == BigUint::from(2u32 << i));
            let slope_ok = est.slope == Slope::Exact(rat(1, 6));
            rec.check("box_counts_r3", boxes_ok && slope_ok, format!("slope {}", est.slope.enclosure()));
        }
        Err(e) => rec.check("box_counts_r3", false, e.to_string()),
    }

    match enumerate_gamma_points(3, 3) {
        Ok(pts) => {
            let mut fails = 0;
            let mut pairs = 0;
            for (i, a) in pts.iter().enumerate() {
                for b in &pts[i + 1..] {
                    pairs += 1;
                    if !bilipschitz_check(3, a, b).is_ok_and(|c| c.ok) {
                        fails += 1;
                    }
                }
            }
            rec.tally("bilipschitz_r3", fails, pairs);
            let taus: Vec<BigRational> = pts.iter().map(tau).collect();
            rec.check("strictly_increasing_r3", taus.windows(2).all(|w| w[0] < w[1]), format!("{} points", pts.len()));
            let members = pts.iter().all(|p| in_gamma(p, 3) && omega_membership(p).is_member());
            rec.check("gamma_inside_omega", members, format!("{} points", pts.len()));
        }
        Err(e) => rec.check("bilipschitz_r3", false, e.to_string()),
    }

    match spectrum_table(64) {
        Ok(table) => {
            let last = table.rows.last().expect("rows");
            let high = last.gamma_dim.lo > rat(4, 5);
            rec.check("spectrum_r64_above_0.8", high, format!("gamma_dim(64) >= {:.5}", to_f64(&last.gamma_dim.lo)));
            let tail_ok = table.r0.is_some_and(|r0| {
                table.rows.iter().filter(|row| row.r >= r0).all(|row| row.exceeds_bound == Certified::True)
            });
            rec.check("spectrum_r0", tail_ok, format!("r0 = {:?}", table.r0));
        }
        Err(e) => rec.check("spectrum_r0", false, e.to_string()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suites_pass_and_repeat() {
        let a = run_suites(Suite::All, 200, 7);
        let failed: Vec<_> = a.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:?}");
        assert_eq!(a, run_suites(Suite::All, 200, 7));
    }

    #[test]
    fn single_suite_matches_its_slice_of_all() {
        let all = run_suites(Suite::All, 100, 3);
        let arith = run_suites(Suite::Arith, 100, 3);
        assert_eq!(&all[..arith.len()], &arith[..]);
    }
}
