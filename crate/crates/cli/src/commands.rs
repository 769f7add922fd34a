use num_traits::ToPrimitive;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{Map, Value};

use takagi_core::dimension::{
    alphabet_x, bilipschitz_check, box_dimension_gamma, enumerate_gamma_points, image_box_counts, local_branch_count,
    spectrum_table,
};
use takagi_core::level::{enumerate_level_cover, enumerate_local_level_set, local_level_set, Cardinality};
use takagi_core::measure::{
    fine_partition_mass, fine_partition_mass_bound, mass_level, selfsimilar_sides, sup_omega_below, tau_s, Witness,
};
use takagi_core::omega::{
    catalan, count_breakpoints_dp, enumerate_breakpoints, omega_membership, removed_intervals,
    removed_length_partial_sum, BreakpointKind, Membership,
};
use takagi_core::takagi::tau_grid_numerators;
use takagi_core::{fmt_rational, parse_rational, tau, BigRational, BigUint, BinaryExpansion};

use crate::args::*;
use crate::error::CliError;
use crate::report::Report;
use crate::svg;

/// Largest grid depth drawn in SVG plots.
const SVG_GRID_DEPTH: u32 = 16;

pub struct Outcome {
    pub report: Report,
    pub svg: Option<String>,
}

pub fn q(v: &BigRational) -> Value {
    Value::from(fmt_rational(v))
}

fn f(v: &BigRational) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

fn config<T: Serialize>(args: &T, global: &GlobalArgs) -> Map<String, Value> {
    let mut map = match serde_json::to_value(args) {
        Ok(Value::Object(m)) => m,
        _ => Map::new(),
    };
    map.insert("format".into(), serde_json::to_value(global.format).unwrap_or(Value::Null));
    map.insert("seed".into(), Value::from(global.seed));
    map
}

fn point(text: &str) -> Result<BinaryExpansion, CliError> {
    Ok(BinaryExpansion::parse_point(text)?)
}

fn no_svg(command: &str) -> CliError {
    CliError::Usage(format!("{command} has no SVG rendering for these options"))
}

fn tau_graph(depth: u32) -> Result<Vec<(f64, f64)>, CliError> {
    let depth = depth.min(SVG_GRID_DEPTH);
    let scale = (1u128 << depth) as f64;
    Ok(tau_grid_numerators(depth)?
        .into_iter()
        .enumerate()
        .map(|(k, num)| (k as f64 / scale, num as f64 / scale))
        .collect())
}

pub fn eval(a: &EvalArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let x = point(&a.x)?;
    let t = tau(&x);
    let s = tau_s(&x);
    let membership = omega_membership(&x.carry_normalized());
    let mut report = Report::new(
        "eval",
        config(a, g),
        vec!["x", "value", "tau", "tau_s", "in_omega", "first_violation", "in_half_omega", "sup_omega_below"],
    );
    let violation = match membership {
        Membership::Member => Value::Null,
        Membership::NonMember { first_violation } => Value::from(first_violation),
    };
    let sup = match &s.witness {
        Witness::InOmega => x.render(),
        Witness::SupWitness(w) => w.render(),
    };
    report.push(vec![
        Value::from(x.render()),
        q(&x.to_rational()),
        q(&t),
        q(&s.value),
        Value::from(membership.is_member()),
        violation,
        Value::from(takagi_core::omega::in_half_omega(&x)),
        Value::from(sup),
    ]);
    report.summary = format!("eval x={}: tau = {}, tau_S = {}", x, fmt_rational(&t), fmt_rational(&s.value));
    let svg = match g.format {
        Format::Svg => Some(svg::graph(
            &format!("Takagi function, depth {}", a.depth.min(SVG_GRID_DEPTH)),
            &tau_graph(a.depth)?,
            Some((f(&x.to_rational()), f(&t))),
        )),
        _ => None,
    };
    Ok(Outcome { report, svg })
}

pub fn levelset(a: &LevelsetArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    let y = parse_rational(&a.y)?;
    let cover = enumerate_level_cover(&y, a.depth)?;
    let mut report = Report::new("levelset", config(a, g), vec!["kind", "left", "right", "point"]);
    for c in &cover.confirmed {
        report.passed &= tau(&c.point) == y;
        report.push(vec![Value::from("confirmed"), q(&c.value), q(&c.value), Value::from(c.point.render())]);
    }
    for iv in &cover.possible {
        report.push(vec![Value::from("possible"), q(&iv.left()), q(&iv.right()), Value::Null]);
    }
    report.summary = if cover.out_of_range {
        format!("levelset y={}: level outside [0, 2/3], empty cover", fmt_rational(&y))
    } else {
        format!(
            "levelset y={} depth={}: {} possible intervals, {} confirmed points",
            fmt_rational(&y),
            a.depth,
            cover.possible.len(),
            cover.confirmed.len()
        )
    };
    let svg = match g.format {
        Format::Svg => {
            let bars: Vec<(f64, f64)> = cover.possible.iter().map(|iv| (f(&iv.left()), f(&iv.right()))).collect();
            let points: Vec<f64> = cover.confirmed.iter().map(|c| f(&c.value)).collect();
            Some(svg::cover(
                &format!("Cover of L({}) at depth {}", fmt_rational(&y), a.depth),
                &tau_graph(a.depth.min(12))?,
                f(&y),
                &bars,
                &points,
            ))
        }
        _ => None,
    };
    Ok(Outcome { report, svg })
}

pub fn localset(a: &LocalsetArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    if g.format == Format::Svg {
        return Err(no_svg("localset"));
    }
    let x = point(&a.x)?;
    let level = tau(&x);
    let members = enumerate_local_level_set(&x, a.blocks)?;
    let summary = local_level_set(&x);
    let mut report = Report::new("localset", config(a, g), vec!["index", "expansion", "value", "tau", "leftmost"]);
    for (i, m) in members.iter().enumerate() {
        let t = tau(m);
        report.passed &= t == level;
        report.push(vec![
            Value::from(i),
            Value::from(m.render()),
            q(&m.to_rational()),
            q(&t),
            Value::from(*m == summary.representative),
        ]);
    }
    let mut distinct: Vec<BigRational> = members.iter().map(|m| m.to_rational()).collect();
    distinct.dedup();
    let cardinality = match &summary.cardinality {
        Cardinality::Finite(n) => format!("finite ({n} expansions)"),
        Cardinality::Uncountable => "uncountable".to_string(),
    };
    report.summary = format!(
        "localset x={}: {} expansions listed, {} distinct reals, level {}, leftmost {}, balance points {:?}, {}",
        x,
        members.len(),
        distinct.len(),
        fmt_rational(&level),
        summary.representative,
        &summary.block_structure.balance_points[1..],
        cardinality
    );
    Ok(Outcome { report, svg: None })
}

fn kind_of(k: KindArg) -> BreakpointKind {
    match k {
        KindArg::Full => BreakpointKind::Full,
        KindArg::Small => BreakpointKind::Small,
    }
}

pub fn omega(a: &OmegaArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    if g.format == Format::Svg {
        return Err(no_svg("omega"));
    }
    if a.max_len > 32 {
        return Err(CliError::Usage("max-len is limited to 32".into()));
    }
    let cfg = config(a, g);
    let report = match a.what {
        OmegaWhat::Intervals => {
            let ivs = removed_intervals(a.max_len);
            let mut r = Report::new(
                "omega",
                cfg,
                vec!["breakpoint", "l", "k", "left", "right", "left_value", "right_value", "length"],
            );
            r.passed = ivs.windows(2).all(|w| w[0].right_value() <= w[1].left_value());
            for iv in &ivs {
                r.push(vec![
                    Value::from(iv.breakpoint.render()),
                    iv.l.map_or(Value::Null, Value::from),
                    iv.k.map_or(Value::Null, Value::from),
                    Value::from(iv.left.render()),
                    Value::from(iv.right.render()),
                    q(&iv.left_value()),
                    q(&iv.right_value()),
                    q(&iv.length),
                ]);
            }
            r.summary = format!(
                "omega: {} removed intervals with |B| <= {}, total length {}",
                ivs.len(),
                a.max_len,
                fmt_rational(&removed_length_partial_sum(a.max_len))
            );
            r
        }
        OmegaWhat::Breakpoints => {
            let mut r = Report::new("omega", cfg, vec!["m", "word", "value"]);
            for m in 0..=a.max_len / 2 {
                for b in enumerate_breakpoints(m, kind_of(a.kind)) {
                    r.push(vec![Value::from(m), Value::from(b.render()), q(&b.value())]);
                }
            }
            r.summary = format!("omega: {} breakpoint words of length <= {}", r.rows.len(), a.max_len);
            r
        }
        OmegaWhat::Counts => {
            let mut r =
                Report::new("omega", cfg, vec!["m", "enumerated_full", "dynamic_programming", "catalan", "enumerated_small"]);
            for m in 0..=a.max_len / 2 {
                let full = enumerate_breakpoints(m, BreakpointKind::Full).len();
                let dp = count_breakpoints_dp(m);
                let cat = catalan(m as u64);
                r.passed &= BigUint::from(full) == dp && dp == cat;
                r.push(vec![
                    Value::from(m),
                    Value::from(full),
                    Value::from(dp.to_string()),
                    Value::from(cat.to_string()),
                    Value::from(enumerate_breakpoints(m, BreakpointKind::Small).len()),
                ]);
            }
            r.summary = format!("omega: breakpoint counts for m <= {}, catalan law {}", a.max_len / 2, verdict(r.passed));
            r
        }
        OmegaWhat::Lengths => {
            let mut r = Report::new("omega", cfg, vec!["max_len", "partial_sum"]);
            let mut prev: Option<BigRational> = None;
            for len in (0..=a.max_len).step_by(2) {
                let s = removed_length_partial_sum(len);
                r.passed &= s < BigRational::from_integer(1.into());
                if let Some(p) = &prev {
                    r.passed &= p <= &s;
                }
                r.push(vec![Value::from(len), q(&s)]);
                prev = Some(s);
            }
            r.summary = format!("omega: removed length partial sums up to |B| = {}", a.max_len);
            r
        }
        OmegaWhat::Membership => {
            let text = a.x.as_deref().ok_or_else(|| CliError::Usage("--what membership needs --x".into()))?;
            let x = point(text)?;
            let m = omega_membership(&x.carry_normalized());
            let mut r = Report::new(
                "omega",
                cfg,
                vec!["x", "member", "first_violation", "in_half_omega", "sup_omega_below"],
            );
            let violation = match m {
                Membership::Member => Value::Null,
                Membership::NonMember { first_violation } => Value::from(first_violation),
            };
            r.push(vec![
                Value::from(x.render()),
                Value::from(m.is_member()),
                violation,
                Value::from(takagi_core::omega::in_half_omega(&x)),
                Value::from(sup_omega_below(&x).render()),
            ]);
            r.summary = format!("omega: {} is {}in the deficient digit set", x, if m.is_member() { "" } else { "not " });
            r
        }
    };
    Ok(Outcome { report, svg: None })
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "holds"
    } else {
        "FAILS"
    }
}

pub fn measure(a: &MeasureArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    if g.format == Format::Svg && a.what != MeasureWhat::Staircase {
        return Err(no_svg("measure (use --what staircase)"));
    }
    let cfg = config(a, g);
    let mut svg_doc = None;
    let report = match a.what {
        MeasureWhat::Masses => {
            let mut r = Report::new("measure", cfg, vec!["m", "count", "mass", "cumulative"]);
            let mut cumulative = BigRational::from_integer(0.into());
            for m in 0..=a.m_max {
                let (count, mass) = mass_level(m);
                cumulative += &mass;
                r.push(vec![Value::from(m), Value::from(count.to_string()), q(&mass), q(&cumulative)]);
            }
            r.summary = format!("measure: fine partition mass through m = {} is {}", a.m_max, fmt_rational(&cumulative));
            r
        }
        MeasureWhat::Cells => {
            let m_max = a.m_max.min(6);
            let mut r =
                Report::new("measure", cfg, vec!["base", "m", "mass", "tau_lo", "tau_hi", "cover_bound"]);
            for m in 0..=m_max {
                for b in enumerate_breakpoints(m, BreakpointKind::Full) {
                    let fm = fine_partition_mass(&b);
                    let bound = fine_partition_mass_bound(&b, 3);
                    r.passed &= fm.tau_image.1.clone() - &fm.tau_image.0 == fm.mass && bound >= fm.mass;
                    r.push(vec![
                        Value::from(b.render()),
                        Value::from(m),
                        q(&fm.mass),
                        q(&fm.tau_image.0),
                        q(&fm.tau_image.1),
                        q(&bound),
                    ]);
                }
            }
            r.summary = format!("measure: {} fine partition cells with m <= {}", r.rows.len(), m_max);
            r
        }
        MeasureWhat::Selfsimilar => {
            let mut rng = ChaCha8Rng::seed_from_u64(g.seed);
            let mut r = Report::new("measure", cfg, vec!["base", "x1p", "x2p", "lhs", "rhs", "ok"]);
            for _ in 0..a.cases {
                let (b, x1, x2) = crate::sampling::selfsimilar_case(&mut rng, 5);
                let (lhs, rhs) = selfsimilar_sides(&b, &x1, &x2)?;
                let ok = lhs == rhs;
                r.passed &= ok;
                r.push(vec![
                    Value::from(b.render()),
                    Value::from(x1.render()),
                    Value::from(x2.render()),
                    q(&lhs),
                    q(&rhs),
                    Value::from(ok),
                ]);
            }
            r.summary = format!("measure: self-similarity law {} on {} seeded cases", verdict(r.passed), a.cases);
            r
        }
        MeasureWhat::Staircase => {
            let depth = a.depth.min(14);
            let mut r = Report::new("measure", cfg, vec!["x", "tau_s"]);
            let mut grid = Vec::new();
            let mut prev: Option<BigRational> = None;
            for k in 0..=(1u128 << depth) {
                let x = BinaryExpansion::from_dyadic(k, depth);
                let v = tau_s(&x).value;
                if let Some(p) = &prev {
                    r.passed &= p <= &v;
                }
                grid.push((f(&x.to_rational()), f(&v)));
                r.push(vec![q(&x.to_rational()), q(&v)]);
                prev = Some(v);
            }
            r.summary = format!("measure: singular function on the depth-{depth} grid, monotone {}", verdict(r.passed));
            if g.format == Format::Svg {
                svg_doc = Some(svg::staircase(&format!("Singular function, depth {depth}"), &grid));
            }
            r
        }
    };
    Ok(Outcome { report, svg: svg_doc })
}

pub fn dim(a: &DimArgs, g: &GlobalArgs) -> Result<Outcome, CliError> {
    if g.format == Format::Svg && a.what != DimWhat::Spectrum {
        return Err(no_svg("dim (use --what spectrum)"));
    }
    if a.r == 0 || a.r > 32 {
        return Err(CliError::Usage("r must lie in 1..=32".into()));
    }
    let cfg = config(a, g);
    let mut svg_doc = None;
    let report = match a.what {
        DimWhat::Alphabet => {
            let alpha = alphabet_x(a.r)?;
            let mut r = Report::new("dim", cfg, vec!["r", "index", "word"]);
            for (i, w) in alpha.words.iter().enumerate() {
                r.push(vec![Value::from(a.r), Value::from(i), Value::from(takagi_core::expansion::render_word(w))]);
            }
            r.summary = format!("dim: |X_{}| = {} (C_r would give {})", 2 * a.r, alpha.count, catalan(a.r as u64));
            r
        }
        DimWhat::Boxes => {
            let est = box_dimension_gamma(a.r, a.k)?;
            let image = image_box_counts(a.r, a.k)?;
            let base = BigUint::from(alphabet_x(a.r)?.count);
            let mut r =
                Report::new("dim", cfg, vec!["r", "k", "depth", "box_count", "expected", "image_box_count"]);
            for (i, ((depth, count), (_, img))) in est.scales.iter().zip(&image).enumerate() {
                let expected = base.pow(i as u32 + 1);
                r.passed &= count == &expected;
                r.push(vec![
                    Value::from(a.r),
                    Value::from(i + 1),
                    Value::from(*depth),
                    Value::from(count.to_string()),
                    Value::from(expected.to_string()),
                    Value::from(*img),
                ]);
            }
            let slope = est.slope.enclosure();
            r.summary = format!("dim: Gamma_{} box-counting slope in {}", 2 * a.r, slope);
            r
        }
        DimWhat::Spectrum => {
            let table = spectrum_table(a.r_max)?;
            let mut r = Report::new(
                "dim",
                cfg,
                vec![
                    "r",
                    "alpha",
                    "count",
                    "gamma_dim_lo",
                    "gamma_dim_hi",
                    "paper_bound",
                    "paper_bound_hi",
                    "ordinate_bound_lo",
                    "ordinate_bound_hi",
                    "catalan_r",
                    "enumerated",
                    "exceeds_bound",
                ],
            );
            for row in &table.rows {
                r.push(vec![
                    Value::from(row.r),
                    q(&row.alpha),
                    Value::from(row.count.to_string()),
                    q(&row.gamma_dim.lo),
                    q(&row.gamma_dim.hi),
                    q(&row.paper_bound.lo),
                    q(&row.paper_bound.hi),
                    q(&row.ordinate_bound.lo),
                    q(&row.ordinate_bound.hi),
                    Value::from(row.catalan_r.to_string()),
                    Value::from(row.enumerated),
                    Value::from(row.exceeds_bound.as_str()),
                ]);
            }
            let last = table.rows.last().expect("r_max >= 2");
            r.summary = format!(
                "dim: spectrum to r = {} (box-counting dimension), gamma_dim({}) ~ {:.4}, bound exceeded from r0 = {}",
                a.r_max,
                last.r,
                last.gamma_dim.midpoint_f64(),
                table.r0.map_or("none".to_string(), |v| v.to_string())
            );
            if g.format == Format::Svg {
                let rows: Vec<(f64, f64, f64, f64)> = table
                    .rows
                    .iter()
                    .map(|row| {
                        (
                            row.r as f64,
                            row.gamma_dim.midpoint_f64(),
                            row.paper_bound.midpoint_f64(),
                            row.ordinate_bound.midpoint_f64(),
                        )
                    })
                    .collect();
                svg_doc = Some(svg::dims("Dimension spectrum lower bounds", &rows));
            }
            r
        }
        DimWhat::Bilipschitz => {
            let pts = enumerate_gamma_points(a.r, a.k)?;
            if pts.len() > 512 {
                return Err(CliError::Usage(format!("{} points give too many pairs", pts.len())));
            }
            let mut r = Report::new("dim", cfg, vec!["r", "x1", "x2", "ratio", "ok"]);
            for (i, x1) in pts.iter().enumerate() {
                for x2 in &pts[i + 1..] {
                    let b = bilipschitz_check(a.r, x1, x2)?;
                    r.passed &= b.ok;
                    r.push(vec![
                        Value::from(a.r),
                        Value::from(x1.render()),
                        Value::from(x2.render()),
                        q(&b.ratio),
                        Value::from(b.ok),
                    ]);
                }
            }
            r.summary =
                format!("dim: bi-Lipschitz bounds: {} on {} pairs of Gamma_{}", verdict(r.passed), r.rows.len(), 2 * a.r);
            r
        }
        DimWhat::Local => {
            let x = enumerate_gamma_points(a.r, 1)?.remove(0);
            let mut r = Report::new("dim", cfg, vec!["r", "x", "k", "branches", "expected"]);
            for k in 0..=a.k {
                let branches = local_branch_count(&x, a.r, k)?;
                r.passed &= branches == 1 << k;
                r.push(vec![
                    Value::from(a.r),
                    Value::from(x.render()),
                    Value::from(k),
                    Value::from(branches),
                    Value::from(1u64 << k),
                ]);
            }
            r.summary = format!("dim: local level set branching through {} doubles per block: {}", x, verdict(r.passed));
            r
        }
    };
    Ok(Outcome { report, svg: svg_doc })
}
