//! Exact decisions about the deficiency sequence `D_j` of an eventually
//! periodic expansion.
//!
//! Past the prefix the digits repeat with period `q`, so `D_{j+q} = D_j + Δ`
//! where `Δ` is the deficiency of one period. Every question below reduces to
//! one scanned period plus arithmetic in `Δ`.

use crate::expansion::{word_deficiency, BinaryExpansion};

/// Per-period drift `Δ` of the tail.
pub fn tail_drift(x: &BinaryExpansion) -> i64 {
    word_deficiency(x.tail().word())
}

/// First index `j > after` with `D_j(x) < bound`, or `None` if there is none.
pub fn first_deficiency_below(x: &BinaryExpansion, after: usize, bound: i64) -> Option<usize> {
    let (n, word) = x.eventual_period();
    let q = word.len();
    let base = n.max(after);

    let mut d = 0i64;
    let mut d_base = 0i64;
    for j in 1..=base + q {
        d += if x.digit(j) == 0 { 1 } else { -1 };
        if j > after && d < bound {
            return Some(j);
        }
        if j == base {
            d_base = d;
        }
    }
    let delta = d - d_base;
    if delta >= 0 {
        return None;
    }

    let offsets: Vec<i64> = (1..=q)
        .scan(0i64, |acc, i| {
            *acc += if x.digit(base + i) == 0 { 1 } else { -1 };
            Some(*acc)
        })
        .collect();
    let min_off = *offsets.iter().min().expect("nonempty period");
    // smallest t >= 1 with d_base + t*delta + min_off < bound
    let slack = d_base + min_off - bound;
    let t = (slack.div_euclid(-delta) + 1).max(1);
    offsets
        .iter()
        .position(|off| d_base + t * delta + off < bound)
        .map(|i| base + t as usize * q + i + 1)
}

/// Zeros of `j -> D_j(x)` for `j >= 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZeroStructure {
    /// Every zero when `recurrence` is `None`; otherwise every zero up to and
    /// including `recurrence.start`.
    pub explicit: Vec<usize>,
    pub recurrence: Option<Recurrence>,
}

/// Zeros beyond `start` repeat with the given period: `j > start` is a zero iff
/// `j - period` is. `start` is itself a zero lying in the periodic tail.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Recurrence {
    pub start: usize,
    pub period: usize,
    /// Offsets in `(0, period]` of the zeros following `start`; ends with `period`.
    pub offsets: Vec<usize>,
}

pub fn deficiency_zeros(x: &BinaryExpansion) -> ZeroStructure {
    let (n, word) = x.eventual_period();
    let q = word.len();

    let mut zeros = Vec::new();
    let mut d = 0i64;
    let mut d_n = 0i64;
    let mut offsets = Vec::with_capacity(q);
    for j in 1..=n + q {
        d += if x.digit(j) == 0 { 1 } else { -1 };
        if d == 0 {
            zeros.push(j);
        }
        if j == n {
            d_n = d;
        }
        if j > n {
            offsets.push(d - d_n);
        }
    }
    let delta = d - d_n;

    if delta == 0 {
        if let Some(&start) = zeros.iter().find(|&&j| j > n) {
            zeros.retain(|&j| j <= start);
            let mut d = 0i64;
            let in_period = (1..=q)
                .filter(|&i| {
                    d += if x.digit(start + i) == 0 { 1 } else { -1 };
                    d == 0
                })
                .collect();
            return ZeroStructure {
                explicit: zeros,
                recurrence: Some(Recurrence { start, period: q, offsets: in_period }),
            };
        }
        return ZeroStructure { explicit: zeros, recurrence: None };
    }

    for (i, off) in offsets.iter().enumerate() {
        let need = -(d_n + off);
        if need % delta == 0 {
            let t = need / delta;
            if t >= 1 {
                zeros.push(n + t as usize * q + i + 1);
            }
        }
    }
    zeros.sort_unstable();
    zeros.dedup();
    ZeroStructure { explicit: zeros, recurrence: None }
}

impl ZeroStructure {
    pub fn is_infinite(&self) -> bool {
        self.recurrence.is_some()
    }

    /// All zeros `<= limit`, in increasing order.
    pub fn up_to(&self, limit: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.explicit.iter().copied().filter(|&j| j <= limit).collect();
        if let Some(rec) = &self.recurrence {
            let mut base = rec.start;
            'outer: loop {
                for &off in &rec.offsets {
                    let j = base + off;
                    if j > limit {
                        break 'outer;
                    }
                    out.push(j);
                }
                base += rec.period;
            }
        }
        out
    }

    /// The first `count` zeros (fewer only when the set is finite).
    pub fn first(&self, count: usize) -> Vec<usize> {
        match &self.recurrence {
            None => self.explicit.iter().copied().take(count).collect(),
            Some(rec) => {
                let per = rec.offsets.len().max(1);
                let periods = count.saturating_sub(self.explicit.len()) / per + 1;
                let mut out = self.up_to(rec.start + periods * rec.period);
                out.truncate(count);
                out
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(s: &str) -> BinaryExpansion {
        s.parse().unwrap()
    }

    fn brute_first_below(x: &BinaryExpansion, after: usize, bound: i64, horizon: usize) -> Option<usize> {
        (after + 1..=horizon).find(|&j| x.deficiency(j) < bound)
    }

    #[test]
    fn first_below_matches_scan() {
        let cases = ["0.0110", "0.(01)", "0.(001)", "0.00(011)", "0.0(1)", "0.000(0111)", "0.(10)", "0.1", "0.0011(01)"];
        for c in cases {
            let e = x(c);
            for after in 0..6 {
                for bound in -2..3 {
                    assert_eq!(
                        first_deficiency_below(&e, after, bound),
                        brute_first_below(&e, after, bound, 400),
                        "{c} after={after} bound={bound}"
                    );
                }
            }
        }
    }

    #[test]
    fn zero_sets() {
        assert_eq!(deficiency_zeros(&x("0.0110")).explicit, vec![2, 4]);
        let z = deficiency_zeros(&x("0.(000111)"));
        assert!(z.is_infinite());
        assert_eq!(z.up_to(20), vec![6, 12, 18]);
        let z = deficiency_zeros(&x("0.(01)"));
        assert_eq!(z.first(4), vec![2, 4, 6, 8]);
        // drifting tail crosses zero once
        let z = deficiency_zeros(&x("0.11(001)"));
        assert!(!z.is_infinite());
        let brute: Vec<usize> = (1..200).filter(|&j| x("0.11(001)").deficiency(j) == 0).collect();
        assert_eq!(z.explicit, brute);
    }
}
