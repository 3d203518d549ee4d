//! Upper bounds on the Lebesgue measure of the attractor from unions of
//! cylinder intervals, and a heuristic reading of their trend. The verdicts
//! are evidence only.

use std::fmt;

use crate::cylinder::CylinderSet;
use crate::error::Result;
use crate::interval::Interval;
use crate::system::{Budget, Cplifs};

/// Relative spread below which the last bounds count as a plateau.
pub const PLATEAU_REL_CHANGE: f64 = 1e-3;
/// Number of trailing levels inspected.
pub const TREND_LEVELS: usize = 3;
/// A plateau must stay above this fraction of `|I^F|`.
pub const PLATEAU_FLOOR: f64 = 1e-6;

/// Total length of the union of level-`n` cylinders, `n = 1..=n_max`.
pub fn lebesgue_upper_bound(system: &Cplifs, n_max: usize, budget: Budget) -> Result<Vec<f64>> {
    budget.check(system.len(), n_max)?;
    let mut set = CylinderSet::root(system);
    let mut bounds = Vec::with_capacity(n_max);
    for _ in 0..n_max {
        set = set.refine(system);
        bounds.push(union_length_of(set.intervals(), set.lengths()));
    }
    Ok(bounds)
}

pub fn union_length(intervals: &[Interval]) -> f64 {
    union_length_of(intervals, intervals.iter().map(Interval::len))
}

/// Union length where an interval that overlaps nothing contributes its
/// given length rather than its endpoint difference.
fn union_length_of(intervals: &[Interval], lengths: impl Iterator<Item = f64>) -> f64 {
    let mut sorted: Vec<(Interval, f64)> = intervals.iter().copied().zip(lengths).collect();
    sorted.sort_by(|a, b| a.0.lo.total_cmp(&b.0.lo));
    let mut total = CompensatedSum::default();
    // merged hull and, while it holds a single interval, that interval's length
    let mut current: Option<(Interval, Option<f64>)> = None;
    let close = |(c, single): (Interval, Option<f64>)| single.unwrap_or(c.len());
    for (j, len) in sorted {
        current = match current {
            Some((c, _)) if j.lo <= c.hi => Some((Interval { lo: c.lo, hi: c.hi.max(j.hi) }, None)),
            Some(c) => {
                total.add(close(c));
                Some((j, Some(len)))
            }
            None => Some((j, Some(len))),
        };
    }
    total.add(current.map_or(0.0, close));
    total.value()
}

/// Neumaier summation; level-20 unions add up a million terms.
#[derive(Default)]
struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ConsistentPositive,
    ConsistentNull,
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::ConsistentPositive => "CONSISTENT_POSITIVE",
            Verdict::ConsistentNull => "CONSISTENT_NULL",
            Verdict::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeasureEvidence {
    pub verdict: Verdict,
    pub natural_dimension: f64,
    pub last_bound: f64,
    /// `(max - min) / max` over the trailing levels.
    pub trailing_spread: f64,
    /// Largest ratio of consecutive bounds over the trailing levels.
    pub worst_ratio: f64,
    pub plateau_threshold: f64,
    pub levels: usize,
}

/// Positive when `s_F > 1` and the bounds level off above the floor; null
/// when `s_F < 1` and every trailing ratio shows decay; otherwise
/// inconclusive.
pub fn measure_evidence(system: &Cplifs, bounds: &[f64], natural_dimension: f64) -> MeasureEvidence {
    let k = TREND_LEVELS.min(bounds.len());
    let tail = &bounds[bounds.len() - k..];
    let max = tail.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let trailing_spread = if max > 0.0 { (max - min) / max } else { 0.0 };
    let ratio_tail = &bounds[bounds.len().saturating_sub(TREND_LEVELS + 1)..];
    let worst_ratio = ratio_tail
        .windows(2)
        .map(|w| if w[0] > 0.0 { w[1] / w[0] } else { 0.0 })
        .fold(0.0, f64::max);
    let last_bound = bounds.last().copied().unwrap_or(f64::NAN);
    let floor = PLATEAU_FLOOR * system.invariant_interval().len();

    let plateau = bounds.len() >= TREND_LEVELS && trailing_spread < PLATEAU_REL_CHANGE && last_bound > floor;
    let decay = ratio_tail.len() > TREND_LEVELS && worst_ratio <= 1.0 - PLATEAU_REL_CHANGE;
    let verdict = if natural_dimension > 1.0 && plateau {
        Verdict::ConsistentPositive
    } else if natural_dimension < 1.0 && decay {
        Verdict::ConsistentNull
    } else {
        Verdict::Inconclusive
    };
    MeasureEvidence {
        verdict,
        natural_dimension,
        last_bound,
        trailing_spread,
        worst_ratio,
        plateau_threshold: PLATEAU_REL_CHANGE,
        levels: bounds.len(),
    }
}
