//! Natural pressure of the cylinder covers and the natural dimension.
//!
//! At level `n` the partition sum is `Z_n(s) = Σ_{|w|=n} |I_w|^s`, with
//! lengths measured in units of `|I^F|` and evaluated in the log domain. Its root `s_n` (`Z_n(s_n) = 1`) is found by bisection and
//! the natural dimension is estimated from the tail of `(s_n)`.

use std::time::{Duration, Instant};

use crate::cylinder::CylinderSet;
use crate::error::{Error, Result};
use crate::system::{Budget, Cplifs};

const ROOT_WIDTH: f64 = 1e-13;
const MAX_UPPER: f64 = 1e6;

/// Log-lengths of the positive-length cylinders of one level.
#[derive(Debug, Clone)]
pub struct LevelSum {
    level: usize,
    log_lengths: Vec<f64>,
    zero_length: usize,
}

impl LevelSum {
    pub fn from_cylinders(set: &CylinderSet) -> Self {
        let mut log_lengths = Vec::with_capacity(set.len());
        let mut zero_length = 0;
        let log_unit = set.unit().ln();
        for len in set.lengths() {
            if len > 0.0 {
                log_lengths.push(len.ln() - log_unit);
            } else {
                zero_length += 1;
            }
        }
        LevelSum {
            level: set.level(),
            log_lengths,
            zero_length,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn word_count(&self) -> usize {
        self.log_lengths.len() + self.zero_length
    }

    pub fn zero_length_count(&self) -> usize {
        self.zero_length
    }

    /// `log Z_n(s)`. Zero-length cylinders count only at `s = 0`.
    pub fn log_sum(&self, s: f64) -> f64 {
        if s == 0.0 {
            return (self.word_count() as f64).ln();
        }
        if self.log_lengths.is_empty() {
            return f64::NEG_INFINITY;
        }
        let max = self
            .log_lengths
            .iter()
            .fold(f64::NEG_INFINITY, |m, &l| m.max(s * l));
        let acc: f64 = self.log_lengths.iter().map(|&l| (s * l - max).exp()).sum();
        max + acc.ln()
    }

    /// `(1/n) log Z_n(s)`.
    pub fn pressure(&self, s: f64) -> f64 {
        self.log_sum(s) / self.level.max(1) as f64
    }

    /// Unique `s ≥ 0` with `Z_n(s) = 1`.
    pub fn root(&self) -> Result<f64> {
        if self.log_lengths.is_empty() {
            return Err(Error::DegenerateAttractor);
        }
        // positive-length cylinders only: Z(0+) = their count
        let g = |s: f64| -> f64 {
            if s == 0.0 {
                (self.log_lengths.len() as f64).ln()
            } else {
                self.log_sum(s)
            }
        };
        if g(0.0) <= 0.0 {
            return Ok(0.0);
        }
        let mut lo = 0.0;
        let mut hi = 1.0;
        while g(hi) >= 0.0 {
            lo = hi;
            hi *= 2.0;
            if hi > MAX_UPPER {
                return Err(Error::ConvergenceFailure(
                    "partition sum does not drop below 1".into(),
                ));
            }
        }
        while hi - lo > ROOT_WIDTH {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(0.5 * (lo + hi))
    }
}

/// Root `s_n` of one level with its partition-sum evaluator.
#[derive(Debug, Clone)]
pub struct PressureProfile {
    pub level: usize,
    pub root: f64,
    pub sum: LevelSum,
    pub elapsed: Duration,
}

impl PressureProfile {
    pub fn word_count(&self) -> usize {
        self.sum.word_count()
    }

    pub fn pressure(&self, s: f64) -> f64 {
        self.sum.pressure(s)
    }
}

/// `(1/n) log Σ_{|w|=n} |I_w|^s`.
pub fn pressure_at(system: &Cplifs, s: f64, level: usize, budget: Budget) -> Result<f64> {
    if s < 0.0 || !s.is_finite() {
        return Err(Error::InvalidInput(format!("pressure needs s >= 0, got {s}")));
    }
    if level == 0 {
        return Err(Error::InvalidInput("pressure needs level >= 1".into()));
    }
    let set = crate::cylinder::cylinders(system, level, budget)?;
    let sum = LevelSum::from_cylinders(&set);
    let value = sum.pressure(s);
    if value == f64::NEG_INFINITY {
        return Err(Error::DegenerateAttractor);
    }
    Ok(value)
}

pub fn solve_level_root(system: &Cplifs, level: usize, budget: Budget) -> Result<PressureProfile> {
    if level == 0 {
        return Err(Error::InvalidInput("level must be >= 1".into()));
    }
    let start = Instant::now();
    let set = crate::cylinder::cylinders(system, level, budget)?;
    profile(&set, start)
}

fn profile(set: &CylinderSet, start: Instant) -> Result<PressureProfile> {
    let sum = LevelSum::from_cylinders(set);
    let root = sum.root()?;
    Ok(PressureProfile {
        level: set.level(),
        root,
        sum,
        elapsed: start.elapsed(),
    })
}

#[derive(Debug, Clone)]
pub struct NaturalDimEstimate {
    /// `(n, s_n)` for every computed level.
    pub sequence: Vec<(usize, f64)>,
    pub window: usize,
    /// Max over the trailing window, standing in for the limsup.
    pub estimate: f64,
    /// Max minus min over the trailing window.
    pub spread: f64,
}

impl NaturalDimEstimate {
    pub fn tail(&self) -> &[(usize, f64)] {
        let k = self.window.min(self.sequence.len());
        &self.sequence[self.sequence.len() - k..]
    }
}

/// Computes `s_n` for `n` in `min_level..=max_level`, building the cylinder
/// levels incrementally.
pub fn natural_dimension(
    system: &Cplifs,
    min_level: usize,
    max_level: usize,
    window: usize,
    budget: Budget,
) -> Result<NaturalDimEstimate> {
    if min_level == 0 || min_level > max_level || window == 0 {
        return Err(Error::InvalidInput(format!(
            "need 1 <= n_min <= n_max and window >= 1 (got {min_level}..{max_level}, window {window})"
        )));
    }
    budget.check(system.len(), max_level)?;
    if system.invariant_interval().is_degenerate() {
        let sequence = (min_level..=max_level).map(|n| (n, 0.0)).collect();
        return Ok(NaturalDimEstimate {
            sequence,
            window,
            estimate: 0.0,
            spread: 0.0,
        });
    }
    let mut set = CylinderSet::root(system);
    let mut sequence = Vec::with_capacity(max_level + 1 - min_level);
    for n in 1..=max_level {
        set = set.refine(system);
        if n >= min_level {
            let root = LevelSum::from_cylinders(&set).root()?;
            sequence.push((n, root));
        }
    }
    let k = window.min(sequence.len());
    let tail = &sequence[sequence.len() - k..];
    let max = tail.iter().fold(f64::NEG_INFINITY, |m, &(_, s)| m.max(s));
    let min = tail.iter().fold(f64::INFINITY, |m, &(_, s)| m.min(s));
    Ok(NaturalDimEstimate {
        sequence,
        window,
        estimate: max,
        spread: max - min,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct UpperBoundCheck {
    pub box_dimension: f64,
    pub natural_dimension: f64,
    pub tolerance: f64,
    pub consistent: bool,
}

/// The upper box dimension never exceeds the natural dimension; flags an
/// estimate that does by more than `tolerance`.
pub fn upper_box_consistency(natural: f64, box_dimension: f64, tolerance: f64) -> UpperBoundCheck {
    UpperBoundCheck {
        box_dimension,
        natural_dimension: natural,
        tolerance,
        consistent: box_dimension <= natural + tolerance,
    }
}
