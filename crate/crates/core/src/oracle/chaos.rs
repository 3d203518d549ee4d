use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::format::fmt_g17;
use crate::interval::Interval;
use crate::system::Cplifs;

use super::rng::SplitMix64;

pub const BURN_IN: usize = 100;

/// Samples of the attractor from random iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct PointCloud {
    pub samples: Vec<f64>,
    pub seed: u64,
    pub burn_in: usize,
    /// The invariant interval of the sampled system.
    pub domain: Interval,
}

impl PointCloud {
    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// CSV with header `index,x`.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "index,x")?;
        for (i, &x) in self.samples.iter().enumerate() {
            writeln!(out, "{},{}", i, fmt_g17(x))?;
        }
        Ok(())
    }
}

/// Uniform choice of maps.
pub fn chaos_game(system: &Cplifs, count: usize, seed: u64) -> Result<PointCloud> {
    let weights = vec![1.0; system.len()];
    chaos_game_weighted(system, count, seed, &weights)
}

pub fn chaos_game_weighted(system: &Cplifs, count: usize, seed: u64, weights: &[f64]) -> Result<PointCloud> {
    if count == 0 {
        return Err(Error::InvalidInput("sample count must be >= 1".into()));
    }
    if weights.len() != system.len() || weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
        return Err(Error::InvalidInput("need one nonnegative weight per map".into()));
    }
    let total: f64 = weights.iter().sum();
    if total.is_nan() || total <= 0.0 {
        return Err(Error::InvalidInput("weights sum to zero".into()));
    }
    let mut cumulative: Vec<f64> = weights
        .iter()
        .scan(0.0, |acc, w| {
            *acc += w / total;
            Some(*acc)
        })
        .collect();
    *cumulative.last_mut().expect("at least one map") = 1.0;

    let mut rng = SplitMix64::new(seed);
    let domain = system.invariant_interval();
    let mut x = domain.midpoint();
    let mut samples = Vec::with_capacity(count);
    for step in 0..BURN_IN + count {
        let u = rng.next_f64();
        let k = cumulative.partition_point(|&c| c <= u).min(system.len() - 1);
        x = system.map(k).eval(x);
        if step >= BURN_IN {
            samples.push(x);
        }
    }
    Ok(PointCloud {
        samples,
        seed,
        burn_in: BURN_IN,
        domain,
    })
}
