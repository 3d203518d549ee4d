//! Continuous piecewise linear contractions of the line.

use crate::error::{Error, Result};
use crate::interval::Interval;

/// Affine map `x -> ratio * x + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Similarity {
    pub ratio: f64,
    pub offset: f64,
}

impl Similarity {
    pub const IDENTITY: Similarity = Similarity {
        ratio: 1.0,
        offset: 0.0,
    };

    pub fn apply(&self, x: f64) -> f64 {
        self.ratio * x + self.offset
    }

    /// `self ∘ inner`.
    pub fn compose(&self, inner: &Similarity) -> Similarity {
        Similarity {
            ratio: self.ratio * inner.ratio,
            offset: self.ratio * inner.offset + self.offset,
        }
    }

    pub fn fixed_point(&self) -> f64 {
        self.offset / (1.0 - self.ratio)
    }
}

/// One affine piece of a CPLIFS map, tagged with its position `(map, piece)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratedSimilarity {
    pub map: usize,
    pub piece: usize,
    pub similarity: Similarity,
}

/// A continuous piecewise linear map stored as breaking points, slopes and
/// its value at zero. The affine pieces are rebuilt from these by
/// accumulation, so continuity holds by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PLMap {
    breaks: Vec<f64>,
    slopes: Vec<f64>,
    tau: f64,
    // offsets[i]: piece i is slopes[i] * x + offsets[i]
    offsets: Vec<f64>,
}

impl PLMap {
    pub fn new(breaks: Vec<f64>, slopes: Vec<f64>, tau: f64) -> Result<Self> {
        if slopes.len() != breaks.len() + 1 {
            return Err(Error::InvalidMap(format!(
                "{} breaks need {} slopes, got {}",
                breaks.len(),
                breaks.len() + 1,
                slopes.len()
            )));
        }
        if !tau.is_finite() {
            return Err(Error::InvalidMap(format!("tau {tau} is not finite")));
        }
        if let Some(b) = breaks.iter().find(|b| !b.is_finite()) {
            return Err(Error::InvalidMap(format!("break {b} is not finite")));
        }
        if breaks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidMap(
                "breaks must be strictly increasing".into(),
            ));
        }
        for &s in &slopes {
            if !s.is_finite() || s == 0.0 {
                return Err(Error::InvalidMap(format!("slope {s} must be finite and nonzero")));
            }
            if s.abs() >= 1.0 {
                return Err(Error::NonContractive { map: 0, slope: s });
            }
        }
        if slopes.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidMap(
                "adjacent slopes must differ".into(),
            ));
        }

        let zero_piece = breaks.partition_point(|&b| b < 0.0);
        let mut offsets = vec![0.0; slopes.len()];
        offsets[zero_piece] = tau;
        for i in zero_piece..breaks.len() {
            offsets[i + 1] = offsets[i] + (slopes[i] - slopes[i + 1]) * breaks[i];
        }
        for i in (0..zero_piece).rev() {
            offsets[i] = offsets[i + 1] + (slopes[i + 1] - slopes[i]) * breaks[i];
        }
        Ok(PLMap {
            breaks,
            slopes,
            tau,
            offsets,
        })
    }

    pub fn affine(slope: f64, tau: f64) -> Result<Self> {
        PLMap::new(Vec::new(), vec![slope], tau)
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn piece_count(&self) -> usize {
        self.slopes.len()
    }

    pub fn piece(&self, i: usize) -> Similarity {
        Similarity {
            ratio: self.slopes[i],
            offset: self.offsets[i],
        }
    }

    /// Closed domain of linearity of piece `i`.
    pub fn piece_domain(&self, i: usize) -> Interval {
        let lo = if i == 0 { f64::NEG_INFINITY } else { self.breaks[i - 1] };
        let hi = self.breaks.get(i).copied().unwrap_or(f64::INFINITY);
        Interval { lo, hi }
    }

    /// Largest slope modulus.
    pub fn lipschitz(&self) -> f64 {
        self.slopes.iter().fold(0.0, |m, s| m.max(s.abs()))
    }

    pub fn min_ratio(&self) -> f64 {
        self.slopes.iter().fold(f64::INFINITY, |m, s| m.min(s.abs()))
    }

    pub fn is_injective(&self) -> bool {
        let first = self.slopes[0].is_sign_positive();
        self.slopes.iter().all(|s| s.is_sign_positive() == first)
    }

    pub fn eval(&self, x: f64) -> f64 {
        let i = self.breaks.partition_point(|&b| b < x);
        self.slopes[i] * x + self.offsets[i]
    }

    /// Exact image of `j`: extrema are attained at endpoints or at breaks
    /// interior to `j`.
    pub fn image(&self, j: Interval) -> Interval {
        let a = self.eval(j.lo);
        let b = self.eval(j.hi);
        let (mut lo, mut hi) = if a <= b { (a, b) } else { (b, a) };
        let start = self.breaks.partition_point(|&b| b <= j.lo);
        for &bp in self.breaks[start..].iter().take_while(|&&b| b < j.hi) {
            let v = self.eval(bp);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        Interval { lo, hi }
    }

    /// Index of the unique piece whose closed domain contains `j`, or `None`
    /// when a break lies more than `tol` inside `j`.
    pub fn piece_on(&self, j: Interval, tol: f64) -> Option<usize> {
        let first = self.breaks.partition_point(|&b| b <= j.lo + tol);
        match self.breaks.get(first) {
            Some(&b) if b < j.hi - tol => None,
            _ => Some(first),
        }
    }

    /// The unique fixed point, found on the piece that contains it.
    pub fn fixed_point(&self) -> f64 {
        for i in 0..self.piece_count() {
            let x = self.piece(i).fixed_point();
            let d = self.piece_domain(i);
            if x >= d.lo && x <= d.hi {
                return x;
            }
        }
        // Rounding can push the candidate just across a break.
        let mut x = 0.0;
        for _ in 0..10_000 {
            let nx = self.eval(x);
            if nx == x {
                break;
            }
            x = nx;
        }
        x
    }

    pub fn generated_similarities(&self, map: usize) -> impl Iterator<Item = GeneratedSimilarity> + '_ {
        (0..self.piece_count()).map(move |piece| GeneratedSimilarity {
            map,
            piece,
            similarity: self.piece(piece),
        })
    }
}
