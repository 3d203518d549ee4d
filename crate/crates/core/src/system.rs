//! CPLIFS: an ordered family of piecewise linear contractions.

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::{GeneratedSimilarity, PLMap, Similarity};
use crate::word::Word;

/// Default enumeration cap on the number of cylinder intervals (2^26).
pub const DEFAULT_BUDGET: u64 = 1 << 26;

/// Relative tolerance for geometric predicates, scaled by |I^F|.
pub const DEFAULT_REL_TOL: f64 = 1e-12;

const INVARIANT_STEP_TOL: f64 = 1e-14;
const INVARIANT_MAX_ITER: usize = 10_000;

/// Cap on the number of intervals any enumeration may produce.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget(pub u64);

impl Default for Budget {
    fn default() -> Self {
        Budget(DEFAULT_BUDGET)
    }
}

impl Budget {
    /// Reads `PLIFS_BUDGET`, falling back to the default cap.
    pub fn from_env() -> Self {
        std::env::var("PLIFS_BUDGET")
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget)
            .unwrap_or_default()
    }

    /// Fails unless `count^level` fits in the budget.
    pub fn check(&self, count: usize, level: usize) -> Result<u64> {
        let requested = (count as u128).checked_pow(level as u32).unwrap_or(u128::MAX);
        if requested > self.0 as u128 {
            Err(Error::BudgetExceeded {
                requested,
                budget: self.0,
            })
        } else {
            Ok(requested as u64)
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cplifs {
    maps: Vec<PLMap>,
    invariant: Interval,
}

impl Cplifs {
    pub fn new(maps: Vec<PLMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::EmptySystem);
        }
        for (k, f) in maps.iter().enumerate() {
            if let Some(&s) = f.slopes().iter().find(|s| s.abs() >= 1.0) {
                return Err(Error::NonContractive { map: k, slope: s });
            }
        }
        let invariant = smallest_invariant_interval(&maps)?;
        Ok(Cplifs { maps, invariant })
    }

    pub fn maps(&self) -> &[PLMap] {
        &self.maps
    }

    pub fn map(&self, k: usize) -> &PLMap {
        &self.maps[k]
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }

    /// Breaking-point counts l(k).
    pub fn type_vector(&self) -> Vec<usize> {
        self.maps.iter().map(|f| f.breaks().len()).collect()
    }

    /// Smallest compact interval sent into itself by every map.
    pub fn invariant_interval(&self) -> Interval {
        self.invariant
    }

    /// Absolute tolerance for geometric predicates on this system.
    pub fn tolerance(&self, rel: f64) -> f64 {
        let len = self.invariant.len();
        if len > 0.0 {
            rel * len
        } else {
            rel
        }
    }

    pub fn is_injective(&self) -> bool {
        self.maps.iter().all(PLMap::is_injective)
    }

    /// Largest slope modulus over all maps.
    pub fn max_ratio(&self) -> f64 {
        self.maps.iter().fold(0.0, |m, f| m.max(f.lipschitz()))
    }

    pub fn min_ratio(&self) -> f64 {
        self.maps.iter().fold(f64::INFINITY, |m, f| m.min(f.min_ratio()))
    }

    /// All breaking points as `(map, point)`, in map order.
    pub fn breaking_points(&self) -> Vec<(usize, f64)> {
        self.maps
            .iter()
            .enumerate()
            .flat_map(|(k, f)| f.breaks().iter().map(move |&b| (k, b)))
            .collect()
    }

    /// The self-similar IFS formed by every affine piece of every map.
    pub fn generated_similarities(&self) -> Vec<GeneratedSimilarity> {
        self.maps
            .iter()
            .enumerate()
            .flat_map(|(k, f)| f.generated_similarities(k))
            .collect()
    }

    /// `f_{w_1} ∘ ... ∘ f_{w_n}(x)`.
    pub fn eval_word(&self, word: &Word, x: f64) -> f64 {
        word.symbols()
            .iter()
            .rev()
            .fold(x, |acc, &k| self.maps[k].eval(acc))
    }

    pub fn image_word(&self, word: &Word, j: Interval) -> Interval {
        word.symbols()
            .iter()
            .rev()
            .fold(j, |acc, &k| self.maps[k].image(acc))
    }

    /// The composition `f_w` restricted to `j` when it is affine there, with
    /// the image of `j`. `None` when some intermediate image straddles a break.
    pub fn compose_on(&self, word: &Word, j: Interval, tol: f64) -> Option<(Similarity, Interval)> {
        let mut acc = Similarity::IDENTITY;
        let mut cur = j;
        for &k in word.symbols().iter().rev() {
            let f = &self.maps[k];
            let piece = f.piece_on(cur, tol)?;
            let sim = f.piece(piece);
            acc = sim.compose(&acc);
            cur = f.image(cur);
        }
        Some((acc, cur))
    }

    /// Fixed point of `f_w` (a contraction), by iteration from the midpoint
    /// of the invariant interval.
    pub fn word_fixed_point(&self, word: &Word) -> f64 {
        let mut x = self.invariant.midpoint();
        if word.is_empty() {
            return x;
        }
        for _ in 0..INVARIANT_MAX_ITER {
            let nx = self.eval_word(word, x);
            if nx == x || (nx - x).abs() <= f64::EPSILON * nx.abs().max(1e-300) {
                return nx;
            }
            x = nx;
        }
        x
    }
}

fn smallest_invariant_interval(maps: &[PLMap]) -> Result<Interval> {
    let fixed: Vec<f64> = maps.iter().map(PLMap::fixed_point).collect();
    let mut j = fixed
        .iter()
        .skip(1)
        .fold(Interval::point(fixed[0]), |acc, &x| acc.hull(&Interval::point(x)));
    for _ in 0..INVARIANT_MAX_ITER {
        let next = maps.iter().fold(j, |acc, f| acc.hull(&f.image(j)));
        let moved = (next.lo - j.lo).abs().max((next.hi - j.hi).abs());
        j = next;
        if moved < INVARIANT_STEP_TOL {
            return Ok(j);
        }
    }
    Err(Error::ConvergenceFailure(
        "invariant interval iteration hit its cap".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cantor() -> Cplifs {
        Cplifs::new(vec![
            PLMap::affine(1.0 / 3.0, 0.0).unwrap(),
            PLMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ])
        .unwrap()
    }

    fn two_piece() -> Cplifs {
        Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.8, 0.2], 0.0).unwrap(),
            PLMap::affine(0.1, 0.9).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn invariant_interval_examples() {
        let j = cantor().invariant_interval();
        assert!(j.lo.abs() < 1e-14 && (j.hi - 1.0).abs() < 1e-14);
        let j = two_piece().invariant_interval();
        assert!(j.lo.abs() < 1e-14 && (j.hi - 1.0).abs() < 1e-14);
        let single = Cplifs::new(vec![PLMap::affine(0.5, 0.25).unwrap()]).unwrap();
        assert_eq!(single.invariant_interval(), Interval::point(0.5));
    }

    #[test]
    fn invariant_interval_of_folding_map_exceeds_fixed_points() {
        // the tent pushes its peak above both fixed points
        let f = Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.6, -0.6], 0.3).unwrap(),
            PLMap::affine(0.1, 0.0).unwrap(),
        ])
        .unwrap();
        let j = f.invariant_interval();
        for g in f.maps() {
            assert!(j.includes(&g.image(j), 1e-12));
        }
        // fixed points are 0 and 0.5625, the peak value is 0.6
        assert!(j.lo.abs() < 1e-14 && (j.hi - 0.6).abs() < 1e-14);
    }

    #[test]
    fn type_vector_and_breaks() {
        let f = two_piece();
        assert_eq!(f.type_vector(), vec![1, 0]);
        assert_eq!(f.breaking_points(), vec![(0, 0.5)]);
        assert_eq!(f.generated_similarities().len(), 3);
    }

    #[test]
    fn word_fixed_point_and_composition() {
        let f = two_piece();
        let w: Word = "2".parse().unwrap();
        assert!((f.word_fixed_point(&w) - 1.0).abs() < 1e-15);
        let w: Word = "12".parse().unwrap();
        assert!((f.eval_word(&w, 1.0) - 0.5).abs() < 1e-15);
        let (sim, img) = f.compose_on(&w, Interval::new(0.0, 1.0), 1e-12).unwrap();
        assert!((sim.ratio - 0.02).abs() < 1e-15);
        assert!((img.lo - 0.48).abs() < 1e-15 && (img.hi - 0.5).abs() < 1e-15);
        let w: Word = "11".parse().unwrap();
        // f_1 maps [0,1] onto [0,0.5]; f_1 is then affine on it
        assert!(f.compose_on(&w, Interval::new(0.0, 1.0), 1e-12).is_none());
        assert!(f.compose_on(&w, Interval::new(0.0, 0.5), 1e-12).is_some());
    }

    #[test]
    fn budget_check() {
        assert!(Budget(8).check(2, 3).is_ok());
        assert!(matches!(Budget(8).check(2, 4), Err(Error::BudgetExceeded { requested: 16, .. })));
        assert!(Budget::default().check(10, 100).is_err());
    }
}
