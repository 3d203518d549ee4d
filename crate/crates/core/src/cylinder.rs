use crate::error::Result;
use crate::interval::Interval;
use crate::system::{Budget, Cplifs};
use crate::word::Word;

/// All cylinder intervals `I_w = f_w(I^F)` of one level, indexed by the
/// lexicographic rank of `w` (first symbol most significant).
#[derive(Debug, Clone, PartialEq)]
pub struct CylinderSet {
    level: usize,
    alphabet: usize,
    intervals: Vec<Interval>,
    // carried multiplicatively: endpoint differences lose all relative
    // precision once cylinders shrink below the rounding error of |I^F|
    lengths: Vec<f64>,
    unit: f64,
}

impl CylinderSet {
    /// The level-0 set: the invariant interval itself, keyed by the empty word.
    pub fn root(system: &Cplifs) -> Self {
        CylinderSet {
            level: 0,
            alphabet: system.len(),
            intervals: vec![system.invariant_interval()],
            lengths: vec![system.invariant_interval().len()],
            unit: system.invariant_interval().len(),
        }
    }

    /// Level `n+1` from level `n`: `I_{kw} = f_k(I_w)`.
    pub fn refine(&self, system: &Cplifs) -> Self {
        let capacity = self.intervals.len() * system.len();
        let mut intervals = Vec::with_capacity(capacity);
        let mut lengths = Vec::with_capacity(capacity);
        for f in system.maps() {
            for (&j, &len) in self.intervals.iter().zip(&self.lengths) {
                let image = f.image(j);
                intervals.push(image);
                lengths.push(match f.piece_on(j, 0.0) {
                    Some(i) => f.slopes()[i].abs() * len,
                    None => image.len(),
                });
            }
        }
        CylinderSet {
            level: self.level + 1,
            alphabet: self.alphabet,
            intervals,
            lengths,
            unit: self.unit,
        }
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn get(&self, word: &Word) -> Option<Interval> {
        if word.len() != self.level || word.max_symbol().is_some_and(|s| s >= self.alphabet) {
            return None;
        }
        self.intervals.get(word.index(self.alphabet)).copied()
    }

    pub fn word(&self, index: usize) -> Word {
        Word::from_index(index, self.level, self.alphabet)
    }

    pub fn iter(&self) -> impl Iterator<Item = (Word, Interval)> + '_ {
        self.intervals
            .iter()
            .enumerate()
            .map(|(i, &j)| (self.word(i), j))
    }

    /// Cylinder lengths, accurate to relative rounding error even where the
    /// endpoints no longer resolve the interval.
    pub fn lengths(&self) -> impl Iterator<Item = f64> + '_ {
        self.lengths.iter().copied()
    }

    /// `|I^F|`, the length of the level-0 cylinder.
    pub fn unit(&self) -> f64 {
        self.unit
    }

    pub fn length(&self, index: usize) -> f64 {
        self.lengths[index]
    }

    /// Indices of the cylinders whose closed interval contains `x`.
    pub fn containing(&self, x: f64, tol: f64) -> Vec<usize> {
        self.intervals
            .iter()
            .enumerate()
            .filter(|(_, j)| j.contains(x, tol))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Level-`n` cylinder intervals, built by folding images right to left.
pub fn cylinders(system: &Cplifs, level: usize, budget: Budget) -> Result<CylinderSet> {
    budget.check(system.len(), level)?;
    let mut set = CylinderSet::root(system);
    for _ in 0..level {
        set = set.refine(system);
    }
    Ok(set)
}
