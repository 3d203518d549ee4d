//! Finite-depth separation of compositions of similarities. Two maps with
//! different ratios are at distance infinity; with equal ratios the distance
//! is the difference of their offsets. Small `Δ_n` is evidence of near
//! overlaps, never a proof about the asymptotic condition.

use crate::error::Result;
use crate::map::Similarity;
use crate::system::Budget;
use crate::word::Word;

const RATIO_REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct EscReport {
    pub level: usize,
    pub compositions: usize,
    /// `Δ_n`, infinite when no two compositions share a ratio.
    pub delta: f64,
    /// `Δ_n^{1/n}`.
    pub delta_root: f64,
    /// A pair of words attaining `Δ_n`.
    pub closest: Option<(Word, Word)>,
}

pub fn esc_diagnostic(maps: &[Similarity], level: usize, budget: Budget) -> Result<EscReport> {
    let m = maps.len();
    let count = budget.check(m, level)? as usize;
    // compositions in word order: index = Σ w_i m^{n-i}
    let mut comps = vec![Similarity::IDENTITY];
    for _ in 0..level {
        let mut next = Vec::with_capacity(comps.len() * m);
        for f in maps {
            next.extend(comps.iter().map(|g| f.compose(g)));
        }
        comps = next;
    }
    debug_assert_eq!(comps.len(), count);

    let mut order: Vec<usize> = (0..comps.len()).collect();
    order.sort_by(|&a, &b| {
        comps[a]
            .ratio
            .total_cmp(&comps[b].ratio)
            .then(comps[a].offset.total_cmp(&comps[b].offset))
    });
    let mut delta = f64::INFINITY;
    let mut closest = None;
    let mut start = 0;
    while start < order.len() {
        let r0 = comps[order[start]].ratio;
        let mut end = start + 1;
        while end < order.len() && (comps[order[end]].ratio - r0).abs() <= RATIO_REL_TOL * r0.abs() {
            end += 1;
        }
        let mut group: Vec<usize> = order[start..end].to_vec();
        group.sort_by(|&a, &b| comps[a].offset.total_cmp(&comps[b].offset));
        for pair in group.windows(2) {
            let d = (comps[pair[1]].offset - comps[pair[0]].offset).abs();
            if d < delta {
                delta = d;
                let (a, b) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
                closest = Some((Word::from_index(a, level, m), Word::from_index(b, level, m)));
            }
        }
        start = end;
    }
    let delta_root = if level == 0 { delta } else { delta.powf(1.0 / level as f64) };
    Ok(EscReport {
        level,
        compositions: comps.len(),
        delta,
        delta_root,
        closest,
    })
}
