//! Structural conditions on a CPLIFS: interval open set condition,
//! smallness, regularity diagnostics and symbolic codes of breaking points.

use crate::cylinder::{cylinders, CylinderSet};
use crate::error::{Error, Result};
use crate::system::{Budget, Cplifs};
use crate::word::Word;

#[derive(Debug, Clone, PartialEq)]
pub struct IoscReport {
    pub holds: bool,
    /// Smallest signed gap between two first cylinders (negative on overlap,
    /// `+inf` for a single map).
    pub min_gap: f64,
    pub closest_pair: Option<(usize, usize)>,
}

/// Interval open set condition: the closed first cylinders are pairwise
/// disjoint. Touching endpoints count as a violation.
pub fn check_iosc(system: &Cplifs, rel_tol: f64) -> IoscReport {
    let tol = system.tolerance(rel_tol);
    let j = system.invariant_interval();
    let first: Vec<_> = system.maps().iter().map(|f| f.image(j)).collect();
    let mut min_gap = f64::INFINITY;
    let mut closest_pair = None;
    for a in 0..first.len() {
        for b in a + 1..first.len() {
            let g = first[a].gap(&first[b]);
            if g < min_gap {
                min_gap = g;
                closest_pair = Some((a, b));
            }
        }
    }
    IoscReport {
        holds: min_gap > tol,
        min_gap,
        closest_pair,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MapSmallness {
    pub rho: f64,
    pub injective: bool,
    pub bound: f64,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SmallnessReport {
    pub holds: bool,
    pub ratio_sum: f64,
    pub sum_holds: bool,
    pub maps: Vec<MapSmallness>,
}

impl SmallnessReport {
    pub fn failing_maps(&self) -> impl Iterator<Item = (usize, &MapSmallness)> {
        self.maps.iter().enumerate().filter(|(_, m)| !m.holds)
    }
}

/// Smallness: `Σ ρ_k < 1`, and `ρ_k < 1/2` for injective maps or
/// `ρ_k < (1 - ρ_max)/2` for folding ones.
pub fn check_small(system: &Cplifs) -> SmallnessReport {
    let rho_max = system.max_ratio();
    let maps: Vec<MapSmallness> = system
        .maps()
        .iter()
        .map(|f| {
            let rho = f.lipschitz();
            let injective = f.is_injective();
            let bound = if injective { 0.5 } else { (1.0 - rho_max) / 2.0 };
            MapSmallness {
                rho,
                injective,
                bound,
                holds: rho < bound,
            }
        })
        .collect();
    let ratio_sum: f64 = maps.iter().map(|m| m.rho).sum();
    let sum_holds = ratio_sum < 1.0;
    SmallnessReport {
        holds: sum_holds && maps.iter().all(|m| m.holds),
        ratio_sum,
        sum_holds,
        maps,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum BreakStatus {
    /// Outside every level-`depth` cylinder, hence off the attractor.
    CertifiedOffAttractor,
    /// Still covered at this depth by the listed cylinders.
    UndecidedAtDepth(Vec<Word>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BreakDiagnostic {
    pub map: usize,
    pub point: f64,
    pub status: BreakStatus,
}

/// Finite-depth regularity check of every breaking point.
pub fn regularity_diagnostic(
    system: &Cplifs,
    depth: usize,
    budget: Budget,
    rel_tol: f64,
) -> Result<Vec<BreakDiagnostic>> {
    let breaks = system.breaking_points();
    if breaks.is_empty() {
        return Ok(Vec::new());
    }
    let set = cylinders(system, depth, budget)?;
    Ok(diagnose(system, &set, &breaks, rel_tol))
}

pub(crate) fn diagnose(
    system: &Cplifs,
    set: &CylinderSet,
    breaks: &[(usize, f64)],
    rel_tol: f64,
) -> Vec<BreakDiagnostic> {
    let tol = system.tolerance(rel_tol);
    breaks
        .iter()
        .map(|&(map, point)| {
            let hits = set.containing(point, tol);
            let status = if hits.is_empty() {
                BreakStatus::CertifiedOffAttractor
            } else {
                BreakStatus::UndecidedAtDepth(hits.into_iter().map(|i| set.word(i)).collect())
            };
            BreakDiagnostic { map, point, status }
        })
        .collect()
}

/// Result of checking a claimed code `prefix · period^∞` of a breaking point.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakingCodeCheck {
    pub holds: bool,
    /// Fixed point `y` of `f_period`.
    pub periodic_point: f64,
    pub period_residual: f64,
    pub prefix_residual: f64,
    /// `b ∈ I_{prefix·period^j}` for `j = 1..3`.
    pub contained: bool,
}

impl BreakingCodeCheck {
    pub fn require(self) -> Result<Self> {
        if self.holds {
            Ok(self)
        } else {
            Err(Error::ToleranceViolation(format!(
                "period residual {:e}, prefix residual {:e}, nested containment {}",
                self.period_residual, self.prefix_residual, self.contained
            )))
        }
    }
}

/// A breaking point together with a verified eventually periodic code.
#[derive(Debug, Clone, PartialEq)]
pub struct BreakingCode {
    pub point: f64,
    pub prefix: Word,
    pub period: Word,
}

impl BreakingCode {
    pub fn is_periodic(&self) -> bool {
        self.prefix.is_empty()
    }
}

pub fn verify_breaking_code(
    system: &Cplifs,
    point: f64,
    prefix: &Word,
    period: &Word,
    rel_tol: f64,
) -> Result<BreakingCodeCheck> {
    let m = system.len();
    if period.is_empty() {
        return Err(Error::InvalidInput("period word must be nonempty".into()));
    }
    if prefix.max_symbol().max(period.max_symbol()).is_some_and(|s| s >= m) {
        return Err(Error::InvalidInput(format!("code uses a symbol outside 1..{m}")));
    }
    let tol = system.tolerance(rel_tol);
    let y = system.word_fixed_point(period);
    let period_residual = (system.eval_word(period, y) - y).abs();
    let prefix_residual = (system.eval_word(prefix, y) - point).abs();
    let root = system.invariant_interval();
    let contained = (1..=3).all(|j| {
        let w = prefix.concat(&period.repeat(j));
        system.image_word(&w, root).contains(point, tol)
    });
    Ok(BreakingCodeCheck {
        holds: period_residual <= tol && prefix_residual <= tol && contained,
        periodic_point: y,
        period_residual,
        prefix_residual,
        contained,
    })
}

/// Searches codes `prefix · period^∞` of `point` with primitive periods,
/// shortest first. Prefixes never end in the period's last symbol, so each
/// sequence is listed once.
pub fn find_breaking_codes(
    system: &Cplifs,
    point: f64,
    max_prefix: usize,
    max_period: usize,
    rel_tol: f64,
) -> Vec<BreakingCode> {
    let m = system.len();
    let mut found = Vec::new();
    for total in 1..=(max_prefix + max_period) {
        for period_len in 1..=max_period.min(total) {
            let prefix_len = total - period_len;
            if prefix_len > max_prefix {
                continue;
            }
            let periods = m.pow(period_len as u32);
            let prefixes = m.pow(prefix_len as u32);
            for pi in 0..periods {
                let period = Word::from_index(pi, period_len, m);
                if !period.is_primitive() {
                    continue;
                }
                let last = *period.symbols().last().unwrap();
                for qi in 0..prefixes {
                    let prefix = Word::from_index(qi, prefix_len, m);
                    if prefix.symbols().last() == Some(&last) {
                        continue;
                    }
                    let ok = verify_breaking_code(system, point, &prefix, &period, rel_tol)
                        .map(|c| c.holds)
                        .unwrap_or(false);
                    if ok && !found.iter().any(|c: &BreakingCode| same_sequence(c, &prefix, &period)) {
                        found.push(BreakingCode {
                            point,
                            prefix,
                            period: period.clone(),
                        });
                    }
                }
            }
        }
    }
    found
}

// Two eventually periodic sequences coincide iff they agree on their longer
// prefix plus a common multiple of the two periods.
fn same_sequence(code: &BreakingCode, prefix: &Word, period: &Word) -> bool {
    let n = code.prefix.len().max(prefix.len()) + code.period.len() * period.len();
    let expand = |p: &Word, q: &Word| -> Vec<usize> {
        p.symbols()
            .iter()
            .chain(q.symbols().iter().cycle())
            .take(n)
            .copied()
            .collect()
    };
    expand(&code.prefix, &code.period) == expand(prefix, period)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::PLMap;
    use crate::system::DEFAULT_REL_TOL;

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

    fn family_m3() -> Cplifs {
        Cplifs::new(vec![
            PLMap::affine(0.25, 0.0).unwrap(),
            PLMap::new(vec![0.5], vec![0.2, 0.3], 0.5 * 0.8).unwrap(),
            PLMap::affine(0.25, 0.75).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn iosc_examples() {
        let r = check_iosc(&cantor(), DEFAULT_REL_TOL);
        assert!(r.holds);
        assert!((r.min_gap - 1.0 / 3.0).abs() < 1e-14);
        let halves = Cplifs::new(vec![
            PLMap::affine(0.5, 0.0).unwrap(),
            PLMap::affine(0.5, 0.5).unwrap(),
        ])
        .unwrap();
        assert!(!check_iosc(&halves, DEFAULT_REL_TOL).holds);
        let r = check_iosc(&two_piece(), DEFAULT_REL_TOL);
        assert!(r.holds);
        assert!((r.min_gap - 0.4).abs() < 1e-14);
        let single = Cplifs::new(vec![PLMap::affine(0.5, 0.25).unwrap()]).unwrap();
        assert!(check_iosc(&single, DEFAULT_REL_TOL).holds);
    }

    #[test]
    fn smallness_examples() {
        assert!(check_small(&cantor()).holds);
        let r = check_small(&two_piece());
        assert!(!r.holds);
        assert!(r.sum_holds);
        let failing: Vec<_> = r.failing_maps().map(|(k, _)| k).collect();
        assert_eq!(failing, vec![0]);
        assert_eq!(r.maps[0].bound, 0.5);
        let tent = Cplifs::new(vec![PLMap::new(vec![0.5], vec![0.6, -0.6], 0.0).unwrap()]).unwrap();
        let r = check_small(&tent);
        assert!(!r.holds);
        assert!((r.maps[0].bound - 0.2).abs() < 1e-15);
    }

    #[test]
    fn regularity_examples() {
        let f = Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.3, 0.34], 0.0).unwrap(),
            PLMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ])
        .unwrap();
        let d = regularity_diagnostic(&f, 2, Budget::default(), DEFAULT_REL_TOL).unwrap();
        assert_eq!(d.len(), 1);
        assert_eq!(d[0].status, BreakStatus::CertifiedOffAttractor);

        for depth in [1, 4, 9] {
            let d = regularity_diagnostic(&two_piece(), depth, Budget::default(), DEFAULT_REL_TOL).unwrap();
            match &d[0].status {
                BreakStatus::UndecidedAtDepth(words) => {
                    let expected = Word::new(std::iter::once(0).chain(std::iter::repeat_n(1, depth - 1)).collect());
                    assert!(words.contains(&expected));
                }
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(regularity_diagnostic(&cantor(), 3, Budget::default(), DEFAULT_REL_TOL)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn breaking_code_examples() {
        let c = verify_breaking_code(&family_m3(), 0.5, &Word::empty(), &"2".parse().unwrap(), DEFAULT_REL_TOL).unwrap();
        assert!(c.holds);
        let c = verify_breaking_code(&two_piece(), 0.5, &"1".parse().unwrap(), &"2".parse().unwrap(), DEFAULT_REL_TOL).unwrap();
        assert!(c.holds);
        assert!((c.periodic_point - 1.0).abs() < 1e-15);
        let c = verify_breaking_code(&two_piece(), 0.5, &Word::empty(), &"1".parse().unwrap(), DEFAULT_REL_TOL).unwrap();
        assert!(!c.holds);
        assert!((c.prefix_residual - 0.5).abs() < 1e-15);
        assert!(matches!(c.require(), Err(Error::ToleranceViolation(_))));
    }

    #[test]
    fn code_search_finds_shortest_codes() {
        let codes = find_breaking_codes(&two_piece(), 0.5, 2, 2, DEFAULT_REL_TOL);
        assert_eq!(codes.len(), 1);
        assert_eq!(codes[0].prefix.to_string(), "1");
        assert_eq!(codes[0].period.to_string(), "2");
        let codes = find_breaking_codes(&family_m3(), 0.5, 2, 2, DEFAULT_REL_TOL);
        assert_eq!(codes.len(), 1);
        assert!(codes[0].is_periodic());
        assert_eq!(codes[0].period.to_string(), "2");
    }
}
