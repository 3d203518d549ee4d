//! GDIFS on the level-`L` cylinders of a CPLIFS whose on-attractor breaking
//! points have verified periodic codes. `L` is a multiple of the lcm of the
//! periods; a cylinder holding a breaking point inside is split at its own
//! fixed point, which is that breaking point. Node `w` receives an edge to
//! every node of `w'` (first symbol of `w` dropped, one symbol appended),
//! carrying the piece of `f_{w_1}` that acts on the target.

use crate::conditions::{check_iosc, diagnose, verify_breaking_code, BreakStatus, BreakingCode};
use crate::cylinder::cylinders;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::system::{Budget, Cplifs, DEFAULT_REL_TOL};
use crate::word::Word;

use super::{Edge, Gdifs, NodeLabel, NodePart};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AssociationOptions {
    /// Cylinder level is this multiple of the period lcm.
    pub level_multiplier: usize,
    pub rel_tol: f64,
    /// Depth at which uncoded breaking points must be certified off the
    /// attractor.
    pub certify_depth: usize,
    pub budget: Budget,
}

impl Default for AssociationOptions {
    fn default() -> Self {
        AssociationOptions {
            level_multiplier: 1,
            rel_tol: DEFAULT_REL_TOL,
            certify_depth: 10,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Association {
    pub graph: Gdifs,
    pub level: usize,
    pub period_lcm: usize,
    pub warnings: Vec<String>,
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub fn associate_from_periodic(
    system: &Cplifs,
    codes: &[BreakingCode],
    opts: AssociationOptions,
) -> Result<Association> {
    if opts.level_multiplier == 0 {
        return Err(Error::InvalidInput("level multiplier must be >= 1".into()));
    }
    let tol = system.tolerance(opts.rel_tol);
    let breaks = system.breaking_points();
    let mut warnings = Vec::new();
    if !check_iosc(system, opts.rel_tol).holds {
        warnings.push("first cylinders are not pairwise disjoint".to_string());
    }

    for code in codes {
        if !breaks.iter().any(|&(_, b)| (b - code.point).abs() <= tol) {
            return Err(Error::InvalidInput(format!("{} is not a breaking point", code.point)));
        }
        let check = verify_breaking_code(system, code.point, &code.prefix, &code.period, opts.rel_tol)?;
        if !check.holds {
            return Err(Error::UnverifiedCode { point: code.point });
        }
    }
    let coded = |b: f64| codes.iter().any(|c| (c.point - b).abs() <= tol);
    let uncoded: Vec<(usize, f64)> = breaks.iter().copied().filter(|&(_, b)| !coded(b)).collect();
    if !uncoded.is_empty() {
        let set = cylinders(system, opts.certify_depth, opts.budget)?;
        for d in diagnose(system, &set, &uncoded, opts.rel_tol) {
            if d.status != BreakStatus::CertifiedOffAttractor {
                return Err(Error::UnverifiedCode { point: d.point });
            }
        }
    }

    let period_lcm = codes
        .iter()
        .map(|c| c.period.len())
        .fold(1, |acc, p| acc / gcd(acc, p) * p);
    let level = period_lcm * opts.level_multiplier;
    let m = system.len();
    let set = cylinders(system, level, opts.budget)?;

    // nodes of each word, with the cut point when split
    let mut word_nodes: Vec<(Vec<usize>, Option<f64>)> = Vec::with_capacity(set.len());
    let mut nodes = Vec::new();
    for (idx, hull) in set.intervals().iter().enumerate() {
        let word = set.word(idx);
        let inside: Vec<f64> = breaks
            .iter()
            .map(|&(_, b)| b)
            .filter(|&b| hull.contains_interior(b, tol))
            .collect();
        if inside.is_empty() {
            word_nodes.push((vec![nodes.len()], None));
            nodes.push(NodeLabel {
                word,
                part: NodePart::Whole,
                hull: *hull,
            });
            continue;
        }
        let phi = system.word_fixed_point(&word);
        for &b in &inside {
            if !coded(b) {
                return Err(Error::AmbiguousContainment {
                    source_node: word.to_string(),
                    target_node: "-".into(),
                    reason: format!("uncoded breaking point {b} inside the cylinder"),
                });
            }
            if (b - phi).abs() > tol {
                return Err(Error::NonPeriodicCode { point: b });
            }
        }
        word_nodes.push((vec![nodes.len(), nodes.len() + 1], Some(phi)));
        nodes.push(NodeLabel {
            word: word.clone(),
            part: NodePart::Left,
            hull: Interval::new(hull.lo, phi),
        });
        nodes.push(NodeLabel {
            word,
            part: NodePart::Right,
            hull: Interval::new(phi, hull.hi),
        });
    }

    let tail_size = m.pow(level as u32 - 1);
    let label = |n: usize| -> String {
        let node: &NodeLabel = &nodes[n];
        match node.part {
            NodePart::Whole => node.word.to_string(),
            NodePart::Left => format!("{}L", node.word),
            NodePart::Right => format!("{}R", node.word),
        }
    };
    let mut edges = Vec::new();
    for (idx, (own, cut)) in word_nodes.iter().enumerate() {
        let first = idx / tail_size;
        let head = Word::new(vec![first]);
        let hull = set.intervals()[idx];
        let shifted = (idx % tail_size) * m;
        for x in 0..m {
            for &target in &word_nodes[shifted + x].0 {
                let ambiguous = |reason: String| Error::AmbiguousContainment {
                    source_node: set.word(idx).to_string(),
                    target_node: label(target),
                    reason,
                };
                let (sim, image) = system
                    .compose_on(&head, nodes[target].hull, tol)
                    .ok_or_else(|| ambiguous(format!("map {} is not affine on the target", first + 1)))?;
                if !hull.includes(&image, tol) {
                    return Err(ambiguous("image leaves the source cylinder".into()));
                }
                let source = match cut {
                    None => own[0],
                    Some(phi) if image.hi <= phi + tol => own[0],
                    Some(phi) if image.lo >= phi - tol => own[1],
                    Some(_) => return Err(ambiguous("image straddles the cut point".into())),
                };
                edges.push(Edge {
                    source,
                    target,
                    ratio: sim.ratio,
                    offset: sim.offset,
                });
            }
        }
    }
    Ok(Association {
        graph: Gdifs::new(nodes, edges)?,
        level,
        period_lcm,
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gdifs::{alpha, build_fixed_point_family, family_incidence};
    use crate::map::PLMap;

    fn two_piece() -> Cplifs {
        Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.8, 0.2], 0.0).unwrap(),
            PLMap::affine(0.1, 0.9).unwrap(),
        ])
        .unwrap()
    }

    fn code(point: f64, prefix: &str, period: &str) -> BreakingCode {
        BreakingCode {
            point,
            prefix: prefix.parse().unwrap(),
            period: period.parse().unwrap(),
        }
    }

    fn pattern(g: &Gdifs) -> Vec<Vec<u8>> {
        g.incidence()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v as u8).collect())
            .collect()
    }

    #[test]
    fn two_map_example_gives_two_nodes() {
        let a = associate_from_periodic(&two_piece(), &[code(0.5, "1", "2")], AssociationOptions::default()).unwrap();
        assert_eq!(a.level, 1);
        assert_eq!(a.graph.node_count(), 2);
        let ratios: Vec<f64> = a.graph.edges().iter().map(|e| e.ratio).collect();
        assert_eq!(ratios, vec![0.8, 0.2, 0.1, 0.1]);
        let s = alpha(&a.graph).unwrap();
        assert!((s - 0.603050322987).abs() < 1e-10, "{s}");
    }

    #[test]
    fn family_patterns() {
        let (f, g) = build_fixed_point_family(&[0.25, 0.2, 0.3, 0.25], &[0.5]).unwrap();
        let a = associate_from_periodic(&f, &[code(0.5, "", "2")], AssociationOptions::default()).unwrap();
        assert_eq!(pattern(&a.graph), family_incidence(3));
        assert!((alpha(&a.graph).unwrap() - alpha(&g).unwrap()).abs() < 1e-13);

        let (f, _) = build_fixed_point_family(&[0.2, 0.15, 0.1, 0.12, 0.1, 0.2], &[0.4, 0.7]).unwrap();
        let codes = [code(0.4, "", "2"), code(0.7, "", "3")];
        let a = associate_from_periodic(&f, &codes, AssociationOptions::default()).unwrap();
        assert_eq!(pattern(&a.graph), family_incidence(4));
        for n in a.graph.nodes() {
            for &(_, b) in &f.breaking_points() {
                assert!(!n.hull.contains_interior(b, 1e-12));
            }
        }
    }

    #[test]
    fn no_breaks_gives_complete_graph() {
        let f = Cplifs::new(vec![
            PLMap::affine(1.0 / 3.0, 0.0).unwrap(),
            PLMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ])
        .unwrap();
        let a = associate_from_periodic(&f, &[], AssociationOptions::default()).unwrap();
        assert_eq!(pattern(&a.graph), vec![vec![1, 1], vec![1, 1]]);
        assert!((alpha(&a.graph).unwrap() - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn higher_level_keeps_dimension() {
        let opts = AssociationOptions {
            level_multiplier: 3,
            ..AssociationOptions::default()
        };
        let a = associate_from_periodic(&two_piece(), &[code(0.5, "1", "2")], opts).unwrap();
        assert_eq!(a.graph.node_count(), 8);
        assert!((alpha(&a.graph).unwrap() - 0.603050322987).abs() < 1e-10);
    }

    #[test]
    fn rejects_wrong_or_missing_codes() {
        assert!(matches!(
            associate_from_periodic(&two_piece(), &[code(0.5, "", "1")], AssociationOptions::default()),
            Err(Error::UnverifiedCode { .. })
        ));
        assert!(matches!(
            associate_from_periodic(&two_piece(), &[], AssociationOptions::default()),
            Err(Error::UnverifiedCode { .. })
        ));
    }

    #[test]
    fn off_attractor_break_needs_no_code() {
        let f = Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.3, 0.34], 0.0).unwrap(),
            PLMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ])
        .unwrap();
        let a = associate_from_periodic(&f, &[], AssociationOptions::default()).unwrap();
        assert_eq!(a.graph.node_count(), 2);
        assert!(a.warnings.is_empty());
    }
}
