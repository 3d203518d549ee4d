//! Lower bounds `t_k` from the level-`k` cylinders that avoid every breaking
//! point. Kept words form a higher-block shift: `w -> w'` whenever `w'`
//! equals `w` with its first symbol removed and one symbol appended, and the
//! edge carries the piece of `f_{w_1}` acting on `I_{w'}`.

use crate::conditions::check_iosc;
use crate::cylinder::cylinders;
use crate::error::{Error, Result};
use crate::system::{Budget, Cplifs, DEFAULT_REL_TOL};
use crate::word::Word;

use super::spectral::{alpha_of_matrix, SpectralMatrix};
use super::{Edge, Gdifs, NodeLabel, NodePart};

#[derive(Debug, Clone)]
pub struct PuncturedResult {
    pub level: usize,
    /// `t_k`.
    pub alpha: f64,
    pub kept: usize,
    pub dropped: usize,
    /// Nodes in the component used for `alpha`.
    pub component_size: usize,
    /// False when the kept graph had to be reduced to its largest component.
    pub strongly_connected: bool,
    pub graph: Gdifs,
}

pub fn punctured_dimension(system: &Cplifs, level: usize, budget: Budget) -> Result<PuncturedResult> {
    if level < 2 {
        return Err(Error::InvalidInput("punctured construction needs level >= 2".into()));
    }
    if !system.is_injective() {
        return Err(Error::NotInjective);
    }
    let iosc = check_iosc(system, DEFAULT_REL_TOL);
    if !iosc.holds {
        return Err(Error::IoscViolated { gap: iosc.min_gap });
    }
    let set = cylinders(system, level, budget)?;
    let tol = system.tolerance(DEFAULT_REL_TOL);
    let breaks = system.breaking_points();
    let m = system.len();

    // node index of every kept word, usize::MAX for dropped ones
    let mut node_of = vec![usize::MAX; set.len()];
    let mut nodes = Vec::new();
    for (idx, j) in set.intervals().iter().enumerate() {
        if breaks.iter().any(|&(_, b)| j.contains(b, tol)) {
            continue;
        }
        node_of[idx] = nodes.len();
        nodes.push(NodeLabel {
            word: set.word(idx),
            part: NodePart::Whole,
            hull: *j,
        });
    }
    let kept = nodes.len();
    if kept == 0 {
        return Err(Error::EmptyGraph);
    }

    let tail_size = m.pow(level as u32 - 1);
    let mut edges = Vec::new();
    for (idx, &src) in node_of.iter().enumerate() {
        if src == usize::MAX {
            continue;
        }
        let first = idx / tail_size;
        let head = Word::new(vec![first]);
        let shifted = (idx % tail_size) * m;
        for x in 0..m {
            let dst = node_of[shifted + x];
            if dst == usize::MAX {
                continue;
            }
            let target = set.intervals()[shifted + x];
            let (sim, _) = system.compose_on(&head, target, tol).ok_or_else(|| {
                Error::ConvergenceFailure(format!(
                    "map {} is not affine on kept cylinder {}",
                    first + 1,
                    set.word(shifted + x)
                ))
            })?;
            edges.push(Edge {
                source: src,
                target: dst,
                ratio: sim.ratio,
                offset: sim.offset,
            });
        }
    }
    let graph = Gdifs::new(nodes, edges)?;
    let strongly_connected = graph.is_strongly_connected();
    let (component, _) = graph.largest_component().ok_or(Error::EmptyGraph)?;
    let alpha = alpha_of_matrix(&SpectralMatrix::from_gdifs(&component))?.alpha;
    Ok(PuncturedResult {
        level,
        alpha,
        kept,
        dropped: set.len() - kept,
        component_size: component.node_count(),
        strongly_connected,
        graph,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::PLMap;

    fn two_piece() -> Cplifs {
        Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.8, 0.2], 0.0).unwrap(),
            PLMap::affine(0.1, 0.9).unwrap(),
        ])
        .unwrap()
    }

    #[test]
    fn first_levels_of_the_two_map_example() {
        let r = punctured_dimension(&two_piece(), 3, Budget::default()).unwrap();
        assert!((r.alpha - 0.55122823).abs() < 1e-7, "{}", r.alpha);
        assert_eq!(r.kept + r.dropped, 8);
    }

    #[test]
    fn edges_map_targets_into_sources() {
        let r = punctured_dimension(&two_piece(), 4, Budget::default()).unwrap();
        let g = &r.graph;
        for e in g.edges() {
            let src = g.nodes()[e.source].hull;
            let dst = g.nodes()[e.target].hull;
            let img = crate::interval::Interval::new(
                e.ratio * dst.lo + e.offset,
                e.ratio * dst.hi + e.offset,
            );
            assert!(src.includes(&img, 1e-12), "{src} {img}");
        }
    }

    #[test]
    fn regular_system_keeps_everything() {
        // break at 0.5 lies in the gap of the first cylinders
        let f = Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.3, 0.34], 0.0).unwrap(),
            PLMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ])
        .unwrap();
        let r = punctured_dimension(&f, 3, Budget::default()).unwrap();
        assert_eq!(r.dropped, 0);
        assert!(r.strongly_connected);
        // same dimension as the two-node graph on the first cylinders
        let third = 1.0 / 3.0;
        let m = SpectralMatrix::new(2, [(0, 0, 0.3), (0, 1, 0.34), (1, 0, third), (1, 1, third)]);
        assert!((r.alpha - alpha_of_matrix(&m).unwrap().alpha).abs() < 1e-11);
    }

    #[test]
    fn preconditions() {
        let tent = Cplifs::new(vec![
            PLMap::new(vec![0.5], vec![0.2, -0.2], 0.0).unwrap(),
            PLMap::affine(0.2, 0.8).unwrap(),
        ])
        .unwrap();
        assert!(matches!(punctured_dimension(&tent, 3, Budget::default()), Err(Error::NotInjective)));
        let halves = Cplifs::new(vec![PLMap::affine(0.5, 0.0).unwrap(), PLMap::affine(0.5, 0.5).unwrap()]).unwrap();
        assert!(matches!(
            punctured_dimension(&halves, 3, Budget::default()),
            Err(Error::IoscViolated { .. })
        ));
        assert!(punctured_dimension(&two_piece(), 1, Budget::default()).is_err());
    }
}
