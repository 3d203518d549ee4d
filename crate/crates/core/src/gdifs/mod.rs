//! Graph-directed self-similar systems (GDIFS) and their dimension.

mod associate;
mod determinant;
mod esc;
mod family;
mod punctured;
mod spectral;

use std::fmt;

use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;

use crate::error::{Error, Result};
use crate::format::fmt_g17;
use crate::interval::Interval;
use crate::system::Cplifs;
use crate::word::Word;

pub use associate::{associate_from_periodic, Association, AssociationOptions};
pub use determinant::{q_root, DetRecursion};
pub use esc::{esc_diagnostic, EscReport};
pub use family::{build_fixed_point_family, family_incidence, recognize_fixed_point_family, FixedPointFamily};
pub use punctured::{punctured_dimension, PuncturedResult};
pub use spectral::{alpha, alpha_of_matrix, AlphaBracket, SpectralMatrix};

/// Which part of a cylinder a node stands for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NodePart {
    Whole,
    /// Left of the cylinder's fixed point.
    Left,
    /// Right of the cylinder's fixed point.
    Right,
}

impl NodePart {
    fn tag(self) -> &'static str {
        match self {
            NodePart::Whole => "full",
            NodePart::Left => "left",
            NodePart::Right => "right",
        }
    }

    fn from_tag(tag: &str) -> Option<Self> {
        match tag {
            "full" => Some(NodePart::Whole),
            "left" => Some(NodePart::Left),
            "right" => Some(NodePart::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeLabel {
    pub word: Word,
    pub part: NodePart,
    pub hull: Interval,
}

/// Edge `source -> target` carrying the similarity `x -> ratio * x + offset`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub ratio: f64,
    pub offset: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gdifs {
    nodes: Vec<NodeLabel>,
    edges: Vec<Edge>,
}

impl Gdifs {
    pub fn new(nodes: Vec<NodeLabel>, edges: Vec<Edge>) -> Result<Self> {
        let q = nodes.len();
        for e in &edges {
            if e.source >= q || e.target >= q {
                return Err(Error::InvalidInput(format!(
                    "edge {} -> {} outside {} nodes",
                    e.source + 1,
                    e.target + 1,
                    q
                )));
            }
            let r = e.ratio.abs();
            if !(r > 0.0 && r < 1.0) || !e.offset.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "edge {} -> {} has ratio {} outside (0,1) in modulus",
                    e.source + 1,
                    e.target + 1,
                    e.ratio
                )));
            }
        }
        Ok(Gdifs { nodes, edges })
    }

    /// One node with a loop per map; the maps must be affine.
    pub fn single_node(system: &Cplifs) -> Result<Self> {
        if system.maps().iter().any(|f| !f.breaks().is_empty()) {
            return Err(Error::InvalidInput("single-node graph needs affine maps".into()));
        }
        let node = NodeLabel {
            word: Word::empty(),
            part: NodePart::Whole,
            hull: system.invariant_interval(),
        };
        let edges = system
            .maps()
            .iter()
            .map(|f| Edge {
                source: 0,
                target: 0,
                ratio: f.slopes()[0],
                offset: f.tau(),
            })
            .collect();
        Gdifs::new(vec![node], edges)
    }

    pub fn nodes(&self) -> &[NodeLabel] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Edge counts `|E_{i,j}|`.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let q = self.nodes.len();
        let mut m = vec![vec![0; q]; q];
        for e in &self.edges {
            m[e.source][e.target] += 1;
        }
        m
    }

    /// Strongly connected components, each sorted, ordered by smallest node.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let mut g = DiGraph::<(), ()>::with_capacity(self.nodes.len(), self.edges.len());
        let idx: Vec<_> = (0..self.nodes.len()).map(|_| g.add_node(())).collect();
        for e in &self.edges {
            g.add_edge(idx[e.source], idx[e.target], ());
        }
        let mut comps: Vec<Vec<usize>> = tarjan_scc(&g)
            .into_iter()
            .map(|c| {
                let mut v: Vec<usize> = c.into_iter().map(|n| n.index()).collect();
                v.sort_unstable();
                v
            })
            .collect();
        comps.sort_by_key(|c| c[0]);
        comps
    }

    pub fn is_strongly_connected(&self) -> bool {
        !self.nodes.is_empty() && self.components().len() == 1
    }

    /// Fails with `NotStronglyConnected` unless the graph is.
    pub fn require_strongly_connected(&self) -> Result<()> {
        if self.nodes.is_empty() {
            return Err(Error::EmptyGraph);
        }
        let n = self.components().len();
        if n == 1 {
            Ok(())
        } else {
            Err(Error::NotStronglyConnected { components: n })
        }
    }

    /// The subgraph induced by `keep` (node order preserved).
    pub fn subgraph(&self, keep: &[usize]) -> Gdifs {
        let mut map = vec![usize::MAX; self.nodes.len()];
        let mut sorted = keep.to_vec();
        sorted.sort_unstable();
        sorted.dedup();
        for (new, &old) in sorted.iter().enumerate() {
            map[old] = new;
        }
        let nodes = sorted.iter().map(|&i| self.nodes[i].clone()).collect();
        let edges = self
            .edges
            .iter()
            .filter(|e| map[e.source] != usize::MAX && map[e.target] != usize::MAX)
            .map(|e| Edge {
                source: map[e.source],
                target: map[e.target],
                ..*e
            })
            .collect();
        Gdifs { nodes, edges }
    }

    /// The largest strongly connected component that carries an edge, with
    /// its node indices in `self`. Ties go to the component with the
    /// smallest node.
    pub fn largest_component(&self) -> Option<(Gdifs, Vec<usize>)> {
        let incidence_loop = |v: usize| self.edges.iter().any(|e| e.source == v && e.target == v);
        self.components()
            .into_iter()
            .filter(|c| c.len() > 1 || incidence_loop(c[0]))
            .fold(None::<Vec<usize>>, |best, c| match best {
                Some(b) if b.len() >= c.len() => Some(b),
                _ => Some(c),
            })
            .map(|c| (self.subgraph(&c), c))
    }

    /// Parses the listing written by `Display`.
    pub fn parse_listing(text: &str) -> Result<Gdifs> {
        let mut nodes = Vec::new();
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| Error::Parse { line: line_no, message };
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = line.split_whitespace().collect();
            let field = |key: &str| -> Result<&str> {
                tokens
                    .iter()
                    .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
                    .ok_or_else(|| err(format!("missing {key}")))
            };
            let num = |s: &str| -> Result<f64> { s.parse().map_err(|_| err(format!("invalid number {s:?}"))) };
            let index = |s: Option<&&str>| -> Result<usize> {
                s.and_then(|t| t.parse::<usize>().ok())
                    .filter(|&v| v >= 1)
                    .map(|v| v - 1)
                    .ok_or_else(|| err("expected a 1-based index".into()))
            };
            match tokens[0] {
                "node" => {
                    if index(tokens.get(1))? != nodes.len() {
                        return Err(err("nodes must be listed in order".into()));
                    }
                    let word: Word = field("word")?.parse().map_err(|_| err("invalid word".into()))?;
                    let part = NodePart::from_tag(field("part")?).ok_or_else(|| err("invalid part".into()))?;
                    let (a, b) = field("hull")?.split_once(',').ok_or_else(|| err("hull needs a,b".into()))?;
                    nodes.push(NodeLabel {
                        word,
                        part,
                        hull: Interval::new(num(a)?, num(b)?),
                    });
                }
                "edge" => edges.push(Edge {
                    source: index(tokens.get(1))?,
                    target: index(tokens.get(2))?,
                    ratio: num(field("ratio")?)?,
                    offset: num(field("offset")?)?,
                }),
                other => return Err(err(format!("unknown record {other:?}"))),
            }
        }
        Gdifs::new(nodes, edges)
    }
}

/// Node headers then edges, all indices 1-based.
impl fmt::Display for Gdifs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, n) in self.nodes.iter().enumerate() {
            writeln!(
                f,
                "node {} word={} part={} hull={},{}",
                i + 1,
                n.word,
                n.part.tag(),
                fmt_g17(n.hull.lo),
                fmt_g17(n.hull.hi)
            )?;
        }
        for e in &self.edges {
            writeln!(
                f,
                "edge {} {} ratio={} offset={}",
                e.source + 1,
                e.target + 1,
                fmt_g17(e.ratio),
                fmt_g17(e.offset)
            )?;
        }
        Ok(())
    }
}
