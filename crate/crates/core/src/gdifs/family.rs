//! CPLIFS whose middle maps break exactly at their own fixed points.
//!
//! With `0 = φ_1 < φ_2 < … < φ_m = 1`, map 1 is `ρ_1 x`, map `m` is
//! `ρ_{2m-2} x + 1 - ρ_{2m-2}`, and middle map `k` has slope `ρ_{2k-2}` left of
//! `φ_k` and `ρ_{2k-1}` right of it. The associated graph has `2m - 2` nodes:
//! map 1, then a left and a right node per middle map, then map `m`.

use crate::conditions::check_iosc;
use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::map::PLMap;
use crate::system::{Cplifs, DEFAULT_REL_TOL};
use crate::word::Word;

use super::{DetRecursion, Edge, Gdifs, NodeLabel, NodePart};

/// 0/1 pattern of the associated graph for `m` maps (`2m - 2` nodes).
pub fn family_incidence(m: usize) -> Vec<Vec<u8>> {
    assert!(m >= 2, "family needs at least two maps");
    let q = 2 * m - 2;
    let mut a = vec![vec![0u8; q]; q];
    for (i, row) in a.iter_mut().enumerate() {
        let targets = if i == 0 || i == q - 1 {
            0..q
        } else if i % 2 == 1 {
            // left node of middle map (i + 3) / 2: everything up to itself
            0..i + 1
        } else {
            // right node: itself and everything after
            i..q
        };
        for j in targets {
            row[j] = 1;
        }
    }
    a
}

/// A recognized or constructed member of the family.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointFamily {
    pub slopes: Vec<f64>,
    /// Interior fixed points `φ_2 .. φ_{m-1}`.
    pub fixed_points: Vec<f64>,
}

impl FixedPointFamily {
    pub fn map_count(&self) -> usize {
        self.fixed_points.len() + 2
    }

    pub fn recursion(&self) -> DetRecursion {
        DetRecursion::new(self.slopes.clone()).expect("family slopes are valid")
    }
}

pub fn build_fixed_point_family(slopes: &[f64], fixed_points: &[f64]) -> Result<(Cplifs, Gdifs)> {
    let m = fixed_points.len() + 2;
    if slopes.len() != 2 * m - 2 {
        return Err(Error::InvalidInput(format!(
            "{} interior fixed points need {} slopes, got {}",
            fixed_points.len(),
            2 * m - 2,
            slopes.len()
        )));
    }
    if let Some(&r) = slopes.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
        return Err(Error::InvalidInput(format!("family slope {r} outside (0,1)")));
    }
    let mut phi = vec![0.0];
    phi.extend_from_slice(fixed_points);
    phi.push(1.0);
    if phi.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return Err(Error::BadFixedPointOrder);
    }

    let mut maps = vec![PLMap::affine(slopes[0], 0.0)?];
    for k in 1..m - 1 {
        let (left, right) = (slopes[2 * k - 1], slopes[2 * k]);
        maps.push(PLMap::new(vec![phi[k]], vec![left, right], phi[k] * (1.0 - left))?);
    }
    let last = slopes[2 * m - 3];
    maps.push(PLMap::affine(last, 1.0 - last)?);
    let system = Cplifs::new(maps)?;
    let iosc = check_iosc(&system, DEFAULT_REL_TOL);
    if !iosc.holds {
        return Err(Error::IoscViolated { gap: iosc.min_gap });
    }

    let mut nodes = Vec::with_capacity(2 * m - 2);
    // (map, piece) feeding each node
    let mut source = Vec::with_capacity(2 * m - 2);
    for (k, f) in system.maps().iter().enumerate() {
        let word = Word::new(vec![k]);
        let image = f.image(Interval::new(0.0, 1.0));
        if k == 0 || k == m - 1 {
            nodes.push(NodeLabel {
                word,
                part: NodePart::Whole,
                hull: image,
            });
            source.push((k, 0));
        } else {
            nodes.push(NodeLabel {
                word: word.clone(),
                part: NodePart::Left,
                hull: Interval::new(image.lo, phi[k]),
            });
            nodes.push(NodeLabel {
                word,
                part: NodePart::Right,
                hull: Interval::new(phi[k], image.hi),
            });
            source.push((k, 0));
            source.push((k, 1));
        }
    }
    let incidence = family_incidence(m);
    let mut edges = Vec::new();
    for (i, row) in incidence.iter().enumerate() {
        let (k, piece) = source[i];
        let sim = system.map(k).piece(piece);
        for (j, &a) in row.iter().enumerate() {
            if a == 1 {
                edges.push(Edge {
                    source: i,
                    target: j,
                    ratio: sim.ratio,
                    offset: sim.offset,
                });
            }
        }
    }
    Ok((system, Gdifs::new(nodes, edges)?))
}

/// Recovers the family parameters when every map has the required shape.
pub fn recognize_fixed_point_family(system: &Cplifs, rel_tol: f64) -> Option<FixedPointFamily> {
    let m = system.len();
    if m < 3 {
        return None;
    }
    let j = system.invariant_interval();
    let tol = system.tolerance(rel_tol);
    if (j.lo - 0.0).abs() > tol || (j.hi - 1.0).abs() > tol {
        return None;
    }
    let first = system.map(0);
    let last = system.map(m - 1);
    if !first.breaks().is_empty() || !last.breaks().is_empty() {
        return None;
    }
    if first.tau().abs() > tol || (last.fixed_point() - 1.0).abs() > tol {
        return None;
    }
    let mut slopes = vec![first.slopes()[0]];
    let mut fixed_points = Vec::with_capacity(m - 2);
    for f in &system.maps()[1..m - 1] {
        if f.breaks().len() != 1 {
            return None;
        }
        let b = f.breaks()[0];
        if (f.eval(b) - b).abs() > tol {
            return None;
        }
        slopes.extend_from_slice(f.slopes());
        fixed_points.push(b);
    }
    slopes.push(last.slopes()[0]);
    if slopes.iter().any(|&r| !(r > 0.0 && r < 1.0)) {
        return None;
    }
    let mut phi = vec![0.0];
    phi.extend_from_slice(&fixed_points);
    phi.push(1.0);
    if phi.windows(2).any(|w| w[0].partial_cmp(&w[1]) != Some(std::cmp::Ordering::Less)) {
        return None;
    }
    Some(FixedPointFamily { slopes, fixed_points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn incidence_patterns() {
        let m3: Vec<Vec<u8>> = vec![vec![1, 1, 1, 1], vec![1, 1, 0, 0], vec![0, 0, 1, 1], vec![1, 1, 1, 1]];
        assert_eq!(family_incidence(3), m3);
        let m4 = family_incidence(4);
        let expected: Vec<Vec<u8>> = vec![
            vec![1, 1, 1, 1, 1, 1],
            vec![1, 1, 0, 0, 0, 0],
            vec![0, 0, 1, 1, 1, 1],
            vec![1, 1, 1, 1, 0, 0],
            vec![0, 0, 0, 0, 1, 1],
            vec![1, 1, 1, 1, 1, 1],
        ];
        assert_eq!(m4, expected);
    }

    #[test]
    fn builds_three_map_instance() {
        let (f, g) = build_fixed_point_family(&[0.25, 0.2, 0.3, 0.25], &[0.5]).unwrap();
        assert_eq!(f.len(), 3);
        assert_eq!(f.type_vector(), vec![0, 1, 0]);
        let i = f.invariant_interval();
        assert!(i.lo.abs() < 1e-14 && (i.hi - 1.0).abs() < 1e-14);
        assert!((f.map(1).eval(0.5) - 0.5).abs() < 1e-15);
        assert!((f.map(1).eval(0.0) - 0.4).abs() < 1e-15);
        assert!((f.map(1).eval(1.0) - 0.65).abs() < 1e-15);
        let inc: Vec<Vec<u8>> = g
            .incidence()
            .into_iter()
            .map(|r| r.into_iter().map(|v| v as u8).collect())
            .collect();
        assert_eq!(inc, family_incidence(3));
        assert_eq!(g.nodes()[1].part, NodePart::Left);
        assert!(g.is_strongly_connected());
        let back = recognize_fixed_point_family(&f, 1e-12).unwrap();
        assert_eq!(back.slopes, vec![0.25, 0.2, 0.3, 0.25]);
        assert_eq!(back.fixed_points, vec![0.5]);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(
            build_fixed_point_family(&[0.25, 0.2, 0.3, 0.25], &[0.0]),
            Err(Error::BadFixedPointOrder)
        ));
        assert!(matches!(
            build_fixed_point_family(&[0.25, 0.2, 0.2, 0.25], &[0.5]),
            Err(Error::InvalidMap(_))
        ));
        assert!(matches!(
            build_fixed_point_family(&[0.6, 0.2, 0.3, 0.25], &[0.5]),
            Err(Error::IoscViolated { .. })
        ));
        assert!(build_fixed_point_family(&[0.25, 0.2, 0.3], &[0.5]).is_err());
    }

    #[test]
    fn recognition_rejects_other_systems() {
        let cantor = Cplifs::new(vec![
            PLMap::affine(1.0 / 3.0, 0.0).unwrap(),
            PLMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
        ])
        .unwrap();
        assert!(recognize_fixed_point_family(&cantor, 1e-12).is_none());
        let shifted = Cplifs::new(vec![
            PLMap::affine(0.25, 0.0).unwrap(),
            PLMap::new(vec![0.5], vec![0.2, 0.3], 0.45).unwrap(),
            PLMap::affine(0.25, 0.75).unwrap(),
        ])
        .unwrap();
        assert!(recognize_fixed_point_family(&shifted, 1e-12).is_none());
    }
}
