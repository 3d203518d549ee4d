//! `Q_{2m-2}(s) = det(C^(s) - I)` for the fixed-point family, by adding one
//! middle map at a time.

use crate::error::{Error, Result};

use super::family::family_incidence;
use super::spectral::{alpha_of_matrix, SpectralMatrix};

const ROOT_CHECK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct DetRecursion {
    slopes: Vec<f64>,
}

impl DetRecursion {
    /// `slopes` is `ρ_1 .. ρ_{2m-2}` with `m >= 3`. Equal neighbours are
    /// allowed here even though the maps themselves would reject them.
    pub fn new(slopes: Vec<f64>) -> Result<Self> {
        if slopes.len() < 4 || !slopes.len().is_multiple_of(2) {
            return Err(Error::InvalidInput(format!(
                "need an even number >= 4 of slopes, got {}",
                slopes.len()
            )));
        }
        if let Some(&r) = slopes.iter().find(|&&r| !(r > 0.0 && r < 1.0)) {
            return Err(Error::InvalidInput(format!("slope {r} outside (0,1)")));
        }
        Ok(DetRecursion { slopes })
    }

    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn map_count(&self) -> usize {
        self.slopes.len() / 2 + 1
    }

    /// `Q_{2m-2}(s)`.
    pub fn q(&self, s: f64) -> f64 {
        self.q_with_minors(s).0
    }

    /// `Q_{2m-2}(s)` and the bordered minors `Q_{2m-2,i}(s)`, `i = 1..2m-2`.
    pub fn q_with_minors(&self, s: f64) -> (f64, Vec<f64>) {
        let pow: Vec<f64> = self.slopes.iter().map(|r| r.powf(s)).collect();
        // the empty determinant, with no minors
        let mut q = 1.0;
        let mut minors: Vec<f64> = Vec::with_capacity(pow.len());
        for pair in pow.chunks_exact(2) {
            let (a, b) = (pair[0], pair[1]);
            let alt: f64 = minors
                .iter()
                .enumerate()
                .map(|(i, &v)| if i % 2 == 0 { -v } else { v })
                .sum();
            let next = (1.0 - b - a) * q + b * alt;
            for v in minors.iter_mut() {
                *v *= 1.0 - b;
            }
            minors.push(a * (1.0 - b) * q);
            minors.push(b * (alt - a * q));
            q = next;
        }
        (q, minors)
    }

    /// `C^(s)` of the associated graph (without the identity shift).
    pub fn dense_matrix(&self, s: f64) -> Vec<Vec<f64>> {
        self.spectral_matrix().dense(s)
    }

    pub fn spectral_matrix(&self) -> SpectralMatrix {
        let inc = family_incidence(self.map_count());
        let entries = inc.iter().enumerate().flat_map(|(i, row)| {
            let r = self.slopes[i];
            row.iter()
                .enumerate()
                .filter(|(_, &a)| a == 1)
                .map(move |(j, _)| (i, j, r))
        });
        SpectralMatrix::new(self.slopes.len(), entries.collect::<Vec<_>>())
    }
}

/// The root of `Q_{2m-2}` where the Perron root of `C^(s)` crosses 1.
pub fn q_root(d: &DetRecursion) -> Result<f64> {
    let m = d.spectral_matrix();
    let spectral = alpha_of_matrix(&m)?.alpha;
    let q0 = d.q(spectral);
    if q0 == 0.0 {
        return Ok(spectral);
    }
    // widen a bracket around the seed until Q changes sign
    let mut h = 1e-9f64.max(1e-9 * spectral);
    let mut bracket = None;
    while h < 1.0 {
        let lo = (spectral - h).max(0.0);
        let hi = spectral + h;
        let (ql, qh) = (d.q(lo), d.q(hi));
        if ql == 0.0 {
            bracket = Some((lo, lo));
            break;
        }
        if qh == 0.0 {
            bracket = Some((hi, hi));
            break;
        }
        if ql.signum() != qh.signum() {
            bracket = Some((lo, hi));
            break;
        }
        h *= 4.0;
    }
    let (mut lo, mut hi) = bracket.ok_or(Error::RootMismatch {
        spectral,
        determinant: f64::NAN,
    })?;
    let q_lo = d.q(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let qm = d.q(mid);
        if qm == 0.0 {
            lo = mid;
            hi = mid;
            break;
        }
        if qm.signum() == q_lo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let root = 0.5 * (lo + hi);
    let radius = m.spectral_radius(root)?;
    if (radius - 1.0).abs() >= ROOT_CHECK {
        return Err(Error::RootMismatch {
            spectral,
            determinant: root,
        });
    }
    Ok(root)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q4_closed_form(r: &[f64], s: f64) -> f64 {
        let p: Vec<f64> = r.iter().map(|v| v.powf(s)).collect();
        1.0 - p[0] - p[1] - p[2] - p[3] + p[0] * p[2] + p[1] * p[2] + p[1] * p[3]
    }

    #[test]
    fn base_step_gives_two_by_two_block() {
        let d = DetRecursion::new(vec![0.3, 0.2, 0.4, 0.1]).unwrap();
        let pow = [0.3f64.powf(0.7), 0.2f64.powf(0.7)];
        // unroll the first step by hand
        let q2 = 1.0 - pow[0] - pow[1];
        let minors = [pow[0] * (1.0 - pow[1]), -pow[0] * pow[1]];
        let alt = -minors[0] + minors[1];
        let a = 0.4f64.powf(0.7);
        let b = 0.1f64.powf(0.7);
        let q4 = (1.0 - b - a) * q2 + b * alt;
        assert!((d.q(0.7) - q4).abs() < 1e-15);
    }

    #[test]
    fn matches_four_node_closed_form() {
        let r = [0.25, 0.2, 0.3, 0.25];
        let d = DetRecursion::new(r.to_vec()).unwrap();
        for s in [0.0, 0.3, 0.61, 1.0, 1.7] {
            assert!((d.q(s) - q4_closed_form(&r, s)).abs() < 1e-14);
        }
    }

    #[test]
    fn equal_ratio_root() {
        let d = DetRecursion::new(vec![0.25; 4]).unwrap();
        let expected = 3f64.ln() / 4f64.ln();
        assert!(d.q(expected).abs() < 1e-14);
        assert!((q_root(&d).unwrap() - expected).abs() < 1e-12);
    }

    #[test]
    fn factorized_case() {
        // ρ_2 = ρ_3 = 0.2, ρ_1 = ρ_4 = 0.3: root of 2·0.3^s + 0.2^s = 1
        let d = DetRecursion::new(vec![0.3, 0.2, 0.2, 0.3]).unwrap();
        let root = q_root(&d).unwrap();
        let residual = 2.0 * 0.3f64.powf(root) + 0.2f64.powf(root) - 1.0;
        assert!(residual.abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_slopes() {
        assert!(DetRecursion::new(vec![0.2, 0.3]).is_err());
        assert!(DetRecursion::new(vec![0.2, 0.3, 0.4]).is_err());
        assert!(DetRecursion::new(vec![0.2, 1.3, 0.4, 0.1]).is_err());
    }
}
