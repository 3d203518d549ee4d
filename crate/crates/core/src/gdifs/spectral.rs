use crate::error::{Error, Result};

use super::Gdifs;

const RADIUS_REL_TOL: f64 = 1e-13;
const MIN_ITER_CAP: usize = 20_000;
const DENSE_FALLBACK_MAX: usize = 8;
const ALPHA_WIDTH: f64 = 1e-14;
const MAX_UPPER: f64 = 1e6;

/// `s -> C^(s)` with `c_ij(s) = Σ_{e: i->j} |r_e|^s`, stored sparsely as
/// one `(i, j, log|r_e|)` entry per edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMatrix {
    q: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SpectralMatrix {
    /// Entries are `(row, column, ratio)`.
    pub fn new(q: usize, entries: impl IntoIterator<Item = (usize, usize, f64)>) -> Self {
        let entries = entries
            .into_iter()
            .map(|(i, j, r)| {
                assert!(i < q && j < q, "entry outside matrix");
                (i, j, r.abs().ln())
            })
            .collect();
        SpectralMatrix { q, entries }
    }

    pub fn from_gdifs(g: &Gdifs) -> Self {
        SpectralMatrix::new(
            g.node_count(),
            g.edges().iter().map(|e| (e.source, e.target, e.ratio)),
        )
    }

    pub fn dimension(&self) -> usize {
        self.q
    }

    pub fn dense(&self, s: f64) -> Vec<Vec<f64>> {
        let mut a = vec![vec![0.0; self.q]; self.q];
        for &(i, j, l) in &self.entries {
            a[i][j] += (s * l).exp();
        }
        a
    }

    fn weights(&self, s: f64) -> Vec<f64> {
        self.entries.iter().map(|&(_, _, l)| (s * l).exp()).collect()
    }

    /// Perron root of `C^(s)`; the matrix must be irreducible.
    pub fn spectral_radius(&self, s: f64) -> Result<f64> {
        let mut x = vec![1.0; self.q];
        let (lo, hi) = self.radius_bracket(s, &mut x)?;
        Ok(0.5 * (lo + hi))
    }

    /// Collatz–Wielandt bracket of the Perron root, continuing the power
    /// iteration from `x` (left holding the eigenvector estimate).
    pub fn radius_bracket(&self, s: f64, x: &mut Vec<f64>) -> Result<(f64, f64)> {
        if self.q == 0 {
            return Err(Error::EmptyGraph);
        }
        if x.len() != self.q || x.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            *x = vec![1.0; self.q];
        }
        let w = self.weights(s);
        let cap = (10 * self.q * self.q).max(MIN_ITER_CAP);
        let mut ax = vec![0.0; self.q];
        let mut bracket = (0.0, f64::INFINITY);
        for _ in 0..cap {
            ax.iter_mut().for_each(|v| *v = 0.0);
            for (&(i, j, _), &wij) in self.entries.iter().zip(&w) {
                ax[i] += wij * x[j];
            }
            let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
            for (a, b) in ax.iter().zip(x.iter()) {
                let r = a / b;
                lo = lo.min(r);
                hi = hi.max(r);
            }
            bracket = (lo, hi);
            if hi - lo <= RADIUS_REL_TOL * hi {
                return Ok(bracket);
            }
            // step with C + I, which is primitive when C is irreducible
            let mut norm = 0.0f64;
            for (xi, a) in x.iter_mut().zip(&ax) {
                *xi += a;
                norm = norm.max(*xi);
            }
            if !(norm.is_finite() && norm > 0.0) {
                break;
            }
            x.iter_mut().for_each(|v| *v /= norm);
            if x.iter().any(|&v| v <= 0.0) {
                break;
            }
        }
        if self.q <= DENSE_FALLBACK_MAX {
            let r = perron_root_dense(&self.dense(s));
            return Ok((r, r));
        }
        Err(Error::ConvergenceFailure(format!(
            "power iteration at s={s} stopped with bracket [{}, {}]",
            bracket.0, bracket.1
        )))
    }
}

/// `α` with the final bisection bracket and the radius there.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AlphaBracket {
    pub alpha: f64,
    pub lo: f64,
    pub hi: f64,
    pub radius: f64,
}

/// The unique `α` with `ρ(C^(α)) = 1`, for a strongly connected graph.
pub fn alpha(g: &Gdifs) -> Result<f64> {
    g.require_strongly_connected()?;
    alpha_of_matrix(&SpectralMatrix::from_gdifs(g)).map(|b| b.alpha)
}

/// Bisection on `s` for an irreducible spectral matrix.
pub fn alpha_of_matrix(m: &SpectralMatrix) -> Result<AlphaBracket> {
    let mut x = vec![1.0; m.dimension()];
    let (_, hi0) = m.radius_bracket(0.0, &mut x)?;
    if hi0 <= 1.0 {
        return Ok(AlphaBracket {
            alpha: 0.0,
            lo: 0.0,
            hi: 0.0,
            radius: hi0,
        });
    }
    let (mut s_lo, mut s_hi) = (0.0, 1.0);
    loop {
        let (lo, _) = m.radius_bracket(s_hi, &mut x)?;
        if lo < 1.0 {
            break;
        }
        s_lo = s_hi;
        s_hi *= 2.0;
        if s_hi > MAX_UPPER {
            return Err(Error::ConvergenceFailure("spectral radius stays above 1".into()));
        }
    }
    let mut radius = f64::NAN;
    for _ in 0..200 {
        if s_hi - s_lo <= ALPHA_WIDTH * s_hi.max(1.0) {
            break;
        }
        let mid = 0.5 * (s_lo + s_hi);
        let (lo, hi) = m.radius_bracket(mid, &mut x)?;
        radius = 0.5 * (lo + hi);
        if lo > 1.0 {
            s_lo = mid;
        } else if hi < 1.0 {
            s_hi = mid;
        } else if radius > 1.0 {
            // 1 sits inside a bracket of relative width 1e-13
            s_lo = mid;
        } else {
            s_hi = mid;
        }
    }
    let alpha = 0.5 * (s_lo + s_hi);
    if radius.is_nan() {
        radius = m.spectral_radius(alpha)?;
    }
    Ok(AlphaBracket {
        alpha,
        lo: s_lo,
        hi: s_hi,
        radius,
    })
}

/// Largest real root of `det(λI - A)` for a nonnegative matrix, by a
/// downward scan from the max row sum and bisection.
fn perron_root_dense(a: &[Vec<f64>]) -> f64 {
    let upper = a.iter().map(|r| r.iter().sum::<f64>()).fold(0.0, f64::max);
    if upper == 0.0 {
        return 0.0;
    }
    let p = |lambda: f64| {
        let mut m: Vec<Vec<f64>> = a.iter().map(|r| r.iter().map(|v| -v).collect()).collect();
        for (i, row) in m.iter_mut().enumerate() {
            row[i] += lambda;
        }
        lu_determinant(m)
    };
    const STEPS: usize = 4000;
    let top = upper * (1.0 + 1e-9) + 1e-300;
    let step = top / STEPS as f64;
    let mut prev = top;
    for k in 1..=STEPS {
        let lambda = top - k as f64 * step;
        if p(lambda) <= 0.0 {
            let (mut lo, mut hi) = (lambda, prev);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                if p(mid) > 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            return 0.5 * (lo + hi);
        }
        prev = lambda;
    }
    0.0
}

/// Determinant by LU with partial pivoting.
pub(crate) fn lu_determinant(mut m: Vec<Vec<f64>>) -> f64 {
    let n = m.len();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| m[i][c].abs().total_cmp(&m[j][c].abs()))
            .expect("nonempty column");
        if m[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            m.swap(p, c);
            det = -det;
        }
        det *= m[c][c];
        for r in c + 1..n {
            let factor = m[r][c] / m[c][c];
            if factor != 0.0 {
                let (top, bottom) = m.split_at_mut(r);
                for (x, p) in bottom[0][c..].iter_mut().zip(&top[c][c..]) {
                    *x -= factor * p;
                }
            }
        }
    }
    det
}
