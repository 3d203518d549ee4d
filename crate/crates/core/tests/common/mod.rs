#![allow(dead_code)]

use plifs_core::oracle::SplitMix64;
use plifs_core::{check_iosc, Cplifs, PLMap, DEFAULT_REL_TOL};

pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::new(seed))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.0.next_f64()
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }
}

pub fn cantor() -> Cplifs {
    Cplifs::new(vec![
        PLMap::affine(1.0 / 3.0, 0.0).unwrap(),
        PLMap::affine(1.0 / 3.0, 2.0 / 3.0).unwrap(),
    ])
    .unwrap()
}

pub fn break_on_attractor() -> Cplifs {
    Cplifs::new(vec![
        PLMap::new(vec![0.5], vec![0.8, 0.2], 0.0).unwrap(),
        PLMap::affine(0.1, 0.9).unwrap(),
    ])
    .unwrap()
}

pub fn overlapping() -> Cplifs {
    Cplifs::new(vec![PLMap::affine(0.6, 0.0).unwrap(), PLMap::affine(0.6, 0.4).unwrap()]).unwrap()
}

/// Random map with up to `max_breaks` breaks in (0,1) and slope moduli in
/// `[lo, hi]`; all slopes share one sign when `injective`.
pub fn random_map(rng: &mut Rng, max_breaks: usize, lo: f64, hi: f64, injective: bool) -> PLMap {
    loop {
        let l = rng.below(max_breaks + 1);
        let mut breaks: Vec<f64> = (0..l).map(|_| rng.uniform(0.0, 1.0)).collect();
        breaks.sort_by(f64::total_cmp);
        let sign = if rng.below(2) == 0 { 1.0 } else { -1.0 };
        let slopes: Vec<f64> = (0..=l)
            .map(|_| {
                let s = if injective || rng.below(2) == 0 { sign } else { -sign };
                s * rng.uniform(lo, hi)
            })
            .collect();
        if let Ok(f) = PLMap::new(breaks, slopes, rng.uniform(0.0, 1.0)) {
            return f;
        }
    }
}

/// The same system conjugated by an affine change of variable so that its
/// invariant interval becomes [0, 1].
pub fn normalize(f: &Cplifs) -> Cplifs {
    let j = f.invariant_interval();
    let (a, len) = (j.lo, j.len());
    let maps = f
        .maps()
        .iter()
        .map(|g| {
            let breaks = g.breaks().iter().map(|b| (b - a) / len).collect();
            PLMap::new(breaks, g.slopes().to_vec(), (g.eval(a) - a) / len).unwrap()
        })
        .collect();
    Cplifs::new(maps).unwrap()
}

pub fn random_system(rng: &mut Rng, m: usize, max_breaks: usize, lo: f64, hi: f64, injective: bool) -> Cplifs {
    loop {
        let maps = (0..m).map(|_| random_map(rng, max_breaks, lo, hi, injective)).collect();
        let f = Cplifs::new(maps).unwrap();
        if f.invariant_interval().len() > 1e-6 {
            return normalize(&f);
        }
    }
}

pub fn random_iosc_system(rng: &mut Rng, m: usize, max_breaks: usize, lo: f64, hi: f64) -> Cplifs {
    loop {
        let f = random_system(rng, m, max_breaks, lo, hi, true);
        if check_iosc(&f, DEFAULT_REL_TOL).holds {
            return f;
        }
    }
}

/// Root of `Σ r_i^s = 1` by bisection.
pub fn similarity_root(ratios: &[f64]) -> f64 {
    let g = |s: f64| ratios.iter().map(|r| r.powf(s)).sum::<f64>() - 1.0;
    let (mut lo, mut hi) = (0.0, 1.0);
    while g(hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Determinant by cofactor expansion along the first row.
pub fn cofactor_determinant(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    if n == 1 {
        return a[0][0];
    }
    let mut det = 0.0;
    for j in 0..n {
        if a[0][j] == 0.0 {
            continue;
        }
        let minor: Vec<Vec<f64>> = a[1..]
            .iter()
            .map(|row| row.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &v)| v).collect())
            .collect();
        let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
        det += sign * a[0][j] * cofactor_determinant(&minor);
    }
    det
}

/// The family's matrix `C^(s) - I` written out entry by entry.
pub fn family_matrix_minus_identity(slopes: &[f64], s: f64) -> Vec<Vec<f64>> {
    let q = slopes.len();
    let mut a = vec![vec![0.0; q]; q];
    for i in 0..q {
        let cols = if i == 0 || i == q - 1 {
            0..q
        } else if i % 2 == 1 {
            0..i + 1
        } else {
            i..q
        };
        for j in cols {
            a[i][j] = slopes[i].powf(s);
        }
        a[i][i] -= 1.0;
    }
    a
}
