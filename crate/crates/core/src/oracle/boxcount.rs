use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::error::{Error, Result};

use super::chaos::PointCloud;

const MIN_SCALES: usize = 4;
const MIN_SPAN: f64 = 100.0;

/// Least-squares fit of `log N(ε)` against `log(1/ε)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoxCountFit {
    /// Box sizes, decreasing.
    pub scales: Vec<f64>,
    pub counts: Vec<usize>,
    /// Regression slope clamped to `[0, 1]`.
    pub slope: f64,
    pub raw_slope: f64,
    pub intercept: f64,
    /// Root mean square residual of the fit.
    pub residual: f64,
    /// 95% confidence interval of the raw slope.
    pub confidence: (f64, f64),
}

/// Default fitting range `|I^F|·2^-4 … |I^F|·2^-14`; the coarsest boxes
/// only see the first few gaps and pull the slope up.
pub const DEFAULT_SCALE_RANGE: (i32, i32) = (4, 14);

pub fn default_scales(unit: f64) -> Vec<f64> {
    geometric_scales(unit, 2.0, DEFAULT_SCALE_RANGE.0, DEFAULT_SCALE_RANGE.1)
}

/// `base^-from, …, base^-to` (multiplied by `unit`).
pub fn geometric_scales(unit: f64, base: f64, from: i32, to: i32) -> Vec<f64> {
    (from..=to).map(|k| unit * base.powi(-k)).collect()
}

/// Counts occupied boxes of a grid anchored at the left end of the cloud's
/// domain.
pub fn box_counts(cloud: &PointCloud, scales: &[f64]) -> Vec<usize> {
    let mut sorted = cloud.samples.clone();
    sorted.sort_by(f64::total_cmp);
    let origin = cloud.domain.lo;
    scales
        .iter()
        .map(|&eps| {
            let mut count = 0;
            let mut last = None;
            for &x in &sorted {
                let b = ((x - origin) / eps).floor() as i64;
                if last != Some(b) {
                    count += 1;
                    last = Some(b);
                }
            }
            count
        })
        .collect()
}

pub fn box_dimension(cloud: &PointCloud, scales: &[f64]) -> Result<BoxCountFit> {
    let mut scales = scales.to_vec();
    scales.retain(|e| *e > 0.0 && e.is_finite());
    scales.sort_by(|a, b| b.total_cmp(a));
    scales.dedup();
    let span = match (scales.first(), scales.last()) {
        (Some(&hi), Some(&lo)) => hi / lo,
        _ => 0.0,
    };
    if scales.len() < MIN_SCALES || span < MIN_SPAN {
        return Err(Error::InsufficientScales {
            count: scales.len(),
            span,
        });
    }
    if cloud.is_empty() {
        return Err(Error::InvalidInput("empty point cloud".into()));
    }
    let counts = box_counts(cloud, &scales);
    let xs: Vec<f64> = scales.iter().map(|e| -e.ln()).collect();
    let ys: Vec<f64> = counts.iter().map(|&c| (c as f64).ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let raw_slope = sxy / sxx;
    let intercept = my - raw_slope * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - raw_slope * x).powi(2))
        .sum();
    let dof = n - 2.0;
    let sigma = (sse / dof).sqrt();
    let se = sigma / sxx.sqrt();
    let t = StudentsT::new(0.0, 1.0, dof)
        .map(|d| d.inverse_cdf(0.975))
        .unwrap_or(1.96);
    Ok(BoxCountFit {
        scales,
        counts,
        slope: raw_slope.clamp(0.0, 1.0),
        raw_slope,
        intercept,
        residual: (sse / n).sqrt(),
        confidence: (raw_slope - t * se, raw_slope + t * se),
    })
}
