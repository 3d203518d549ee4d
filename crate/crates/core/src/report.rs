//! Runs every applicable dimension method on one system and cross-checks
//! the results. Failures of single methods are recorded, never raised.

use std::fmt;

use crate::conditions::{check_iosc, find_breaking_codes, regularity_diagnostic, BreakStatus, BreakingCode};
use crate::error::Error;
use crate::gdifs::{
    alpha, associate_from_periodic, punctured_dimension, q_root, recognize_fixed_point_family,
    AssociationOptions,
};
use crate::oracle::{box_dimension, chaos_game, default_scales};
use crate::pressure::{natural_dimension, upper_box_consistency};
use crate::system::{Budget, Cplifs, DEFAULT_REL_TOL};

/// Tolerance of the box-count upper-bound check.
pub const BOX_TOLERANCE: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Method {
    Natural,
    Gdifs,
    Punctured,
    Determinant,
    BoxCount,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Natural => "natural",
            Method::Gdifs => "gdifs",
            Method::Punctured => "punctured",
            Method::Determinant => "determinant",
            Method::BoxCount => "box",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReportConfig {
    /// Natural-dimension level range; `None` picks the deepest affordable.
    pub levels: Option<(usize, usize)>,
    pub window: usize,
    /// Punctured level; `None` picks one from the alphabet size.
    pub punctured_level: Option<usize>,
    pub samples: usize,
    pub seed: u64,
    pub regularity_depth: usize,
    /// Allowed gap between `min(1, s_F)` and `min(1, α)`.
    pub agreement_tol: f64,
    pub rel_tol: f64,
    pub budget: Budget,
}

impl Default for ReportConfig {
    fn default() -> Self {
        ReportConfig {
            levels: None,
            window: 3,
            punctured_level: None,
            samples: 200_000,
            seed: 0,
            regularity_depth: 10,
            agreement_tol: 5e-3,
            rel_tol: DEFAULT_REL_TOL,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Estimate {
    pub method: Method,
    /// What the value was computed at, e.g. `n=6..11` or `k=8`.
    pub param: String,
    pub value: f64,
    pub bracket: Option<(f64, f64)>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub method: Method,
    pub error: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flag {
    pub name: &'static str,
    pub holds: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DimReport {
    pub estimates: Vec<Estimate>,
    pub failures: Vec<Failure>,
    pub flags: Vec<Flag>,
}

impl DimReport {
    pub fn get(&self, method: Method) -> Option<&Estimate> {
        self.estimates.iter().find(|e| e.method == method)
    }

    pub fn consistent(&self) -> bool {
        self.flags.iter().all(|f| f.holds)
    }
}

/// Deepest `n <= cap` with `m^n <= limit`.
pub fn affordable_level(m: usize, limit: u64, cap: usize) -> usize {
    let mut n = 1;
    while n < cap && (m as u128).pow(n as u32 + 1) <= limit as u128 {
        n += 1;
    }
    n
}

/// Shortest verified code of every breaking point that is not certified off
/// the attractor at `depth`.
pub fn auto_codes(system: &Cplifs, depth: usize, budget: Budget, rel_tol: f64) -> Result<Vec<BreakingCode>, Error> {
    let mut codes = Vec::new();
    for d in regularity_diagnostic(system, depth, budget, rel_tol)? {
        if d.status == BreakStatus::CertifiedOffAttractor {
            continue;
        }
        let code = find_breaking_codes(system, d.point, 3, 3, rel_tol)
            .into_iter()
            .next()
            .ok_or(Error::UnverifiedCode { point: d.point })?;
        codes.push(code);
    }
    Ok(codes)
}

/// α of the associated GDIFS, retrying at deeper levels while edges are
/// ambiguous.
pub fn associated_alpha(system: &Cplifs, config: &ReportConfig) -> Result<(f64, usize, Vec<String>), Error> {
    let depth = config.regularity_depth.min(affordable_level(system.len(), config.budget.0, 64));
    let codes = auto_codes(system, depth, config.budget, config.rel_tol)?;
    let mut last = None;
    for r in 1..=4 {
        let opts = AssociationOptions {
            level_multiplier: r,
            rel_tol: config.rel_tol,
            certify_depth: depth,
            budget: config.budget,
        };
        match associate_from_periodic(system, &codes, opts) {
            Ok(a) => return Ok((alpha(&a.graph)?, a.level, a.warnings)),
            Err(e @ Error::AmbiguousContainment { .. }) => last = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

pub fn dim_report(system: &Cplifs, config: &ReportConfig) -> DimReport {
    let mut report = DimReport::default();
    let m = system.len();
    let fail = |report: &mut DimReport, method, e: Error| {
        report.failures.push(Failure {
            method,
            error: e.to_string(),
        })
    };

    let (n_min, n_max) = config.levels.unwrap_or_else(|| {
        let hi = affordable_level(m, config.budget.0.min(1 << 22), 14);
        (hi.saturating_sub(5).max(1), hi)
    });
    let natural = match natural_dimension(system, n_min, n_max, config.window, config.budget) {
        Ok(est) => {
            let tail = est.tail();
            let lo = tail.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
            let rising = tail.len() >= 2 && tail.windows(2).all(|w| w[1].1 > w[0].1);
            report.estimates.push(Estimate {
                method: Method::Natural,
                param: format!("n={n_min}..{n_max}"),
                value: est.estimate,
                bracket: Some((lo, est.estimate)),
                note: None,
            });
            Some((est.estimate, rising))
        }
        Err(e) => {
            fail(&mut report, Method::Natural, e);
            None
        }
    };

    let gdifs = match associated_alpha(system, config) {
        Ok((a, level, warnings)) => {
            report.estimates.push(Estimate {
                method: Method::Gdifs,
                param: format!("P={level}"),
                value: a,
                bracket: None,
                note: (!warnings.is_empty()).then(|| warnings.join("; ")),
            });
            Some(a)
        }
        Err(e) => {
            fail(&mut report, Method::Gdifs, e);
            None
        }
    };

    let k = config
        .punctured_level
        .unwrap_or_else(|| affordable_level(m, 4096, 8).max(2));
    let punctured = match punctured_dimension(system, k, config.budget) {
        Ok(p) => {
            report.estimates.push(Estimate {
                method: Method::Punctured,
                param: format!("k={k}"),
                value: p.alpha,
                bracket: None,
                note: (!p.strongly_connected)
                    .then(|| format!("largest component: {} of {} nodes", p.component_size, p.kept)),
            });
            Some(p.alpha)
        }
        Err(e) => {
            fail(&mut report, Method::Punctured, e);
            None
        }
    };

    let determinant = match recognize_fixed_point_family(system, config.rel_tol) {
        Some(family) => match q_root(&family.recursion()) {
            Ok(v) => {
                report.estimates.push(Estimate {
                    method: Method::Determinant,
                    param: format!("m={}", family.map_count()),
                    value: v,
                    bracket: None,
                    note: None,
                });
                Some(v)
            }
            Err(e) => {
                fail(&mut report, Method::Determinant, e);
                None
            }
        },
        None => {
            fail(
                &mut report,
                Method::Determinant,
                Error::InvalidInput("not a fixed-point-breaking family".into()),
            );
            None
        }
    };

    let boxed = chaos_game(system, config.samples.max(1), config.seed).and_then(|cloud| {
        let unit = system.invariant_interval().len();
        if unit == 0.0 {
            return Ok(0.0);
        }
        box_dimension(&cloud, &default_scales(unit)).map(|fit| fit.slope)
    });
    let boxed = match boxed {
        Ok(v) => {
            report.estimates.push(Estimate {
                method: Method::BoxCount,
                param: format!("samples={}", config.samples),
                value: v,
                bracket: None,
                note: None,
            });
            Some(v)
        }
        Err(e) => {
            fail(&mut report, Method::BoxCount, e);
            None
        }
    };

    if let (Some((s, _)), Some(b)) = (natural, boxed) {
        let c = upper_box_consistency(s, b, BOX_TOLERANCE);
        report.flags.push(Flag {
            name: "box <= natural + 0.05",
            holds: c.consistent,
            detail: format!("box {b:.6}, natural {s:.6}"),
        });
    }
    if let (Some((s, rising)), Some(a)) = (natural, gdifs) {
        let gap = (s.min(1.0) - a.min(1.0)).abs();
        // s_n may still be climbing slowly towards the limit
        let approaching = rising && s < a;
        let trend = if gap > config.agreement_tol && approaching {
            "; natural sequence still increasing towards it"
        } else {
            ""
        };
        report.flags.push(Flag {
            name: "min(1, natural) ~ min(1, gdifs)",
            holds: gap <= config.agreement_tol || approaching,
            detail: format!("gap {gap:.3e}, tolerance {:.1e}{trend}", config.agreement_tol),
        });
    }
    if let (Some(t), Some(a)) = (punctured, gdifs) {
        report.flags.push(Flag {
            name: "punctured <= gdifs",
            holds: t <= a + 1e-9,
            detail: format!("t {t:.10}, alpha {a:.10}"),
        });
    }
    if let (Some(d), Some(a)) = (determinant, gdifs) {
        report.flags.push(Flag {
            name: "determinant = gdifs",
            holds: (d - a).abs() < 1e-10,
            detail: format!("gap {:.3e}", (d - a).abs()),
        });
    }
    if !check_iosc(system, config.rel_tol).holds {
        report.flags.push(Flag {
            name: "iosc",
            holds: false,
            detail: "first cylinders overlap; gdifs and punctured values are not dimension formulas".into(),
        });
    }
    report
}
