//! Fractal dimension of attractors of continuous piecewise linear iterated
//! function systems on the line.
//!
//! The natural-pressure root ([`pressure`]), graph-directed self-similar
//! systems and their spectral dimension ([`gdifs`]), and independent
//! estimators for cross-checking ([`oracle`]).

pub mod conditions;
pub mod cylinder;
pub mod error;
pub mod format;
pub mod gdifs;
pub mod interval;
pub mod map;
pub mod oracle;
pub mod pressure;
pub mod report;
pub mod system;
pub mod word;

pub use conditions::{
    check_iosc, check_small, find_breaking_codes, regularity_diagnostic, verify_breaking_code,
    BreakDiagnostic, BreakStatus, BreakingCode, BreakingCodeCheck, IoscReport, SmallnessReport,
};
pub use cylinder::{cylinders, CylinderSet};
pub use error::{Error, Result};
pub use gdifs::{alpha, Gdifs};
pub use format::{emit_system, fmt_g17, parse_system};
pub use interval::Interval;
pub use map::{GeneratedSimilarity, PLMap, Similarity};
pub use pressure::{natural_dimension, pressure_at, solve_level_root, NaturalDimEstimate, PressureProfile};
pub use system::{Budget, Cplifs, DEFAULT_BUDGET, DEFAULT_REL_TOL};
pub use word::Word;
pub use report::{dim_report, DimReport, Method, ReportConfig};
