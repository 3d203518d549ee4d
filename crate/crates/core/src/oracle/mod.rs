//! Estimators that do not rely on any dimension formula: random iteration,
//! box counting, and measure bounds from cylinder unions.

mod boxcount;
mod chaos;
mod measure;
mod rng;

pub use boxcount::{box_counts, box_dimension, default_scales, geometric_scales, DEFAULT_SCALE_RANGE, BoxCountFit};
pub use chaos::{chaos_game, chaos_game_weighted, PointCloud, BURN_IN};
pub use measure::{
    lebesgue_upper_bound, measure_evidence, union_length, MeasureEvidence, Verdict, PLATEAU_FLOOR,
    PLATEAU_REL_CHANGE, TREND_LEVELS,
};
pub use rng::SplitMix64;
