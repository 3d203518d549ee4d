//! Fixture systems shared by the benchmarks.

use plifs_core::{Cplifs, PLMap};

pub fn cantor() -> Cplifs {
    Cplifs::new(vec![
        PLMap::affine(1.0 / 3.0, 0.0).expect("valid map"),
        PLMap::affine(1.0 / 3.0, 2.0 / 3.0).expect("valid map"),
    ])
    .expect("valid system")
}

/// Two maps, the first breaking on the attractor.
pub fn break_on_attractor() -> Cplifs {
    Cplifs::new(vec![
        PLMap::new(vec![0.5], vec![0.8, 0.2], 0.0).expect("valid map"),
        PLMap::affine(0.1, 0.9).expect("valid map"),
    ])
    .expect("valid system")
}

/// Five-map family whose breaks sit at fixed points 0.3, 0.5, 0.7.
pub fn family_m5() -> (Cplifs, plifs_core::gdifs::Gdifs) {
    plifs_core::gdifs::build_fixed_point_family(&[0.1, 0.12, 0.08, 0.1, 0.09, 0.11, 0.07, 0.1], &[0.3, 0.5, 0.7])
        .expect("valid family")
}
