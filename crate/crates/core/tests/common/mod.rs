#![allow(dead_code)]

use risd2d_core::channel::db_to_linear;
use risd2d_core::{LinkStats, SystemParams, Topology};

pub fn reference_topology() -> Topology {
    Topology::parallel(5.0, 0.5, 0.75)
}

pub fn reference_params() -> SystemParams {
    SystemParams::default()
}

/// Lower feasible boundary of the reference geometry.
pub fn d4() -> f64 {
    (0.75f64 * 0.75 - 0.25).sqrt()
}

pub fn stats_at(params: &SystemParams, d: f64, p_s: f64) -> LinkStats {
    LinkStats::new(params, &reference_topology(), d, p_s).unwrap()
}

pub fn with_threshold_db(db: f64) -> SystemParams {
    SystemParams {
        sinr_threshold: db_to_linear(db),
        ..SystemParams::default()
    }
}

/// Relative-or-absolute closeness.
pub fn close(a: f64, b: f64, rel: f64, abs: f64) -> bool {
    (a - b).abs() <= rel * b.abs().max(a.abs()) + abs
}
