//! Analysis, optimization and simulation of an RIS-assisted underlay
//! device-to-device link under Rayleigh fading.
//!
//! The DS–DU link is helped by an `N`-element RIS with coherent phase
//! alignment and interfered by an `M`-antenna base station using transmit
//! antenna selection. The crate provides the outage probability (closed form
//! and quadrature), a mean-SINR surrogate, the optimal RIS placement and
//! transmit power, and a Monte Carlo oracle for all of them.

// `!(x > 0.0)` guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

/// Crate version, recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod channel;
pub mod error;
pub mod montecarlo;
pub mod optimizer;
pub mod outage;
pub mod quadrature;
pub mod sinr_approx;
pub mod stats;
pub mod topology;

pub use channel::{
    aligned_phases, instantaneous_sinr, path_loss, ris_betas, sample_realization, ChannelRealization,
    DirectLink, LinkClass, RefLossScope, SystemParams,
};
pub use error::{Constraint, Error, Result};
pub use montecarlo::{
    estimate_gamma_v, estimate_interference, estimate_mean_sinr, estimate_outage, grid_search, GridObjective, GridSurface,
    McEstimate,
};
pub use optimizer::{
    benchmark_schemes, enumerate_candidates, joint_optimize, optimal_placement, optimal_power,
    BenchmarkReport, BindingConstraint, JointSolution, PlacementCandidate, SolveOptions, TieBreak,
};
pub use outage::{outage_by_quadrature, outage_probability, OutageBreakdown, OutageMethod, OutageMode};
pub use quadrature::{integrate, Domain, QuadratureResult};
pub use sinr_approx::{sinr_hat, MomentMode, SinrSurrogate};
pub use stats::LinkStats;
pub use topology::{Topology, TopologyKind};
