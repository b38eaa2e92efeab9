//! Joint RIS placement and transmit-power design.
//!
//! Placement minimizes the path-loss product `Z` over the feasible interval by
//! candidate enumeration; power is the largest value allowed by the budget
//! and the interference cap. The two decouple because the outage objective
//! improves with `P_s` at any placement and with `1/Z` at any power.

use crate::channel::{db_to_linear, linear_to_db, path_loss, LinkClass, SystemParams};
use crate::error::{Error, Result};
use crate::outage::{evaluate_outage, OutageMethod};
use crate::sinr_approx::{sinr_hat_from_stats, MomentMode};
use crate::stats::LinkStats;
use crate::topology::{Topology, TopologyKind};

/// Transformed objective for the parallel topology, `(y²+d²)(y²+(d_sd−d)²)`.
pub fn z_parallel(d: f64, topo: &Topology) -> f64 {
    let y2 = topo.y * topo.y;
    (y2 + d * d) * (y2 + (topo.d_sd - d).powi(2))
}

/// Transformed objective for the elliptical topology, `d²(d_sd/ε − d)²`.
pub fn z_elliptical(d: f64, topo: &Topology) -> f64 {
    let e = topo.major_axis();
    (d * (e - d)).powi(2)
}

/// `Z` for the topology's own kind.
pub fn z_objective(d: f64, topo: &Topology) -> f64 {
    match topo.kind {
        TopologyKind::Parallel => z_parallel(d, topo),
        TopologyKind::Elliptical => z_elliptical(d, topo),
    }
}

/// `∂Z/∂d`.
pub fn z_derivative(d: f64, topo: &Topology) -> f64 {
    match topo.kind {
        TopologyKind::Parallel => {
            let y2 = topo.y * topo.y;
            let r = topo.d_sd - d;
            2.0 * d * (y2 + r * r) - 2.0 * r * (y2 + d * d)
        }
        TopologyKind::Elliptical => {
            let e = topo.major_axis();
            2.0 * d * (e - d) * (e - 2.0 * d)
        }
    }
}

/// `∂²Z/∂d²`.
pub fn z_second_derivative(d: f64, topo: &Topology) -> f64 {
    match topo.kind {
        TopologyKind::Parallel => {
            let s = topo.d_sd;
            2.0 * (6.0 * d * d - 6.0 * d * s + 2.0 * topo.y * topo.y + s * s)
        }
        TopologyKind::Elliptical => {
            let e = topo.major_axis();
            2.0 * (e * e - 6.0 * e * d + 6.0 * d * d)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CandidateOrigin {
    /// Parallel stationary points `d₁ = d_sd/2`, `d₂`, `d₃`.
    Stationary(u8),
    /// Elliptical interior stationary point `d_sd/(2ε)`.
    EllipseCenter,
    /// Lower bound: `d₄` (C4) or `δ` (C6).
    BoundaryLower,
    /// Upper bound: `d₅` (C5) or `d_sd/ε − δ` (C7).
    BoundaryUpper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curvature {
    LocalMinimum,
    LocalMaximum,
    Flat,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlacementCandidate {
    pub d: f64,
    pub origin: CandidateOrigin,
    pub second_derivative: f64,
    pub curvature: Curvature,
    pub objective_z: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CandidateSet {
    pub candidates: Vec<PlacementCandidate>,
    /// Stationary points that were dropped and why.
    pub notes: Vec<String>,
}

fn candidate(topo: &Topology, d: f64, origin: CandidateOrigin, bounds: (f64, f64)) -> PlacementCandidate {
    let second = z_second_derivative(d, topo);
    let scale = topo.d_sd.powi(2) * 1e-12;
    let curvature = if second > scale {
        Curvature::LocalMinimum
    } else if second < -scale {
        Curvature::LocalMaximum
    } else {
        Curvature::Flat
    };
    let slack = 1e-12 * topo.d_sd;
    PlacementCandidate {
        d,
        origin,
        second_derivative: second,
        curvature,
        objective_z: z_objective(d, topo),
        feasible: d >= bounds.0 - slack && d <= bounds.1 + slack,
    }
}

/// All stationary and boundary candidates with their classification.
pub fn enumerate_candidates(topo: &Topology) -> Result<CandidateSet> {
    let bounds = topo.feasible_interval()?;
    let mut out = Vec::new();
    let mut notes = Vec::new();
    match topo.kind {
        TopologyKind::Parallel => {
            let s = topo.d_sd;
            out.push(candidate(topo, s / 2.0, CandidateOrigin::Stationary(1), bounds));
            let disc = s * s - 4.0 * topo.y * topo.y;
            if disc >= 0.0 {
                let r = disc.sqrt();
                out.push(candidate(topo, (s - r) / 2.0, CandidateOrigin::Stationary(2), bounds));
                out.push(candidate(topo, (s + r) / 2.0, CandidateOrigin::Stationary(3), bounds));
            } else {
                notes.push(format!(
                    "d2, d3 dropped: d_sd^2 - 4y^2 = {disc} < 0 gives complex stationary points"
                ));
            }
        }
        TopologyKind::Elliptical => {
            out.push(candidate(topo, topo.major_axis() / 2.0, CandidateOrigin::EllipseCenter, bounds));
            notes.push("d = 0 and d = d_sd/eps dropped: zero RIS distance violates C6/C7".into());
        }
    }
    out.push(candidate(topo, bounds.0, CandidateOrigin::BoundaryLower, bounds));
    out.push(candidate(topo, bounds.1, CandidateOrigin::BoundaryUpper, bounds));
    Ok(CandidateSet {
        candidates: out,
        notes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TieBreak {
    /// Smaller `d`: RIS closer to the source.
    #[default]
    NearerSource,
    NearerDestination,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Placement {
    /// Every feasible candidate attaining the minimal `Z`, ascending.
    pub optima: Vec<f64>,
    pub z: f64,
    /// The optimum chosen by the tie-break rule.
    pub selected: f64,
    pub candidates: CandidateSet,
}

/// Feasible candidates of minimal `Z`.
pub fn optimal_placement(topo: &Topology, tie: TieBreak) -> Result<Placement> {
    let set = enumerate_candidates(topo)?;
    let feasible: Vec<_> = set.candidates.iter().filter(|c| c.feasible).collect();
    let z = feasible
        .iter()
        .map(|c| c.objective_z)
        .fold(f64::INFINITY, f64::min);
    if !z.is_finite() {
        return Err(Error::Infeasible("no feasible placement candidate".into()));
    }
    let ztol = 1e-9 * z.abs().max(f64::MIN_POSITIVE);
    let mut optima: Vec<f64> = feasible
        .iter()
        .filter(|c| c.objective_z - z <= ztol)
        .map(|c| c.d)
        .collect();
    optima.sort_by(f64::total_cmp);
    optima.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * topo.d_sd);
    let selected = match tie {
        TieBreak::NearerSource => optima[0],
        TieBreak::NearerDestination => optima[optima.len() - 1],
    };
    Ok(Placement {
        optima,
        z,
        selected,
        candidates: set,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BindingConstraint {
    InterferenceCap,
    PowerBudget,
}

/// `P*_s = min(P_s^max, I^th/β_sc)` and the constraint that sets it.
pub fn optimal_power(params: &SystemParams, beta_sc: f64) -> Result<(f64, BindingConstraint)> {
    if !(beta_sc > 0.0) {
        return Err(Error::Domain(format!("beta_sc must be positive, got {beta_sc}")));
    }
    let cap = params.interference_threshold / beta_sc;
    Ok(if cap < params.p_s_max {
        (cap, BindingConstraint::InterferenceCap)
    } else {
        (params.p_s_max, BindingConstraint::PowerBudget)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SolveOptions {
    pub outage: OutageMethod,
    pub moments: MomentMode,
    pub tie: TieBreak,
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointSolution {
    pub d_star: Vec<f64>,
    pub d_selected: f64,
    pub z_star: f64,
    pub p_s_star: f64,
    pub achieved_outage: f64,
    pub achieved_sinr_hat: f64,
    pub candidates: CandidateSet,
    pub binding_constraint: BindingConstraint,
}

fn beta_sc(params: &SystemParams) -> Result<f64> {
    path_loss(params.d_sc, params, LinkClass::Long)
}

/// Outage at an arbitrary operating point.
pub fn outage_at(topo: &Topology, params: &SystemParams, d: f64, p_s: f64, method: OutageMethod) -> Result<f64> {
    evaluate_outage(&LinkStats::new(params, topo, d, p_s)?, method)
}

/// Optimal placement followed by optimal power.
pub fn joint_optimize(topo: &Topology, params: &SystemParams, opts: SolveOptions) -> Result<JointSolution> {
    params.validate()?;
    let placement = optimal_placement(topo, opts.tie)?;
    let (p_s_star, binding) = optimal_power(params, beta_sc(params)?)?;
    let ls = LinkStats::new(params, topo, placement.selected, p_s_star)?;
    let achieved_outage = evaluate_outage(&ls, opts.outage)?;
    let achieved_sinr_hat = if p_s_star > 0.0 {
        sinr_hat_from_stats(&ls, opts.moments)?.value
    } else {
        0.0
    };
    Ok(JointSolution {
        d_star: placement.optima,
        d_selected: placement.selected,
        z_star: placement.z,
        p_s_star,
        achieved_outage,
        achieved_sinr_hat,
        candidates: placement.candidates,
        binding_constraint: binding,
    })
}

/// Offset of the fixed placement from the destination end, in metres.
pub const FIXED_PLACEMENT_OFFSET: f64 = 1.5;
/// Backoff of the fixed power below `P_s^max`, in dB.
pub const FIXED_POWER_BACKOFF_DB: f64 = 5.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeResult {
    pub d: f64,
    pub p_s: f64,
    pub outage: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Improvement {
    /// `(OP_bench − OP_joint)/OP_bench`.
    pub relative_reduction: f64,
    /// `(OP_bench − OP_joint)/OP_joint`.
    pub relative_to_joint: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BenchmarkReport {
    pub joint: SchemeResult,
    /// Optimal power, fixed placement.
    pub optimal_power: SchemeResult,
    /// Optimal placement, fixed power.
    pub optimal_distance: SchemeResult,
    pub fixed_fixed: SchemeResult,
}

impl Improvement {
    pub fn of(joint: f64, bench: f64) -> Self {
        Self {
            relative_reduction: (bench - joint) / bench,
            relative_to_joint: (bench - joint) / joint,
        }
    }
}

impl BenchmarkReport {
    pub fn over_optimal_power(&self) -> Improvement {
        Improvement::of(self.joint.outage, self.optimal_power.outage)
    }

    pub fn over_optimal_distance(&self) -> Improvement {
        Improvement::of(self.joint.outage, self.optimal_distance.outage)
    }
}

/// Fixed benchmark operating values `(d_sd − 1.5 m, P_s^max − 5 dB)`; the
/// power is additionally held under the interference cap.
pub fn fixed_operating_point(topo: &Topology, params: &SystemParams) -> Result<(f64, f64)> {
    let d = topo.d_sd - FIXED_PLACEMENT_OFFSET;
    topo.check_feasible(d)?;
    let backed_off = if params.p_s_max > 0.0 {
        db_to_linear(linear_to_db(params.p_s_max) - FIXED_POWER_BACKOFF_DB)
    } else {
        0.0
    };
    let (p_star, _) = optimal_power(params, beta_sc(params)?)?;
    Ok((d, backed_off.min(p_star)))
}

/// The joint design together with the three semi-adaptive benchmarks.
pub fn benchmark_schemes(topo: &Topology, params: &SystemParams, opts: SolveOptions) -> Result<BenchmarkReport> {
    let joint = joint_optimize(topo, params, opts)?;
    let (d_fix, p_fix) = fixed_operating_point(topo, params)?;
    let eval = |d: f64, p: f64| -> Result<SchemeResult> {
        Ok(SchemeResult {
            d,
            p_s: p,
            outage: outage_at(topo, params, d, p, opts.outage)?,
        })
    };
    Ok(BenchmarkReport {
        joint: SchemeResult {
            d: joint.d_selected,
            p_s: joint.p_s_star,
            outage: joint.achieved_outage,
        },
        optimal_power: eval(d_fix, joint.p_s_star)?,
        optimal_distance: eval(joint.d_selected, p_fix)?,
        fixed_fixed: eval(d_fix, p_fix)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_parallel_hand_value() {
        let t = Topology::parallel(5.0, 0.5, 0.75);
        assert!((z_parallel(1.0, &t) - 20.3125).abs() < 1e-12);
        let t0 = Topology::parallel(5.0, 0.0, 0.75);
        assert_eq!(z_parallel(0.0, &t0), 0.0);
    }

    #[test]
    fn derivatives_match_finite_differences() {
        for topo in [
            Topology::parallel(5.0, 0.5, 0.75),
            Topology::elliptical(5.0, 0.8, 0.75),
        ] {
            for &d in &[0.3, 1.1, 2.4, 3.9] {
                let h = 1e-5;
                let fd1 = (z_objective(d + h, &topo) - z_objective(d - h, &topo)) / (2.0 * h);
                let fd2 = (z_objective(d + h, &topo) - 2.0 * z_objective(d, &topo)
                    + z_objective(d - h, &topo))
                    / (h * h);
                assert!((fd1 - z_derivative(d, &topo)).abs() < 1e-6 * fd1.abs().max(1.0));
                assert!((fd2 - z_second_derivative(d, &topo)).abs() < 1e-3 * fd2.abs().max(1.0));
            }
        }
    }

    #[test]
    fn optimal_power_cases() {
        let mut p = SystemParams {
            interference_threshold: 1e9,
            ..SystemParams::default()
        };
        assert_eq!(optimal_power(&p, 1e-6).unwrap(), (p.p_s_max, BindingConstraint::PowerBudget));
        p.interference_threshold = 0.0;
        assert_eq!(optimal_power(&p, 1e-6).unwrap(), (0.0, BindingConstraint::InterferenceCap));
        assert!(optimal_power(&p, 0.0).is_err());
    }
}
