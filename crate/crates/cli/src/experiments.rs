//! Named figure-style sweeps. Each returns one table per curve family with
//! analytical values next to simulated ones and their standard errors.
//!
//! Monte Carlo points are evaluated one after another, each with its own
//! seed `seed + k` where `k` counts points in table order; the estimators
//! parallelize internally. Output is therefore independent of thread count.

use std::f64::consts::PI;

use risd2d_core::channel::{db_to_linear, linear_to_db};
use risd2d_core::montecarlo::{estimate_gamma_v, estimate_mean_sinr_stats, estimate_outage_stats, GridOptions};
use risd2d_core::optimizer::{fixed_operating_point, outage_at};
use risd2d_core::outage::evaluate_outage;
use risd2d_core::sinr_approx::{mean_var_gamma_v, sinr_hat_from_stats};
use risd2d_core::{
    benchmark_schemes, grid_search, joint_optimize, optimal_placement, outage_by_quadrature, GridObjective,
    LinkStats, MomentMode, SystemParams,
};

use crate::config::ExperimentConfig;
use crate::error::CliError;
use crate::output::{Cell, Table};

pub const EXPERIMENTS: [&str; 11] = [
    "fig3", "fig4", "fig5a", "fig5b", "fig6", "fig7", "fig8a", "fig8b", "fig9", "fig10", "custom",
];

/// BS–DU distance at which interference is negligible; isolates the
/// accuracy of the mean-SINR surrogate.
pub const FIG3_D_BD: f64 = 300.0;
pub const FIG3_ELEMENTS: [usize; 4] = [10, 20, 40, 80];
pub const FIG4_ELEMENTS: [usize; 10] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100];
pub const FIG5_ALPHA: [f64; 4] = [1.0, 10.0, 100.0, 1000.0];
pub const FIG5_ANTENNAS: [usize; 7] = [1, 2, 4, 8, 16, 32, 64];
pub const FIG8A_D_SC: [f64; 2] = [1.5, 2.5];
pub const FIG8B_ALPHA: [f64; 2] = [0.7, 0.8];
pub const FIG8B_THRESHOLD_DB: [f64; 2] = [2.3, 3.6];

/// `(label, N, γ_th in dB)` of the benchmark cases.
pub const CASES: [(&str, usize, f64); 4] = [
    ("case1", 40, 0.0),
    ("case2", 60, 0.0),
    ("case3", 40, 2.0),
    ("case4", 60, 2.0),
];

/// Evenly spaced values from `lo` to `hi` inclusive.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Trial budget and root seed for one invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunContext {
    pub trials: u64,
    pub seed: u64,
}

struct Seeds {
    root: u64,
    next: u64,
}

impl Seeds {
    fn new(root: u64) -> Self {
        Self { root, next: 0 }
    }

    fn take(&mut self) -> u64 {
        let s = self.root.wrapping_add(self.next);
        self.next += 1;
        s
    }
}

pub fn run_experiment(cfg: &ExperimentConfig, name: &str, ctx: RunContext) -> Result<Vec<Table>, CliError> {
    let tables = match name {
        "fig3" => vec![fig3(cfg, ctx)?],
        "fig4" => vec![fig4(cfg, ctx)?],
        "fig5a" => vec![fig5(cfg, ctx, false)?],
        "fig5b" => vec![fig5(cfg, ctx, true)?],
        "fig6" => vec![fig6(cfg, ctx)?],
        "fig7" => fig7(cfg)?,
        "fig8a" => fig8a(cfg, ctx)?,
        "fig8b" => vec![fig8b(cfg, ctx)?],
        "fig9" => fig9(cfg, ctx)?,
        "fig10" => vec![fig10(cfg, ctx)?],
        "custom" => vec![custom(cfg, ctx)?],
        other => return Err(CliError::UnknownExperiment(other.to_string())),
    };
    Ok(tables)
}

/// Analytical and simulated outage at one operating point.
pub struct OutagePoint {
    pub closed_form: f64,
    pub quadrature: f64,
    pub simulated: f64,
    pub std_error: f64,
}

fn outage_point(cfg: &ExperimentConfig, ls: &LinkStats, trials: u64, seed: u64) -> Result<OutagePoint, CliError> {
    let mc = estimate_outage_stats(ls, trials, seed)?;
    Ok(OutagePoint {
        closed_form: evaluate_outage(ls, cfg.options.outage)?,
        quadrature: outage_by_quadrature(ls)?,
        simulated: mc.value,
        std_error: mc.std_error,
    })
}

impl OutagePoint {
    fn cells(&self) -> [Cell; 4] {
        [
            self.closed_form.into(),
            self.quadrature.into(),
            self.simulated.into(),
            self.std_error.into(),
        ]
    }
}

const OUTAGE_COLUMNS: [&str; 4] = ["closed_form", "quadrature", "simulated", "std_error"];

fn header(lead: &[&str], tail: &[&str]) -> Vec<String> {
    lead.iter().chain(tail).map(|s| s.to_string()).collect()
}

fn table(name: &str, lead: &[&str], tail: &[&str]) -> Table {
    Table {
        name: name.to_string(),
        header: header(lead, tail),
        rows: Vec::new(),
    }
}

fn selected_placement(cfg: &ExperimentConfig) -> Result<f64, CliError> {
    Ok(optimal_placement(&cfg.topology, cfg.options.tie)?.selected)
}

/// Mean-SINR surrogate against the simulated mean over transmit SNR.
pub fn fig3(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Table, CliError> {
    let mut t = table(
        "fig3",
        &["n_elements", "gamma_s_db"],
        &["analytical", "simulated", "std_error", "relative_error"],
    );
    let d = selected_placement(cfg)?;
    let mut seeds = Seeds::new(ctx.seed);
    for n in FIG3_ELEMENTS {
        let params = SystemParams {
            n_elements: n,
            d_bd: FIG3_D_BD,
            ..cfg.system
        };
        for gs_db in linspace(0.0, 20.0, 11) {
            let p_s = db_to_linear(gs_db) * params.noise_power;
            let ls = LinkStats::new(&params, &cfg.topology, d, p_s)?;
            let hat = sinr_hat_from_stats(&ls, cfg.options.moments)?.value;
            let mc = estimate_mean_sinr_stats(&ls, ctx.trials, seeds.take())?;
            t.push(vec![
                n.into(),
                gs_db.into(),
                hat.into(),
                mc.value.into(),
                mc.std_error.into(),
                ((hat - mc.value) / mc.value).into(),
            ]);
        }
    }
    Ok(t)
}

/// Mean SINR over the array size for the joint and the fixed operating point.
pub fn fig4(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Table, CliError> {
    let mut t = table(
        "fig4",
        &["scheme", "n_elements"],
        &["d", "p_s_dbw", "analytical", "simulated", "std_error"],
    );
    let mut seeds = Seeds::new(ctx.seed);
    for scheme in ["joint", "fixed"] {
        for n in FIG4_ELEMENTS {
            let params = SystemParams {
                n_elements: n,
                ..cfg.system
            };
            let (d, p) = if scheme == "joint" {
                let j = joint_optimize(&cfg.topology, &params, cfg.options)?;
                (j.d_selected, j.p_s_star)
            } else {
                fixed_operating_point(&cfg.topology, &params)?
            };
            let ls = LinkStats::new(&params, &cfg.topology, d, p)?;
            let hat = sinr_hat_from_stats(&ls, cfg.options.moments)?.value;
            let mc = estimate_mean_sinr_stats(&ls, ctx.trials, seeds.take())?;
            t.push(vec![
                scheme.into(),
                n.into(),
                d.into(),
                linear_to_db(p).into(),
                hat.into(),
                mc.value.into(),
                mc.std_error.into(),
            ]);
        }
    }
    Ok(t)
}

/// Mean (`variance = false`) or variance of the BS interference gain:
/// exact sums, extreme-value approximation and simulation.
pub fn fig5(_cfg: &ExperimentConfig, ctx: RunContext, variance: bool) -> Result<Table, CliError> {
    let mut t = if variance {
        table(
            "fig5b",
            &["alpha_bd", "n_antennas"],
            &["exact", "gumbel", "simulated", "std_error", "relative_error_exact_vs_limit"],
        )
    } else {
        table(
            "fig5a",
            &["alpha_bd", "n_antennas"],
            &["exact", "gumbel", "simulated", "std_error", "relative_error_gumbel_vs_exact"],
        )
    };
    let mut seeds = Seeds::new(ctx.seed);
    for a in FIG5_ALPHA {
        for m in FIG5_ANTENNAS {
            let (em, ev) = mean_var_gamma_v(a, m, MomentMode::ExactSum)?;
            let (gm, gv) = mean_var_gamma_v(a, m, MomentMode::Gumbel)?;
            let mc = estimate_gamma_v(a, m, ctx.trials, seeds.take())?;
            let row: Vec<Cell> = if variance {
                let limit = a * a * PI * PI / 6.0;
                vec![
                    a.into(),
                    m.into(),
                    ev.into(),
                    gv.into(),
                    mc.variance.into(),
                    mc.variance_std_error.into(),
                    ((ev - limit) / limit).into(),
                ]
            } else {
                vec![
                    a.into(),
                    m.into(),
                    em.into(),
                    gm.into(),
                    mc.mean.value.into(),
                    mc.mean.std_error.into(),
                    ((gm - em) / em).into(),
                ]
            };
            t.push(row);
        }
    }
    Ok(t)
}

/// Outage over the SINR threshold for two array sizes, two transmit SNRs
/// and two BS distances, at the optimal placement.
pub fn fig6(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Table, CliError> {
    let mut t = table(
        "fig6",
        &["d_bd", "n_elements", "gamma_s_db", "gamma_th_db"],
        &OUTAGE_COLUMNS,
    );
    let d = selected_placement(cfg)?;
    let mut seeds = Seeds::new(ctx.seed);
    for d_bd in [3.5, 4.5] {
        for n in [50, 60] {
            for gs_db in [3.0, 10.0] {
                for th_db in linspace(-4.0, 10.0, 8) {
                    let params = SystemParams {
                        n_elements: n,
                        d_bd,
                        sinr_threshold: db_to_linear(th_db),
                        ..cfg.system
                    };
                    let p_s = db_to_linear(gs_db) * params.noise_power;
                    let ls = LinkStats::new(&params, &cfg.topology, d, p_s)?;
                    let pt = outage_point(cfg, &ls, ctx.trials, seeds.take())?;
                    let mut row = vec![d_bd.into(), n.into(), gs_db.into(), th_db.into()];
                    row.extend(pt.cells());
                    t.push(row);
                }
            }
        }
    }
    Ok(t)
}

/// Closed-form outage over the `(d, P_s)` plane, blank above the
/// interference cap, plus the analytic optimum.
pub fn fig7(cfg: &ExperimentConfig) -> Result<Vec<Table>, CliError> {
    let (nd, np) = cfg.grid;
    let opts = GridOptions {
        outage: cfg.options.outage,
        moments: cfg.options.moments,
        ..GridOptions::default()
    };
    let g = grid_search(&cfg.topology, &cfg.system, nd, np, GridObjective::ClosedFormOp, opts)?;
    let mut surface = table("fig7", &["d", "p_s_dbw"], &["closed_form"]);
    for (ip, &p) in g.p_values.iter().enumerate() {
        for (id, &d) in g.d_values.iter().enumerate() {
            surface.push(vec![d.into(), linear_to_db(p).into(), g.at(ip, id).into()]);
        }
    }
    let joint = joint_optimize(&cfg.topology, &cfg.system, cfg.options)?;
    let mut optimum = table("fig7_optimum", &["source", "d", "p_s_dbw"], &["closed_form"]);
    for &d in &joint.d_star {
        let op = outage_at(&cfg.topology, &cfg.system, d, joint.p_s_star, cfg.options.outage)?;
        optimum.push(vec!["analytic".into(), d.into(), linear_to_db(joint.p_s_star).into(), op.into()]);
    }
    optimum.push(vec![
        "grid".into(),
        g.d_values[g.best.1].into(),
        linear_to_db(g.p_values[g.best.0]).into(),
        g.best_value.into(),
    ]);
    Ok(vec![surface, optimum])
}

/// Outage at the joint solution over the BS distance, and over the
/// DS–cellular-user distance that sets the interference cap.
pub fn fig8a(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Vec<Table>, CliError> {
    let mut by_bd = table("fig8a", &["d_sc", "gamma_th_db", "d_bd"], &["d", "p_s_dbw"]);
    by_bd.header.extend(OUTAGE_COLUMNS.iter().map(|s| s.to_string()));
    let mut by_sc = table("fig8a_dsc", &["gamma_th_db", "d_sc"], &["d", "p_s_dbw"]);
    by_sc.header.extend(OUTAGE_COLUMNS.iter().map(|s| s.to_string()));
    let mut seeds = Seeds::new(ctx.seed);
    let point = |params: &SystemParams, seed: u64| -> Result<Vec<Cell>, CliError> {
        let j = joint_optimize(&cfg.topology, params, cfg.options)?;
        let ls = LinkStats::new(params, &cfg.topology, j.d_selected, j.p_s_star)?;
        let pt = outage_point(cfg, &ls, ctx.trials, seed)?;
        let mut cells = vec![j.d_selected.into(), linear_to_db(j.p_s_star).into()];
        cells.extend(pt.cells());
        Ok(cells)
    };
    for d_sc in FIG8A_D_SC {
        for th_db in [0.0, 2.0] {
            for d_bd in linspace(1.0, 5.0, 9) {
                let params = SystemParams {
                    d_sc,
                    d_bd,
                    sinr_threshold: db_to_linear(th_db),
                    ..cfg.system
                };
                let mut row = vec![d_sc.into(), th_db.into(), d_bd.into()];
                row.extend(point(&params, seeds.take())?);
                by_bd.push(row);
            }
        }
    }
    for th_db in [0.0, 2.0] {
        for d_sc in linspace(0.3, 3.0, 10) {
            let params = SystemParams {
                d_sc,
                sinr_threshold: db_to_linear(th_db),
                ..cfg.system
            };
            let mut row = vec![th_db.into(), d_sc.into()];
            row.extend(point(&params, seeds.take())?);
            by_sc.push(row);
        }
    }
    Ok(vec![by_bd, by_sc])
}

/// Outage over the RIS position at the optimal power.
pub fn fig8b(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Table, CliError> {
    let mut t = table("fig8b", &["element_amplitude", "gamma_th_db", "d"], &["p_s_dbw"]);
    t.header.extend(OUTAGE_COLUMNS.iter().map(|s| s.to_string()));
    let (lo, hi) = cfg.topology.feasible_interval()?;
    let mut seeds = Seeds::new(ctx.seed);
    for amp in FIG8B_ALPHA {
        for th_db in FIG8B_THRESHOLD_DB {
            let params = SystemParams {
                element_amplitude: amp,
                sinr_threshold: db_to_linear(th_db),
                ..cfg.system
            };
            let p = joint_optimize(&cfg.topology, &params, cfg.options)?.p_s_star;
            for d in linspace(lo, hi, 11) {
                let ls = LinkStats::new(&params, &cfg.topology, d, p)?;
                let pt = outage_point(cfg, &ls, ctx.trials, seeds.take())?;
                let mut row = vec![amp.into(), th_db.into(), d.into(), linear_to_db(p).into()];
                row.extend(pt.cells());
                t.push(row);
            }
        }
    }
    Ok(t)
}

/// Scheme label, distance, power and outage for each design.
type SchemeRow = (&'static str, f64, f64, OutagePoint);

fn scheme_rows(
    cfg: &ExperimentConfig,
    params: &SystemParams,
    ctx: RunContext,
    seeds: &mut Seeds,
) -> Result<(Vec<SchemeRow>, risd2d_core::BenchmarkReport), CliError> {
    let report = benchmark_schemes(&cfg.topology, params, cfg.options)?;
    let mut out = Vec::new();
    for (name, s) in [
        ("joint", report.joint),
        ("optimal_distance", report.optimal_distance),
        ("optimal_power", report.optimal_power),
        ("fixed", report.fixed_fixed),
    ] {
        let ls = LinkStats::new(params, &cfg.topology, s.d, s.p_s)?;
        out.push((name, s.d, s.p_s, outage_point(cfg, &ls, ctx.trials, seeds.take())?));
    }
    Ok((out, report))
}

/// Joint design against the three benchmark schemes in four cases, with
/// both relative-improvement definitions.
pub fn fig9(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Vec<Table>, CliError> {
    let mut t = table(
        "fig9",
        &["case", "n_elements", "gamma_th_db", "scheme"],
        &["d", "p_s_dbw"],
    );
    t.header.extend(OUTAGE_COLUMNS.iter().map(|s| s.to_string()));
    let mut imp = table(
        "fig9_improvement",
        &["case", "benchmark"],
        &["relative_reduction", "relative_to_joint"],
    );
    let mut seeds = Seeds::new(ctx.seed);
    for (label, n, th_db) in CASES {
        let params = SystemParams {
            n_elements: n,
            sinr_threshold: db_to_linear(th_db),
            ..cfg.system
        };
        let (rows, report) = scheme_rows(cfg, &params, ctx, &mut seeds)?;
        for (scheme, d, p, pt) in rows {
            let mut row = vec![label.into(), n.into(), th_db.into(), scheme.into(), d.into(), linear_to_db(p).into()];
            row.extend(pt.cells());
            t.push(row);
        }
        for (bench, i) in [
            ("optimal_power", report.over_optimal_power()),
            ("optimal_distance", report.over_optimal_distance()),
        ] {
            imp.push(vec![
                label.into(),
                bench.into(),
                i.relative_reduction.into(),
                i.relative_to_joint.into(),
            ]);
        }
    }
    Ok(vec![t, imp])
}

/// Outage of each scheme as the BS antenna count grows, in the third case.
pub fn fig10(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Table, CliError> {
    let (_, n, th_db) = CASES[2];
    let mut t = table("fig10", &["n_antennas", "scheme"], &["d", "p_s_dbw"]);
    t.header.extend(OUTAGE_COLUMNS.iter().map(|s| s.to_string()));
    t.header.push("increase_vs_one_antenna".to_string());
    let mut seeds = Seeds::new(ctx.seed);
    let mut base: Vec<f64> = Vec::new();
    for m in 1..=4usize {
        let params = SystemParams {
            n_elements: n,
            n_antennas: m,
            sinr_threshold: db_to_linear(th_db),
            ..cfg.system
        };
        let (rows, _) = scheme_rows(cfg, &params, ctx, &mut seeds)?;
        for (k, (scheme, d, p, pt)) in rows.into_iter().enumerate() {
            if m == 1 {
                base.push(pt.closed_form);
            }
            let inc = (pt.closed_form - base[k]) / base[k];
            let mut row = vec![m.into(), scheme.into(), d.into(), linear_to_db(p).into()];
            row.extend(pt.cells());
            row.push(inc.into());
            t.push(row);
        }
    }
    Ok(t)
}

/// Cartesian product of the configured sweep axes, first axis outermost.
pub fn custom(cfg: &ExperimentConfig, ctx: RunContext) -> Result<Table, CliError> {
    let lead: Vec<&str> = cfg.sweep.iter().map(|a| a.column()).collect();
    let mut t = table(
        "custom",
        &lead,
        &[
            "d",
            "p_s_dbw",
            "closed_form",
            "quadrature",
            "simulated",
            "std_error",
            "sinr_hat",
            "sinr_simulated",
            "sinr_std_error",
        ],
    );
    let mut seeds = Seeds::new(ctx.seed);
    let mut index = vec![0usize; cfg.sweep.len()];
    loop {
        let mut point = cfg.clone();
        for (axis, &i) in cfg.sweep.iter().zip(&index) {
            point = point.with_override(&axis.parameter, axis.values[i])?;
        }
        let (d, p) = operating_point(&point)?;
        let ls = LinkStats::new(&point.system, &point.topology, d, p)?;
        let seed = seeds.take();
        let pt = outage_point(&point, &ls, ctx.trials, seed)?;
        let hat = if p > 0.0 {
            Some(sinr_hat_from_stats(&ls, point.options.moments)?.value)
        } else {
            None
        };
        let mc = estimate_mean_sinr_stats(&ls, ctx.trials, seed)?;
        let mut row: Vec<Cell> = cfg.sweep.iter().zip(&index).map(|(a, &i)| a.values[i].into()).collect();
        row.extend([d.into(), linear_to_db(p).into()]);
        row.extend(pt.cells());
        row.extend([hat.into(), mc.value.into(), mc.std_error.into()]);
        t.push(row);

        // Odometer increment, last axis fastest.
        let mut k = index.len();
        loop {
            if k == 0 {
                return Ok(t);
            }
            k -= 1;
            index[k] += 1;
            if index[k] < cfg.sweep[k].values.len() {
                break;
            }
            index[k] = 0;
        }
    }
}

/// Configured operating point, with the joint optimum filling any gaps.
pub fn operating_point(cfg: &ExperimentConfig) -> Result<(f64, f64), CliError> {
    if let (Some(d), Some(p)) = (cfg.point.d, cfg.point.p_s) {
        return Ok((d, p));
    }
    let j = joint_optimize(&cfg.topology, &cfg.system, cfg.options)?;
    Ok((cfg.point.d.unwrap_or(j.d_selected), cfg.point.p_s.unwrap_or(j.p_s_star)))
}

