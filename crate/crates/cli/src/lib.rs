//! Experiment runner for the `risd2d` toolkit: configuration loading,
//! figure-style sweeps, the optimizer report and the validation suite.

pub mod config;
pub mod error;
pub mod experiments;
pub mod output;
pub mod validate;

use std::path::{Path, PathBuf};

use serde::Serialize;

use risd2d_core::channel::linear_to_db;
use risd2d_core::montecarlo::{DEFAULT_CI_TRIALS, DEFAULT_FIGURE_TRIALS};
use risd2d_core::optimizer::{CandidateOrigin, Curvature};
use risd2d_core::{benchmark_schemes, joint_optimize, BindingConstraint};

pub use config::ExperimentConfig;
pub use error::CliError;
use experiments::RunContext;
use output::{Cell, Table};

/// Command-line overrides applied on top of the configuration file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub trials: Option<u64>,
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

fn resolve(cfg_path: &Path, ov: &Overrides) -> Result<ExperimentConfig, CliError> {
    let mut cfg = ExperimentConfig::load(cfg_path)?;
    if let Some(seed) = ov.seed {
        cfg = cfg.with_seed(seed);
    }
    Ok(cfg)
}

fn out_dir(cfg: &ExperimentConfig, ov: &Overrides, default: &str) -> PathBuf {
    ov.out
        .clone()
        .or_else(|| cfg.out_dir.clone())
        .unwrap_or_else(|| PathBuf::from("out").join(default))
}

fn context(cfg: &ExperimentConfig, ov: &Overrides, default_trials: u64) -> RunContext {
    RunContext {
        trials: ov.trials.or(cfg.trials).unwrap_or(default_trials),
        seed: cfg.seed,
    }
}

/// Files written by a command.
#[derive(Debug, Clone, Serialize)]
pub struct RunSummary {
    pub out_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub trials: u64,
    pub seed: u64,
}

/// `run <config> <experiment>`.
pub fn run(cfg_path: &Path, experiment: &str, ov: &Overrides) -> Result<RunSummary, CliError> {
    if !experiments::EXPERIMENTS.contains(&experiment) {
        return Err(CliError::UnknownExperiment(experiment.to_string()));
    }
    let cfg = resolve(cfg_path, ov)?;
    let ctx = context(&cfg, ov, DEFAULT_FIGURE_TRIALS);
    let tables = experiments::run_experiment(&cfg, experiment, ctx)?;
    let dir = out_dir(&cfg, ov, experiment);
    let files = output::write_run(&dir, &tables, &cfg, "run", Some(experiment), ctx.trials)?;
    Ok(RunSummary {
        out_dir: dir,
        files,
        trials: ctx.trials,
        seed: ctx.seed,
    })
}

/// Outcome of `validate`: where the table went and how many checks failed.
#[derive(Debug, Clone, Serialize)]
pub struct ValidationSummary {
    pub run: RunSummary,
    pub checks: usize,
    pub failed: usize,
}

/// `validate <config>`. The CSV is written even when checks fail.
pub fn validate(cfg_path: &Path, ov: &Overrides) -> Result<ValidationSummary, CliError> {
    let cfg = resolve(cfg_path, ov)?;
    let ctx = context(&cfg, ov, DEFAULT_CI_TRIALS);
    let table = validate::run_validation(&cfg, ctx)?;
    let dir = out_dir(&cfg, ov, "validate");
    let files = output::write_run(&dir, std::slice::from_ref(&table), &cfg, "validate", None, ctx.trials)?;
    Ok(ValidationSummary {
        checks: table.rows.len(),
        failed: validate::failures(&table),
        run: RunSummary {
            out_dir: dir,
            files,
            trials: ctx.trials,
            seed: ctx.seed,
        },
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct CandidateReport {
    pub d: f64,
    pub origin: String,
    pub curvature: String,
    pub z: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct SchemeReport {
    pub scheme: &'static str,
    pub d: f64,
    pub p_s_dbw: f64,
    pub outage: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizeReport {
    pub d_star: Vec<f64>,
    pub d_selected: f64,
    pub z_star: f64,
    pub p_s_star_dbw: f64,
    pub binding_constraint: &'static str,
    pub achieved_outage: f64,
    pub achieved_sinr_hat: f64,
    pub candidates: Vec<CandidateReport>,
    pub notes: Vec<String>,
    pub schemes: Vec<SchemeReport>,
    pub improvement_over_optimal_power: (f64, f64),
    pub improvement_over_optimal_distance: (f64, f64),
}

fn origin_name(o: CandidateOrigin) -> String {
    match o {
        CandidateOrigin::Stationary(k) => format!("stationary_d{k}"),
        CandidateOrigin::EllipseCenter => "ellipse_center".into(),
        CandidateOrigin::BoundaryLower => "boundary_lower".into(),
        CandidateOrigin::BoundaryUpper => "boundary_upper".into(),
    }
}

fn curvature_name(c: Curvature) -> String {
    match c {
        Curvature::LocalMinimum => "local_minimum",
        Curvature::LocalMaximum => "local_maximum",
        Curvature::Flat => "flat",
    }
    .into()
}

/// Joint optimum, its candidates and the benchmark schemes.
pub fn optimize_report(cfg: &ExperimentConfig) -> Result<OptimizeReport, CliError> {
    let j = joint_optimize(&cfg.topology, &cfg.system, cfg.options)?;
    let b = benchmark_schemes(&cfg.topology, &cfg.system, cfg.options)?;
    let scheme = |name, s: risd2d_core::optimizer::SchemeResult| SchemeReport {
        scheme: name,
        d: s.d,
        p_s_dbw: linear_to_db(s.p_s),
        outage: s.outage,
    };
    let (ip, id) = (b.over_optimal_power(), b.over_optimal_distance());
    Ok(OptimizeReport {
        d_star: j.d_star.clone(),
        d_selected: j.d_selected,
        z_star: j.z_star,
        p_s_star_dbw: linear_to_db(j.p_s_star),
        binding_constraint: match j.binding_constraint {
            BindingConstraint::InterferenceCap => "interference_cap",
            BindingConstraint::PowerBudget => "power_budget",
        },
        achieved_outage: j.achieved_outage,
        achieved_sinr_hat: j.achieved_sinr_hat,
        candidates: j
            .candidates
            .candidates
            .iter()
            .map(|c| CandidateReport {
                d: c.d,
                origin: origin_name(c.origin),
                curvature: curvature_name(c.curvature),
                z: c.objective_z,
                feasible: c.feasible,
            })
            .collect(),
        notes: j.candidates.notes.clone(),
        schemes: vec![
            scheme("joint", b.joint),
            scheme("optimal_distance", b.optimal_distance),
            scheme("optimal_power", b.optimal_power),
            scheme("fixed", b.fixed_fixed),
        ],
        improvement_over_optimal_power: (ip.relative_reduction, ip.relative_to_joint),
        improvement_over_optimal_distance: (id.relative_reduction, id.relative_to_joint),
    })
}

/// `optimize <config>`: the report as JSON, plus candidate and scheme
/// tables when an output directory is given.
pub fn optimize(cfg_path: &Path, ov: &Overrides) -> Result<(OptimizeReport, Option<RunSummary>), CliError> {
    let cfg = resolve(cfg_path, ov)?;
    let report = optimize_report(&cfg)?;
    let Some(dir) = ov.out.clone().or_else(|| cfg.out_dir.clone()) else {
        return Ok((report, None));
    };
    let mut cand = Table::new("candidates", &["d", "origin", "curvature", "z", "feasible"]);
    for c in &report.candidates {
        cand.push(vec![
            c.d.into(),
            c.origin.clone().into(),
            c.curvature.clone().into(),
            c.z.into(),
            c.feasible.into(),
        ]);
    }
    let mut schemes = Table::new("schemes", &["scheme", "d", "p_s_dbw", "outage"]);
    for s in &report.schemes {
        schemes.push(vec![s.scheme.into(), s.d.into(), s.p_s_dbw.into(), Cell::Float(s.outage)]);
    }
    let files = output::write_run(&dir, &[cand, schemes], &cfg, "optimize", None, 0)?;
    Ok((
        report,
        Some(RunSummary {
            out_dir: dir,
            files,
            trials: 0,
            seed: cfg.seed,
        }),
    ))
}
