use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use risd2d_cli::experiments::{run_experiment, RunContext, EXPERIMENTS};
use risd2d_cli::output::Cell;
use risd2d_cli::ExperimentConfig;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_risd2d"))
}

fn profile() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../profiles/default.toml")
}

fn write_config(dir: &Path, text: &str) -> PathBuf {
    let path = dir.join("config.toml");
    std::fs::write(&path, text).unwrap();
    path
}

const SINGLE_POINT: &str = "seed = 7\n[point]\nd = 2.0\np_s_db = 8.0\n";

#[test]
fn custom_single_point_runs_quickly() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), SINGLE_POINT);
    let out = tmp.path().join("out");
    let start = Instant::now();
    let done = bin()
        .args(["run", cfg.to_str().unwrap(), "custom", "--trials", "1000", "--out", out.to_str().unwrap()])
        .output()
        .unwrap();
    let elapsed = start.elapsed();
    assert!(done.status.success());
    assert!(elapsed.as_secs_f64() < 5.0, "took {elapsed:?}");
    let csv = std::fs::read_to_string(out.join("custom.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("d,p_s_dbw,closed_form,quadrature,simulated,std_error"));
    assert!(lines[1].starts_with("2,8,"));
    let manifest: serde_json::Value = serde_json::from_slice(&std::fs::read(out.join("manifest.json")).unwrap()).unwrap();
    assert_eq!(manifest["seed"], 7);
    assert_eq!(manifest["trials"], 1000);
    assert_eq!(manifest["files"][0]["rows"], 1);
    assert_eq!(manifest["config_sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn reruns_reproduce_csv_bytes() {
    let tmp = tempfile::tempdir().unwrap();
    let text = "[[sweep]]\nparameter = \"system.n_elements\"\nvalues = [30, 60]\n\
                [[sweep]]\nparameter = \"system.d_bd\"\nunit = \"m\"\nvalues = [1.5, 3.0]\n";
    let cfg = write_config(tmp.path(), text);
    let run = |name: &str| {
        let out = tmp.path().join(name);
        let done = bin()
            .args(["run", cfg.to_str().unwrap(), "custom", "--trials", "2000", "--seed", "11"])
            .args(["--out", out.to_str().unwrap()])
            .output()
            .unwrap();
        assert!(done.status.success());
        std::fs::read(out.join("custom.csv")).unwrap()
    };
    let a = run("a");
    assert_eq!(a, run("b"));
    assert_eq!(String::from_utf8(a).unwrap().lines().count(), 5);
}

#[test]
fn errors_carry_a_category_and_exit_code() {
    let tmp = tempfile::tempdir().unwrap();
    let run = |cfg: &Path, exp: &str| bin().args(["run", cfg.to_str().unwrap(), exp, "--trials", "1000"]).output().unwrap();

    let out = run(&profile(), "fig42");
    assert_eq!(out.status.code(), Some(3));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["category"], "unknown-experiment");

    let bad = write_config(tmp.path(), "[system]\np_s_max = 10.0\n");
    let out = run(&bad, "custom");
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["category"], "config");

    let infeasible = write_config(tmp.path(), "[point]\nd = 0.1\n");
    let out = run(&infeasible, "custom");
    assert_eq!(out.status.code(), Some(11));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["category"], "constraint");

    let out = run(&tmp.path().join("missing.toml"), "custom");
    assert_eq!(out.status.code(), Some(4));

    let file = tmp.path().join("file");
    std::fs::write(&file, "").unwrap();
    let out = bin()
        .args(["run", profile().to_str().unwrap(), "custom", "--trials", "1000"])
        .args(["--out", file.join("sub").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn optimize_reports_the_joint_solution() {
    let tmp = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["optimize", profile().to_str().unwrap(), "--out", tmp.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let r: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let d4 = (0.75f64 * 0.75 - 0.25).sqrt();
    assert!((r["d_selected"].as_f64().unwrap() - d4).abs() < 1e-12);
    assert_eq!(r["d_star"].as_array().unwrap().len(), 2);
    assert_eq!(r["binding_constraint"], "power_budget");
    assert!((r["p_s_star_dbw"].as_f64().unwrap() - 10.0).abs() < 1e-12);
    assert!(tmp.path().join("candidates.csv").exists());
    assert!(tmp.path().join("schemes.csv").exists());
}

#[test]
fn every_experiment_produces_well_formed_tables() {
    let cfg = ExperimentConfig::load(&profile()).unwrap();
    let ctx = RunContext { trials: 1000, seed: 3 };
    for name in EXPERIMENTS {
        let tables = run_experiment(&cfg, name, ctx).unwrap();
        assert!(!tables.is_empty());
        for t in &tables {
            assert!(!t.rows.is_empty(), "{name}/{}", t.name);
            if t.column("simulated").is_some() {
                assert!(t.column("std_error").is_some(), "{name}/{} lacks std_error", t.name);
            }
            for row in &t.rows {
                assert_eq!(row.len(), t.header.len());
                for c in row {
                    if let Cell::Float(v) = c {
                        assert!(!v.is_nan(), "{name}/{}: NaN", t.name);
                    }
                }
            }
        }
    }
    let fig7 = run_experiment(&cfg, "fig7", ctx).unwrap();
    assert_eq!(fig7[0].rows.len(), 100 * 100);
}

#[test]
fn tables_do_not_depend_on_thread_count() {
    let cfg = ExperimentConfig::load(&profile()).unwrap();
    let ctx = RunContext { trials: 5000, seed: 9 };
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| run_experiment(&cfg, "fig9", ctx).unwrap())
    };
    let one = run(1);
    let bytes = |ts: &Vec<risd2d_cli::output::Table>| ts.iter().map(|t| t.to_csv()).collect::<Vec<_>>();
    assert_eq!(bytes(&one), bytes(&run(4)));
}

#[test]
fn unknown_sweep_paths_fail_at_load() {
    let text = "[[sweep]]\nparameter = \"system.nope\"\nvalues = [1.0]\n";
    assert!(ExperimentConfig::parse(text).is_err());
    assert!(ExperimentConfig::parse("[[sweep]]\nparameter = \"system.n_elements\"\nvalues = []\n").is_err());
}
