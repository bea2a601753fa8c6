//! Named experiment sweeps with JSON-configurable parameters and one CSV
//! per sweep. Desk-scale defaults run in minutes; `--large` opts into the
//! full-size ranges.

use crate::csvout::{fmt_sig, CsvWriter};
use crate::CliError;
use clap::Args;
use cutrank::anneal::{anneal, AnnealOptions, AnnealResult, Backend, Schedule};
use cutrank::graph::{gen_erdos_renyi, gen_grid};
use cutrank::qaoa::{gen_qaoa_graph, gen_random_hamiltonian};
use rayon::prelude::*;
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Args)]
pub struct ExperimentArgs {
    /// Sweep name: grid-sweep | sparse-sweep | qaoa-sweep
    #[arg(long)]
    pub name: String,
    /// JSON config overriding the sweep defaults
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output directory for the CSV suite
    #[arg(long)]
    pub out: PathBuf,
    /// Use the full-size parameter ranges instead of desk-scale defaults
    #[arg(long)]
    pub large: bool,
}

fn load_config<T: for<'de> Deserialize<'de>>(path: &Option<PathBuf>, default: T) -> Result<T, CliError> {
    match path {
        None => Ok(default),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| CliError::Io(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| CliError::Io(format!("{}: {e}", p.display())))
        }
    }
}

fn write_csv(dir: &Path, name: &str, content: String) -> Result<PathBuf, CliError> {
    std::fs::create_dir_all(dir).map_err(|e| CliError::Io(format!("{}: {e}", dir.display())))?;
    let path = dir.join(name);
    std::fs::write(&path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    Ok(path)
}

fn mean(xs: impl Iterator<Item = f64>) -> f64 {
    let v: Vec<f64> = xs.collect();
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn cmd_experiment(a: ExperimentArgs) -> Result<(), CliError> {
    match a.name.as_str() {
        "grid-sweep" => grid_sweep(&a),
        "sparse-sweep" => sparse_sweep(&a),
        "qaoa-sweep" => qaoa_sweep(&a),
        other => Err(CliError::Usage(format!(
            "unknown experiment '{other}' (grid-sweep|sparse-sweep|qaoa-sweep)"
        ))),
    }
}

// ---------------------------------------------------------------- grid

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct GridConfig {
    sides: Vec<usize>,
    restarts: usize,
    schedule_steps: usize,
    seed: u64,
}

impl Default for GridConfig {
    fn default() -> Self {
        GridConfig {
            sides: (3..=8).collect(),
            restarts: 20,
            schedule_steps: 10,
            seed: 0,
        }
    }
}

impl GridConfig {
    fn large() -> Self {
        GridConfig {
            sides: (3..=12).collect(),
            restarts: 100,
            ..Default::default()
        }
    }
}

pub const GRID_SWEEP_HEADER: &[&str] = &[
    "schema_version",
    "experiment",
    "side",
    "n_vertices",
    "size",
    "restarts",
    "schedule_steps",
    "optimum",
    "mean_best_rank",
    "min_best_rank",
    "mean_deviation",
    "mean_wall_ms",
];

fn grid_sweep(a: &ExperimentArgs) -> Result<(), CliError> {
    let default = if a.large { GridConfig::large() } else { GridConfig::default() };
    let cfg: GridConfig = load_config(&a.config, default)?;
    let sched = Schedule::linear(1.0, 0.1, cfg.schedule_steps);
    let opts = AnnealOptions::default();

    let mut w = CsvWriter::new(GRID_SWEEP_HEADER);
    for &side in &cfg.sides {
        let g = gen_grid(side, side);
        let size = side * side / 2;
        let results: Vec<AnnealResult> = (0..cfg.restarts as u64)
            .into_par_iter()
            .map(|k| anneal(&g, size, &sched, cfg.seed + k, Backend::Incremental, &opts))
            .collect();
        // known optimum for an n×n grid with a balanced cut is n (n ≥ 3)
        let optimum = side;
        let mean_best = mean(results.iter().map(|r| r.best_rank as f64));
        w.row(&[
            "1".into(),
            "grid-sweep".into(),
            side.to_string(),
            (side * side).to_string(),
            size.to_string(),
            cfg.restarts.to_string(),
            cfg.schedule_steps.to_string(),
            optimum.to_string(),
            fmt_sig(mean_best),
            results.iter().map(|r| r.best_rank).min().unwrap().to_string(),
            fmt_sig(mean_best - optimum as f64),
            fmt_sig(mean(results.iter().map(|r| r.wall_time.as_secs_f64() * 1e3))),
        ]);
    }
    let path = write_csv(&a.out, "grid_sweep.csv", w.finish())?;
    println!("wrote {}", path.display());
    Ok(())
}

// -------------------------------------------------------------- sparse

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct SparseConfig {
    ns: Vec<usize>,
    /// Edge probability is c / n.
    c: f64,
    /// |X| = round(p1 * n).
    p1: f64,
    instances: usize,
    restarts: usize,
    schedule_steps: usize,
    seed: u64,
}

impl Default for SparseConfig {
    fn default() -> Self {
        SparseConfig {
            ns: vec![20, 40, 60],
            c: 2.0,
            p1: 0.5,
            instances: 20,
            restarts: 1,
            schedule_steps: 10,
            seed: 0,
        }
    }
}

impl SparseConfig {
    fn large() -> Self {
        SparseConfig {
            ns: vec![25, 50, 75, 100, 150],
            instances: 100,
            ..Default::default()
        }
    }
}

pub const SPARSE_SWEEP_HEADER: &[&str] = &[
    "schema_version",
    "experiment",
    "n_vertices",
    "c",
    "p1",
    "size",
    "instances",
    "restarts",
    "schedule_steps",
    "mean_initial_rank",
    "mean_best_rank",
    "mean_wall_ms",
];

fn sparse_sweep(a: &ExperimentArgs) -> Result<(), CliError> {
    let default = if a.large { SparseConfig::large() } else { SparseConfig::default() };
    let cfg: SparseConfig = load_config(&a.config, default)?;
    if !(0.0 < cfg.p1 && cfg.p1 < 1.0) {
        return Err(CliError::Usage(format!("p1 = {} outside (0,1)", cfg.p1)));
    }
    let sched = Schedule::linear(1.0, 0.1, cfg.schedule_steps);
    let opts = AnnealOptions::default();

    let mut w = CsvWriter::new(SPARSE_SWEEP_HEADER);
    for &n in &cfg.ns {
        let size = ((cfg.p1 * n as f64).round() as usize).clamp(1, n - 1);
        let results: Vec<AnnealResult> = (0..cfg.instances as u64)
            .into_par_iter()
            .map(|inst| {
                let g = gen_erdos_renyi(n, cfg.c / n as f64, cfg.seed + inst);
                (0..cfg.restarts as u64)
                    .map(|k| {
                        anneal(
                            &g,
                            size,
                            &sched,
                            cfg.seed + inst * 1000 + k,
                            Backend::Incremental,
                            &opts,
                        )
                    })
                    .min_by_key(|r| (r.best_rank, r.seed))
                    .unwrap()
            })
            .collect();
        w.row(&[
            "1".into(),
            "sparse-sweep".into(),
            n.to_string(),
            fmt_sig(cfg.c),
            fmt_sig(cfg.p1),
            size.to_string(),
            cfg.instances.to_string(),
            cfg.restarts.to_string(),
            cfg.schedule_steps.to_string(),
            fmt_sig(mean(results.iter().map(|r| r.initial_rank as f64))),
            fmt_sig(mean(results.iter().map(|r| r.best_rank as f64))),
            fmt_sig(mean(results.iter().map(|r| r.wall_time.as_secs_f64() * 1e3))),
        ]);
    }
    let path = write_csv(&a.out, "sparse_sweep.csv", w.finish())?;
    println!("wrote {}", path.display());
    Ok(())
}

// ---------------------------------------------------------------- qaoa

#[derive(Deserialize)]
#[serde(deny_unknown_fields, default)]
struct QaoaConfig {
    num_qubits: usize,
    term_counts: Vec<usize>,
    locality: usize,
    instances: usize,
    schedule_steps: Vec<usize>,
    seed: u64,
}

impl Default for QaoaConfig {
    fn default() -> Self {
        QaoaConfig {
            num_qubits: 40,
            term_counts: vec![100, 150, 200],
            locality: 3,
            instances: 10,
            schedule_steps: vec![10],
            seed: 0,
        }
    }
}

impl QaoaConfig {
    fn large() -> Self {
        QaoaConfig {
            schedule_steps: vec![10, 100],
            instances: 20,
            ..Default::default()
        }
    }
}

pub const QAOA_SWEEP_HEADER: &[&str] = &[
    "schema_version",
    "experiment",
    "num_qubits",
    "num_terms",
    "locality",
    "term_distribution",
    "instances",
    "schedule_steps",
    "size",
    "mean_best_rank",
    "max_best_rank",
    "mean_wall_ms",
];

fn qaoa_sweep(a: &ExperimentArgs) -> Result<(), CliError> {
    let default = if a.large { QaoaConfig::large() } else { QaoaConfig::default() };
    let cfg: QaoaConfig = load_config(&a.config, default)?;
    let opts = AnnealOptions::default();

    let mut w = CsvWriter::new(QAOA_SWEEP_HEADER);
    for &terms in &cfg.term_counts {
        for &steps in &cfg.schedule_steps {
            let sched = Schedule::linear(1.0, 0.1, steps);
            let n_total = cfg.num_qubits + terms;
            let size = n_total / 2;
            let results: Vec<AnnealResult> = (0..cfg.instances as u64)
                .into_par_iter()
                .map(|inst| {
                    let h = gen_random_hamiltonian(
                        cfg.num_qubits,
                        terms,
                        cfg.locality,
                        cfg.seed + inst,
                    );
                    let q = gen_qaoa_graph(&h);
                    anneal(
                        &q.graph,
                        size,
                        &sched,
                        cfg.seed + inst,
                        Backend::Incremental,
                        &opts,
                    )
                })
                .collect();
            w.row(&[
                "1".into(),
                "qaoa-sweep".into(),
                cfg.num_qubits.to_string(),
                terms.to_string(),
                cfg.locality.to_string(),
                "uniform-distinct-supports".into(),
                cfg.instances.to_string(),
                steps.to_string(),
                size.to_string(),
                fmt_sig(mean(results.iter().map(|r| r.best_rank as f64))),
                results.iter().map(|r| r.best_rank).max().unwrap().to_string(),
                fmt_sig(mean(results.iter().map(|r| r.wall_time.as_secs_f64() * 1e3))),
            ]);
        }
    }
    let path = write_csv(&a.out, "qaoa_sweep.csv", w.finish())?;
    println!("wrote {}", path.display());
    Ok(())
}
