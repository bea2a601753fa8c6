//! Command-line front end: cut-rank queries, annealing runs, benchmarks,
//! graph generation, distribution plans, and experiment sweeps with CSV
//! output.

pub mod csvout;
pub mod experiment;

use clap::{Args, Parser, Subcommand};
use cutrank::anneal::{
    anneal, random_partition, AnnealOptions, AnnealResult, Backend, Schedule,
};
use cutrank::distribute::{plan_distribution, verify_recovery};
use cutrank::graph::{gen_erdos_renyi, gen_grid, Graph};
use cutrank::incremental::naive_cut_rank;
use cutrank::io;
use cutrank::qaoa::gen_qaoa_graph;
use rayon::prelude::*;
use std::path::{Path, PathBuf};

use csvout::{fmt_ms, fmt_sig, CsvWriter};

/// Command outcome classified for the process exit code: usage errors
/// exit 1, I/O and parse errors exit 2.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Io(m) => write!(f, "{m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl From<io::FormatError> for CliError {
    fn from(e: io::FormatError) -> Self {
        CliError::Io(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

#[derive(Parser)]
#[command(
    name = "cutrank",
    about = "Minimal-cut-rank graph bipartitioning and distribution planning",
    version
)]
pub struct Cli {
    /// Worker threads for parallel restarts and sweeps (default: all cores)
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand)]
pub enum Command {
    /// Print the cut rank of a partition of an edge-list graph
    Rank(RankArgs),
    /// Run simulated annealing to minimize the cut rank
    Anneal(AnnealArgs),
    /// Time incremental vs naive backends on grid graphs
    Bench(BenchArgs),
    /// Generate graphs (grid, Erdős–Rényi, QAOA resource graphs)
    Gen(GenArgs),
    /// Emit the ancilla-embedded distributed graph for a partition
    Distribute(DistributeArgs),
    /// Run a named experiment sweep and write its CSV suite
    Experiment(experiment::ExperimentArgs),
}

#[derive(Args)]
pub struct RankArgs {
    /// Edge-list graph file
    pub graph: PathBuf,
    /// Comma-separated vertex list for X, e.g. 0,1,2
    #[arg(long, conflicts_with = "size")]
    pub partition: Option<String>,
    /// Random partition size (used with --seed)
    #[arg(long)]
    pub size: Option<usize>,
    /// Seed for the random partition
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Args)]
pub struct AnnealArgs {
    /// Edge-list graph file
    pub graph: PathBuf,
    /// Partition size |X|
    #[arg(long)]
    pub size: usize,
    /// Base seed; restart k uses seed + k
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Temperature schedule: coarse | fine | start:stop:steps
    #[arg(long, default_value = "coarse")]
    pub schedule: String,
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    /// Rank backend: incremental | naive
    #[arg(long, default_value = "incremental")]
    pub backend: String,
    /// Iterate live partition sets instead of snapshots
    #[arg(long)]
    pub live_iteration: bool,
    /// Write one CSV row per restart to this file
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct BenchArgs {
    /// Graph family (only `grid` is supported)
    #[arg(long, default_value = "grid")]
    pub family: String,
    /// Inclusive grid-side range, e.g. 5..15
    #[arg(long = "n-range", default_value = "5..15")]
    pub n_range: String,
    /// Stride through the range
    #[arg(long, default_value_t = 5)]
    pub step: usize,
    /// Backends to time: both | incremental | naive
    #[arg(long, default_value = "both")]
    pub backends: String,
    #[arg(long, default_value = "coarse")]
    pub schedule: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repetitions per point; the median is reported
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    /// CSV output file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct GenArgs {
    /// Graph family: grid | er | qaoa
    #[arg(long)]
    pub family: String,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long)]
    pub cols: Option<usize>,
    /// Vertex count for er graphs
    #[arg(long)]
    pub n: Option<usize>,
    /// Mean degree parameter: edge probability p = c/n
    #[arg(long)]
    pub c: Option<f64>,
    /// Explicit edge probability (overrides --c)
    #[arg(long)]
    pub p: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Hamiltonian JSON file for qaoa graphs
    #[arg(long)]
    pub hamiltonian: Option<PathBuf>,
    /// Output edge-list file (stdout if omitted)
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct DistributeArgs {
    /// Edge-list graph file
    pub graph: PathBuf,
    /// Comma-separated vertex list for X
    #[arg(long, conflicts_with = "size")]
    pub partition: Option<String>,
    /// Anneal for a partition of this size instead of giving one explicitly
    #[arg(long)]
    pub size: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Annealing restarts when --size is used
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    #[arg(long, default_value = "coarse")]
    pub schedule: String,
    /// Output prefix: writes <prefix>.el and <prefix>.json
    #[arg(long)]
    pub out: PathBuf,
}

pub fn parse_schedule(spec: &str) -> Result<Schedule, CliError> {
    match spec {
        "coarse" => Ok(Schedule::coarse()),
        "fine" => Ok(Schedule::fine()),
        other => {
            let parts: Vec<&str> = other.split(':').collect();
            if parts.len() != 3 {
                return Err(usage(format!(
                    "bad schedule '{other}': expected coarse, fine, or start:stop:steps"
                )));
            }
            let start: f64 = parts[0]
                .parse()
                .map_err(|_| usage(format!("bad schedule start '{}'", parts[0])))?;
            let stop: f64 = parts[1]
                .parse()
                .map_err(|_| usage(format!("bad schedule stop '{}'", parts[1])))?;
            let steps: usize = parts[2]
                .parse()
                .map_err(|_| usage(format!("bad schedule steps '{}'", parts[2])))?;
            if start <= 0.0 || stop <= 0.0 || steps == 0 {
                return Err(usage("schedule temperatures must be positive, steps >= 1"));
            }
            Ok(Schedule::linear(start, stop, steps))
        }
    }
}

fn parse_backend(s: &str) -> Result<Backend, CliError> {
    s.parse().map_err(CliError::Usage)
}

fn parse_partition(spec: &str, n: usize) -> Result<Vec<usize>, CliError> {
    let mut seen = vec![false; n];
    let mut x = Vec::new();
    for tok in spec.split(',') {
        let tok = tok.trim();
        if tok.is_empty() {
            continue;
        }
        let v: usize = tok
            .parse()
            .map_err(|_| usage(format!("bad vertex '{tok}' in partition")))?;
        if v >= n {
            return Err(usage(format!("vertex {v} out of range for n={n}")));
        }
        if seen[v] {
            return Err(usage(format!("vertex {v} listed twice in partition")));
        }
        seen[v] = true;
        x.push(v);
    }
    if x.is_empty() {
        return Err(usage("partition is empty"));
    }
    if x.len() == n {
        return Err(usage("partition covers every vertex; the complement is empty"));
    }
    Ok(x)
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    io::load_edge_list(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn resolve_partition(
    g: &Graph,
    partition: &Option<String>,
    size: Option<usize>,
    seed: u64,
) -> Result<Vec<usize>, CliError> {
    match (partition, size) {
        (Some(spec), _) => parse_partition(spec, g.vertex_count()),
        (None, Some(k)) => {
            if k == 0 || k >= g.vertex_count() {
                return Err(usage(format!(
                    "--size {k} out of range for {} vertices",
                    g.vertex_count()
                )));
            }
            Ok(random_partition(g.vertex_count(), k, seed))
        }
        (None, None) => Err(usage("give either --partition or --size")),
    }
}

fn write_or_stdout(out: &Option<PathBuf>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, content)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        }
        None => print!("{content}"),
    }
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(jobs) = cli.jobs {
        // a second invocation in-process has already set the pool; ignore
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }
    match cli.command {
        Command::Rank(a) => cmd_rank(a),
        Command::Anneal(a) => cmd_anneal(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Gen(a) => cmd_gen(a),
        Command::Distribute(a) => cmd_distribute(a),
        Command::Experiment(a) => experiment::cmd_experiment(a),
    }
}

fn cmd_rank(a: RankArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let x = resolve_partition(&g, &a.partition, a.size, a.seed)?;
    println!("{}", naive_cut_rank(&g, &x));
    Ok(())
}

pub const ANNEAL_CSV_HEADER: &[&str] = &[
    "schema_version",
    "graph",
    "n_vertices",
    "size",
    "backend",
    "schedule",
    "seed",
    "initial_rank",
    "best_rank",
    "final_rank",
    "accepted_swaps",
    "evaluated_swaps",
    "wall_ms",
];

fn anneal_csv_row(
    w: &mut CsvWriter,
    graph_name: &str,
    n: usize,
    size: usize,
    backend: &str,
    schedule: &str,
    r: &AnnealResult,
) {
    w.row(&[
        "1".into(),
        graph_name.into(),
        n.to_string(),
        size.to_string(),
        backend.into(),
        schedule.into(),
        r.seed.to_string(),
        r.initial_rank.to_string(),
        r.best_rank.to_string(),
        r.final_rank.to_string(),
        r.accepted_swaps.to_string(),
        r.evaluated_swaps.to_string(),
        fmt_ms(r.wall_time),
    ]);
}

fn cmd_anneal(a: AnnealArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    if a.size == 0 || a.size >= g.vertex_count() {
        return Err(usage(format!(
            "--size {} out of range for {} vertices",
            a.size,
            g.vertex_count()
        )));
    }
    if a.restarts == 0 {
        return Err(usage("--restarts must be at least 1"));
    }
    let sched = parse_schedule(&a.schedule)?;
    let backend = parse_backend(&a.backend)?;
    let opts = AnnealOptions {
        live_iteration: a.live_iteration,
        ..Default::default()
    };

    let results: Vec<AnnealResult> = (0..a.restarts as u64)
        .into_par_iter()
        .map(|k| anneal(&g, a.size, &sched, a.seed + k, backend, &opts))
        .collect();
    let best = results
        .iter()
        .min_by_key(|r| (r.best_rank, r.seed))
        .unwrap();

    println!(
        "best rank {} (seed {}) over {} restart(s); partition {:?}",
        best.best_rank, best.seed, a.restarts, best.best_partition
    );

    if let Some(out) = &a.out {
        let mut w = CsvWriter::new(ANNEAL_CSV_HEADER);
        let name = a.graph.display().to_string();
        for r in &results {
            anneal_csv_row(
                &mut w,
                &name,
                g.vertex_count(),
                a.size,
                &a.backend,
                &a.schedule,
                r,
            );
        }
        std::fs::write(out, w.finish())
            .map_err(|e| CliError::Io(format!("{}: {e}", out.display())))?;
    }
    Ok(())
}

fn parse_range(spec: &str) -> Result<(usize, usize), CliError> {
    let (lo, hi) = spec
        .split_once("..")
        .ok_or_else(|| usage(format!("bad range '{spec}': expected lo..hi")))?;
    let lo: usize = lo
        .parse()
        .map_err(|_| usage(format!("bad range start '{lo}'")))?;
    let hi: usize = hi
        .parse()
        .map_err(|_| usage(format!("bad range end '{hi}'")))?;
    if lo == 0 || hi < lo {
        return Err(usage(format!("bad range '{spec}'")));
    }
    Ok((lo, hi))
}

pub const BENCH_CSV_HEADER: &[&str] = &[
    "schema_version",
    "family",
    "side",
    "n_vertices",
    "size",
    "backend",
    "schedule",
    "seed",
    "reps",
    "median_wall_ms",
];

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    if a.family != "grid" {
        return Err(usage(format!("unsupported bench family '{}'", a.family)));
    }
    if a.reps == 0 || a.step == 0 {
        return Err(usage("--reps and --step must be at least 1"));
    }
    let (lo, hi) = parse_range(&a.n_range)?;
    let backends: Vec<Backend> = match a.backends.as_str() {
        "both" => vec![Backend::Incremental, Backend::Naive],
        one => vec![parse_backend(one)?],
    };
    let sched = parse_schedule(&a.schedule)?;
    let opts = AnnealOptions::default();

    let mut w = CsvWriter::new(BENCH_CSV_HEADER);
    let mut side = lo;
    while side <= hi {
        let g = gen_grid(side, side);
        let size = side * side / 2;
        for &backend in &backends {
            let mut times: Vec<f64> = (0..a.reps as u64)
                .map(|k| {
                    let r = anneal(&g, size, &sched, a.seed + k, backend, &opts);
                    r.wall_time.as_secs_f64() * 1e3
                })
                .collect();
            times.sort_by(|x, y| x.total_cmp(y));
            let median = times[times.len() / 2];
            w.row(&[
                "1".into(),
                "grid".into(),
                side.to_string(),
                (side * side).to_string(),
                size.to_string(),
                format!("{backend:?}").to_lowercase(),
                a.schedule.clone(),
                a.seed.to_string(),
                a.reps.to_string(),
                fmt_sig(median),
            ]);
        }
        side += a.step;
    }
    write_or_stdout(&a.out, &w.finish())
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    let g = match a.family.as_str() {
        "grid" => {
            let rows = a.rows.ok_or_else(|| usage("grid needs --rows"))?;
            let cols = a.cols.ok_or_else(|| usage("grid needs --cols"))?;
            if rows == 0 || cols == 0 {
                return Err(usage("--rows and --cols must be at least 1"));
            }
            gen_grid(rows, cols)
        }
        "er" => {
            let n = a.n.ok_or_else(|| usage("er needs --n"))?;
            let p = match (a.p, a.c) {
                (Some(p), _) => p,
                (None, Some(c)) => c / n as f64,
                (None, None) => return Err(usage("er needs --p or --c")),
            };
            if !(0.0..=1.0).contains(&p) {
                return Err(usage(format!("edge probability {p} outside [0,1]")));
            }
            gen_erdos_renyi(n, p, a.seed)
        }
        "qaoa" => {
            let path = a
                .hamiltonian
                .as_ref()
                .ok_or_else(|| usage("qaoa needs --hamiltonian <file.json>"))?;
            let h = io::load_hamiltonian_json(path)
                .map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
            gen_qaoa_graph(&h).graph
        }
        other => return Err(usage(format!("unknown family '{other}' (grid|er|qaoa)"))),
    };
    let mut buf = Vec::new();
    io::write_edge_list(&g, &mut buf)?;
    write_or_stdout(&a.out, &String::from_utf8(buf).expect("edge list is utf-8"))
}

fn cmd_distribute(a: DistributeArgs) -> Result<(), CliError> {
    let g = load_graph(&a.graph)?;
    let x = match (&a.partition, a.size) {
        (Some(spec), _) => parse_partition(spec, g.vertex_count())?,
        (None, Some(k)) => {
            if k == 0 || k >= g.vertex_count() {
                return Err(usage(format!(
                    "--size {k} out of range for {} vertices",
                    g.vertex_count()
                )));
            }
            let sched = parse_schedule(&a.schedule)?;
            let out = cutrank::anneal::anneal_restarts(
                &g,
                k,
                &sched,
                a.restarts,
                a.seed,
                Backend::Incremental,
                &AnnealOptions::default(),
            );
            out.best.best_partition
        }
        (None, None) => return Err(usage("give either --partition or --size")),
    };

    let plan = plan_distribution(&g, &x);
    let verified = verify_recovery(&plan);

    let el_path = a.out.with_extension("el");
    let json_path = a.out.with_extension("json");
    io::save_edge_list(&plan.embedded, &el_path)
        .map_err(|e| CliError::Io(format!("{}: {e}", el_path.display())))?;
    std::fs::write(&json_path, plan.to_json())
        .map_err(|e| CliError::Io(format!("{}: {e}", json_path.display())))?;

    println!(
        "rank {} | {} ancilla pair(s) | recovery verified: {} | wrote {} and {}",
        plan.rank,
        plan.ancilla_pairs.len(),
        verified,
        el_path.display(),
        json_path.display()
    );
    if !verified {
        return Err(CliError::Io("recovery verification failed".into()));
    }
    Ok(())
}
