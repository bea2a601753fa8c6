//! Simulated annealing for fixed-size minimal-cut-rank bipartitions.
//!
//! The annealer sweeps candidate swaps (i ∈ X) ↔ (j ∈ Y) under a
//! decreasing temperature schedule and accepts a swap when
//! exp(−Δc/T) > u with u uniform in [0, 1). The strict inequality means
//! Δc ≤ 0 swaps are always accepted. All randomness flows from one seeded
//! ChaCha8 stream — one draw per evaluated swap after the initial-partition
//! shuffle — so runs are reproducible bit for bit and both rank backends
//! see identical draw sequences.

use crate::graph::Graph;
use crate::incremental::{naive_cut_rank, CutRankState};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::BTreeMap;
use std::time::{Duration, Instant};

/// A nonempty list of strictly positive temperatures.
#[derive(Clone, Debug, PartialEq)]
pub struct Schedule {
    temps: Vec<f64>,
}

impl Schedule {
    pub fn new(temps: Vec<f64>) -> Self {
        assert!(!temps.is_empty(), "schedule must be nonempty");
        assert!(temps.iter().all(|&t| t > 0.0), "temperatures must be positive");
        Schedule { temps }
    }

    /// `steps` equidistant temperatures from `start` down to `stop`
    /// inclusive.
    pub fn linear(start: f64, stop: f64, steps: usize) -> Self {
        assert!(steps >= 1);
        if steps == 1 {
            return Schedule::new(vec![start]);
        }
        let temps = (0..steps)
            .map(|k| start + (stop - start) * k as f64 / (steps - 1) as f64)
            .collect();
        Schedule::new(temps)
    }

    /// The default schedule: 1.0, 0.9, …, 0.1.
    pub fn coarse() -> Self {
        Schedule::linear(1.0, 0.1, 10)
    }

    /// 100 equidistant steps over the same 1.0 → 0.1 range.
    pub fn fine() -> Self {
        Schedule::linear(1.0, 0.1, 100)
    }

    pub fn temperatures(&self) -> &[f64] {
        &self.temps
    }
}

/// How Δc is computed: the incrementally maintained oracle or a full
/// Gauss-Jordan rank per candidate. Both yield identical Δc streams.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Backend {
    Incremental,
    Naive,
}

impl std::str::FromStr for Backend {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "incremental" => Ok(Backend::Incremental),
            "naive" => Ok(Backend::Naive),
            other => Err(format!("unknown backend '{other}' (incremental|naive)")),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct AnnealOptions {
    /// Iterate the live partition sets instead of per-temperature (outer)
    /// and per-i (inner) snapshots.
    pub live_iteration: bool,
    /// Record one [`TraceRecord`] per temperature step.
    pub record_trace: bool,
}

/// Per-temperature progress, recorded when tracing is on.
#[derive(Clone, Debug, PartialEq)]
pub struct TraceRecord {
    pub temperature: f64,
    pub rank: usize,
    pub accepted: u64,
    pub evaluated: u64,
}

#[derive(Clone, Debug)]
pub struct AnnealResult {
    pub seed: u64,
    pub backend: Backend,
    pub initial_partition: Vec<usize>,
    pub initial_rank: usize,
    pub best_partition: Vec<usize>,
    pub best_rank: usize,
    pub final_partition: Vec<usize>,
    pub final_rank: usize,
    pub accepted_swaps: u64,
    pub evaluated_swaps: u64,
    pub wall_time: Duration,
    pub trace: Vec<TraceRecord>,
    /// Accepted-swap counts per dispatch table row (incremental backend
    /// only; empty for the naive backend).
    pub case_histogram: BTreeMap<&'static str, u64>,
}

impl AnnealResult {
    /// Equality of everything the seed determines — wall time is
    /// measurement noise and excluded.
    pub fn same_outcome(&self, other: &AnnealResult) -> bool {
        self.seed == other.seed
            && self.initial_partition == other.initial_partition
            && self.initial_rank == other.initial_rank
            && self.best_partition == other.best_partition
            && self.best_rank == other.best_rank
            && self.final_partition == other.final_partition
            && self.final_rank == other.final_rank
            && self.accepted_swaps == other.accepted_swaps
            && self.evaluated_swaps == other.evaluated_swaps
            && self.trace == other.trace
    }

    /// Same trajectory, ignoring backend-specific diagnostics. Used to
    /// compare incremental against naive runs.
    pub fn same_trajectory(&self, other: &AnnealResult) -> bool {
        self.initial_partition == other.initial_partition
            && self.best_partition == other.best_partition
            && self.best_rank == other.best_rank
            && self.final_partition == other.final_partition
            && self.final_rank == other.final_rank
            && self.accepted_swaps == other.accepted_swaps
            && self.evaluated_swaps == other.evaluated_swaps
    }
}

/// The swap oracle behind the annealing loop.
enum RankOracle<'g> {
    Incremental(Box<CutRankState>),
    Naive {
        g: &'g Graph,
        in_x: Vec<bool>,
        rank: usize,
    },
}

impl<'g> RankOracle<'g> {
    fn new(g: &'g Graph, x: &[usize], backend: Backend) -> Self {
        match backend {
            Backend::Incremental => RankOracle::Incremental(Box::new(CutRankState::new(g, x))),
            Backend::Naive => {
                let mut in_x = vec![false; g.vertex_count()];
                for &v in x {
                    in_x[v] = true;
                }
                RankOracle::Naive {
                    g,
                    in_x,
                    rank: naive_cut_rank(g, x),
                }
            }
        }
    }

    fn rank(&self) -> usize {
        match self {
            RankOracle::Incremental(st) => st.rank(),
            RankOracle::Naive { rank, .. } => *rank,
        }
    }

    fn contains_x(&self, v: usize) -> bool {
        match self {
            RankOracle::Incremental(st) => st.contains_x(v),
            RankOracle::Naive { in_x, .. } => in_x[v],
        }
    }

    fn partition_x(&self) -> Vec<usize> {
        match self {
            RankOracle::Incremental(st) => st.partition_x(),
            RankOracle::Naive { in_x, .. } => in_x
                .iter()
                .enumerate()
                .filter_map(|(v, &b)| b.then_some(v))
                .collect(),
        }
    }

    fn delta(&self, i: usize, j: usize) -> i32 {
        match self {
            RankOracle::Incremental(st) => st.evaluate_swap(i, j).delta,
            RankOracle::Naive { g, in_x, rank } => {
                let nx: Vec<usize> = in_x
                    .iter()
                    .enumerate()
                    .filter_map(|(v, &b)| ((b && v != i) || v == j).then_some(v))
                    .collect();
                naive_cut_rank(g, &nx) as i32 - *rank as i32
            }
        }
    }

    /// Apply the swap; returns the dispatch row id when available.
    fn apply(&mut self, i: usize, j: usize) -> Option<&'static str> {
        match self {
            RankOracle::Incremental(st) => {
                let d = st.evaluate_swap(i, j);
                let id = d.case_id;
                st.apply_swap(&d);
                Some(id)
            }
            RankOracle::Naive { g, in_x, rank } => {
                in_x[i] = false;
                in_x[j] = true;
                let x: Vec<usize> = in_x
                    .iter()
                    .enumerate()
                    .filter_map(|(v, &b)| b.then_some(v))
                    .collect();
                *rank = naive_cut_rank(g, &x);
                None
            }
        }
    }
}

/// Uniform size-`k` subset of `0..n`, deterministic from `seed`. The same
/// sampler the annealer uses for its initial partition.
pub fn random_partition(n: usize, k: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    partial_shuffle(n, k, &mut rng)
}

/// Uniform size-`k` subset of `0..n` via seeded partial Fisher-Yates.
fn partial_shuffle(n: usize, k: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut pool: Vec<usize> = (0..n).collect();
    for t in 0..k {
        let pick = rng.gen_range(t..n);
        pool.swap(t, pick);
    }
    let mut x = pool[..k].to_vec();
    x.sort_unstable();
    x
}

/// One annealing run over the schedule, deterministic given
/// (graph, size, schedule, seed, backend, options).
pub fn anneal(
    g: &Graph,
    size: usize,
    sched: &Schedule,
    seed: u64,
    backend: Backend,
    opts: &AnnealOptions,
) -> AnnealResult {
    let n = g.vertex_count();
    assert!(
        size >= 1 && size < n,
        "partition size {size} out of range for {n} vertices"
    );
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let initial_partition = partial_shuffle(n, size, &mut rng);

    let mut oracle = RankOracle::new(g, &initial_partition, backend);
    let initial_rank = oracle.rank();
    let mut best_rank = initial_rank;
    let mut best_partition = initial_partition.clone();
    let mut accepted = 0u64;
    let mut evaluated = 0u64;
    let mut trace = Vec::new();
    let mut histogram: BTreeMap<&'static str, u64> = BTreeMap::new();

    for &t in sched.temperatures() {
        let outer: Vec<usize> = if opts.live_iteration {
            (0..n).collect()
        } else {
            oracle.partition_x()
        };
        for i in outer {
            if !oracle.contains_x(i) {
                continue;
            }
            let inner: Vec<usize> = (0..n).filter(|&v| !oracle.contains_x(v)).collect();
            for j in inner {
                if oracle.contains_x(j) {
                    continue; // possible only under live iteration
                }
                let delta = oracle.delta(i, j);
                evaluated += 1;
                let u: f64 = rng.gen();
                if (-delta as f64 / t).exp() > u {
                    if let Some(id) = oracle.apply(i, j) {
                        *histogram.entry(id).or_insert(0) += 1;
                    }
                    accepted += 1;
                    if oracle.rank() < best_rank {
                        best_rank = oracle.rank();
                        best_partition = oracle.partition_x();
                    }
                    // i has left X; remaining j are no longer candidates
                    break;
                }
            }
        }
        if opts.record_trace {
            trace.push(TraceRecord {
                temperature: t,
                rank: oracle.rank(),
                accepted,
                evaluated,
            });
        }
    }

    AnnealResult {
        seed,
        backend,
        initial_partition,
        initial_rank,
        best_partition,
        best_rank,
        final_partition: oracle.partition_x(),
        final_rank: oracle.rank(),
        accepted_swaps: accepted,
        evaluated_swaps: evaluated,
        wall_time: start.elapsed(),
        trace,
        case_histogram: histogram,
    }
}

/// Aggregate statistics over a batch of seeded restarts.
#[derive(Clone, Debug)]
pub struct RestartStats {
    pub restarts: usize,
    pub mean_initial_rank: f64,
    pub mean_final_rank: f64,
    pub mean_best_rank: f64,
    pub min_best_rank: usize,
    pub max_best_rank: usize,
    /// Mean of (initial rank − best rank) across restarts.
    pub mean_improvement: f64,
}

#[derive(Clone, Debug)]
pub struct RestartOutcome {
    /// The winning run: lowest best rank, ties broken by lowest seed.
    pub best: AnnealResult,
    pub stats: RestartStats,
}

/// Independent restarts with seeds `base_seed..base_seed + restarts`, run
/// in parallel. Aggregation is order-independent.
pub fn anneal_restarts(
    g: &Graph,
    size: usize,
    sched: &Schedule,
    restarts: usize,
    base_seed: u64,
    backend: Backend,
    opts: &AnnealOptions,
) -> RestartOutcome {
    assert!(restarts >= 1);
    use rayon::prelude::*;
    let results: Vec<AnnealResult> = (0..restarts as u64)
        .into_par_iter()
        .map(|k| anneal(g, size, sched, base_seed + k, backend, opts))
        .collect();

    let m = restarts as f64;
    let stats = RestartStats {
        restarts,
        mean_initial_rank: results.iter().map(|r| r.initial_rank as f64).sum::<f64>() / m,
        mean_final_rank: results.iter().map(|r| r.final_rank as f64).sum::<f64>() / m,
        mean_best_rank: results.iter().map(|r| r.best_rank as f64).sum::<f64>() / m,
        min_best_rank: results.iter().map(|r| r.best_rank).min().unwrap(),
        max_best_rank: results.iter().map(|r| r.best_rank).max().unwrap(),
        mean_improvement: results
            .iter()
            .map(|r| r.initial_rank as f64 - r.best_rank as f64)
            .sum::<f64>()
            / m,
    };
    let best = results
        .into_iter()
        .min_by_key(|r| (r.best_rank, r.seed))
        .unwrap();
    RestartOutcome { best, stats }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{example_graph, gen_erdos_renyi, gen_grid};

    #[test]
    fn schedules_have_documented_shape() {
        let c = Schedule::coarse();
        assert_eq!(c.temperatures().len(), 10);
        assert!((c.temperatures()[0] - 1.0).abs() < 1e-12);
        assert!((c.temperatures()[1] - 0.9).abs() < 1e-12);
        assert!((c.temperatures()[9] - 0.1).abs() < 1e-12);
        let f = Schedule::fine();
        assert_eq!(f.temperatures().len(), 100);
        assert!((f.temperatures()[0] - 1.0).abs() < 1e-12);
        assert!((f.temperatures()[99] - 0.1).abs() < 1e-12);
    }

    #[test]
    fn edgeless_graph_anneals_to_zero() {
        let g = Graph::new(8);
        let r = anneal(
            &g,
            3,
            &Schedule::coarse(),
            1,
            Backend::Incremental,
            &AnnealOptions::default(),
        );
        assert_eq!(r.best_rank, 0);
        assert_eq!(r.final_rank, 0);
    }

    #[test]
    fn deterministic_given_seed() {
        let g = gen_erdos_renyi(14, 0.4, 3);
        let opts = AnnealOptions {
            record_trace: true,
            ..Default::default()
        };
        let a = anneal(&g, 6, &Schedule::coarse(), 42, Backend::Incremental, &opts);
        let b = anneal(&g, 6, &Schedule::coarse(), 42, Backend::Incremental, &opts);
        assert!(a.same_outcome(&b));
        let c = anneal(&g, 6, &Schedule::coarse(), 43, Backend::Incremental, &opts);
        assert!(!a.same_outcome(&c));
    }

    #[test]
    fn partition_size_is_fixed() {
        let g = gen_grid(4, 4);
        let r = anneal(
            &g,
            5,
            &Schedule::coarse(),
            9,
            Backend::Incremental,
            &AnnealOptions::default(),
        );
        assert_eq!(r.initial_partition.len(), 5);
        assert_eq!(r.best_partition.len(), 5);
        assert_eq!(r.final_partition.len(), 5);
        assert_eq!(r.best_rank, naive_cut_rank(&g, &r.best_partition));
        assert_eq!(r.final_rank, naive_cut_rank(&g, &r.final_partition));
        assert!(r.best_rank <= r.initial_rank);
        assert!(r.best_rank <= r.final_rank);
    }

    #[test]
    fn backends_follow_identical_trajectories() {
        for seed in 0..5 {
            let g = gen_erdos_renyi(12, 0.4, 100 + seed);
            let opts = AnnealOptions::default();
            let inc = anneal(&g, 5, &Schedule::coarse(), seed, Backend::Incremental, &opts);
            let nai = anneal(&g, 5, &Schedule::coarse(), seed, Backend::Naive, &opts);
            assert!(inc.same_trajectory(&nai), "seed {seed}");
        }
    }

    #[test]
    fn live_iteration_also_matches_oracle() {
        let g = gen_erdos_renyi(12, 0.5, 8);
        let opts = AnnealOptions {
            live_iteration: true,
            ..Default::default()
        };
        let r = anneal(&g, 6, &Schedule::coarse(), 5, Backend::Incremental, &opts);
        assert_eq!(r.final_rank, naive_cut_rank(&g, &r.final_partition));
    }

    #[test]
    fn grid_3x3_reaches_known_optimum() {
        let g = gen_grid(3, 3);
        let out = anneal_restarts(
            &g,
            4,
            &Schedule::coarse(),
            10,
            0,
            Backend::Incremental,
            &AnnealOptions::default(),
        );
        assert_eq!(out.best.best_rank, 3);
    }

    #[test]
    fn zero_delta_swaps_are_always_accepted_at_low_temperature() {
        // On the worked example with |X| = 1, every swap keeps rank 1
        // (Δc = 0) or hits rank 0; exp(0)/T = 1 > u for all u in [0,1),
        // so every evaluation with Δc ≤ 0 must be accepted.
        let g = example_graph();
        let sched = Schedule::new(vec![0.01; 20]);
        let r = anneal(
            &g,
            1,
            &sched,
            11,
            Backend::Incremental,
            &AnnealOptions::default(),
        );
        // each (i, j) evaluation either accepts (Δc ≤ 0, probability 1) or
        // had Δc > 0; on this graph with |X| = 1 every swap has Δc ∈ {−1,0}
        assert_eq!(r.accepted_swaps, r.evaluated_swaps);
    }

    #[test]
    fn uphill_moves_are_rejected_at_low_temperature() {
        // At T = 0.01, exp(−1/T) ≈ e⁻¹⁰⁰: an uphill move is accepted with
        // negligible probability. Starting 4×4 grids at many seeds, no run
        // should ever end above its initial rank.
        let g = gen_grid(4, 4);
        let sched = Schedule::new(vec![0.01; 3]);
        for seed in 0..50 {
            let r = anneal(&g, 8, &sched, seed, Backend::Incremental, &AnnealOptions::default());
            assert!(r.final_rank <= r.initial_rank, "seed {seed}");
        }
    }

    #[test]
    fn restarts_pick_lowest_seed_on_ties() {
        let g = Graph::new(6); // every run ends at rank 0
        let out = anneal_restarts(
            &g,
            2,
            &Schedule::coarse(),
            8,
            100,
            Backend::Incremental,
            &AnnealOptions::default(),
        );
        assert_eq!(out.best.seed, 100);
        assert_eq!(out.stats.restarts, 8);
        assert_eq!(out.stats.min_best_rank, 0);
        assert_eq!(out.stats.max_best_rank, 0);
    }

    #[test]
    fn restart_stats_are_consistent() {
        let g = gen_erdos_renyi(14, 0.3, 21);
        let out = anneal_restarts(
            &g,
            7,
            &Schedule::coarse(),
            6,
            0,
            Backend::Incremental,
            &AnnealOptions::default(),
        );
        let s = &out.stats;
        assert!(s.min_best_rank as f64 <= s.mean_best_rank);
        assert!(s.mean_best_rank <= s.max_best_rank as f64);
        assert!(s.mean_best_rank <= s.mean_final_rank + 1e-12);
        assert_eq!(out.best.best_rank, s.min_best_rank);
        assert!(s.mean_improvement >= 0.0);
    }
}
