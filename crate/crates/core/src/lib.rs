//! Minimal-cut-rank graph bipartitioning over GF(2).
//!
//! The library finds fixed-size bipartitions (X, Y) of a graph minimizing
//! the rank of the adjacency submatrix A[X, Y] over GF(2), using simulated
//! annealing driven by an incrementally maintained cut-rank oracle, and
//! turns an optimized partition into an ancilla-embedded graph whose EPR
//! pair budget equals the cut rank.

pub mod anneal;
pub mod distribute;
pub mod gf2;
pub mod graph;
pub mod incremental;
pub mod io;
pub mod qaoa;

pub use anneal::{anneal, anneal_restarts, AnnealOptions, AnnealResult, Backend, Schedule};
pub use distribute::{plan_distribution, verify_recovery, DistributionPlan};
pub use graph::Graph;
pub use incremental::{naive_cut_rank, CutRankState, SwapDelta, WitnessRule};
pub use qaoa::{gen_qaoa_graph, gen_random_hamiltonian, Hamiltonian};
