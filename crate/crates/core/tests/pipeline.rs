//! End-to-end: generate → anneal → distribute → verify, across modules.

use cutrank::anneal::{anneal_restarts, AnnealOptions, Backend, Schedule};
use cutrank::distribute::{plan_distribution, verify_recovery};
use cutrank::graph::{gen_erdos_renyi, gen_grid};
use cutrank::incremental::naive_cut_rank;
use cutrank::io::{read_edge_list, write_edge_list};
use cutrank::qaoa::{gen_qaoa_graph, Hamiltonian};

#[test]
fn grid_anneal_then_distribute() {
    let g = gen_grid(4, 4);
    let out = anneal_restarts(
        &g,
        8,
        &Schedule::coarse(),
        10,
        0,
        Backend::Incremental,
        &AnnealOptions::default(),
    );
    assert_eq!(out.best.best_rank, 4, "4x4 grid optimum is 4");

    let plan = plan_distribution(&g, &out.best.best_partition);
    assert_eq!(plan.rank, 4);
    assert_eq!(plan.cross_edges().len(), 4);
    assert!(verify_recovery(&plan));
}

#[test]
fn qaoa_example_anneal_then_distribute() {
    let q = gen_qaoa_graph(&Hamiltonian::example_3local());
    let out = anneal_restarts(
        &q.graph,
        6,
        &Schedule::coarse(),
        20,
        0,
        Backend::Incremental,
        &AnnealOptions::default(),
    );
    assert_eq!(out.best.best_rank, 3);
    let plan = plan_distribution(&q.graph, &out.best.best_partition);
    assert_eq!(plan.ancilla_pairs.len(), 3);
    assert!(verify_recovery(&plan));
}

#[test]
fn edge_list_round_trip_preserves_annealing() {
    let g = gen_erdos_renyi(18, 0.3, 77);
    let mut buf = Vec::new();
    write_edge_list(&g, &mut buf).unwrap();
    let back = read_edge_list(buf.as_slice()).unwrap();
    assert_eq!(back, g);
    let x: Vec<usize> = (0..9).collect();
    assert_eq!(naive_cut_rank(&g, &x), naive_cut_rank(&back, &x));
}
