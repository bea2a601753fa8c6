//! Ancilla-embedded graphs certifying the EPR-pair budget of a cut.
//!
//! Given a bipartition (X, Y) of cut rank r, the cut matrix decomposes as
//! a sum of r rank-one GF(2) matrices u_t·v_tᵀ. The embedded graph keeps
//! the intra-part edges, drops every cross edge, and adds one ancilla pair
//! per rank-one term: qᵃ adjacent to the X-support of u_t, qᵇ to the
//! Y-support of v_t, plus the (qᵃ, qᵇ) pair edge. Those r pair edges are
//! the only edges crossing the two-QPU assignment, so distributing the
//! embedded state costs exactly r EPR pairs. Local complementations
//! qᵃ, qᵇ, qᵃ per pair followed by deleting all ancillas recover the
//! original graph exactly — [`verify_recovery`] checks that identity.

use crate::gf2::BitVec;
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct DistributionPlan {
    pub original: Graph,
    pub partition_x: Vec<usize>,
    pub partition_y: Vec<usize>,
    pub rank: usize,
    /// Original vertices 0..n, then ancillas: pair t is (n+2t, n+2t+1).
    pub embedded: Graph,
    pub ancilla_pairs: Vec<(usize, usize)>,
    /// Local-complementation order qᵃ, qᵇ, qᵃ per pair, concatenated.
    pub recovery_sequence: Vec<usize>,
}

impl DistributionPlan {
    /// QPU A hosts X plus every qᵃ ancilla.
    pub fn qpu_a(&self) -> Vec<usize> {
        let mut a = self.partition_x.clone();
        a.extend(self.ancilla_pairs.iter().map(|&(qa, _)| qa));
        a
    }

    /// QPU B hosts Y plus every qᵇ ancilla.
    pub fn qpu_b(&self) -> Vec<usize> {
        let mut b = self.partition_y.clone();
        b.extend(self.ancilla_pairs.iter().map(|&(_, qb)| qb));
        b
    }

    /// Embedded-graph edges crossing the QPU assignment.
    pub fn cross_edges(&self) -> Vec<(usize, usize)> {
        let on_a = BitVec::from_indices(self.embedded.vertex_count(), self.qpu_a());
        self.embedded
            .edges()
            .into_iter()
            .filter(|&(u, v)| on_a.get(u) != on_a.get(v))
            .collect()
    }

    /// JSON sidecar describing the plan (the embedded graph itself goes in
    /// the edge-list file).
    pub fn to_json(&self) -> String {
        let pairs: Vec<[usize; 2]> = self.ancilla_pairs.iter().map(|&(a, b)| [a, b]).collect();
        let value = serde_json::json!({
            "rank": self.rank,
            "pairs": pairs,
            "qpu_assignment": {
                "A": self.qpu_a(),
                "B": self.qpu_b(),
            },
            "recovery_sequence": self.recovery_sequence,
        });
        serde_json::to_string_pretty(&value).expect("serialization cannot fail")
    }
}

/// Build the embedded graph and recovery sequence for partition side `x`.
/// Deterministic: the decomposition follows the elimination pivot order.
pub fn plan_distribution(g: &Graph, x: &[usize]) -> DistributionPlan {
    let n = g.vertex_count();
    let in_x = BitVec::from_indices(n, x.iter().copied());
    let y: Vec<usize> = (0..n).filter(|&v| !in_x.get(v)).collect();
    let x = x.to_vec();

    let cut = g.cut_matrix(&x, &y);
    let terms = cut.rank_one_decompose();
    let rank = terms.len();

    let mut embedded = Graph::new(n + 2 * rank);
    for (u, v) in g.edges() {
        if in_x.get(u) == in_x.get(v) {
            embedded.add_edge(u, v);
        }
    }
    let mut ancilla_pairs = Vec::with_capacity(rank);
    let mut recovery_sequence = Vec::with_capacity(3 * rank);
    for (t, (u_t, v_t)) in terms.iter().enumerate() {
        let qa = n + 2 * t;
        let qb = n + 2 * t + 1;
        for i in u_t.ones() {
            embedded.add_edge(qa, x[i]);
        }
        for j in v_t.ones() {
            embedded.add_edge(qb, y[j]);
        }
        embedded.add_edge(qa, qb);
        ancilla_pairs.push((qa, qb));
        recovery_sequence.extend([qa, qb, qa]);
    }

    DistributionPlan {
        original: g.clone(),
        partition_x: x,
        partition_y: y,
        rank,
        embedded,
        ancilla_pairs,
        recovery_sequence,
    }
}

/// True iff applying the recovery sequence to the embedded graph and then
/// deleting all ancillas reproduces the original graph edge for edge.
pub fn verify_recovery(plan: &DistributionPlan) -> bool {
    let mut h = plan.embedded.clone();
    for &v in &plan.recovery_sequence {
        h = h.local_complement(v);
    }
    let n = plan.original.vertex_count();
    let ancillas = BitVec::from_indices(h.vertex_count(), n..h.vertex_count());
    let (recovered, map) = h.delete_vertices(&ancillas);
    // ancillas are appended, so original ids map to themselves
    debug_assert!((0..n).all(|v| map[v] == Some(v)));
    recovered == plan.original
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{example_graph, gen_erdos_renyi};
    use crate::incremental::naive_cut_rank;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn no_cross_edges_gives_empty_plan() {
        let g = Graph::from_edges(4, &[(0, 1), (2, 3)]);
        let plan = plan_distribution(&g, &[0, 1]);
        assert_eq!(plan.rank, 0);
        assert!(plan.ancilla_pairs.is_empty());
        assert!(plan.recovery_sequence.is_empty());
        assert_eq!(plan.embedded, g);
        assert!(verify_recovery(&plan));
    }

    #[test]
    fn worked_example_embedding_golden() {
        let g = example_graph();
        let plan = plan_distribution(&g, &[0, 1, 2]);
        assert_eq!(plan.rank, 2);
        assert_eq!(plan.ancilla_pairs, vec![(6, 7), (8, 9)]);
        assert_eq!(plan.recovery_sequence, vec![6, 7, 6, 8, 9, 8]);
        assert_eq!(
            plan.embedded.edges(),
            vec![
                (0, 6),
                (1, 6),
                (1, 8),
                (2, 8),
                (3, 7),
                (4, 7),
                (5, 9),
                (6, 7),
                (8, 9)
            ]
        );
        assert!(verify_recovery(&plan));
        // exactly the pair edges cross the QPU assignment
        assert_eq!(plan.cross_edges(), vec![(6, 7), (8, 9)]);
    }

    #[test]
    fn cross_edge_count_equals_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..60 {
            let n = rng.gen_range(2..=16);
            let p = rng.gen_range(0.1..0.9);
            let g = gen_erdos_renyi(n, p, 3000 + trial);
            let k = rng.gen_range(1..n);
            let x: Vec<usize> = (0..k).collect();
            let plan = plan_distribution(&g, &x);
            assert_eq!(plan.rank, naive_cut_rank(&g, &x));
            assert_eq!(plan.cross_edges().len(), plan.rank);
            assert!(verify_recovery(&plan), "n={n} trial={trial}");
            // the embedded cut rank across QPUs is also r: the pair edges
            // form an identity block
            assert_eq!(naive_cut_rank(&plan.embedded, &plan.qpu_a()), plan.rank);
        }
    }

    #[test]
    fn plan_json_has_expected_fields() {
        let plan = plan_distribution(&example_graph(), &[0, 1, 2]);
        let parsed: serde_json::Value = serde_json::from_str(&plan.to_json()).unwrap();
        assert_eq!(parsed["rank"], 2);
        assert_eq!(parsed["pairs"][0][0], 6);
        assert_eq!(parsed["qpu_assignment"]["A"][0], 0);
        assert_eq!(parsed["recovery_sequence"][2], 6);
    }
}
