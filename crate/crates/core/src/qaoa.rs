//! Resource-graph construction for measurement-based QAOA.
//!
//! A Hamiltonian made of Pauli-Z product terms maps to a graph: one vertex
//! per circuit qubit plus one ancilla vertex per term, connected to the
//! term's support. Coefficients do not affect the topology and are dropped.

use crate::graph::Graph;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum HamiltonianError {
    #[error("term {term} is empty")]
    EmptyTerm { term: usize },
    #[error("term {term} references qubit {qubit}, but there are only {num_qubits} qubits")]
    QubitOutOfRange {
        term: usize,
        qubit: usize,
        num_qubits: usize,
    },
    #[error("term {term} lists qubit {qubit} more than once")]
    DuplicateQubit { term: usize, qubit: usize },
}

/// Supports of the Pauli-Z product terms of a diagonal Hamiltonian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hamiltonian {
    num_qubits: usize,
    terms: Vec<Vec<usize>>,
}

impl Hamiltonian {
    pub fn new(num_qubits: usize, terms: Vec<Vec<usize>>) -> Result<Self, HamiltonianError> {
        for (t, term) in terms.iter().enumerate() {
            if term.is_empty() {
                return Err(HamiltonianError::EmptyTerm { term: t });
            }
            let mut seen = HashSet::new();
            for &q in term {
                if q >= num_qubits {
                    return Err(HamiltonianError::QubitOutOfRange {
                        term: t,
                        qubit: q,
                        num_qubits,
                    });
                }
                if !seen.insert(q) {
                    return Err(HamiltonianError::DuplicateQubit { term: t, qubit: q });
                }
            }
        }
        Ok(Hamiltonian { num_qubits, terms })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn terms(&self) -> &[Vec<usize>] {
        &self.terms
    }

    /// The six-qubit, six-term 3-local instance used by golden tests.
    pub fn example_3local() -> Self {
        Hamiltonian::new(
            6,
            vec![
                vec![0, 1, 2],
                vec![0, 3, 5],
                vec![1, 2, 4],
                vec![3, 4, 5],
                vec![2, 3, 4],
                vec![2, 3, 5],
            ],
        )
        .unwrap()
    }
}

/// Resource graph for a Hamiltonian plus the vertex roles.
pub struct QaoaGraph {
    pub graph: Graph,
    /// Circuit qubits, ids `0..num_qubits`; pairwise non-adjacent.
    pub circuit_qubits: Vec<usize>,
    /// One ancilla per term, ids `num_qubits..`, adjacent to its support.
    pub ancillas: Vec<usize>,
}

/// Build the resource graph: ancilla vertex `num_qubits + t` is adjacent to
/// exactly the support of term `t`.
pub fn gen_qaoa_graph(h: &Hamiltonian) -> QaoaGraph {
    let nq = h.num_qubits();
    let mut g = Graph::new(nq + h.terms().len());
    for (t, term) in h.terms().iter().enumerate() {
        let ancilla = nq + t;
        for &q in term {
            g.add_edge(ancilla, q);
        }
    }
    QaoaGraph {
        graph: g,
        circuit_qubits: (0..nq).collect(),
        ancillas: (nq..nq + h.terms().len()).collect(),
    }
}

/// Random Hamiltonian with `num_terms` distinct `locality`-subsets of the
/// qubits, uniform without repeated supports, deterministic from `seed`.
pub fn gen_random_hamiltonian(
    num_qubits: usize,
    num_terms: usize,
    locality: usize,
    seed: u64,
) -> Hamiltonian {
    assert!(locality >= 1 && locality <= num_qubits);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let mut terms = Vec::with_capacity(num_terms);
    let mut pool: Vec<usize> = (0..num_qubits).collect();
    while terms.len() < num_terms {
        for k in 0..locality {
            let pick = rng.gen_range(k..num_qubits);
            pool.swap(k, pick);
        }
        let mut term: Vec<usize> = pool[..locality].to_vec();
        term.sort_unstable();
        if seen.insert(term.clone()) {
            terms.push(term);
        }
    }
    Hamiltonian::new(num_qubits, terms).expect("sampled terms are valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_term_list_gives_edgeless_graph() {
        let h = Hamiltonian::new(4, vec![]).unwrap();
        let q = gen_qaoa_graph(&h);
        assert_eq!(q.graph.vertex_count(), 4);
        assert_eq!(q.graph.edge_count(), 0);
        assert!(q.ancillas.is_empty());
    }

    #[test]
    fn single_term_gives_star() {
        let h = Hamiltonian::new(2, vec![vec![0, 1]]).unwrap();
        let q = gen_qaoa_graph(&h);
        assert_eq!(q.graph.edges(), vec![(0, 2), (1, 2)]);
        assert_eq!(q.ancillas, vec![2]);
    }

    #[test]
    fn example_instance_topology() {
        let q = gen_qaoa_graph(&Hamiltonian::example_3local());
        let g = &q.graph;
        assert_eq!(g.vertex_count(), 12);
        // circuit qubits pairwise non-adjacent
        for u in 0..6 {
            for v in u + 1..6 {
                assert!(!g.has_edge(u, v));
            }
        }
        let expect: [&[usize]; 6] = [
            &[0, 1, 2],
            &[0, 3, 5],
            &[1, 2, 4],
            &[3, 4, 5],
            &[2, 3, 4],
            &[2, 3, 5],
        ];
        for (t, support) in expect.iter().enumerate() {
            let nbrs: Vec<usize> = g.neighbors(6 + t).collect();
            assert_eq!(&nbrs, support, "ancilla {}", 6 + t);
        }
        // edge count is the sum of term support sizes
        assert_eq!(g.edge_count(), 18);
    }

    #[test]
    fn validation_errors() {
        assert_eq!(
            Hamiltonian::new(3, vec![vec![]]),
            Err(HamiltonianError::EmptyTerm { term: 0 })
        );
        assert_eq!(
            Hamiltonian::new(3, vec![vec![0, 3]]),
            Err(HamiltonianError::QubitOutOfRange {
                term: 0,
                qubit: 3,
                num_qubits: 3
            })
        );
        assert_eq!(
            Hamiltonian::new(3, vec![vec![1, 1]]),
            Err(HamiltonianError::DuplicateQubit { term: 0, qubit: 1 })
        );
    }

    #[test]
    fn random_hamiltonian_is_deterministic_and_distinct() {
        let a = gen_random_hamiltonian(12, 30, 3, 7);
        let b = gen_random_hamiltonian(12, 30, 3, 7);
        assert_eq!(a, b);
        let mut seen = HashSet::new();
        for term in a.terms() {
            assert_eq!(term.len(), 3);
            assert!(seen.insert(term.clone()), "repeated support {term:?}");
        }
    }
}
