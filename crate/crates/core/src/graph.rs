//! Simple undirected graphs with dense GF(2) adjacency.
//!
//! The adjacency matrix is the single source of truth: cut matrices are
//! submatrix extractions and local complementation is row-masked XOR.

use crate::gf2::{BitMatrix, BitVec};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Simple undirected graph on vertices `0..n`. No self-loops, adjacency
/// symmetric. Immutable after construction; operations return new graphs.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    adj: BitMatrix,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            n,
            adj: BitMatrix::zeros(n, n),
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v);
        }
        g
    }

    /// Insert an edge; no-op if already present. Panics on self-loops or
    /// out-of-range endpoints.
    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u < self.n && v < self.n, "edge ({u},{v}) out of range");
        assert_ne!(u, v, "self-loop ({u},{u})");
        self.adj.set(u, v, true);
        self.adj.set(v, u, true);
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        (0..self.n)
            .map(|r| self.adj.row(r).iter().map(|w| w.count_ones() as usize).sum::<usize>())
            .sum::<usize>()
            / 2
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj.get(u, v)
    }

    pub fn adjacency(&self) -> &BitMatrix {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        crate::gf2::ones(self.adj.row(v))
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj.row(v).iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Edges as `(u, v)` with `u < v`, ascending lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in self.neighbors(u) {
                if v > u {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Local complementation at `v`: toggle every edge among N(v).
    pub fn local_complement(&self, v: usize) -> Graph {
        assert!(v < self.n, "vertex {v} out of range");
        let mut adj = self.adj.clone();
        let mask = self.adj.row(v).to_vec();
        for u in crate::gf2::ones(&mask) {
            adj.xor_row_words(u, &mask);
            // the XOR toggled (u,u); the diagonal stays zero
            adj.set(u, u, false);
        }
        Graph { n: self.n, adj }
    }

    /// Induced subgraph on the complement of `vs`, with remapped dense ids.
    /// Returns the new graph and a map from old id to new id (`None` for
    /// deleted vertices).
    pub fn delete_vertices(&self, vs: &BitVec) -> (Graph, Vec<Option<usize>>) {
        assert_eq!(vs.len(), self.n);
        let mut map = vec![None; self.n];
        let mut keep = Vec::new();
        for (v, slot) in map.iter_mut().enumerate() {
            if !vs.get(v) {
                *slot = Some(keep.len());
                keep.push(v);
            }
        }
        let adj = self.adj.submatrix(&keep, &keep);
        (Graph { n: keep.len(), adj }, map)
    }

    /// Adjacency submatrix with rows `x` and columns `y` in the given
    /// orders. The index lists must be disjoint.
    pub fn cut_matrix(&self, x: &[usize], y: &[usize]) -> BitMatrix {
        let mut seen = BitVec::zeros(self.n);
        for &v in x.iter().chain(y) {
            assert!(v < self.n, "vertex {v} out of range");
            assert!(!seen.get(v), "vertex {v} appears on both sides of the cut");
            seen.set(v, true);
        }
        self.adj.submatrix(x, y)
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

/// Four-neighbor grid; vertex id = `r * cols + c`.
pub fn gen_grid(rows: usize, cols: usize) -> Graph {
    assert!(rows >= 1 && cols >= 1);
    let mut g = Graph::new(rows * cols);
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                g.add_edge(v, v + 1);
            }
            if r + 1 < rows {
                g.add_edge(v, v + cols);
            }
        }
    }
    g
}

/// G(n, p): each unordered pair is an edge independently with probability
/// `p`. Pairs are visited in lexicographic order with one draw each, so a
/// fixed seed gives a fixed edge set.
pub fn gen_erdos_renyi(n: usize, p: f64, seed: u64) -> Graph {
    assert!((0.0..=1.0).contains(&p), "p = {p} outside [0,1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen::<f64>() < p {
                g.add_edge(u, v);
            }
        }
    }
    g
}

/// The six-vertex worked example used by golden tests: vertices 0..=5,
/// edges (0,3),(0,4),(1,3),(1,4),(1,5),(2,5).
pub fn example_graph() -> Graph {
    Graph::from_edges(6, &[(0, 3), (0, 4), (1, 3), (1, 4), (1, 5), (2, 5)])
}
