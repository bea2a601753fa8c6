//! File formats: edge-list text graphs and Hamiltonian JSON.
//!
//! Edge-list format: first line `n m`, then `m` lines `u v` with `u < v`
//! in ascending lexicographic order. Readers also accept blank lines,
//! `#` comments, and unordered endpoints; writers emit the canonical form.

use crate::graph::Graph;
use crate::qaoa::{Hamiltonian, HamiltonianError};
use serde::{Deserialize, Serialize};
use std::io::{BufRead, Write};
use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Hamiltonian(#[from] HamiltonianError),
}

fn parse_err(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Parse {
        line,
        msg: msg.into(),
    }
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{} {}", g.vertex_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<Graph, FormatError> {
    let mut g: Option<Graph> = None;
    let mut expected_edges = 0usize;
    let mut seen_edges = 0usize;
    for (idx, line) in r.lines().enumerate() {
        let lineno = idx + 1;
        let line = line?;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let a: usize = parts
            .next()
            .unwrap()
            .parse()
            .map_err(|_| parse_err(lineno, "expected an integer"))?;
        let b: usize = parts
            .next()
            .ok_or_else(|| parse_err(lineno, "expected two integers"))?
            .parse()
            .map_err(|_| parse_err(lineno, "expected an integer"))?;
        if parts.next().is_some() {
            return Err(parse_err(lineno, "trailing tokens"));
        }
        match g {
            None => {
                g = Some(Graph::new(a));
                expected_edges = b;
            }
            Some(ref mut graph) => {
                let n = graph.vertex_count();
                if a >= n || b >= n {
                    return Err(parse_err(lineno, format!("edge ({a},{b}) out of range for n={n}")));
                }
                if a == b {
                    return Err(parse_err(lineno, format!("self-loop ({a},{a})")));
                }
                if graph.has_edge(a, b) {
                    return Err(parse_err(lineno, format!("duplicate edge ({a},{b})")));
                }
                graph.add_edge(a, b);
                seen_edges += 1;
            }
        }
    }
    let g = g.ok_or_else(|| parse_err(0, "empty file"))?;
    if seen_edges != expected_edges {
        return Err(parse_err(
            0,
            format!("header promised {expected_edges} edges, found {seen_edges}"),
        ));
    }
    Ok(g)
}

pub fn save_edge_list(g: &Graph, path: &Path) -> Result<(), FormatError> {
    let file = std::fs::File::create(path)?;
    write_edge_list(g, std::io::BufWriter::new(file))?;
    Ok(())
}

pub fn load_edge_list(path: &Path) -> Result<Graph, FormatError> {
    let file = std::fs::File::open(path)?;
    read_edge_list(std::io::BufReader::new(file))
}

#[derive(Serialize, Deserialize)]
struct HamiltonianJson {
    num_qubits: usize,
    terms: Vec<TermJson>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    qubits: Vec<usize>,
    /// Accepted for provenance; the resource-graph topology ignores it.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    coeff: Option<f64>,
}

pub fn read_hamiltonian_json(json: &str) -> Result<Hamiltonian, FormatError> {
    let raw: HamiltonianJson = serde_json::from_str(json)?;
    let terms = raw.terms.into_iter().map(|t| t.qubits).collect();
    Ok(Hamiltonian::new(raw.num_qubits, terms)?)
}

pub fn load_hamiltonian_json(path: &Path) -> Result<Hamiltonian, FormatError> {
    read_hamiltonian_json(&std::fs::read_to_string(path)?)
}

pub fn hamiltonian_to_json(h: &Hamiltonian) -> String {
    let raw = HamiltonianJson {
        num_qubits: h.num_qubits(),
        terms: h
            .terms()
            .iter()
            .map(|t| TermJson {
                qubits: t.clone(),
                coeff: None,
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("serialization cannot fail")
}
