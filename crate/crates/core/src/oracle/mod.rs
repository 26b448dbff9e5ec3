//! Plain in-memory reference implementations.
//!
//! Everything here works from the text edge list directly and shares no
//! code with the binary format or the vertex programs, so a bug in either
//! cannot hide behind a matching bug in its reference.

mod refs;

use std::io::BufRead;

pub use refs::{
    oracle_bfs, oracle_brandes, oracle_offset_table, oracle_offsets, oracle_pagerank_dense,
    oracle_scan_exhaustive, oracle_triangles, oracle_triangles_bruteforce, oracle_wcc_unionfind,
    OffsetTable, ScanOracle, TriangleOracle,
};

/// Largest graph the oracles accept.
pub const MAX_ORACLE_VERTICES: u64 = 1 << 22;

#[derive(Debug, thiserror::Error)]
pub enum OracleError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("{vertices} vertices is more than the oracle limit of {limit}")]
    TooLarge { vertices: u64, limit: u64 },
}

/// Adjacency lists built straight from an edge list, with self-loops
/// dropped and parallel edges merged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DenseGraph {
    directed: bool,
    out: Vec<Vec<u32>>,
    inn: Vec<Vec<u32>>,
}

impl DenseGraph {
    pub fn parse(text: &str, directed: bool) -> Result<Self, OracleError> {
        Self::from_reader(text.as_bytes(), directed)
    }

    pub fn from_reader<R: BufRead>(input: R, directed: bool) -> Result<Self, OracleError> {
        let mut edges = Vec::new();
        let mut n = 0u64;
        for (i, line) in input.lines().enumerate() {
            let line = line?;
            let lineno = i as u64 + 1;
            let body = line.trim();
            if body.is_empty() || body.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() < 2 || fields.len() > 3 {
                return Err(OracleError::Parse {
                    line: lineno,
                    reason: format!("expected 2 or 3 fields, got {}", fields.len()),
                });
            }
            let mut ids = [0u32; 2];
            for (slot, f) in ids.iter_mut().zip(&fields) {
                let id: u64 = f.parse().map_err(|_| OracleError::Parse {
                    line: lineno,
                    reason: format!("bad vertex id {f:?}"),
                })?;
                *slot = u32::try_from(id).map_err(|_| OracleError::Parse {
                    line: lineno,
                    reason: format!("vertex id {id} too large"),
                })?;
                n = n.max(id + 1);
            }
            if n > MAX_ORACLE_VERTICES {
                return Err(OracleError::TooLarge {
                    vertices: n,
                    limit: MAX_ORACLE_VERTICES,
                });
            }
            edges.push((ids[0], ids[1]));
        }
        Ok(Self::from_edges(n as usize, &edges, directed))
    }

    /// `n` is raised to cover every endpoint.
    pub fn from_edges(n: usize, edges: &[(u32, u32)], directed: bool) -> Self {
        let n = edges
            .iter()
            .map(|&(a, b)| a.max(b) as usize + 1)
            .max()
            .unwrap_or(0)
            .max(n);
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(a, b) in edges {
            if a == b {
                continue;
            }
            out[a as usize].push(b);
            inn[b as usize].push(a);
            if !directed {
                out[b as usize].push(a);
                inn[a as usize].push(b);
            }
        }
        for list in out.iter_mut().chain(inn.iter_mut()) {
            list.sort_unstable();
            list.dedup();
        }
        DenseGraph { directed, out, inn }
    }

    pub fn num_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Directed edges, or undirected pairs for an undirected graph.
    pub fn num_edges(&self) -> u64 {
        let arcs: u64 = self.out.iter().map(|l| l.len() as u64).sum();
        if self.directed {
            arcs
        } else {
            arcs / 2
        }
    }

    pub fn out(&self, v: u32) -> &[u32] {
        &self.out[v as usize]
    }

    pub fn inn(&self, v: u32) -> &[u32] {
        &self.inn[v as usize]
    }

    /// Neighbors ignoring direction.
    pub fn undirected(&self, v: u32) -> Vec<u32> {
        let mut all: Vec<u32> = self.out(v).iter().chain(self.inn(v)).copied().collect();
        all.sort_unstable();
        all.dedup();
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_applies_conversion_rules() {
        let g = DenseGraph::parse("# c\n0 1\n0 1\n1 1\n\n3 1 9\n", true).unwrap();
        assert_eq!(g.num_vertices(), 4);
        assert_eq!(g.out(0), &[1]);
        assert_eq!(g.out(1), &[] as &[u32]);
        assert_eq!(g.inn(1), &[0, 3]);
        assert_eq!(g.num_edges(), 2);
        assert_eq!(g.undirected(1), vec![0, 3]);
        let u = DenseGraph::parse("0 1\n1 0\n", false).unwrap();
        assert_eq!(u.num_edges(), 1);
        assert!(matches!(
            DenseGraph::parse("0 x\n", true),
            Err(OracleError::Parse { line: 1, .. })
        ));
        assert!(matches!(
            DenseGraph::parse("0 99999999\n", true),
            Err(OracleError::TooLarge { .. })
        ));
    }
}
