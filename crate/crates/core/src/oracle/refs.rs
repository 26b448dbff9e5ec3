use std::collections::{HashSet, VecDeque};

use super::DenseGraph;
use crate::scalar::Scalar;

/// Queue BFS along out-edges.
pub fn oracle_bfs(g: &DenseGraph, source: u32) -> Vec<Option<u32>> {
    let mut level = vec![None; g.num_vertices()];
    level[source as usize] = Some(0);
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        let next = level[v as usize].unwrap() + 1;
        for &w in g.out(v) {
            if level[w as usize].is_none() {
                level[w as usize] = Some(next);
                queue.push_back(w);
            }
        }
    }
    level
}

/// Brandes' dependency accumulation from one source; the source reports 0.
pub fn oracle_brandes<T: Scalar>(g: &DenseGraph, source: u32) -> Vec<T> {
    let n = g.num_vertices();
    let mut sigma = vec![0u64; n];
    let mut dist = vec![u32::MAX; n];
    let mut stack = Vec::with_capacity(n);
    sigma[source as usize] = 1;
    dist[source as usize] = 0;
    let mut queue = VecDeque::from([source]);
    while let Some(v) = queue.pop_front() {
        stack.push(v);
        for &w in g.out(v) {
            if dist[w as usize] == u32::MAX {
                dist[w as usize] = dist[v as usize] + 1;
                queue.push_back(w);
            }
            if dist[w as usize] == dist[v as usize] + 1 {
                sigma[w as usize] += sigma[v as usize];
            }
        }
    }
    let mut delta = vec![T::zero(); n];
    while let Some(w) = stack.pop() {
        for &v in g.inn(w) {
            if dist[v as usize] != u32::MAX && dist[v as usize] + 1 == dist[w as usize] {
                let ratio = T::count(sigma[v as usize]) / T::count(sigma[w as usize]);
                delta[v as usize] = delta[v as usize] + ratio * (T::one() + delta[w as usize]);
            }
        }
    }
    delta[source as usize] = T::zero();
    delta
}

/// Synchronous power iteration `x <- (1-d) + d * sum(x[u] / outdeg(u))`
/// from `x = 1-d`; vertices without out-edges pass nothing on.
pub fn oracle_pagerank_dense<T: Scalar>(g: &DenseGraph, damping: T, iters: u32) -> Vec<T> {
    let n = g.num_vertices();
    let base = T::one() - damping;
    let mut x = vec![base; n];
    for _ in 0..iters {
        let mut next = vec![base; n];
        for u in 0..n as u32 {
            let deg = g.out(u).len();
            if deg == 0 {
                continue;
            }
            let share = damping * x[u as usize] / T::count(deg as u64);
            for &w in g.out(u) {
                next[w as usize] = next[w as usize] + share;
            }
        }
        x = next;
    }
    x
}

/// Component labels (smallest member ID) via union-find, ignoring direction.
pub fn oracle_wcc_unionfind(g: &DenseGraph) -> Vec<u32> {
    let n = g.num_vertices();
    let mut parent: Vec<u32> = (0..n as u32).collect();
    fn find(parent: &mut [u32], mut v: u32) -> u32 {
        while parent[v as usize] != v {
            let up = parent[parent[v as usize] as usize];
            parent[v as usize] = up;
            v = up;
        }
        v
    }
    for v in 0..n as u32 {
        for &w in g.out(v) {
            let (a, b) = (find(&mut parent, v), find(&mut parent, w));
            if a != b {
                // the smaller root wins, so every root is its component's minimum
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi as usize] = lo;
            }
        }
    }
    (0..n as u32).map(|v| find(&mut parent, v)).collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleOracle {
    pub per_vertex: Vec<u64>,
    pub total: u64,
}

fn edge_set(g: &DenseGraph) -> HashSet<(u32, u32)> {
    let mut set = HashSet::new();
    for v in 0..g.num_vertices() as u32 {
        for &w in g.out(v) {
            set.insert((v.min(w), v.max(w)));
        }
    }
    set
}

fn undirected_lists(g: &DenseGraph) -> Vec<Vec<u32>> {
    (0..g.num_vertices() as u32)
        .map(|v| g.undirected(v))
        .collect()
}

/// Forward enumeration: each edge points from lower to higher
/// (degree, id) rank and every triangle is found once at its lowest corner.
pub fn oracle_triangles(g: &DenseGraph) -> TriangleOracle {
    let adj = undirected_lists(g);
    let rank = |v: u32| (adj[v as usize].len(), v);
    let forward: Vec<Vec<u32>> = (0..adj.len() as u32)
        .map(|v| {
            adj[v as usize]
                .iter()
                .copied()
                .filter(|&w| rank(w) > rank(v))
                .collect()
        })
        .collect();
    let mut per_vertex = vec![0u64; adj.len()];
    let mut mark = vec![false; adj.len()];
    let mut total = 0;
    for u in 0..adj.len() {
        for &w in &forward[u] {
            mark[w as usize] = true;
        }
        for &w in &forward[u] {
            for &x in &forward[w as usize] {
                if mark[x as usize] {
                    total += 1;
                    for c in [u, w as usize, x as usize] {
                        per_vertex[c] += 1;
                    }
                }
            }
        }
        for &w in &forward[u] {
            mark[w as usize] = false;
        }
    }
    TriangleOracle { per_vertex, total }
}

/// Every vertex triple; only for tiny graphs.
pub fn oracle_triangles_bruteforce(g: &DenseGraph) -> TriangleOracle {
    let n = g.num_vertices() as u32;
    let edges = edge_set(g);
    let adj = |a: u32, b: u32| edges.contains(&(a.min(b), a.max(b)));
    let mut per_vertex = vec![0u64; n as usize];
    let mut total = 0;
    for a in 0..n {
        for b in a + 1..n {
            if !adj(a, b) {
                continue;
            }
            for c in b + 1..n {
                if adj(a, c) && adj(b, c) {
                    total += 1;
                    for v in [a, b, c] {
                        per_vertex[v as usize] += 1;
                    }
                }
            }
        }
    }
    TriangleOracle { per_vertex, total }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanOracle {
    /// Edges in each vertex's closed neighborhood.
    pub per_vertex: Vec<u64>,
    pub max: u64,
    pub argmax: u32,
}

/// Locality statistic of every vertex, no pruning.
pub fn oracle_scan_exhaustive(g: &DenseGraph) -> ScanOracle {
    let n = g.num_vertices();
    let adj = undirected_lists(g);
    let mut per_vertex = vec![0u64; n];
    let mut member = vec![false; n];
    for v in 0..n {
        let nb = &adj[v];
        for &w in nb {
            member[w as usize] = true;
        }
        let mut inside = 0u64;
        for &w in nb {
            let other = &adj[w as usize];
            inside += if other.len() <= nb.len() {
                other
                    .iter()
                    .filter(|&&x| x > w && member[x as usize])
                    .count()
            } else {
                nb.iter()
                    .filter(|&&x| x > w && other.binary_search(&x).is_ok())
                    .count()
            } as u64;
        }
        for &w in nb {
            member[w as usize] = false;
        }
        per_vertex[v] = nb.len() as u64 + inside;
    }
    let (mut max, mut argmax) = (0, 0);
    for (v, &s) in per_vertex.iter().enumerate() {
        if s > max {
            (max, argmax) = (s, v as u32);
        }
    }
    ScanOracle {
        per_vertex,
        max,
        argmax,
    }
}

/// Byte offset of every list in a region: running sum of list sizes.
pub fn oracle_offset_table(degrees: &[u32], region_start: u64, attr_bytes: u16) -> Vec<u64> {
    let mut at = region_start;
    degrees
        .iter()
        .map(|&d| {
            let here = at;
            at += 8 + u64::from(d) * (4 + u64::from(attr_bytes));
            here
        })
        .collect()
}

/// `(offset, length)` of every in- and out-list of `g` in a converted file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OffsetTable {
    pub in_lists: Vec<(u64, u64)>,
    pub out_lists: Vec<(u64, u64)>,
}

pub fn oracle_offsets(g: &DenseGraph, attr_bytes: u16) -> OffsetTable {
    const FIRST_REGION: u64 = 4096;
    let n = g.num_vertices() as u32;
    let size = |d: usize| 8 + d as u64 * (4 + u64::from(attr_bytes));
    let table = |degrees: Vec<u32>, start: u64| -> Vec<(u64, u64)> {
        let offsets = oracle_offset_table(&degrees, start, attr_bytes);
        offsets
            .into_iter()
            .zip(degrees)
            .map(|(o, d)| (o, size(d as usize)))
            .collect()
    };
    let out_degrees: Vec<u32> = (0..n).map(|v| g.out(v).len() as u32).collect();
    if !g.is_directed() {
        let out = table(out_degrees, FIRST_REGION);
        return OffsetTable {
            in_lists: out.clone(),
            out_lists: out,
        };
    }
    let in_degrees: Vec<u32> = (0..n).map(|v| g.inn(v).len() as u32).collect();
    let in_end = FIRST_REGION + in_degrees.iter().map(|&d| size(d as usize)).sum::<u64>();
    let out_start = in_end.div_ceil(4096) * 4096;
    OffsetTable {
        in_lists: table(in_degrees, FIRST_REGION),
        out_lists: table(out_degrees, out_start),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(text: &str, directed: bool) -> DenseGraph {
        DenseGraph::parse(text, directed).unwrap()
    }

    #[test]
    fn small_cases() {
        let tri = g("0 1\n1 2\n2 0\n", true);
        assert_eq!(oracle_triangles(&tri).total, 1);
        assert_eq!(
            oracle_wcc_unionfind(&g("0 1\n2 3\n", true)),
            vec![0, 0, 2, 2]
        );
        assert_eq!(
            oracle_offset_table(&[3, 5, 2], 4096, 0),
            vec![4096, 4116, 4144]
        );
        assert_eq!(
            oracle_bfs(&g("0 1\n1 2\n", true), 0),
            vec![Some(0), Some(1), Some(2)]
        );
        assert_eq!(
            oracle_brandes::<f64>(&g("0 1\n1 2\n", true), 0),
            vec![0.0, 1.0, 0.0]
        );
        let scan = oracle_scan_exhaustive(&tri);
        assert_eq!((scan.max, scan.argmax), (3, 0));
        let star = oracle_scan_exhaustive(&g("0 1\n0 2\n0 3\n0 4\n", false));
        assert_eq!((star.max, star.argmax), (4, 0));
    }

    #[test]
    fn brandes_counts_every_shortest_path() {
        // diamond 0->{1,2}->3: each middle vertex carries half of the path to 3
        let d = oracle_brandes::<f64>(&g("0 1\n0 2\n1 3\n2 3\n", true), 0);
        assert_eq!(d, vec![0.0, 0.5, 0.5, 0.0]);
    }

    #[test]
    fn hashed_wedges_match_brute_force() {
        let mut text = String::new();
        let mut x = 12345u64;
        for _ in 0..600 {
            x = x
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            text.push_str(&format!("{} {}\n", (x >> 33) % 60, (x >> 20) % 60));
        }
        let graph = g(&text, true);
        let a = oracle_triangles(&graph);
        assert!(a.total > 0);
        assert_eq!(a, oracle_triangles_bruteforce(&graph));
    }

    #[test]
    fn pagerank_symmetric_pair_converges_to_one() {
        let r = oracle_pagerank_dense::<f64>(&g("0 1\n1 0\n", true), 0.85, 300);
        assert!((r[0] - 1.0).abs() < 1e-12 && (r[1] - 1.0).abs() < 1e-12);
        let lone = oracle_pagerank_dense::<f64>(&DenseGraph::from_edges(1, &[], true), 0.85, 30);
        assert!((lone[0] - 0.15).abs() < 1e-15);
    }
}
