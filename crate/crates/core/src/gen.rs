//! Seeded synthetic graph generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Edge = (u32, u32);

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `m` edges with uniformly random endpoints, no self-loops.
pub fn erdos_renyi(n: u32, m: u64, seed: u64) -> Vec<Edge> {
    assert!(n >= 2, "need two vertices for an edge");
    let mut r = rng(seed);
    (0..m)
        .map(|_| loop {
            let (a, b) = (r.random_range(0..n), r.random_range(0..n));
            if a != b {
                break (a, b);
            }
        })
        .collect()
}

/// Chung-Lu graph with `m` edges whose expected degrees follow a power law
/// with the given exponent (> 2). Low IDs get the heaviest weights.
pub fn power_law(n: u32, m: u64, exponent: f64, seed: u64) -> Vec<Edge> {
    assert!(n >= 2 && exponent > 2.0);
    let mut r = rng(seed);
    let alpha = -1.0 / (exponent - 1.0);
    let mut cumulative = Vec::with_capacity(n as usize);
    let mut total = 0.0;
    for i in 0..n {
        total += f64::from(i + 1).powf(alpha);
        cumulative.push(total);
    }
    let pick = |r: &mut ChaCha8Rng| {
        let x = r.random::<f64>() * total;
        cumulative.partition_point(|&c| c <= x).min(n as usize - 1) as u32
    };
    (0..m)
        .map(|_| loop {
            let (a, b) = (pick(&mut r), pick(&mut r));
            if a != b {
                break (a, b);
            }
        })
        .collect()
}

/// Random background edges plus one hub linked to `hub_degree` vertices.
pub fn with_hub(n: u32, m: u64, hub: u32, hub_degree: u32, seed: u64) -> Vec<Edge> {
    let mut edges = erdos_renyi(n, m, seed);
    let mut r = rng(seed ^ 0x5eed);
    for _ in 0..hub_degree {
        let v = r.random_range(0..n);
        if v != hub {
            edges.push(if r.random::<bool>() {
                (hub, v)
            } else {
                (v, hub)
            });
        }
    }
    edges
}

/// Contiguous ID blocks of `cluster` vertices with `intra` random edges per
/// vertex inside its block, plus `inter` edges between random vertices.
pub fn clustered(n: u32, cluster: u32, intra: u32, inter: u64, seed: u64) -> Vec<Edge> {
    assert!(cluster >= 2 && n >= cluster);
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for v in 0..n {
        let base = v / cluster * cluster;
        let size = cluster.min(n - base);
        if size < 2 {
            continue;
        }
        for _ in 0..intra {
            let w = base + r.random_range(0..size);
            if w != v {
                edges.push((v, w));
            }
        }
    }
    edges.extend(erdos_renyi(n, inter, seed.wrapping_add(1)));
    edges
}

/// One `src dst` line per edge.
pub fn to_text(edges: &[Edge]) -> String {
    use std::fmt::Write;
    let mut s = String::with_capacity(edges.len() * 12);
    for &(a, b) in edges {
        writeln!(s, "{a} {b}").unwrap();
    }
    s
}
