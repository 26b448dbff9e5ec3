use anyhow::{bail, Context, Result};
use semigraph::oracle::{
    oracle_bfs, oracle_brandes, oracle_offsets, oracle_pagerank_dense, oracle_scan_exhaustive,
    oracle_triangles, oracle_wcc_unionfind, DenseGraph,
};
use semigraph::store::{convert_reader, ConvertOptions, Graph, Side, StoreError};

use crate::args::{Algorithm, VerifyArgs};
use crate::run::{engine, execute, Values};

const BC_TOLERANCE: f64 = 1e-9;
const PR_TOLERANCE: f64 = 1e-6;

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

fn mismatches<T: PartialEq>(a: &[T], b: &[T]) -> usize {
    a.iter().zip(b).filter(|(x, y)| x != y).count() + a.len().abs_diff(b.len())
}

/// Loads the graph to check; `Ok(None)` means the files failed validation.
fn load(a: &VerifyArgs, text: &str) -> Result<Option<Graph>> {
    let (Some(g), Some(i)) = (&a.graph, &a.index) else {
        let c = convert_reader(
            text.as_bytes(),
            &ConvertOptions {
                directed: a.directed,
                ..Default::default()
            },
        )?;
        return Ok(Some(Graph::from_bytes(c.graph_bytes, c.index)?));
    };
    match Graph::open(g, i) {
        Ok(graph) => Ok(Some(graph)),
        Err(StoreError::Io(e)) => {
            Err(e).with_context(|| format!("opening {} with {}", g.display(), i.display()))
        }
        Err(e) => {
            println!("FAIL format: {e}");
            Ok(None)
        }
    }
}

fn check_offsets(graph: &Graph, dense: &DenseGraph) -> Result<(), String> {
    if graph.num_vertices() as usize != dense.num_vertices()
        || graph.is_directed() != dense.is_directed()
    {
        return Err(format!(
            "graph has {} vertices (directed {}), edge list has {} (directed {})",
            graph.num_vertices(),
            graph.is_directed(),
            dense.num_vertices(),
            dense.is_directed()
        ));
    }
    graph.check_offsets().map_err(|e| e.to_string())?;
    let want = oracle_offsets(dense, graph.header().attr_bytes);
    for v in 0..dense.num_vertices() as u32 {
        for (side, table) in [(Side::In, &want.in_lists), (Side::Out, &want.out_lists)] {
            let loc = graph.index().locate(v, side);
            if (loc.offset, loc.len) != table[v as usize] {
                let (offset, len) = table[v as usize];
                return Err(format!(
                    "offset mismatch: {side:?}-list of vertex {v} at {}+{}, expected {offset}+{len}",
                    loc.offset, loc.len
                ));
            }
        }
    }
    Ok(())
}

pub fn verify(a: &VerifyArgs) -> Result<bool> {
    let text = std::fs::read_to_string(&a.input)
        .with_context(|| format!("reading {}", a.input.display()))?;
    let dense = DenseGraph::parse(&text, a.directed)?;
    let Some(graph) = load(a, &text)? else {
        return Ok(false);
    };
    if let Err(e) = check_offsets(&graph, &dense) {
        println!("FAIL offsets: {e}");
        return Ok(false);
    }
    println!("PASS offsets: {} vertices", dense.num_vertices());

    let n = dense.num_vertices() as u32;
    let source = a.algo.source;
    let algorithms = if a.algorithms.is_empty() {
        Algorithm::ALL.to_vec()
    } else {
        a.algorithms.clone()
    };
    if algorithms
        .iter()
        .any(|x| matches!(x, Algorithm::Bfs | Algorithm::Bc))
        && source >= n
    {
        bail!("source {source} is not a vertex of a {n}-vertex graph");
    }
    let mut params = a.algo.clone();
    // the dense reference has no activation threshold
    params.threshold = 0.0;
    let engine = engine(graph, &a.engine)?;

    let mut all_ok = true;
    for algo in algorithms {
        let got = execute(&engine, algo, &params)?.values;
        let (ok, detail) = match (algo, got) {
            (Algorithm::Bfs, Values::Levels(v)) => {
                let m = mismatches(&v, &oracle_bfs(&dense, source));
                (m == 0, format!("{m} vertices differ"))
            }
            (Algorithm::Bc, Values::Reals(v)) => {
                let d = max_abs_diff(&v, &oracle_brandes(&dense, source));
                (d <= BC_TOLERANCE, format!("max deviation {d:e}"))
            }
            (Algorithm::Pr, Values::Reals(v)) => {
                let d = max_abs_diff(&v, &oracle_pagerank_dense(&dense, params.d, params.iters));
                (d <= PR_TOLERANCE, format!("max deviation {d:e}"))
            }
            (Algorithm::Wcc, Values::Labels(v)) => {
                let m = mismatches(&v, &oracle_wcc_unionfind(&dense));
                (m == 0, format!("{m} vertices differ"))
            }
            (Algorithm::Tc, Values::Counts(v)) => {
                let want = oracle_triangles(&dense);
                let total: u64 = v.iter().sum::<u64>() / 3;
                let m = mismatches(&v, &want.per_vertex);
                (
                    m == 0 && total == want.total,
                    format!(
                        "total {total} (expected {}), {m} vertices differ",
                        want.total
                    ),
                )
            }
            (Algorithm::Ss, Values::Scan(s)) => {
                let want = oracle_scan_exhaustive(&dense);
                let m = s
                    .per_vertex
                    .iter()
                    .zip(&want.per_vertex)
                    .filter(|(x, y)| x.is_some_and(|x| x != **y))
                    .count();
                let ok = m == 0 && (s.max, s.argmax) == (want.max, want.argmax);
                (
                    ok,
                    format!(
                        "max {} argmax {} (expected {} at {}), {m} vertices differ",
                        s.max, s.argmax, want.max, want.argmax
                    ),
                )
            }
            _ => unreachable!("execute returns the value kind of its algorithm"),
        };
        println!(
            "{} {}: {detail}",
            if ok { "PASS" } else { "FAIL" },
            algo.name()
        );
        all_ok &= ok;
    }
    Ok(all_ok)
}
