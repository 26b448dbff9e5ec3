use std::io::Write;

use anyhow::{bail, Context, Result};
use semigraph::algos::{self, AlgoOutput, PageRank, ScanResult};
use semigraph::engine::{Engine, EngineConfig, IterationStats};
use semigraph::pagecache::{CacheConfig, IoStats};
use semigraph::store::{convert_files, ConvertOptions, Graph, Side};

use crate::args::{AlgoArgs, Algorithm, ConvertArgs, EngineArgs, RunArgs, StatsArgs, Switch};
use crate::output::{sink, write_io, write_iterations};

pub fn convert(a: &ConvertArgs) -> Result<()> {
    let opts = ConvertOptions {
        directed: a.directed,
        attr_bytes: a.attr_bytes,
        anchor_stride: a.anchor_stride,
    };
    let s = convert_files(&a.input, &a.graph, &a.index, &opts)
        .with_context(|| format!("converting {}", a.input.display()))?;
    println!(
        "vertices {} edges {} self_loops_dropped {} duplicates_dropped {}",
        s.num_vertices, s.num_edges, s.self_loops_dropped, s.duplicates_dropped
    );
    Ok(())
}

pub fn open(graph: &std::path::Path, index: &std::path::Path) -> Result<Graph> {
    Graph::open(graph, index)
        .with_context(|| format!("opening {} with {}", graph.display(), index.display()))
}

pub fn engine(graph: Graph, a: &EngineArgs) -> Result<Engine> {
    if a.page_size == 0 {
        bail!("page size must be positive");
    }
    let pages = a
        .cache_pages
        .unwrap_or_else(|| graph.source().len().div_ceil(a.page_size).max(1));
    let config = EngineConfig {
        num_threads: a.threads,
        range_shift: a.r,
        max_running: a.max_running,
        cache: CacheConfig::with_capacity(pages, a.page_size),
        merging: a.merging == Switch::On,
        vertical_parts: a.vertical_parts,
        work_stealing: a.stealing == Switch::On,
        ..Default::default()
    };
    Ok(Engine::new(graph, config)?)
}

/// Per-vertex results of one algorithm.
pub enum Values {
    Levels(Vec<Option<u32>>),
    Reals(Vec<f64>),
    Labels(Vec<u32>),
    Counts(Vec<u64>),
    Scan(ScanResult),
}

pub struct Finished {
    pub values: Values,
    pub iterations: Vec<IterationStats>,
    pub io: IoStats,
    /// One-line summary for whole-graph results.
    pub summary: Option<String>,
}

fn finished<R>(out: AlgoOutput<R>, values: impl FnOnce(R) -> (Values, Option<String>)) -> Finished {
    let (values, summary) = values(out.result);
    Finished {
        values,
        iterations: out.iterations,
        io: out.io,
        summary,
    }
}

pub fn execute(engine: &Engine, algo: Algorithm, p: &AlgoArgs) -> Result<Finished> {
    let n = engine.graph().num_vertices();
    if matches!(algo, Algorithm::Bfs | Algorithm::Bc) && u64::from(p.source) >= n {
        bail!("source {} is not a vertex of a {n}-vertex graph", p.source);
    }
    Ok(match algo {
        Algorithm::Bfs => finished(algos::bfs(engine, p.source)?, |r| (Values::Levels(r), None)),
        Algorithm::Bc => finished(algos::betweenness(engine, p.source)?, |r| {
            (Values::Reals(r), None)
        }),
        Algorithm::Pr => {
            let params = PageRank {
                damping: p.d,
                max_iters: p.iters,
                threshold: p.threshold,
            };
            finished(algos::pagerank(engine, params)?, |r| {
                (Values::Reals(r), None)
            })
        }
        Algorithm::Wcc => finished(algos::wcc(engine)?, |r| {
            let mut roots = r.clone();
            roots.sort_unstable();
            roots.dedup();
            let summary = format!("components {}", roots.len());
            (Values::Labels(r), Some(summary))
        }),
        Algorithm::Tc => finished(algos::triangle_count(engine)?, |r| {
            (
                Values::Counts(r.per_vertex),
                Some(format!("triangles {}", r.total)),
            )
        }),
        Algorithm::Ss => finished(algos::scan_statistics(engine, !p.no_prune)?, |r| {
            let summary = format!("max {} argmax {}", r.max, r.argmax);
            (Values::Scan(r), Some(summary))
        }),
    })
}

pub fn write_values(out: &mut dyn Write, values: &Values) -> std::io::Result<()> {
    writeln!(out, "vertex_id,value")?;
    let opt = |x: Option<String>| x.unwrap_or_default();
    match values {
        Values::Levels(v) => v
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| writeln!(out, "{i},{}", opt(x.map(|l| l.to_string())))),
        Values::Reals(v) => v
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| writeln!(out, "{i},{x:e}")),
        Values::Labels(v) => v
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| writeln!(out, "{i},{x}")),
        Values::Counts(v) => v
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| writeln!(out, "{i},{x}")),
        Values::Scan(s) => s
            .per_vertex
            .iter()
            .enumerate()
            .try_for_each(|(i, x)| writeln!(out, "{i},{}", opt(x.map(|l| l.to_string())))),
    }
}

pub fn run(a: &RunArgs) -> Result<()> {
    let engine = engine(open(&a.graph, &a.index)?, &a.engine)?;
    let done = execute(&engine, a.algorithm, &a.algo)?;
    let mut out = sink(a.output.as_deref())?;
    write_values(&mut *out, &done.values).context("writing results")?;
    out.flush()?;
    if let Some(path) = &a.stats {
        write_iterations(path, &done.iterations)?;
    }
    if let Some(path) = &a.io_stats {
        write_io(path, &done.io)?;
    }
    if let Some(s) = &done.summary {
        eprintln!("{s}");
    }
    eprintln!("iterations {}", done.iterations.len());
    Ok(())
}

pub fn stats(a: &StatsArgs) -> Result<()> {
    let g = open(&a.graph, &a.index)?;
    let idx = g.index();
    let n = g.num_vertices();
    let max_degree = |side| {
        (0..n as u32)
            .map(|v| idx.degree(v, side))
            .max()
            .unwrap_or(0)
    };
    println!("key,value");
    println!("vertices,{n}");
    println!("edges,{}", g.header().num_edges);
    println!("directed,{}", g.is_directed());
    println!("attr_bytes,{}", g.header().attr_bytes);
    println!("file_bytes,{}", g.source().len());
    println!("in_region_offset,{}", g.header().in_region_offset);
    println!("out_region_offset,{}", g.header().out_region_offset);
    println!("anchor_stride,{}", idx.anchor_stride());
    println!("overflow_vertices,{}", idx.large_degrees().len());
    println!("index_memory_bytes,{}", idx.memory_bytes());
    println!("max_out_degree,{}", max_degree(Side::Out));
    println!("max_in_degree,{}", max_degree(Side::In));
    Ok(())
}
