use std::io::Write;
use std::time::Instant;

use anyhow::{Context, Result};
use semigraph::gen;
use semigraph::store::{convert_files, ConvertOptions, Graph};

use crate::args::{AlgoArgs, Algorithm, BenchArgs, EngineArgs, Sweep, Switch};
use crate::output::sink;
use crate::run::{engine, execute};

const DEFAULT_SEED: u64 = 42;
const HEADER: &str = "sweep,algorithm,setting,wall_ms,iterations,requests_issued_to_file,pages_read,bytes_read,cache_hits,cache_misses,hit_rate";

fn seed() -> Result<u64> {
    match std::env::var("SEMIGRAPH_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .with_context(|| format!("SEMIGRAPH_SEED={s:?} is not an integer")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn params() -> AlgoArgs {
    AlgoArgs {
        source: 0,
        d: 0.85,
        iters: 30,
        threshold: 1e-4,
        no_prune: false,
    }
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    let seed = seed()?;
    let m = u64::from(a.vertices) * u64::from(a.avg_degree);
    let edges = if a.power_law {
        gen::power_law(a.vertices, m, 2.3, seed)
    } else {
        gen::erdos_renyi(a.vertices, m, seed)
    };
    let dir = tempfile::tempdir().context("creating a scratch directory")?;
    let (txt, fgg, fgi) = (
        dir.path().join("g.txt"),
        dir.path().join("g.fgg"),
        dir.path().join("g.fgi"),
    );
    std::fs::write(&txt, gen::to_text(&edges))?;
    convert_files(&txt, &fgg, &fgi, &ConvertOptions::default())?;
    let graph = Graph::open(&fgg, &fgi)?;
    let file_bytes = graph.source().len();
    eprintln!(
        "seed {seed}: {} vertices, {} edges, {file_bytes} bytes",
        graph.num_vertices(),
        graph.header().num_edges
    );

    let base = EngineArgs {
        cache_pages: None,
        page_size: 4096,
        threads: a.threads,
        r: semigraph::engine::DEFAULT_RANGE_SHIFT,
        merging: Switch::On,
        vertical_parts: 1,
        max_running: semigraph::engine::DEFAULT_MAX_RUNNING,
        stealing: Switch::On,
    };
    let quarter = |page: u64| (file_bytes / 4 / page).max(64);
    let mut runs: Vec<(&str, Algorithm, String, EngineArgs)> = Vec::new();
    if matches!(a.sweep, Sweep::Merge | Sweep::All) {
        for algo in [Algorithm::Wcc, Algorithm::Bfs] {
            for merging in [Switch::On, Switch::Off] {
                let e = EngineArgs {
                    merging,
                    cache_pages: Some(quarter(4096)),
                    ..base.clone()
                };
                let setting = if merging == Switch::On { "on" } else { "off" };
                runs.push(("merge", algo, setting.into(), e));
            }
        }
    }
    if matches!(a.sweep, Sweep::PageSize | Sweep::All) {
        for page in [4096u64, 16 << 10, 64 << 10] {
            let e = EngineArgs {
                page_size: page,
                cache_pages: Some(quarter(page)),
                ..base.clone()
            };
            runs.push(("page_size", Algorithm::Bfs, page.to_string(), e));
        }
    }
    if matches!(a.sweep, Sweep::Cache | Sweep::All) {
        let all = file_bytes.div_ceil(4096);
        for pages in [64, 1024, all] {
            runs.push((
                "cache",
                Algorithm::Wcc,
                pages.to_string(),
                EngineArgs {
                    cache_pages: Some(pages),
                    ..base.clone()
                },
            ));
        }
    }

    let mut out = sink(a.output.as_deref())?;
    writeln!(out, "{HEADER}")?;
    for (sweep, algo, setting, e) in runs {
        let engine = engine(graph.clone(), &e)?;
        let started = Instant::now();
        let done = execute(&engine, algo, &params())?;
        let ms = started.elapsed().as_secs_f64() * 1e3;
        let io = done.io;
        writeln!(
            out,
            "{sweep},{},{setting},{ms:.3},{},{},{},{},{},{},{:.4}",
            algo.name(),
            done.iterations.len(),
            io.requests_issued_to_file,
            io.pages_read,
            io.bytes_read,
            io.cache_hits,
            io.cache_misses,
            io.hit_rate()
        )?;
    }
    out.flush()?;
    Ok(())
}
