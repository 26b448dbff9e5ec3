#![allow(dead_code)]

use semigraph::engine::{Engine, EngineConfig};
use semigraph::gen;
use semigraph::oracle::DenseGraph;
use semigraph::pagecache::CacheConfig;
use semigraph::store::{convert_reader, ConvertOptions, Graph};

pub struct Case {
    pub dense: DenseGraph,
    pub graph: Graph,
    pub directed: bool,
}

impl Case {
    pub fn new(text: &str, directed: bool) -> Self {
        let c = convert_reader(
            text.as_bytes(),
            &ConvertOptions {
                directed,
                ..Default::default()
            },
        )
        .unwrap();
        Case {
            dense: DenseGraph::parse(text, directed).unwrap(),
            graph: Graph::from_bytes(c.graph_bytes, c.index).unwrap(),
            directed,
        }
    }

    /// Pages needed to hold the whole file.
    pub fn file_pages(&self, page_size: u64) -> u64 {
        self.graph.source().len().div_ceil(page_size)
    }

    pub fn engine(&self, threads: u32, cache_pages: u64) -> Engine {
        self.engine_with(|c| {
            c.num_threads = threads;
            c.cache = CacheConfig::with_capacity(cache_pages, 4096);
        })
    }

    /// Cache large enough for the whole file.
    pub fn roomy(&self, threads: u32) -> Engine {
        self.engine(threads, self.file_pages(4096) + 8)
    }

    pub fn engine_with(&self, f: impl FnOnce(&mut EngineConfig)) -> Engine {
        let mut cfg = EngineConfig {
            range_shift: 4,
            ..Default::default()
        };
        f(&mut cfg);
        Engine::new(self.graph.clone(), cfg).unwrap()
    }
}

/// Erdős–Rényi or power-law graph with the given size.
pub fn random_case(seed: u64, power: bool, n: u32, avg_degree: u32, directed: bool) -> Case {
    let m = u64::from(n) * u64::from(avg_degree) / if directed { 1 } else { 2 };
    let edges = if power {
        gen::power_law(n, m, 2.5, seed)
    } else {
        gen::erdos_renyi(n, m, seed)
    };
    Case::new(&gen::to_text(&edges), directed)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}
