//! Six graph algorithms written as vertex programs.
//!
//! Each entry point runs one program on an [`Engine`] and returns its
//! result together with the run's statistics. Algorithms that treat the
//! graph as undirected read both lists of a directed vertex and merge them.

mod bc;
mod bfs;
mod pagerank;
mod ss;
mod tc;
mod wcc;

pub use bc::{betweenness, BcMessage, BcState, Betweenness};
pub use bfs::{bfs, Bfs};
pub use pagerank::{
    pagerank, PageRank, PrState, DEFAULT_DAMPING, DEFAULT_MAX_ITERS, DEFAULT_THRESHOLD,
};
pub use ss::{scan_statistics, upper_bound, ScanResult, ScanStatistics, SsState, PRUNING_WINDOW};
pub use tc::{triangle_count, TriangleCount, TriangleResult};
pub use wcc::{wcc, Wcc};

use crate::engine::{Context, IterationStats, ProgramError, RunOutput, TraceEvent};
use crate::pagecache::IoStats;
use crate::store::{EdgeList, Side, VertexId};

/// Result of one algorithm run.
#[derive(Debug, Clone)]
pub struct AlgoOutput<R> {
    pub result: R,
    pub iterations: Vec<IterationStats>,
    pub io: IoStats,
    pub trace: Vec<TraceEvent>,
    pub executed_per_thread: Vec<u64>,
}

impl<R> AlgoOutput<R> {
    pub(crate) fn from_run<S>(out: RunOutput<S>, f: impl FnOnce(Vec<S>) -> R) -> Self {
        AlgoOutput {
            result: f(out.states),
            iterations: out.iterations,
            io: out.io,
            trace: out.trace,
            executed_per_thread: out.executed_per_thread,
        }
    }
}

/// Requests every list making up `v`'s undirected neighborhood and returns
/// how many were requested.
pub(crate) fn request_both<M: Clone>(
    ctx: &mut Context<'_, M>,
    v: VertexId,
) -> Result<u32, ProgramError> {
    ctx.request_edges(v, Side::Out)?;
    if ctx.is_directed() {
        ctx.request_edges(v, Side::In)?;
        return Ok(2);
    }
    Ok(1)
}

pub(crate) fn sorted_dedup(v: &mut Vec<VertexId>) {
    v.sort_unstable();
    v.dedup();
}

/// Calls `hit(x)` for every `x` above the list's owner that is both in
/// `edges` and in the sorted slice `set`.
pub(crate) fn common_above(edges: &EdgeList<'_>, set: &[VertexId], mut hit: impl FnMut(VertexId)) {
    let w = edges.owner();
    let tail = &set[set.partition_point(|&x| x <= w)..];
    if tail.is_empty() {
        return;
    }
    // a long list against a short set: probe instead of streaming
    if tail.len() * 32 < edges.degree() as usize {
        for &x in tail {
            if edges.contains(x) {
                hit(x);
            }
        }
        return;
    }
    let mut i = 0;
    for x in edges.neighbors().filter(|&x| x > w) {
        while i < tail.len() && tail[i] < x {
            i += 1;
        }
        if i == tail.len() {
            break;
        }
        if tail[i] == x {
            hit(x);
        }
    }
}
