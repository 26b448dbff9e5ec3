//! Bulk-synchronous vertex-centric execution over a semi-external graph.
//!
//! Vertices are range-partitioned across worker threads. Each iteration a
//! worker scans its active vertices in schedule order, keeps at most
//! `max_running` of them in flight, batches their edge-list requests
//! through the page cache, and steals from other workers once its own
//! queue is empty. Messages are buffered per destination partition and
//! delivered between iterations in a fixed order, so results do not depend
//! on the thread count.

mod bitmap;
mod message;
mod partition;
mod program;
mod queue;
mod reducer;
mod run;

use std::sync::Arc;

pub use message::FLUSH_THRESHOLD;
pub use partition::{part_window, RangePartitioner};
pub use program::{Context, MessageContext, ProgramError, VertexProgram};
pub use queue::STEAL_BATCH;
pub use reducer::MaxReducer;
pub use run::{Activation, Engine, RunOutput};

use crate::pagecache::{CacheConfig, CacheError, DEFAULT_MAX_MERGE_BYTES};
use crate::store::{StoreError, VertexId};

pub const DEFAULT_RANGE_SHIFT: u32 = 14;
pub const DEFAULT_MAX_RUNNING: u32 = 4000;
pub const DEFAULT_MAX_MESSAGE_BYTES: usize = 64;

/// Orders one partition's active vertices for one iteration. The input is
/// sorted ascending.
pub trait VertexOrder: Send + Sync {
    fn order(&self, iteration: u32, vertices: &mut [VertexId]);
}

/// Scan order of active vertices within a partition.
#[derive(Clone, Default)]
pub enum Schedule {
    /// Ascending on even iterations, descending on odd ones.
    #[default]
    Alternating,
    Ascending,
    Descending,
    Random {
        seed: u64,
    },
    Custom(Arc<dyn VertexOrder>),
}

impl std::fmt::Debug for Schedule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Schedule::Alternating => f.write_str("Alternating"),
            Schedule::Ascending => f.write_str("Ascending"),
            Schedule::Descending => f.write_str("Descending"),
            Schedule::Random { seed } => write!(f, "Random {{ seed: {seed} }}"),
            Schedule::Custom(_) => f.write_str("Custom"),
        }
    }
}

impl Schedule {
    /// Reorders `vertices` (sorted ascending) for `iteration` on `partition`.
    pub fn apply(&self, iteration: u32, partition: u32, vertices: &mut [VertexId]) {
        match self {
            Schedule::Alternating if iteration % 2 == 1 => vertices.reverse(),
            Schedule::Alternating | Schedule::Ascending => {}
            Schedule::Descending => vertices.reverse(),
            Schedule::Random { seed } => {
                use rand::seq::SliceRandom;
                use rand::SeedableRng;
                let mix = seed
                    ^ (u64::from(iteration) << 32 | u64::from(partition))
                        .wrapping_mul(0x9e37_79b9_7f4a_7c15);
                vertices.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(mix));
            }
            Schedule::Custom(order) => order.order(iteration, vertices),
        }
    }
}

#[derive(Debug, Clone)]
pub struct EngineConfig {
    pub num_threads: u32,
    /// Vertices `[k << r, (k+1) << r)` form one range of a partition.
    pub range_shift: u32,
    pub max_running: u32,
    pub cache: CacheConfig,
    pub merging: bool,
    pub max_merge_bytes: u64,
    pub schedule: Schedule,
    pub vertical_parts: u32,
    pub work_stealing: bool,
    pub max_iterations: Option<u32>,
    pub max_message_bytes: usize,
    /// Record every `run` call in [`RunOutput::trace`].
    pub trace: bool,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            num_threads: 1,
            range_shift: DEFAULT_RANGE_SHIFT,
            max_running: DEFAULT_MAX_RUNNING,
            cache: CacheConfig::default(),
            merging: true,
            max_merge_bytes: DEFAULT_MAX_MERGE_BYTES,
            schedule: Schedule::default(),
            vertical_parts: 1,
            work_stealing: true,
            max_iterations: None,
            max_message_bytes: DEFAULT_MAX_MESSAGE_BYTES,
            trace: false,
        }
    }
}

impl EngineConfig {
    pub fn validate(&self) -> Result<(), EngineError> {
        let bad = |m: &str| Err(EngineError::Config(m.to_string()));
        if self.num_threads == 0 {
            return bad("num_threads must be at least 1");
        }
        if self.max_running == 0 {
            return bad("max_running must be at least 1");
        }
        if self.vertical_parts == 0 {
            return bad("vertical_parts must be at least 1");
        }
        if self.range_shift > 32 {
            return bad("range_shift must be at most 32");
        }
        self.cache.validate().map_err(EngineError::Cache)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum EngineError {
    #[error("invalid engine configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Cache(CacheError),
    #[error("iteration {iteration}, vertex {vertex}: {source}")]
    Program {
        iteration: u32,
        vertex: VertexId,
        #[source]
        source: ProgramError,
    },
    #[error("iteration {iteration}, reading list of vertex {vertex}: {source}")]
    Io {
        iteration: u32,
        vertex: VertexId,
        #[source]
        source: CacheError,
    },
    #[error("iteration {iteration}: {source}")]
    Store {
        iteration: u32,
        #[source]
        source: StoreError,
    },
    #[error("contract violation: {0}")]
    Contract(String),
}

/// Per-iteration counters.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IterationStats {
    pub iteration: u32,
    pub active_count: u64,
    /// Messages delivered (one per destination vertex).
    pub msgs: u64,
    pub bytes_read: u64,
    pub issued_requests: u64,
    /// Vertices taken from another worker's queue.
    pub steals: u64,
    pub wall_ms: f64,
    pub cache_hits: u64,
    pub cache_misses: u64,
}

impl IterationStats {
    pub const CSV_HEADER: &'static str =
        "iteration,active_count,msgs,bytes_read,issued_requests,steals,wall_ms,cache_hits,cache_misses";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{:.3},{},{}",
            self.iteration,
            self.active_count,
            self.msgs,
            self.bytes_read,
            self.issued_requests,
            self.steals,
            self.wall_ms,
            self.cache_hits,
            self.cache_misses
        )
    }
}

/// One `run` invocation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceEvent {
    pub iteration: u32,
    pub vertex: VertexId,
    pub part: u32,
    pub thread: u32,
}
