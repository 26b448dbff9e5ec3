//! Semi-external-memory, vertex-centric graph processing.
//!
//! Per-vertex state lives in memory while edge lists stay in a paged binary
//! file ([`store`]) read through a user-space page cache ([`pagecache`]).
//! Vertex programs ([`engine::VertexProgram`]) run in bulk-synchronous
//! iterations; [`algos`] ships six of them and [`oracle`] holds in-memory
//! reference implementations to check them against.

pub mod algos;
pub mod engine;
pub mod gen;
pub mod oracle;
pub mod pagecache;
pub mod scalar;
pub mod store;

pub use scalar::Scalar;
pub use store::{Side, VertexId};

/// Double-precision instantiations of the numeric programs.
pub type PageRank = algos::PageRank<f64>;
pub type Betweenness = algos::Betweenness<f64>;
pub type PrState = algos::PrState<f64>;
pub type BcState = algos::BcState<f64>;
