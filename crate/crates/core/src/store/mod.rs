//! On-disk graph container (`.fgg`) and its compact in-memory index (`.fgi`).
//!
//! Edge lists are stored in ascending vertex order, in-lists first and then
//! out-lists for directed graphs. The index keeps one byte of degree per
//! vertex and side plus a sparse set of absolute offsets, so locating any
//! list costs at most `anchor_stride - 1` additions.

mod convert;
mod edges;
mod format;
mod graph;
mod index;

pub use convert::{
    convert, convert_files, convert_reader, ConvertOptions, ConvertSummary, Converted,
};
pub use edges::{EdgeList, Neighbors};
pub use format::{
    list_bytes, GraphHeader, FORMAT_VERSION, GRAPH_MAGIC, HEADER_BYTES, LIST_HEADER_BYTES,
    REGION_ALIGN,
};
pub use graph::Graph;
pub use index::{
    GraphIndex, LargeDegree, ListLocation, DEFAULT_ANCHOR_STRIDE, INDEX_HEADER_BYTES, INDEX_MAGIC,
    INDEX_VERSION, OVERFLOW_CODE,
};

pub type VertexId = u32;

/// Which adjacency list of a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    In,
    Out,
}

#[derive(Debug, thiserror::Error)]
pub enum StoreError {
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },
    #[error("line {line}: vertex id {value} does not fit in 32 bits")]
    IdOverflow { line: u64, value: u64 },
    #[error("not a {expected} file (bad magic)")]
    BadMagic { expected: &'static str },
    #[error("unsupported format version {0}")]
    UnsupportedVersion(u32),
    #[error("corrupt file: {0}")]
    Corrupt(String),
    #[error("anchor stride {0} is not a power of two")]
    InvalidStride(u32),
    #[error("edge list of vertex {vertex}: {detail}")]
    ListMismatch { vertex: VertexId, detail: String },
    #[error("graph and index disagree: {0}")]
    IndexMismatch(String),
    #[error(
        "{side:?}-list of vertex {vertex} expected at offset {offset}, found owner {found_owner:?}"
    )]
    OffsetMismatch {
        vertex: VertexId,
        side: Side,
        offset: u64,
        found_owner: Option<VertexId>,
    },
}
