//! User-space page cache with user-task completion and I/O request merging.
//!
//! Callers hand [`PageCache::submit_batch`] a list of edge-list reads, each
//! carrying an opaque task value. The batch is sorted, coalesced into
//! page-contiguous runs ([`merge`]), served from the set-associative cache
//! where possible, and every task is then completed with a [`PageSpan`]
//! that reads straight out of the cached pages.

mod cache;
mod merge;
mod source;
mod view;

use std::sync::Arc;

pub use cache::{
    CacheConfig, Page, PageCache, DEFAULT_ASSOCIATIVITY, DEFAULT_PAGE_SIZE, MAX_PAGE_SIZE,
    MIN_PAGE_SIZE,
};
pub use merge::{merge, IoRequest, MergePolicy, MergedRequest, DEFAULT_MAX_MERGE_BYTES};
pub use source::{FileSource, PageSource};
pub use view::{Chunks, PageSpan};

#[derive(Debug, Clone, thiserror::Error)]
pub enum CacheError {
    #[error("I/O error reading {len} bytes at offset {offset}: {source}")]
    Io {
        offset: u64,
        len: u64,
        #[source]
        source: Arc<std::io::Error>,
    },
    #[error("short read at offset {offset}: expected {expected} bytes, got {got}")]
    ShortRead {
        offset: u64,
        expected: u64,
        got: u64,
    },
    #[error("range [{offset}, {offset}+{len}) lies outside the {file_len}-byte file")]
    OutOfBounds {
        offset: u64,
        len: u64,
        file_len: u64,
    },
    #[error("requests not sorted by offset (first violation at position {position})")]
    Unsorted { position: usize },
    #[error("invalid cache configuration: {0}")]
    Config(String),
}

/// Cumulative I/O counters of one [`PageCache`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct IoStats {
    pub requests_submitted: u64,
    pub requests_issued_to_file: u64,
    pub merged_requests: u64,
    pub pages_read: u64,
    pub cache_hits: u64,
    pub cache_misses: u64,
    /// Whole pages read from the file, in bytes.
    pub bytes_read: u64,
    pub in_bytes_requested: u64,
    pub out_bytes_requested: u64,
}

impl IoStats {
    pub const CSV_HEADER: &'static str = "requests_submitted,requests_issued_to_file,merged_requests,pages_read,cache_hits,cache_misses,bytes_read,in_bytes_requested,out_bytes_requested";

    pub fn page_touches(&self) -> u64 {
        self.cache_hits + self.cache_misses
    }

    pub fn hit_rate(&self) -> f64 {
        match self.page_touches() {
            0 => 0.0,
            t => self.cache_hits as f64 / t as f64,
        }
    }

    /// Counter-wise difference `self - earlier`.
    pub fn since(&self, earlier: &IoStats) -> IoStats {
        IoStats {
            requests_submitted: self.requests_submitted - earlier.requests_submitted,
            requests_issued_to_file: self.requests_issued_to_file - earlier.requests_issued_to_file,
            merged_requests: self.merged_requests - earlier.merged_requests,
            pages_read: self.pages_read - earlier.pages_read,
            cache_hits: self.cache_hits - earlier.cache_hits,
            cache_misses: self.cache_misses - earlier.cache_misses,
            bytes_read: self.bytes_read - earlier.bytes_read,
            in_bytes_requested: self.in_bytes_requested - earlier.in_bytes_requested,
            out_bytes_requested: self.out_bytes_requested - earlier.out_bytes_requested,
        }
    }

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{}",
            self.requests_submitted,
            self.requests_issued_to_file,
            self.merged_requests,
            self.pages_read,
            self.cache_hits,
            self.cache_misses,
            self.bytes_read,
            self.in_bytes_requested,
            self.out_bytes_requested
        )
    }
}
