//! Page-aligned request descriptors and the conservative merge rule.

use crate::store::{Side, VertexId};

use super::CacheError;

/// Default cap on one merged read.
pub const DEFAULT_MAX_MERGE_BYTES: u64 = 4 << 20;

/// A read of one edge list. `task` travels with the request and is handed
/// back, exactly once, when the bytes are resident.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IoRequest<T> {
    pub target: VertexId,
    pub side: Side,
    pub offset: u64,
    pub len: u64,
    pub task: T,
}

impl<T> IoRequest<T> {
    /// First and last page touched by the request (inclusive).
    #[inline]
    pub fn pages(&self, page_size: u64) -> (u64, u64) {
        let first = self.offset / page_size;
        let last = (self.offset + self.len.max(1) - 1) / page_size;
        (first, last)
    }
}

/// A run of contiguous pages covering one or more requests.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergedRequest<T> {
    pub first_page: u64,
    pub page_count: u64,
    pub members: Vec<IoRequest<T>>,
}

impl<T> MergedRequest<T> {
    pub fn last_page(&self) -> u64 {
        self.first_page + self.page_count - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MergePolicy {
    pub enabled: bool,
    /// Largest merged span in bytes. A single request larger than this is
    /// still issued whole.
    pub max_bytes: u64,
}

impl Default for MergePolicy {
    fn default() -> Self {
        MergePolicy {
            enabled: true,
            max_bytes: DEFAULT_MAX_MERGE_BYTES,
        }
    }
}

impl MergePolicy {
    pub fn disabled() -> Self {
        MergePolicy {
            enabled: false,
            ..Default::default()
        }
    }
}

/// Groups requests sorted by offset into page-contiguous runs.
///
/// Two neighbouring requests share a run iff their page spans overlap or
/// abut; a page that no request touches is never bridged. With merging
/// disabled every request becomes its own run.
pub fn merge<T>(
    sorted: Vec<IoRequest<T>>,
    page_size: u64,
    policy: MergePolicy,
) -> Result<Vec<MergedRequest<T>>, CacheError> {
    if let Some(pos) = sorted.windows(2).position(|w| w[1].offset < w[0].offset) {
        return Err(CacheError::Unsorted { position: pos + 1 });
    }
    let mut out: Vec<MergedRequest<T>> = Vec::new();
    for req in sorted {
        let (first, last) = req.pages(page_size);
        if policy.enabled {
            if let Some(cur) = out.last_mut() {
                let cur_last = cur.last_page();
                let new_last = cur_last.max(last);
                let span_bytes = (new_last - cur.first_page + 1) * page_size;
                if first <= cur_last + 1 && span_bytes <= policy.max_bytes {
                    cur.page_count = new_last - cur.first_page + 1;
                    cur.members.push(req);
                    continue;
                }
            }
        }
        out.push(MergedRequest {
            first_page: first,
            page_count: last - first + 1,
            members: vec![req],
        });
    }
    Ok(out)
}
