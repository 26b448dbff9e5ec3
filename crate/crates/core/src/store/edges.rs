use super::format::{list_bytes, LIST_HEADER_BYTES};
use super::{Side, StoreError, VertexId};
use crate::pagecache::{Chunks, PageSpan};

/// One edge list read through the page cache.
#[derive(Debug, Clone, Copy)]
pub struct EdgeList<'a> {
    owner: VertexId,
    side: Side,
    degree: u32,
    attr_bytes: u16,
    span: PageSpan<'a>,
}

impl<'a> EdgeList<'a> {
    /// Decodes and checks the list header against the vertex it was requested for.
    pub fn parse(
        span: PageSpan<'a>,
        expected: VertexId,
        side: Side,
        attr_bytes: u16,
    ) -> Result<Self, StoreError> {
        if (span.len() as u64) < LIST_HEADER_BYTES {
            return Err(StoreError::ListMismatch {
                vertex: expected,
                detail: format!("{} bytes is shorter than a list header", span.len()),
            });
        }
        let owner = span.read_u32(0);
        let degree = span.read_u32(4);
        if owner != expected {
            return Err(StoreError::ListMismatch {
                vertex: expected,
                detail: format!("list header names vertex {owner}"),
            });
        }
        if list_bytes(degree, attr_bytes) != span.len() as u64 {
            return Err(StoreError::ListMismatch {
                vertex: expected,
                detail: format!(
                    "header degree {degree} does not fit the {}-byte location",
                    span.len()
                ),
            });
        }
        Ok(EdgeList {
            owner,
            side,
            degree,
            attr_bytes,
            span,
        })
    }

    pub fn owner(&self) -> VertexId {
        self.owner
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    fn neighbor_span(&self) -> PageSpan<'a> {
        self.span
            .slice(LIST_HEADER_BYTES as usize, self.degree as usize * 4)
    }

    /// Neighbor IDs in ascending order.
    pub fn neighbors(&self) -> Neighbors<'a> {
        let mut chunks = self.neighbor_span().chunks();
        let current = chunks.next().unwrap_or(&[]);
        Neighbors {
            chunks,
            current,
            remaining: self.degree as usize,
        }
    }

    /// The `i`-th neighbor.
    pub fn neighbor(&self, i: usize) -> VertexId {
        assert!(i < self.degree as usize, "edge index out of range");
        self.span.read_u32(LIST_HEADER_BYTES as usize + i * 4)
    }

    /// Binary search over the neighbor IDs.
    pub fn contains(&self, v: VertexId) -> bool {
        let (mut lo, mut hi) = (0, self.degree as usize);
        while lo < hi {
            let mid = (lo + hi) / 2;
            match self.neighbor(mid).cmp(&v) {
                std::cmp::Ordering::Less => lo = mid + 1,
                std::cmp::Ordering::Greater => hi = mid,
                std::cmp::Ordering::Equal => return true,
            }
        }
        false
    }

    /// Appends all neighbor IDs to `out`.
    pub fn extend_neighbors(&self, out: &mut Vec<VertexId>) {
        self.neighbor_span().extend_u32s(out);
    }

    /// Raw attribute bytes of the `i`-th edge; `out` must be `attr_bytes` long.
    pub fn attr(&self, i: usize, out: &mut [u8]) {
        assert!(i < self.degree as usize, "edge index out of range");
        assert_eq!(out.len(), usize::from(self.attr_bytes));
        let base = LIST_HEADER_BYTES as usize + self.degree as usize * 4;
        self.span
            .copy_to(base + i * usize::from(self.attr_bytes), out);
    }
}

/// Iterator over the neighbor IDs of an [`EdgeList`].
pub struct Neighbors<'a> {
    chunks: Chunks<'a>,
    current: &'a [u8],
    remaining: usize,
}

impl Iterator for Neighbors<'_> {
    type Item = VertexId;

    fn next(&mut self) -> Option<VertexId> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if self.current.len() >= 4 {
            let (word, rest) = self.current.split_at(4);
            self.current = rest;
            return Some(u32::from_le_bytes(word.try_into().unwrap()));
        }
        // word straddles a page boundary
        let mut raw = [0u8; 4];
        let mut filled = 0;
        while filled < 4 {
            if self.current.is_empty() {
                self.current = self.chunks.next().expect("span shorter than its degree");
            }
            let take = (4 - filled).min(self.current.len());
            raw[filled..filled + take].copy_from_slice(&self.current[..take]);
            self.current = &self.current[take..];
            filled += take;
        }
        Some(u32::from_le_bytes(raw))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        (self.remaining, Some(self.remaining))
    }
}

impl ExactSizeIterator for Neighbors<'_> {}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::store::format::encode_list;
    use std::sync::Arc;

    #[test]
    fn neighbors_cross_page_boundaries() {
        let mut bytes = vec![0u8; 3];
        encode_list(
            &mut bytes,
            9,
            &[1, 5, 70000, 80000, 90000],
            &[10, 11, 12, 13, 14],
        );
        let pages: Vec<Arc<[u8]>> = bytes.chunks(7).map(Arc::from).collect();
        let span = PageSpan::new(&pages, 3, bytes.len() - 3);
        let list = EdgeList::parse(span, 9, Side::Out, 1).unwrap();
        assert_eq!(list.degree(), 5);
        assert_eq!(
            list.neighbors().collect::<Vec<_>>(),
            vec![1, 5, 70000, 80000, 90000]
        );
        let mut v = Vec::new();
        list.extend_neighbors(&mut v);
        assert_eq!(v, vec![1, 5, 70000, 80000, 90000]);
        let mut a = [0u8];
        list.attr(3, &mut a);
        assert_eq!(a, [13]);
    }

    #[test]
    fn header_mismatch_is_reported() {
        let mut bytes = Vec::new();
        encode_list(&mut bytes, 4, &[1, 2], &[]);
        let pages: Vec<Arc<[u8]>> = vec![Arc::from(bytes.as_slice())];
        let span = PageSpan::new(&pages, 0, bytes.len());
        assert!(matches!(
            EdgeList::parse(span, 5, Side::In, 0),
            Err(StoreError::ListMismatch { vertex: 5, .. })
        ));
        let short = PageSpan::new(&pages, 0, 12);
        assert!(EdgeList::parse(short, 4, Side::In, 0).is_err());
    }
}
