use std::sync::Arc;

/// Zero-copy view of a byte range spread over consecutive cached pages.
#[derive(Clone, Copy)]
pub struct PageSpan<'a> {
    pages: &'a [Arc<[u8]>],
    start: usize,
    len: usize,
}

impl std::fmt::Debug for PageSpan<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PageSpan")
            .field("pages", &self.pages.len())
            .field("start", &self.start)
            .field("len", &self.len)
            .finish()
    }
}

impl<'a> PageSpan<'a> {
    /// `start` is the offset of the range inside the first page.
    pub fn new(pages: &'a [Arc<[u8]>], start: usize, len: usize) -> Self {
        debug_assert!(pages.iter().map(|p| p.len()).sum::<usize>() >= start + len);
        PageSpan { pages, start, len }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Contiguous pieces of the range, in order.
    pub fn chunks(&self) -> Chunks<'a> {
        Chunks {
            pages: self.pages,
            skip: self.start,
            remaining: self.len,
        }
    }

    /// Copies `out.len()` bytes starting at `pos` within the range.
    pub fn copy_to(&self, pos: usize, out: &mut [u8]) {
        assert!(pos + out.len() <= self.len, "read past end of span");
        let mut abs = self.start + pos;
        let mut written = 0;
        for page in self.pages {
            if written == out.len() {
                break;
            }
            if abs >= page.len() {
                abs -= page.len();
                continue;
            }
            let take = (page.len() - abs).min(out.len() - written);
            out[written..written + take].copy_from_slice(&page[abs..abs + take]);
            written += take;
            abs = 0;
        }
    }

    pub fn read_u32(&self, pos: usize) -> u32 {
        let mut raw = [0u8; 4];
        self.copy_to(pos, &mut raw);
        u32::from_le_bytes(raw)
    }

    /// Sub-range `[pos, pos + len)` of this span.
    pub fn slice(&self, pos: usize, len: usize) -> PageSpan<'a> {
        assert!(pos + len <= self.len, "slice past end of span");
        let mut start = self.start + pos;
        let mut pages = self.pages;
        while let Some(first) = pages.first() {
            if start < first.len() || pages.len() == 1 {
                break;
            }
            start -= first.len();
            pages = &pages[1..];
        }
        PageSpan { pages, start, len }
    }

    /// Appends the range decoded as little-endian `u32`s.
    pub fn extend_u32s(&self, out: &mut Vec<u32>) {
        debug_assert_eq!(self.len % 4, 0);
        out.reserve(self.len / 4);
        let mut carry = [0u8; 4];
        let mut carried = 0;
        for mut chunk in self.chunks() {
            if carried > 0 {
                let need = (4 - carried).min(chunk.len());
                carry[carried..carried + need].copy_from_slice(&chunk[..need]);
                carried += need;
                chunk = &chunk[need..];
                if carried < 4 {
                    continue;
                }
                out.push(u32::from_le_bytes(carry));
            }
            let mut words = chunk.chunks_exact(4);
            out.extend(
                words
                    .by_ref()
                    .map(|w| u32::from_le_bytes(w.try_into().unwrap())),
            );
            let rest = words.remainder();
            carry[..rest.len()].copy_from_slice(rest);
            carried = rest.len();
        }
    }

    pub fn to_vec(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.len);
        for chunk in self.chunks() {
            out.extend_from_slice(chunk);
        }
        out
    }
}

/// Iterator over the contiguous pieces of a [`PageSpan`].
#[derive(Debug, Clone)]
pub struct Chunks<'a> {
    pages: &'a [Arc<[u8]>],
    skip: usize,
    remaining: usize,
}

impl<'a> Iterator for Chunks<'a> {
    type Item = &'a [u8];

    fn next(&mut self) -> Option<&'a [u8]> {
        while self.remaining > 0 {
            let (page, rest) = self.pages.split_first()?;
            self.pages = rest;
            let from = self.skip.min(page.len());
            self.skip -= from;
            let take = (page.len() - from).min(self.remaining);
            if take > 0 {
                self.remaining -= take;
                return Some(&page[from..from + take]);
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn pages(bytes: &[u8], page: usize) -> Vec<Arc<[u8]>> {
        bytes.chunks(page).map(Arc::from).collect()
    }

    #[test]
    fn u32_straddling_a_page_boundary() {
        let bytes: Vec<u8> = (0u32..8).flat_map(|v| v.to_le_bytes()).collect();
        let p = pages(&bytes[2..], 5);
        let span = PageSpan::new(&p, 2, 24);
        let mut out = Vec::new();
        span.extend_u32s(&mut out);
        assert_eq!(out, vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(span.read_u32(4), 2);
    }

    proptest! {
        #[test]
        fn span_views_match_flat_bytes(
            data in prop::collection::vec(any::<u8>(), 1..400),
            page in 1usize..64,
            a in 0usize..400,
            b in 0usize..400,
        ) {
            let (a, b) = (a % data.len(), b % data.len());
            let (lo, hi) = (a.min(b), a.max(b));
            let p = pages(&data, page);
            let first = lo / page;
            let span = PageSpan::new(&p[first..], lo - first * page, hi - lo);
            prop_assert_eq!(span.to_vec(), data[lo..hi].to_vec());
            if hi > lo {
                let mid = (hi - lo) / 2;
                let sub = span.slice(mid, hi - lo - mid);
                prop_assert_eq!(sub.to_vec(), data[lo + mid..hi].to_vec());
                let mut one = [0u8; 1];
                span.copy_to(mid, &mut one);
                prop_assert_eq!(one[0], data[lo + mid]);
            }
            let words = (hi - lo) / 4;
            let mut out = Vec::new();
            span.slice(0, words * 4).extend_u32s(&mut out);
            let expected: Vec<u32> = data[lo..lo + words * 4]
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                .collect();
            prop_assert_eq!(out, expected);
        }
    }
}
