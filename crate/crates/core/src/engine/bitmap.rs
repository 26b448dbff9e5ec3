use std::sync::atomic::{AtomicU64, Ordering};

use crate::store::VertexId;

/// Fixed-size set of vertex IDs that many threads may insert into at once.
#[derive(Debug)]
pub(crate) struct AtomicBitmap {
    words: Box<[AtomicU64]>,
}

impl AtomicBitmap {
    pub fn new(bits: u64) -> Self {
        AtomicBitmap {
            words: (0..bits.div_ceil(64)).map(|_| AtomicU64::new(0)).collect(),
        }
    }

    #[inline]
    pub fn insert(&self, v: VertexId) {
        let v = v as usize;
        self.words[v / 64].fetch_or(1 << (v % 64), Ordering::Relaxed);
    }

    pub fn fill(&self, bits: u64) {
        for (i, w) in self.words.iter().enumerate() {
            let lo = i as u64 * 64;
            let n = bits.saturating_sub(lo).min(64);
            w.store(
                if n == 64 { u64::MAX } else { (1u64 << n) - 1 },
                Ordering::Relaxed,
            );
        }
    }

    /// Removes and returns every member in ascending order.
    pub fn drain(&self) -> Vec<VertexId> {
        let mut out = Vec::new();
        for (i, w) in self.words.iter().enumerate() {
            let mut bits = w.swap(0, Ordering::Relaxed);
            while bits != 0 {
                out.push((i * 64) as VertexId + bits.trailing_zeros());
                bits &= bits - 1;
            }
        }
        out
    }
}
