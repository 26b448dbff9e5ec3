use parking_lot::Mutex;

use crate::store::VertexId;

/// Most vertices a thief takes from one victim at a time.
pub const STEAL_BATCH: usize = 64;

/// Active vertices of one partition for one phase. The owner takes from the
/// front, thieves from the back, so neither disturbs the other's ordering.
#[derive(Debug, Default)]
pub(crate) struct WorkQueue {
    inner: Mutex<Slice>,
}

#[derive(Debug, Default)]
struct Slice {
    items: Vec<VertexId>,
    lo: usize,
    hi: usize,
}

impl WorkQueue {
    pub fn reset(&self, items: Vec<VertexId>) {
        let hi = items.len();
        *self.inner.lock() = Slice { items, lo: 0, hi };
    }

    pub fn claim_front(&self, max: usize, out: &mut Vec<VertexId>) -> usize {
        let mut q = self.inner.lock();
        let take = max.min(q.hi - q.lo);
        let lo = q.lo;
        out.extend_from_slice(&q.items[lo..lo + take]);
        q.lo += take;
        take
    }

    pub fn steal_back(&self, max: usize, out: &mut Vec<VertexId>) -> usize {
        let mut q = self.inner.lock();
        let take = max.min(STEAL_BATCH).min(q.hi - q.lo);
        let hi = q.hi;
        out.extend_from_slice(&q.items[hi - take..hi]);
        q.hi -= take;
        take
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn owner_and_thief_never_overlap() {
        let q = WorkQueue::default();
        q.reset((0..200).collect());
        let mut owner = Vec::new();
        let mut thief = Vec::new();
        assert_eq!(q.claim_front(10, &mut owner), 10);
        assert_eq!(q.steal_back(1000, &mut thief), STEAL_BATCH);
        while q.claim_front(7, &mut owner) > 0 {}
        assert_eq!(q.steal_back(5, &mut thief), 0);
        assert_eq!(owner, (0..136).collect::<Vec<_>>());
        assert_eq!(thief, (136..200).collect::<Vec<_>>());
    }
}
