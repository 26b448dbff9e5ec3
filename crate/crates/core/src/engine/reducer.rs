use parking_lot::Mutex;

use crate::store::VertexId;

/// Running maximum of `(value, vertex)` shared by all workers. Ties go to
/// the smaller vertex ID so the result does not depend on execution order.
#[derive(Debug, Default)]
pub struct MaxReducer<T> {
    best: Mutex<Option<(T, VertexId)>>,
}

impl<T: PartialOrd + Copy> MaxReducer<T> {
    pub fn new() -> Self {
        MaxReducer {
            best: Mutex::new(None),
        }
    }

    /// Returns true if the offer became the new maximum.
    pub fn offer(&self, value: T, vertex: VertexId) -> bool {
        let mut best = self.best.lock();
        let better = match *best {
            None => true,
            Some((b, bv)) => value > b || (value == b && vertex < bv),
        };
        if better {
            *best = Some((value, vertex));
        }
        better
    }

    pub fn get(&self) -> Option<(T, VertexId)> {
        *self.best.lock()
    }
}
