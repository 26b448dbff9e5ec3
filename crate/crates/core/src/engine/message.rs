use parking_lot::Mutex;

use super::partition::RangePartitioner;
use crate::store::VertexId;

/// Buffered messages per destination partition before they are handed over.
pub const FLUSH_THRESHOLD: usize = 4096;

#[derive(Debug)]
pub(crate) enum Dests {
    One(VertexId),
    Many(Vec<VertexId>),
}

/// One payload copy bound for one or more vertices of a single partition.
#[derive(Debug)]
pub(crate) struct Envelope<M> {
    pub src: VertexId,
    pub part: u32,
    pub seq: u32,
    pub dests: Dests,
    pub msg: M,
}

impl<M> Envelope<M> {
    pub fn fanout(&self) -> usize {
        match &self.dests {
            Dests::One(_) => 1,
            Dests::Many(d) => d.len(),
        }
    }
}

pub(crate) type Inbox<M> = Mutex<Vec<Envelope<M>>>;

/// A worker's outgoing buffers, one per destination partition.
#[derive(Debug)]
pub(crate) struct Outbox<M> {
    buffers: Vec<Vec<Envelope<M>>>,
    buffered: Vec<usize>,
    scratch: Vec<Vec<VertexId>>,
    pub sent: u64,
    pub copies: u64,
}

impl<M: Clone> Outbox<M> {
    pub fn new(partitions: usize) -> Self {
        Outbox {
            buffers: (0..partitions).map(|_| Vec::new()).collect(),
            buffered: vec![0; partitions],
            scratch: (0..partitions).map(|_| Vec::new()).collect(),
            sent: 0,
            copies: 0,
        }
    }

    fn push(&mut self, p: usize, env: Envelope<M>, inboxes: &[Inbox<M>]) {
        self.sent += env.fanout() as u64;
        self.copies += 1;
        self.buffered[p] += env.fanout();
        self.buffers[p].push(env);
        if self.buffered[p] >= FLUSH_THRESHOLD {
            self.flush_one(p, inboxes);
        }
    }

    pub fn send(
        &mut self,
        key: (VertexId, u32, u32),
        dest: VertexId,
        msg: M,
        parts: &RangePartitioner,
        inboxes: &[Inbox<M>],
    ) {
        let p = parts.partition(dest) as usize;
        let (src, part, seq) = key;
        self.push(
            p,
            Envelope {
                src,
                part,
                seq,
                dests: Dests::One(dest),
                msg,
            },
            inboxes,
        );
    }

    /// Splits `dests` by partition and buffers one payload copy per partition.
    pub fn multicast(
        &mut self,
        key: (VertexId, u32, u32),
        dests: &[VertexId],
        msg: &M,
        parts: &RangePartitioner,
        inboxes: &[Inbox<M>],
    ) {
        let (src, part, seq) = key;
        for &d in dests {
            self.scratch[parts.partition(d) as usize].push(d);
        }
        for p in 0..self.scratch.len() {
            match self.scratch[p].len() {
                0 => continue,
                1 => {
                    let d = self.scratch[p].pop().unwrap();
                    self.push(
                        p,
                        Envelope {
                            src,
                            part,
                            seq,
                            dests: Dests::One(d),
                            msg: msg.clone(),
                        },
                        inboxes,
                    );
                }
                _ => {
                    let many = std::mem::take(&mut self.scratch[p]);
                    self.push(
                        p,
                        Envelope {
                            src,
                            part,
                            seq,
                            dests: Dests::Many(many),
                            msg: msg.clone(),
                        },
                        inboxes,
                    );
                }
            }
        }
    }

    fn flush_one(&mut self, p: usize, inboxes: &[Inbox<M>]) {
        if self.buffers[p].is_empty() {
            return;
        }
        inboxes[p].lock().append(&mut self.buffers[p]);
        self.buffered[p] = 0;
    }

    pub fn flush(&mut self, inboxes: &[Inbox<M>]) {
        for p in 0..self.buffers.len() {
            self.flush_one(p, inboxes);
        }
    }
}

/// Expands an inbox into `(dest, envelope index)` pairs in delivery order:
/// by destination, then sender, part and per-sender sequence number.
pub(crate) fn delivery_order<M>(
    envelopes: &[Envelope<M>],
    buckets: usize,
    bucket: impl Fn(VertexId) -> usize,
) -> Vec<(VertexId, u32)> {
    let mut by_key: Vec<u32> = (0..envelopes.len() as u32).collect();
    by_key.sort_unstable_by_key(|&i| {
        let e = &envelopes[i as usize];
        (e.src, e.part, e.seq)
    });
    let each = |f: &mut dyn FnMut(VertexId, u32)| {
        for &i in &by_key {
            match &envelopes[i as usize].dests {
                Dests::One(d) => f(*d, i),
                Dests::Many(ds) => ds.iter().for_each(|&d| f(d, i)),
            }
        }
    };
    // counting sort by destination, stable in sender order
    let mut start = vec![0usize; buckets + 1];
    each(&mut |d, _| start[bucket(d) + 1] += 1);
    for b in 1..start.len() {
        start[b] += start[b - 1];
    }
    let mut order = vec![(0, 0); start[buckets]];
    each(&mut |d, i| {
        let slot = &mut start[bucket(d)];
        order[*slot] = (d, i);
        *slot += 1;
    });
    order
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multicast_keeps_one_copy_per_partition() {
        let parts = RangePartitioner::new(0, 2);
        let inboxes: Vec<Inbox<u8>> = (0..2).map(|_| Mutex::new(Vec::new())).collect();
        let mut out = Outbox::new(2);
        let dests: Vec<VertexId> = (0..10).collect();
        out.multicast((0, 0, 0), &dests, &7u8, &parts, &inboxes);
        out.flush(&inboxes);
        assert_eq!(out.copies, 2);
        assert_eq!(out.sent, 10);
        let total: usize = inboxes
            .iter()
            .map(|i| delivery_order(&i.lock(), 10, |d| d as usize).len())
            .sum();
        assert_eq!(total, 10);
    }

    #[test]
    fn buffers_flush_at_threshold() {
        let parts = RangePartitioner::new(0, 1);
        let inboxes: Vec<Inbox<u8>> = vec![Mutex::new(Vec::new())];
        let mut out = Outbox::new(1);
        for i in 0..FLUSH_THRESHOLD as u32 - 1 {
            out.send((0, 0, i), 1, 0, &parts, &inboxes);
        }
        assert!(inboxes[0].lock().is_empty());
        out.send((0, 0, 9999), 1, 0, &parts, &inboxes);
        assert_eq!(inboxes[0].lock().len(), FLUSH_THRESHOLD);
    }

    #[test]
    fn delivery_sorted_by_dest_then_sender() {
        let env = |src, seq, dests| Envelope {
            src,
            part: 0,
            seq,
            dests,
            msg: (),
        };
        let inbox = vec![
            env(5, 0, Dests::Many(vec![3, 1])),
            env(2, 1, Dests::One(3)),
            env(2, 0, Dests::One(3)),
        ];
        assert_eq!(
            delivery_order(&inbox, 4, |d| d as usize),
            vec![(1, 0), (3, 2), (3, 1), (3, 0)]
        );
    }
}
