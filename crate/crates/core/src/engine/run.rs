use std::sync::atomic::{AtomicBool, Ordering};
use std::time::Instant;

use parking_lot::Mutex;

use super::bitmap::AtomicBitmap;
use super::message::{delivery_order, Inbox, Outbox};
use super::partition::RangePartitioner;
use super::program::{Context, Core, IoSink, MessageContext, VertexProgram};
use super::queue::WorkQueue;
use super::{EngineConfig, EngineError, IterationStats, TraceEvent};
use crate::pagecache::{IoRequest, IoStats, MergePolicy, PageCache};
use crate::store::{EdgeList, Graph, VertexId};

/// Vertices active in the first iteration.
#[derive(Debug, Clone)]
pub enum Activation {
    All,
    Vertices(Vec<VertexId>),
}

#[derive(Debug)]
pub struct RunOutput<S> {
    /// Final state of every vertex, indexed by vertex ID.
    pub states: Vec<S>,
    pub iterations: Vec<IterationStats>,
    /// Cache counters accumulated over this run.
    pub io: IoStats,
    pub trace: Vec<TraceEvent>,
    /// `run` calls executed by each worker.
    pub executed_per_thread: Vec<u64>,
    pub messages_sent: u64,
    pub messages_delivered: u64,
    /// Buffered payload copies; a multicast costs one per destination partition.
    pub payload_copies: u64,
    /// Largest running window seen on any worker.
    pub max_running_observed: usize,
}

/// A graph, its page cache and an execution configuration.
#[derive(Debug)]
pub struct Engine {
    graph: Graph,
    cache: PageCache,
    config: EngineConfig,
}

impl Engine {
    pub fn new(graph: Graph, config: EngineConfig) -> Result<Self, EngineError> {
        config.validate()?;
        let policy = if config.merging {
            MergePolicy {
                enabled: true,
                max_bytes: config.max_merge_bytes,
            }
        } else {
            MergePolicy::disabled()
        };
        let cache = PageCache::new(graph.source().clone(), config.cache, policy)
            .map_err(EngineError::Cache)?;
        Ok(Engine {
            graph,
            cache,
            config,
        })
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn cache(&self) -> &PageCache {
        &self.cache
    }

    pub fn config(&self) -> &EngineConfig {
        &self.config
    }

    /// Runs `program` until an iteration starts with no active vertex or
    /// `max_iterations` is reached.
    pub fn run<P: VertexProgram>(
        &self,
        program: &P,
        initial: Activation,
    ) -> Result<RunOutput<P::State>, EngineError> {
        if std::mem::size_of::<P::Message>() > self.config.max_message_bytes {
            return Err(EngineError::Contract(format!(
                "message type is {} bytes, limit is {}",
                std::mem::size_of::<P::Message>(),
                self.config.max_message_bytes
            )));
        }
        let n = self.graph.num_vertices();
        let threads = self.config.num_threads as usize;
        let partitioner = RangePartitioner::new(self.config.range_shift, self.config.num_threads);
        let parts = if program.supports_vertical_parts() {
            self.config.vertical_parts
        } else {
            1
        };
        let next = AtomicBitmap::new(n);
        match initial {
            Activation::All => next.fill(n),
            Activation::Vertices(vs) => {
                for v in vs {
                    if u64::from(v) >= n {
                        return Err(EngineError::Config(format!(
                            "initial vertex {v} outside the graph"
                        )));
                    }
                    next.insert(v);
                }
            }
        }
        let states = (0..threads as u32)
            .map(|p| {
                (0..partitioner.partition_len(p, n))
                    .map(|l| Mutex::new(program.init(partitioner.vertex_id(p, l))))
                    .collect()
            })
            .collect();
        let shared = Shared {
            program,
            core: Core {
                index: self.graph.index(),
                partitioner,
                num_vertices: n,
                parts,
                next: &next,
            },
            cache: &self.cache,
            attr_bytes: self.graph.header().attr_bytes,
            states,
            queues: (0..threads).map(|_| WorkQueue::default()).collect(),
            inboxes: (0..threads).map(|_| Mutex::new(Vec::new())).collect(),
            max_running: program.max_running().map_or(self.config.max_running, |m| {
                m.clamp(1, self.config.max_running)
            }) as usize,
            stealing: self.config.work_stealing,
            trace: self.config.trace,
            abort: AtomicBool::new(false),
            error: Mutex::new(None),
        };
        let mut workers: Vec<Worker<P::Message>> =
            (0..threads).map(|_| Worker::new(threads)).collect();
        let schedule = program
            .schedule()
            .unwrap_or_else(|| self.config.schedule.clone());
        let io_start = self.cache.stats();
        let mut iterations = Vec::new();
        let mut delivered_total = 0;

        for iteration in 0.. {
            if self.config.max_iterations.is_some_and(|m| iteration >= m) {
                break;
            }
            let active = next.drain();
            if active.is_empty() {
                break;
            }
            let started = Instant::now();
            let io_before = self.cache.stats();
            let steals_before: u64 = workers.iter().map(|w| w.steals).sum();
            let delivered_before: u64 = workers.iter().map(|w| w.delivered).sum();

            let mut lists: Vec<Vec<VertexId>> = vec![Vec::new(); threads];
            for &v in &active {
                lists[partitioner.partition(v) as usize].push(v);
            }
            for (p, list) in lists.iter_mut().enumerate() {
                schedule.apply(iteration, p as u32, list);
            }
            for part in 0..parts {
                // part j of a partition's vertices is queued j partitions further on
                for (p, list) in lists.iter().enumerate() {
                    shared.queues[(p + part as usize) % threads].reset(list.clone());
                }
                shared.parallel(&mut workers, |t, w| shared.run_phase(t, w, part, iteration));
                shared.check()?;
            }
            shared.parallel(&mut workers, |t, w| shared.deliver(t, w, iteration));
            shared.check()?;

            let mut ending: Vec<VertexId> = workers
                .iter_mut()
                .flat_map(|w| w.iteration_end.drain(..))
                .collect();
            if !ending.is_empty() {
                ending.sort_unstable();
                ending.dedup();
                let mut by_owner: Vec<Vec<VertexId>> = vec![Vec::new(); threads];
                for v in ending {
                    by_owner[partitioner.partition(v) as usize].push(v);
                }
                shared.parallel(&mut workers, |t, w| {
                    shared.iteration_end(t, w, &by_owner[t], iteration)
                });
                shared.check()?;
                shared.parallel(&mut workers, |t, w| shared.deliver(t, w, iteration));
                shared.check()?;
            }

            let io = self.cache.stats().since(&io_before);
            let delivered: u64 =
                workers.iter().map(|w| w.delivered).sum::<u64>() - delivered_before;
            delivered_total += delivered;
            iterations.push(IterationStats {
                iteration,
                active_count: active.len() as u64,
                msgs: delivered,
                bytes_read: io.bytes_read,
                issued_requests: io.requests_issued_to_file,
                steals: workers.iter().map(|w| w.steals).sum::<u64>() - steals_before,
                wall_ms: started.elapsed().as_secs_f64() * 1e3,
                cache_hits: io.cache_hits,
                cache_misses: io.cache_misses,
            });
        }

        let Shared { states, .. } = shared;
        let mut slots: Vec<Option<P::State>> = (0..n).map(|_| None).collect();
        for (p, local) in states.into_iter().enumerate() {
            for (l, s) in local.into_iter().enumerate() {
                slots[partitioner.vertex_id(p as u32, l) as usize] = Some(s.into_inner());
            }
        }
        let mut trace: Vec<TraceEvent> =
            workers.iter_mut().flat_map(|w| w.trace.drain(..)).collect();
        trace.sort_by_key(|e| (e.iteration, e.part, e.vertex));
        Ok(RunOutput {
            states: slots
                .into_iter()
                .map(|s| s.expect("every vertex has a state"))
                .collect(),
            iterations,
            io: self.cache.stats().since(&io_start),
            trace,
            executed_per_thread: workers.iter().map(|w| w.executed).collect(),
            messages_sent: workers.iter().map(|w| w.out.sent).sum(),
            messages_delivered: delivered_total,
            payload_copies: workers.iter().map(|w| w.out.copies).sum(),
            max_running_observed: workers.iter().map(|w| w.max_live).max().unwrap_or(0),
        })
    }
}

struct Worker<M> {
    out: Outbox<M>,
    iteration_end: Vec<VertexId>,
    trace: Vec<TraceEvent>,
    executed: u64,
    steals: u64,
    delivered: u64,
    max_live: usize,
}

impl<M: Clone> Worker<M> {
    fn new(partitions: usize) -> Self {
        Worker {
            out: Outbox::new(partitions),
            iteration_end: Vec::new(),
            trace: Vec::new(),
            executed: 0,
            steals: 0,
            delivered: 0,
            max_live: 0,
        }
    }
}

/// A vertex part in the running window.
struct Running<S> {
    vertex: VertexId,
    scratch: S,
    pending: u32,
    seq: u32,
}

struct Window<S> {
    slab: Vec<Option<Running<S>>>,
    free: Vec<usize>,
    live: usize,
}

impl<S> Window<S> {
    fn insert(&mut self, r: Running<S>) -> usize {
        self.live += 1;
        match self.free.pop() {
            Some(i) => {
                self.slab[i] = Some(r);
                i
            }
            None => {
                self.slab.push(Some(r));
                self.slab.len() - 1
            }
        }
    }

    fn retire_if_done(&mut self, slot: usize) {
        if self.slab[slot].as_ref().is_some_and(|r| r.pending == 0) {
            self.slab[slot] = None;
            self.free.push(slot);
            self.live -= 1;
        }
    }
}

struct Shared<'g, P: VertexProgram> {
    program: &'g P,
    core: Core<'g>,
    cache: &'g PageCache,
    attr_bytes: u16,
    states: Vec<Vec<Mutex<P::State>>>,
    queues: Vec<WorkQueue>,
    inboxes: Vec<Inbox<P::Message>>,
    max_running: usize,
    stealing: bool,
    trace: bool,
    abort: AtomicBool,
    error: Mutex<Option<EngineError>>,
}

impl<P: VertexProgram> Shared<'_, P> {
    #[inline]
    fn state(&self, v: VertexId) -> &Mutex<P::State> {
        let p = &self.core.partitioner;
        &self.states[p.partition(v) as usize][p.local_index(v)]
    }

    fn fail(&self, e: EngineError) {
        let mut slot = self.error.lock();
        if slot.is_none() {
            *slot = Some(e);
        }
        self.abort.store(true, Ordering::Relaxed);
    }

    fn check(&self) -> Result<(), EngineError> {
        match self.error.lock().take() {
            Some(e) => Err(e),
            None => Ok(()),
        }
    }

    /// Runs `f` once per worker, on its own thread unless there is only one.
    fn parallel<W: Send>(&self, workers: &mut [W], f: impl Fn(usize, &mut W) + Sync) {
        if workers.len() == 1 {
            f(0, &mut workers[0]);
            return;
        }
        let f = &f;
        std::thread::scope(|s| {
            for (t, w) in workers.iter_mut().enumerate() {
                s.spawn(move || f(t, w));
            }
        });
    }

    fn claim(&self, t: usize, room: usize, w: &mut Worker<P::Message>, out: &mut Vec<VertexId>) {
        if self.queues[t].claim_front(room, out) > 0 || !self.stealing {
            return;
        }
        let n = self.queues.len();
        for k in 1..n {
            let got = self.queues[(t + k) % n].steal_back(room, out);
            if got > 0 {
                w.steals += got as u64;
                return;
            }
        }
    }

    fn run_phase(&self, t: usize, w: &mut Worker<P::Message>, part: u32, iteration: u32) {
        let mut window: Window<P::Scratch> = Window {
            slab: Vec::new(),
            free: Vec::new(),
            live: 0,
        };
        let mut requests: Vec<IoRequest<usize>> = Vec::new();
        let mut claimed = Vec::new();
        while !self.abort.load(Ordering::Relaxed) {
            let room = self.max_running - window.live;
            claimed.clear();
            if room > 0 {
                self.claim(t, room, w, &mut claimed);
            }
            for &v in &claimed {
                w.executed += 1;
                if self.trace {
                    w.trace.push(TraceEvent {
                        iteration,
                        vertex: v,
                        part,
                        thread: t as u32,
                    });
                }
                let slot = window.insert(Running {
                    vertex: v,
                    scratch: P::Scratch::default(),
                    pending: 0,
                    seq: 0,
                });
                w.max_live = w.max_live.max(window.live);
                let r = window.slab[slot].as_mut().unwrap();
                let mut state = self.state(v).lock();
                let mut ctx = Context {
                    vertex: v,
                    part,
                    iteration,
                    seq: 0,
                    core: &self.core,
                    inboxes: &self.inboxes,
                    out: &mut w.out,
                    iteration_end: &mut w.iteration_end,
                    io: Some(IoSink {
                        requests: &mut requests,
                        slot,
                        pending: &mut r.pending,
                    }),
                };
                let res = self.program.run(&mut ctx, &mut state, &mut r.scratch);
                r.seq = ctx.seq;
                drop(state);
                if let Err(source) = res {
                    self.fail(EngineError::Program {
                        iteration,
                        vertex: v,
                        source,
                    });
                }
                window.retire_if_done(slot);
            }
            if requests.is_empty() {
                if claimed.is_empty() && window.live == 0 {
                    break;
                }
                continue;
            }
            let batch = std::mem::take(&mut requests);
            self.cache.submit_batch(batch, false, |req, res| {
                let slot = req.task;
                let r = window.slab[slot]
                    .as_mut()
                    .expect("completion for a retired vertex");
                r.pending -= 1;
                if !self.abort.load(Ordering::Relaxed) {
                    let outcome = res
                        .map_err(|source| EngineError::Io {
                            iteration,
                            vertex: req.target,
                            source,
                        })
                        .and_then(|span| {
                            EdgeList::parse(span, req.target, req.side, self.attr_bytes)
                                .map_err(|source| EngineError::Store { iteration, source })
                        })
                        .and_then(|edges| {
                            let mut state = self.state(r.vertex).lock();
                            let mut ctx = Context {
                                vertex: r.vertex,
                                part,
                                iteration,
                                seq: r.seq,
                                core: &self.core,
                                inboxes: &self.inboxes,
                                out: &mut w.out,
                                iteration_end: &mut w.iteration_end,
                                io: Some(IoSink {
                                    requests: &mut requests,
                                    slot,
                                    pending: &mut r.pending,
                                }),
                            };
                            let res = self.program.run_on_vertex(
                                &mut ctx,
                                &mut state,
                                &mut r.scratch,
                                &edges,
                            );
                            r.seq = ctx.seq;
                            res.map_err(|source| EngineError::Program {
                                iteration,
                                vertex: r.vertex,
                                source,
                            })
                        });
                    if let Err(e) = outcome {
                        self.fail(e);
                    }
                }
                window.retire_if_done(slot);
            });
        }
        w.out.flush(&self.inboxes);
    }

    fn deliver(&self, t: usize, w: &mut Worker<P::Message>, iteration: u32) {
        let envelopes = std::mem::take(&mut *self.inboxes[t].lock());
        let buckets = self
            .core
            .partitioner
            .partition_len(t as u32, self.core.num_vertices);
        let parts = &self.core.partitioner;
        for (dest, i) in delivery_order(&envelopes, buckets, |d| parts.local_index(d)) {
            if self.abort.load(Ordering::Relaxed) {
                return;
            }
            let mut state = self.state(dest).lock();
            let mut ctx = MessageContext {
                vertex: dest,
                iteration,
                core: &self.core,
                iteration_end: &mut w.iteration_end,
            };
            if let Err(source) =
                self.program
                    .run_on_message(&mut ctx, &mut state, &envelopes[i as usize].msg)
            {
                self.fail(EngineError::Program {
                    iteration,
                    vertex: dest,
                    source,
                });
            }
            w.delivered += 1;
        }
    }

    fn iteration_end(
        &self,
        _t: usize,
        w: &mut Worker<P::Message>,
        vertices: &[VertexId],
        iteration: u32,
    ) {
        for &v in vertices {
            if self.abort.load(Ordering::Relaxed) {
                break;
            }
            let mut state = self.state(v).lock();
            let mut ctx = Context {
                vertex: v,
                part: 0,
                iteration,
                seq: 0,
                core: &self.core,
                inboxes: &self.inboxes,
                out: &mut w.out,
                iteration_end: &mut w.iteration_end,
                io: None,
            };
            if let Err(source) = self.program.run_on_iteration_end(&mut ctx, &mut state) {
                self.fail(EngineError::Program {
                    iteration,
                    vertex: v,
                    source,
                });
            }
        }
        w.out.flush(&self.inboxes);
    }
}
