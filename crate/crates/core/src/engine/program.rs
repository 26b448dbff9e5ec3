use super::bitmap::AtomicBitmap;
use super::message::{Inbox, Outbox};
use super::partition::{part_window, RangePartitioner};
use super::Schedule;
use crate::pagecache::IoRequest;
use crate::store::{EdgeList, GraphIndex, Side, VertexId};

/// Error returned by a vertex-program hook.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProgramError {
    /// The program asked the engine for something the contract forbids.
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("{0}")]
    Failed(String),
}

/// A vertex-centric algorithm.
///
/// Every iteration the engine calls [`run`](Self::run) once for each active
/// vertex (once per vertex part when vertical partitioning is on). Edge
/// lists are only reachable by requesting them from `run` or
/// `run_on_vertex`; each granted request comes back as one
/// [`run_on_vertex`](Self::run_on_vertex) call. Messages are delivered
/// between iterations, inactive destinations included.
pub trait VertexProgram: Sync {
    type State: Send;
    type Message: Clone + Send;
    /// Per-vertex working memory that lives while the vertex is running.
    type Scratch: Default + Send;

    fn init(&self, v: VertexId) -> Self::State;

    fn run(
        &self,
        ctx: &mut Context<'_, Self::Message>,
        state: &mut Self::State,
        scratch: &mut Self::Scratch,
    ) -> Result<(), ProgramError>;

    fn run_on_vertex(
        &self,
        _ctx: &mut Context<'_, Self::Message>,
        _state: &mut Self::State,
        _scratch: &mut Self::Scratch,
        _edges: &EdgeList<'_>,
    ) -> Result<(), ProgramError> {
        Ok(())
    }

    fn run_on_message(
        &self,
        _ctx: &mut MessageContext<'_>,
        _state: &mut Self::State,
        _msg: &Self::Message,
    ) -> Result<(), ProgramError> {
        Ok(())
    }

    /// Runs after message delivery for vertices that asked for it during the iteration.
    fn run_on_iteration_end(
        &self,
        _ctx: &mut Context<'_, Self::Message>,
        _state: &mut Self::State,
    ) -> Result<(), ProgramError> {
        Ok(())
    }

    /// Whether `run` understands [`Context::part`]. Programs that return
    /// false always execute unpartitioned.
    fn supports_vertical_parts(&self) -> bool {
        false
    }

    /// Overrides the engine's configured scan order.
    fn schedule(&self) -> Option<Schedule> {
        None
    }

    /// Caps the running window below the engine's setting. Programs that
    /// decide whether to work from what earlier vertices found want a
    /// small window.
    fn max_running(&self) -> Option<u32> {
        None
    }
}

/// Engine state shared by every hook invocation of one run.
pub(crate) struct Core<'g> {
    pub index: &'g GraphIndex,
    pub partitioner: RangePartitioner,
    pub num_vertices: u64,
    pub parts: u32,
    pub next: &'g AtomicBitmap,
}

impl Core<'_> {
    fn activate(&self, v: VertexId) -> Result<(), ProgramError> {
        if u64::from(v) >= self.num_vertices {
            return Err(ProgramError::Contract(format!(
                "activation of vertex {v} outside the graph"
            )));
        }
        self.next.insert(v);
        Ok(())
    }
}

pub(crate) struct IoSink<'a> {
    pub requests: &'a mut Vec<IoRequest<usize>>,
    pub slot: usize,
    pub pending: &'a mut u32,
}

/// Handle passed to `run`, `run_on_vertex` and `run_on_iteration_end`.
pub struct Context<'a, M> {
    pub(crate) vertex: VertexId,
    pub(crate) part: u32,
    pub(crate) iteration: u32,
    pub(crate) seq: u32,
    pub(crate) core: &'a Core<'a>,
    pub(crate) inboxes: &'a [Inbox<M>],
    pub(crate) out: &'a mut Outbox<M>,
    pub(crate) iteration_end: &'a mut Vec<VertexId>,
    pub(crate) io: Option<IoSink<'a>>,
}

impl<M: Clone> Context<'_, M> {
    pub fn vertex_id(&self) -> VertexId {
        self.vertex
    }

    /// Vertical part being executed, `0` when unpartitioned.
    pub fn part(&self) -> u32 {
        self.part
    }

    pub fn num_parts(&self) -> u32 {
        self.core.parts
    }

    /// Neighbor-ID range this part may request lists from.
    pub fn part_window(&self) -> (u64, u64) {
        part_window(self.core.num_vertices, self.part, self.core.parts)
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn num_vertices(&self) -> u64 {
        self.core.num_vertices
    }

    pub fn is_directed(&self) -> bool {
        self.core.index.is_directed()
    }

    /// Degree of any vertex, answered from the in-memory index.
    pub fn degree(&self, v: VertexId, side: Side) -> u32 {
        self.core.index.degree(v, side)
    }

    /// Asks for `v`'s edge list; it arrives later through `run_on_vertex`.
    pub fn request_edges(&mut self, v: VertexId, side: Side) -> Result<(), ProgramError> {
        let Some(io) = self.io.as_mut() else {
            return Err(ProgramError::Contract(
                "edge lists can only be requested from run or run_on_vertex".into(),
            ));
        };
        if u64::from(v) >= self.core.num_vertices {
            return Err(ProgramError::Contract(format!(
                "edge list of vertex {v} outside the graph"
            )));
        }
        if v != self.vertex && self.core.parts > 1 {
            let (lo, hi) = part_window(self.core.num_vertices, self.part, self.core.parts);
            if !(lo..hi).contains(&u64::from(v)) {
                return Err(ProgramError::Contract(format!(
                    "part {} of vertex {} requested vertex {v} outside its window [{lo}, {hi})",
                    self.part, self.vertex
                )));
            }
        }
        let loc = self.core.index.locate(v, side);
        io.requests.push(IoRequest {
            target: v,
            side,
            offset: loc.offset,
            len: loc.len,
            task: io.slot,
        });
        *io.pending += 1;
        Ok(())
    }

    pub fn send(&mut self, dest: VertexId, msg: M) -> Result<(), ProgramError> {
        if u64::from(dest) >= self.core.num_vertices {
            return Err(ProgramError::Contract(format!(
                "message to vertex {dest} outside the graph"
            )));
        }
        let key = (self.vertex, self.part, self.seq);
        self.seq += 1;
        self.out
            .send(key, dest, msg, &self.core.partitioner, self.inboxes);
        Ok(())
    }

    /// Sends one message to many vertices; the payload is copied once per
    /// destination partition.
    pub fn multicast(&mut self, dests: &[VertexId], msg: M) -> Result<(), ProgramError> {
        if let Some(&bad) = dests
            .iter()
            .find(|&&d| u64::from(d) >= self.core.num_vertices)
        {
            return Err(ProgramError::Contract(format!(
                "message to vertex {bad} outside the graph"
            )));
        }
        if dests.is_empty() {
            return Ok(());
        }
        let key = (self.vertex, self.part, self.seq);
        self.seq += 1;
        self.out
            .multicast(key, dests, &msg, &self.core.partitioner, self.inboxes);
        Ok(())
    }

    /// Schedules `v` for the next iteration.
    pub fn activate(&mut self, v: VertexId) -> Result<(), ProgramError> {
        self.core.activate(v)
    }

    /// Asks for `run_on_iteration_end` on this vertex after this iteration's delivery.
    pub fn request_iteration_end(&mut self) {
        self.iteration_end.push(self.vertex);
    }
}

/// Handle passed to `run_on_message`. It can activate vertices but not send.
pub struct MessageContext<'a> {
    pub(crate) vertex: VertexId,
    pub(crate) iteration: u32,
    pub(crate) core: &'a Core<'a>,
    pub(crate) iteration_end: &'a mut Vec<VertexId>,
}

impl MessageContext<'_> {
    pub fn vertex_id(&self) -> VertexId {
        self.vertex
    }

    pub fn iteration(&self) -> u32 {
        self.iteration
    }

    pub fn degree(&self, v: VertexId, side: Side) -> u32 {
        self.core.index.degree(v, side)
    }

    pub fn activate(&mut self, v: VertexId) -> Result<(), ProgramError> {
        self.core.activate(v)
    }

    pub fn request_iteration_end(&mut self) {
        self.iteration_end.push(self.vertex);
    }
}
