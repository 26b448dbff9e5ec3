use super::AlgoOutput;
use crate::engine::{
    Activation, Context, Engine, EngineError, MaxReducer, MessageContext, ProgramError,
    VertexProgram,
};
use crate::scalar::Scalar;
use crate::store::{EdgeList, Side, VertexId};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BcState<T> {
    /// Hop distance from the source, `None` while unreached.
    pub depth: Option<u32>,
    /// Number of shortest paths from the source.
    pub sigma: u64,
    /// Dependency of the source on this vertex.
    pub delta: T,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BcMessage<T> {
    /// Path count pushed along an out-edge.
    Forward(u64),
    /// `(1 + delta) / sigma` of a vertex at `depth`, pushed to its predecessors.
    Backward { depth: u32, value: T },
}

/// Single-source betweenness dependencies (Brandes).
///
/// The forward phase is a BFS that sums path counts. Once an iteration
/// reaches no new vertex, the backward phase visits depths from the deepest
/// up, one depth per iteration. Reached vertices stay active while they
/// wait for their turn.
#[derive(Debug)]
pub struct Betweenness<T> {
    source: VertexId,
    max_depth: MaxReducer<u32>,
    _scalar: std::marker::PhantomData<T>,
}

impl<T: Scalar> Betweenness<T> {
    pub fn new(source: VertexId) -> Self {
        Betweenness {
            source,
            max_depth: MaxReducer::new(),
            _scalar: std::marker::PhantomData,
        }
    }
}

impl<T: Scalar> VertexProgram for Betweenness<T> {
    type State = BcState<T>;
    type Message = BcMessage<T>;
    type Scratch = ();

    fn init(&self, v: VertexId) -> BcState<T> {
        let source = v == self.source;
        BcState {
            depth: source.then_some(0),
            sigma: u64::from(source),
            delta: T::zero(),
        }
    }

    fn run(
        &self,
        ctx: &mut Context<'_, BcMessage<T>>,
        s: &mut BcState<T>,
        _: &mut (),
    ) -> Result<(), ProgramError> {
        let Some(depth) = s.depth else { return Ok(()) };
        let k = ctx.iteration();
        let v = ctx.vertex_id();
        if depth == k {
            ctx.request_edges(v, Side::Out)?;
        }
        if depth == 0 {
            return Ok(());
        }
        let deepest = self.max_depth.get().map_or(0, |m| m.0);
        if deepest >= k {
            // forward phase still running
            ctx.activate(v)?;
            return Ok(());
        }
        let turn = deepest + 1 + (deepest - depth);
        if k == turn {
            if ctx.is_directed() {
                ctx.request_edges(v, Side::In)?;
            } else {
                ctx.request_edges(v, Side::Out)?;
            }
        } else {
            ctx.activate(v)?;
        }
        Ok(())
    }

    fn run_on_vertex(
        &self,
        ctx: &mut Context<'_, BcMessage<T>>,
        s: &mut BcState<T>,
        _: &mut (),
        edges: &EdgeList<'_>,
    ) -> Result<(), ProgramError> {
        let mut dests = Vec::with_capacity(edges.degree() as usize);
        edges.extend_neighbors(&mut dests);
        let depth = s.depth.expect("only reached vertices read lists");
        if depth == ctx.iteration() {
            ctx.multicast(&dests, BcMessage::Forward(s.sigma))
        } else {
            let value = (T::one() + s.delta) / T::count(s.sigma);
            ctx.multicast(&dests, BcMessage::Backward { depth, value })
        }
    }

    fn run_on_message(
        &self,
        ctx: &mut MessageContext<'_>,
        s: &mut BcState<T>,
        msg: &BcMessage<T>,
    ) -> Result<(), ProgramError> {
        match *msg {
            BcMessage::Forward(sigma) => {
                let next = ctx.iteration() + 1;
                match s.depth {
                    None => {
                        s.depth = Some(next);
                        s.sigma = sigma;
                        // visible to every vertex once delivery is over
                        self.max_depth.offer(next, ctx.vertex_id());
                        ctx.activate(ctx.vertex_id())?;
                    }
                    Some(d) if d == next => {
                        s.sigma = s.sigma.checked_add(sigma).ok_or_else(|| {
                            ProgramError::Failed(format!(
                                "shortest-path count of vertex {} overflows",
                                ctx.vertex_id()
                            ))
                        })?;
                    }
                    Some(_) => {}
                }
            }
            BcMessage::Backward { depth, value } => {
                if s.depth.is_some_and(|d| d > 0 && d + 1 == depth) {
                    s.delta = s.delta + T::count(s.sigma) * value;
                }
            }
        }
        Ok(())
    }
}

/// Dependency of `source` on every vertex; the source itself reports 0.
pub fn betweenness<T: Scalar>(
    engine: &Engine,
    source: VertexId,
) -> Result<AlgoOutput<Vec<T>>, EngineError> {
    let out = engine.run(
        &Betweenness::<T>::new(source),
        Activation::Vertices(vec![source]),
    )?;
    Ok(AlgoOutput::from_run(out, |s| {
        s.into_iter().map(|s| s.delta).collect()
    }))
}
