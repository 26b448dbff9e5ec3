use super::AlgoOutput;
use crate::engine::{
    Activation, Context, Engine, EngineError, MessageContext, ProgramError, VertexProgram,
};
use crate::scalar::Scalar;
use crate::store::{EdgeList, Side, VertexId};

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_MAX_ITERS: u32 = 30;
pub const DEFAULT_THRESHOLD: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrState<T> {
    pub rank: T,
    /// Delta received since the vertex last ran.
    pub pending: T,
}

/// Delta-propagating PageRank.
///
/// Ranks start at `1 - d`; in the first iteration every vertex pushes
/// `d * rank / out_degree` along its out-edges. Afterwards a vertex whose
/// accumulated delta reaches `threshold` folds it into its rank and pushes
/// `d * delta / out_degree`. Vertices without out-edges keep what they get.
#[derive(Debug, Clone, Copy)]
pub struct PageRank<T> {
    pub damping: T,
    pub max_iters: u32,
    pub threshold: T,
}

impl<T: Scalar> Default for PageRank<T> {
    fn default() -> Self {
        PageRank {
            damping: T::lit(DEFAULT_DAMPING),
            max_iters: DEFAULT_MAX_ITERS,
            threshold: T::lit(DEFAULT_THRESHOLD),
        }
    }
}

impl<T: Scalar> VertexProgram for PageRank<T> {
    type State = PrState<T>;
    type Message = T;
    /// Delta being pushed this iteration.
    type Scratch = T;

    fn init(&self, _v: VertexId) -> PrState<T> {
        PrState {
            rank: T::one() - self.damping,
            pending: T::zero(),
        }
    }

    fn run(
        &self,
        ctx: &mut Context<'_, T>,
        s: &mut PrState<T>,
        push: &mut T,
    ) -> Result<(), ProgramError> {
        if ctx.iteration() == 0 {
            *push = s.rank;
        } else {
            s.rank = s.rank + s.pending;
            *push = s.pending;
            s.pending = T::zero();
        }
        if ctx.degree(ctx.vertex_id(), Side::Out) > 0 {
            ctx.request_edges(ctx.vertex_id(), Side::Out)?;
        }
        Ok(())
    }

    fn run_on_vertex(
        &self,
        ctx: &mut Context<'_, T>,
        _: &mut PrState<T>,
        push: &mut T,
        edges: &EdgeList<'_>,
    ) -> Result<(), ProgramError> {
        let mut dests = Vec::with_capacity(edges.degree() as usize);
        edges.extend_neighbors(&mut dests);
        let share = self.damping * *push / T::count(u64::from(edges.degree()));
        ctx.multicast(&dests, share)
    }

    fn run_on_message(
        &self,
        ctx: &mut MessageContext<'_>,
        s: &mut PrState<T>,
        delta: &T,
    ) -> Result<(), ProgramError> {
        s.pending = s.pending + *delta;
        if s.pending >= self.threshold && ctx.iteration() + 1 < self.max_iters {
            ctx.activate(ctx.vertex_id())?;
        }
        Ok(())
    }
}

/// Runs [`PageRank`] and returns each vertex's rank including any delta
/// still pending when it stopped.
pub fn pagerank<T: Scalar>(
    engine: &Engine,
    params: PageRank<T>,
) -> Result<AlgoOutput<Vec<T>>, EngineError> {
    if !(params.damping > T::zero() && params.damping < T::one()) {
        return Err(EngineError::Config(format!(
            "damping {} outside (0, 1)",
            params.damping
        )));
    }
    if params.max_iters == 0 {
        let n = engine.graph().num_vertices() as usize;
        return Ok(AlgoOutput {
            result: vec![T::one() - params.damping; n],
            iterations: Vec::new(),
            io: Default::default(),
            trace: Vec::new(),
            executed_per_thread: Vec::new(),
        });
    }
    let out = engine.run(&params, Activation::All)?;
    Ok(AlgoOutput::from_run(out, |s| {
        s.into_iter().map(|s| s.rank + s.pending).collect()
    }))
}
