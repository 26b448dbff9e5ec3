use super::{request_both, AlgoOutput};
use crate::engine::{
    Activation, Context, Engine, EngineError, MessageContext, ProgramError, VertexProgram,
};
use crate::store::{EdgeList, VertexId};

/// Weakly connected components by min-label propagation.
#[derive(Debug, Clone, Copy)]
pub struct Wcc;

impl VertexProgram for Wcc {
    type State = VertexId;
    type Message = VertexId;
    type Scratch = ();

    fn init(&self, v: VertexId) -> VertexId {
        v
    }

    fn run(
        &self,
        ctx: &mut Context<'_, VertexId>,
        _: &mut VertexId,
        _: &mut (),
    ) -> Result<(), ProgramError> {
        request_both(ctx, ctx.vertex_id()).map(|_| ())
    }

    fn run_on_vertex(
        &self,
        ctx: &mut Context<'_, VertexId>,
        label: &mut VertexId,
        _: &mut (),
        edges: &EdgeList<'_>,
    ) -> Result<(), ProgramError> {
        let mut dests = Vec::with_capacity(edges.degree() as usize);
        edges.extend_neighbors(&mut dests);
        dests.retain(|&u| u > *label);
        ctx.multicast(&dests, *label)
    }

    fn run_on_message(
        &self,
        ctx: &mut MessageContext<'_>,
        label: &mut VertexId,
        msg: &VertexId,
    ) -> Result<(), ProgramError> {
        if *msg < *label {
            *label = *msg;
            ctx.activate(ctx.vertex_id())?;
        }
        Ok(())
    }
}

/// Smallest vertex ID of each vertex's weakly connected component.
pub fn wcc(engine: &Engine) -> Result<AlgoOutput<Vec<VertexId>>, EngineError> {
    let out = engine.run(&Wcc, Activation::All)?;
    Ok(AlgoOutput::from_run(out, |s| s))
}
