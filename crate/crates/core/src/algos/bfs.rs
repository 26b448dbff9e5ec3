use super::AlgoOutput;
use crate::engine::{Activation, Context, Engine, EngineError, ProgramError, VertexProgram};
use crate::store::{EdgeList, Side, VertexId};

/// Breadth-first search over out-edges. A vertex's level is the iteration
/// in which it first runs.
#[derive(Debug, Clone, Copy)]
pub struct Bfs;

impl VertexProgram for Bfs {
    type State = Option<u32>;
    type Message = ();
    type Scratch = ();

    fn init(&self, _v: VertexId) -> Option<u32> {
        None
    }

    fn run(
        &self,
        ctx: &mut Context<'_, ()>,
        level: &mut Option<u32>,
        _: &mut (),
    ) -> Result<(), ProgramError> {
        if level.is_none() {
            *level = Some(ctx.iteration());
            ctx.request_edges(ctx.vertex_id(), Side::Out)?;
        }
        Ok(())
    }

    fn run_on_vertex(
        &self,
        ctx: &mut Context<'_, ()>,
        _: &mut Option<u32>,
        _: &mut (),
        edges: &EdgeList<'_>,
    ) -> Result<(), ProgramError> {
        for u in edges.neighbors() {
            ctx.activate(u)?;
        }
        Ok(())
    }
}

/// Hop distance from `source` along out-edges; `None` if unreachable.
pub fn bfs(engine: &Engine, source: VertexId) -> Result<AlgoOutput<Vec<Option<u32>>>, EngineError> {
    let out = engine.run(&Bfs, Activation::Vertices(vec![source]))?;
    Ok(AlgoOutput::from_run(out, |s| s))
}
