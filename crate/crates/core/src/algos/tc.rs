use super::{common_above, request_both, sorted_dedup, AlgoOutput};
use crate::engine::{
    Activation, Context, Engine, EngineError, MessageContext, ProgramError, VertexProgram,
};
use crate::store::{EdgeList, VertexId};

/// Triangle counting on the undirected projection.
///
/// Vertex `u` finds each triangle `u < w < x` once by intersecting its
/// higher neighbors with the lists of those neighbors, then sends every
/// corner (itself included) the number of triangles it found for it.
/// With vertical parts, part `j` only reads lists of neighbors `w` in its
/// ID window.
#[derive(Debug, Clone, Copy)]
pub struct TriangleCount;

#[derive(Debug, Default)]
pub struct TcScratch {
    own_lists: u32,
    higher: Vec<VertexId>,
    outstanding: u32,
    found: Vec<(VertexId, VertexId)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriangleResult {
    /// Triangles incident to each vertex.
    pub per_vertex: Vec<u64>,
    pub total: u64,
}

impl TriangleCount {
    fn finish(ctx: &mut Context<'_, u64>, scratch: &mut TcScratch) -> Result<(), ProgramError> {
        let mut found = std::mem::take(&mut scratch.found);
        found.sort_unstable();
        found.dedup();
        if found.is_empty() {
            return Ok(());
        }
        ctx.send(ctx.vertex_id(), found.len() as u64)?;
        let mut corners: Vec<VertexId> = found.iter().flat_map(|&(w, x)| [w, x]).collect();
        corners.sort_unstable();
        for run in corners.chunk_by(|a, b| a == b) {
            ctx.send(run[0], run.len() as u64)?;
        }
        Ok(())
    }
}

impl VertexProgram for TriangleCount {
    type State = u64;
    type Message = u64;
    type Scratch = TcScratch;

    fn init(&self, _v: VertexId) -> u64 {
        0
    }

    fn run(
        &self,
        ctx: &mut Context<'_, u64>,
        _: &mut u64,
        scratch: &mut TcScratch,
    ) -> Result<(), ProgramError> {
        scratch.own_lists = request_both(ctx, ctx.vertex_id())?;
        Ok(())
    }

    fn run_on_vertex(
        &self,
        ctx: &mut Context<'_, u64>,
        _: &mut u64,
        scratch: &mut TcScratch,
        edges: &EdgeList<'_>,
    ) -> Result<(), ProgramError> {
        let u = ctx.vertex_id();
        if edges.owner() == u {
            scratch.higher.extend(edges.neighbors().filter(|&w| w > u));
            scratch.own_lists -= 1;
            if scratch.own_lists > 0 {
                return Ok(());
            }
            sorted_dedup(&mut scratch.higher);
            let (lo, hi) = ctx.part_window();
            // the largest higher neighbor cannot close a triangle as the middle corner
            let candidates = scratch.higher.len().saturating_sub(1);
            for i in 0..candidates {
                let w = scratch.higher[i];
                if (lo..hi).contains(&u64::from(w)) {
                    scratch.outstanding += request_both(ctx, w)?;
                }
            }
        } else {
            let w = edges.owner();
            common_above(edges, &scratch.higher, |x| scratch.found.push((w, x)));
            scratch.outstanding -= 1;
        }
        if scratch.outstanding == 0 {
            Self::finish(ctx, scratch)?;
        }
        Ok(())
    }

    fn run_on_message(
        &self,
        _ctx: &mut MessageContext<'_>,
        count: &mut u64,
        msg: &u64,
    ) -> Result<(), ProgramError> {
        *count += msg;
        Ok(())
    }

    fn supports_vertical_parts(&self) -> bool {
        true
    }
}

pub fn triangle_count(engine: &Engine) -> Result<AlgoOutput<TriangleResult>, EngineError> {
    let out = engine.run(&TriangleCount, Activation::All)?;
    Ok(AlgoOutput::from_run(out, |per_vertex| {
        let total = per_vertex.iter().sum::<u64>() / 3;
        TriangleResult { per_vertex, total }
    }))
}
