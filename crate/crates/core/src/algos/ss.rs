use std::cmp::Reverse;
use std::sync::Arc;

use super::{common_above, request_both, sorted_dedup, AlgoOutput};
use crate::engine::{
    Activation, Context, Engine, EngineError, MaxReducer, MessageContext, ProgramError, Schedule,
    VertexOrder, VertexProgram,
};
use crate::store::{EdgeList, GraphIndex, Side, VertexId};

/// Running window while pruning, so that maxima found by the first
/// vertices can skip the ones right behind them.
pub const PRUNING_WINDOW: u32 = 32;

/// Most edges a closed neighborhood of `degree` neighbors can hold.
pub fn upper_bound(degree: u64) -> u64 {
    degree + degree * degree.saturating_sub(1) / 2
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SsState {
    /// Edges in the closed neighborhood, `None` if the vertex was skipped.
    pub local: Option<u64>,
    partial: u64,
    parts_seen: u32,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScanResult {
    pub max: u64,
    /// Smallest vertex attaining `max`.
    pub argmax: VertexId,
    pub per_vertex: Vec<Option<u64>>,
}

/// Scans vertices by descending degree.
struct DegreeOrder {
    degrees: Arc<[u32]>,
}

impl VertexOrder for DegreeOrder {
    fn order(&self, _iteration: u32, vertices: &mut [VertexId]) {
        vertices.sort_by_key(|&v| (Reverse(self.degrees[v as usize]), v));
    }
}

/// Scan statistic: the largest number of edges in any vertex's closed
/// neighborhood on the undirected projection.
///
/// High-degree vertices go first so that a good maximum is known early;
/// a vertex whose degree bound cannot beat the current maximum (ties
/// broken towards the smaller ID) is skipped without reading any list.
pub struct ScanStatistics {
    degrees: Arc<[u32]>,
    best: MaxReducer<u64>,
    prune: bool,
}

#[derive(Debug, Default)]
pub struct SsScratch {
    own_lists: u32,
    neighbors: Vec<VertexId>,
    outstanding: u32,
    found: Vec<(VertexId, VertexId)>,
}

impl ScanStatistics {
    pub fn new(index: &GraphIndex, prune: bool) -> Self {
        let degrees = (0..index.num_vertices() as VertexId)
            .map(|v| {
                let out = index.degree(v, Side::Out);
                if index.is_directed() {
                    out.saturating_add(index.degree(v, Side::In))
                } else {
                    out
                }
            })
            .collect();
        ScanStatistics {
            degrees,
            best: MaxReducer::new(),
            prune,
        }
    }

    fn finish(
        &self,
        ctx: &mut Context<'_, (u64, u32)>,
        state: &mut SsState,
        scratch: &mut SsScratch,
    ) -> Result<(), ProgramError> {
        let mut found = std::mem::take(&mut scratch.found);
        found.sort_unstable();
        found.dedup();
        let own = if ctx.part() == 0 {
            scratch.neighbors.len() as u64
        } else {
            0
        };
        let partial = own + found.len() as u64;
        if ctx.num_parts() == 1 {
            state.local = Some(partial);
            self.best.offer(partial, ctx.vertex_id());
            return Ok(());
        }
        ctx.send(ctx.vertex_id(), (partial, ctx.num_parts()))
    }
}

impl VertexProgram for ScanStatistics {
    type State = SsState;
    /// Partial count and the number of parts to expect.
    type Message = (u64, u32);
    type Scratch = SsScratch;

    fn init(&self, _v: VertexId) -> SsState {
        SsState::default()
    }

    fn run(
        &self,
        ctx: &mut Context<'_, (u64, u32)>,
        _: &mut SsState,
        scratch: &mut SsScratch,
    ) -> Result<(), ProgramError> {
        let v = ctx.vertex_id();
        if self.prune {
            let ub = upper_bound(u64::from(self.degrees[v as usize]));
            if let Some((max, at)) = self.best.get() {
                if ub < max || (ub == max && v > at) {
                    return Ok(());
                }
            }
        }
        scratch.own_lists = request_both(ctx, v)?;
        Ok(())
    }

    fn run_on_vertex(
        &self,
        ctx: &mut Context<'_, (u64, u32)>,
        state: &mut SsState,
        scratch: &mut SsScratch,
        edges: &EdgeList<'_>,
    ) -> Result<(), ProgramError> {
        let v = ctx.vertex_id();
        if edges.owner() == v {
            edges.extend_neighbors(&mut scratch.neighbors);
            scratch.own_lists -= 1;
            if scratch.own_lists > 0 {
                return Ok(());
            }
            sorted_dedup(&mut scratch.neighbors);
            let (lo, hi) = ctx.part_window();
            let candidates = scratch.neighbors.len().saturating_sub(1);
            for i in 0..candidates {
                let w = scratch.neighbors[i];
                if (lo..hi).contains(&u64::from(w)) {
                    scratch.outstanding += request_both(ctx, w)?;
                }
            }
        } else {
            let w = edges.owner();
            common_above(edges, &scratch.neighbors, |x| scratch.found.push((w, x)));
            scratch.outstanding -= 1;
        }
        if scratch.outstanding == 0 {
            self.finish(ctx, state, scratch)?;
        }
        Ok(())
    }

    fn run_on_message(
        &self,
        ctx: &mut MessageContext<'_>,
        state: &mut SsState,
        msg: &(u64, u32),
    ) -> Result<(), ProgramError> {
        let (partial, parts) = *msg;
        state.partial += partial;
        state.parts_seen += 1;
        if state.parts_seen == parts {
            state.local = Some(state.partial);
            self.best.offer(state.partial, ctx.vertex_id());
        }
        Ok(())
    }

    fn supports_vertical_parts(&self) -> bool {
        true
    }

    fn max_running(&self) -> Option<u32> {
        self.prune.then_some(PRUNING_WINDOW)
    }

    fn schedule(&self) -> Option<Schedule> {
        Some(Schedule::Custom(Arc::new(DegreeOrder {
            degrees: self.degrees.clone(),
        })))
    }
}

/// Runs [`ScanStatistics`]; `prune` enables skipping by degree bound.
pub fn scan_statistics(
    engine: &Engine,
    prune: bool,
) -> Result<AlgoOutput<ScanResult>, EngineError> {
    let program = ScanStatistics::new(engine.graph().index(), prune);
    let out = engine.run(&program, Activation::All)?;
    let (max, argmax) = program.best.get().unwrap_or((0, 0));
    Ok(AlgoOutput::from_run(out, |states| ScanResult {
        max,
        argmax,
        per_vertex: states.into_iter().map(|s| s.local).collect(),
    }))
}
