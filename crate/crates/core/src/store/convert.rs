//! Text edge list to `.fgg` / `.fgi` conversion.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::format::{
    align_up, encode_list, list_bytes, GraphHeader, FORMAT_VERSION, HEADER_BYTES, REGION_ALIGN,
};
use super::index::{GraphIndex, DEFAULT_ANCHOR_STRIDE};
use super::{StoreError, VertexId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConvertOptions {
    pub directed: bool,
    /// Width of the opaque per-edge payload; 0 disables attributes.
    pub attr_bytes: u16,
    pub anchor_stride: u32,
}

impl Default for ConvertOptions {
    fn default() -> Self {
        ConvertOptions {
            directed: true,
            attr_bytes: 0,
            anchor_stride: DEFAULT_ANCHOR_STRIDE,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConvertSummary {
    pub num_vertices: u64,
    pub num_edges: u64,
    pub self_loops_dropped: u64,
    pub duplicates_dropped: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
struct Edge {
    src: VertexId,
    dst: VertexId,
    attr: u64,
}

/// One parsed input line: `src dst [attr]`.
fn parse_line(line: &str, line_no: u64, attr_bytes: u16) -> Result<Option<Edge>, StoreError> {
    let trimmed = line.trim();
    if trimmed.is_empty() || trimmed.starts_with('#') {
        return Ok(None);
    }
    let malformed = |reason: &str| StoreError::Parse {
        line: line_no,
        reason: reason.to_string(),
    };
    let mut tokens = trimmed.split_whitespace();
    let mut id = |what: &str| -> Result<VertexId, StoreError> {
        let token = tokens
            .next()
            .ok_or_else(|| malformed(&format!("missing {what} vertex")))?;
        let value: u64 = token
            .parse()
            .map_err(|_| malformed(&format!("invalid {what} vertex {token:?}")))?;
        VertexId::try_from(value).map_err(|_| StoreError::IdOverflow {
            line: line_no,
            value,
        })
    };
    let src = id("source")?;
    let dst = id("target")?;
    let attr = match tokens.next() {
        None => 0,
        Some(_) if attr_bytes == 0 => 0,
        Some(token) => {
            let value: u64 = token
                .parse()
                .map_err(|_| malformed(&format!("invalid attribute {token:?}")))?;
            if attr_bytes < 8 && value >> (8 * u32::from(attr_bytes)) != 0 {
                return Err(malformed(&format!(
                    "attribute {value} does not fit in {attr_bytes} bytes"
                )));
            }
            value
        }
    };
    if tokens.next().is_some() {
        return Err(malformed("too many fields"));
    }
    Ok(Some(Edge { src, dst, attr }))
}

fn attr_le(value: u64, attr_bytes: u16, out: &mut Vec<u8>) {
    let raw = value.to_le_bytes();
    let width = usize::from(attr_bytes);
    let copied = width.min(8);
    out.extend_from_slice(&raw[..copied]);
    out.resize(out.len() + (width - copied), 0);
}

/// Encodes one region from edges sorted by `(owner, neighbor)`.
fn encode_region(
    edges: &[Edge],
    owner: impl Fn(&Edge) -> VertexId,
    neighbor: impl Fn(&Edge) -> VertexId,
    num_vertices: usize,
    attr_bytes: u16,
) -> (Vec<u8>, Vec<u32>) {
    let mut degrees = vec![0u32; num_vertices];
    for e in edges {
        degrees[owner(e) as usize] += 1;
    }
    let total: u64 = degrees.iter().map(|&d| list_bytes(d, attr_bytes)).sum();
    let mut bytes = Vec::with_capacity(total as usize);
    let mut neighbors = Vec::new();
    let mut attrs = Vec::new();
    let mut at = 0;
    for (v, &deg) in degrees.iter().enumerate().take(num_vertices) {
        let deg = deg as usize;
        let list = &edges[at..at + deg];
        at += deg;
        neighbors.clear();
        attrs.clear();
        neighbors.extend(list.iter().map(&neighbor));
        if attr_bytes > 0 {
            for e in list {
                attr_le(e.attr, attr_bytes, &mut attrs);
            }
        }
        encode_list(&mut bytes, v as VertexId, &neighbors, &attrs);
    }
    debug_assert_eq!(bytes.len() as u64, total);
    (bytes, degrees)
}

/// Result of an in-memory conversion.
#[derive(Debug, Clone)]
pub struct Converted {
    pub graph_bytes: Vec<u8>,
    pub index: GraphIndex,
    pub summary: ConvertSummary,
}

/// Parses a text edge list and builds the graph container and index in memory.
///
/// Self-loops are dropped. Parallel edges collapse to one, keeping the
/// smallest attribute value.
pub fn convert_reader<R: BufRead>(
    input: R,
    opts: &ConvertOptions,
) -> Result<Converted, StoreError> {
    let mut edges = Vec::new();
    let mut summary = ConvertSummary::default();
    let mut max_id: Option<VertexId> = None;
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        let Some(edge) = parse_line(&line, i as u64 + 1, opts.attr_bytes)? else {
            continue;
        };
        max_id = max_id.max(Some(edge.src.max(edge.dst)));
        if edge.src == edge.dst {
            summary.self_loops_dropped += 1;
            continue;
        }
        edges.push(edge);
        if !opts.directed {
            edges.push(Edge {
                src: edge.dst,
                dst: edge.src,
                attr: edge.attr,
            });
        }
    }
    let n = max_id.map_or(0, |m| m as usize + 1);
    summary.num_vertices = n as u64;

    edges.sort_unstable();
    let before = edges.len();
    edges.dedup_by_key(|e| (e.src, e.dst));
    let dropped = (before - edges.len()) as u64;
    summary.duplicates_dropped = if opts.directed { dropped } else { dropped / 2 };
    summary.num_edges = if opts.directed {
        edges.len() as u64
    } else {
        edges.len() as u64 / 2
    };

    let in_start = align_up(HEADER_BYTES as u64, REGION_ALIGN);
    let (out_bytes, out_degrees) = encode_region(&edges, |e| e.src, |e| e.dst, n, opts.attr_bytes);
    let (in_bytes, in_degrees, out_start) = if opts.directed {
        edges.sort_unstable_by_key(|e| (e.dst, e.src));
        let (bytes, degrees) = encode_region(&edges, |e| e.dst, |e| e.src, n, opts.attr_bytes);
        let out_start = align_up(in_start + bytes.len() as u64, REGION_ALIGN);
        (bytes, degrees, out_start)
    } else {
        (Vec::new(), Vec::new(), in_start)
    };

    let header = GraphHeader {
        version: FORMAT_VERSION,
        directed: opts.directed,
        num_vertices: n as u64,
        num_edges: summary.num_edges,
        attr_bytes: opts.attr_bytes,
        in_region_offset: in_start,
        out_region_offset: out_start,
    };
    let total = align_up(out_start + out_bytes.len() as u64, REGION_ALIGN) as usize;
    let mut graph_bytes = Vec::with_capacity(total);
    graph_bytes.extend_from_slice(&header.encode());
    graph_bytes.resize(in_start as usize, 0);
    graph_bytes.extend_from_slice(&in_bytes);
    graph_bytes.resize(out_start as usize, 0);
    graph_bytes.extend_from_slice(&out_bytes);
    graph_bytes.resize(total, 0);

    let index = GraphIndex::build(
        opts.directed,
        opts.attr_bytes,
        opts.anchor_stride,
        &in_degrees,
        &out_degrees,
        in_start,
        out_start,
    )?;
    Ok(Converted {
        graph_bytes,
        index,
        summary,
    })
}

/// Converts `input` and writes the graph and index files.
pub fn convert<R: BufRead, G: Write, I: Write>(
    input: R,
    mut graph_out: G,
    index_out: I,
    opts: &ConvertOptions,
) -> Result<ConvertSummary, StoreError> {
    let converted = convert_reader(input, opts)?;
    graph_out.write_all(&converted.graph_bytes)?;
    graph_out.flush()?;
    converted.index.write_to(index_out)?;
    Ok(converted.summary)
}

pub fn convert_files(
    input: &Path,
    graph_path: &Path,
    index_path: &Path,
    opts: &ConvertOptions,
) -> Result<ConvertSummary, StoreError> {
    let reader = BufReader::new(File::open(input)?);
    let converted = convert_reader(reader, opts)?;
    let mut graph = BufWriter::new(File::create(graph_path)?);
    graph.write_all(&converted.graph_bytes)?;
    graph.flush()?;
    let mut index = BufWriter::new(File::create(index_path)?);
    converted.index.write_to(&mut index)?;
    index.flush()?;
    Ok(converted.summary)
}
