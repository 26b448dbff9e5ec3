//! Byte layout of the `.fgg` graph container.
//!
//! A graph file is a 64-byte header followed by the in-edge region and the
//! out-edge region. Both regions start on a [`REGION_ALIGN`] boundary. An
//! undirected graph has a single region, referenced by both offsets.
//!
//! Every vertex owns exactly one edge list per region, in ascending vertex
//! order with no gaps:
//!
//! ```text
//! +-----------+-----------+---------------------+--------------------------+
//! | owner u32 | degree u32| degree x neighbor u32 | degree x attr_bytes raw |
//! +-----------+-----------+---------------------+--------------------------+
//! ```
//!
//! All integers are little-endian.

use super::{Side, StoreError, VertexId};

pub const GRAPH_MAGIC: [u8; 8] = *b"SEMIGRPH";
pub const FORMAT_VERSION: u32 = 1;
pub const HEADER_BYTES: usize = 64;
/// Alignment of each edge region inside the graph file.
pub const REGION_ALIGN: u64 = 4096;
pub const LIST_HEADER_BYTES: u64 = 8;

/// Size in bytes of one on-disk edge list.
#[inline]
pub fn list_bytes(degree: u32, attr_bytes: u16) -> u64 {
    LIST_HEADER_BYTES + u64::from(degree) * (4 + u64::from(attr_bytes))
}

#[inline]
pub(crate) fn align_up(offset: u64, align: u64) -> u64 {
    offset.div_ceil(align) * align
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraphHeader {
    pub version: u32,
    pub directed: bool,
    pub num_vertices: u64,
    /// Directed graphs: distinct directed edges. Undirected: distinct vertex pairs.
    pub num_edges: u64,
    pub attr_bytes: u16,
    pub in_region_offset: u64,
    pub out_region_offset: u64,
}

impl GraphHeader {
    pub fn region_offset(&self, side: Side) -> u64 {
        match side {
            Side::In => self.in_region_offset,
            Side::Out => self.out_region_offset,
        }
    }

    pub fn encode(&self) -> [u8; HEADER_BYTES] {
        let mut buf = [0u8; HEADER_BYTES];
        buf[0..8].copy_from_slice(&GRAPH_MAGIC);
        buf[8..12].copy_from_slice(&self.version.to_le_bytes());
        buf[12] = u8::from(self.directed);
        buf[13..21].copy_from_slice(&self.num_vertices.to_le_bytes());
        buf[21..29].copy_from_slice(&self.num_edges.to_le_bytes());
        buf[29..31].copy_from_slice(&self.attr_bytes.to_le_bytes());
        buf[31..39].copy_from_slice(&self.in_region_offset.to_le_bytes());
        buf[39..47].copy_from_slice(&self.out_region_offset.to_le_bytes());
        buf
    }

    pub fn decode(buf: &[u8]) -> Result<Self, StoreError> {
        if buf.len() < HEADER_BYTES {
            return Err(StoreError::Corrupt("graph header truncated".into()));
        }
        if buf[0..8] != GRAPH_MAGIC {
            return Err(StoreError::BadMagic { expected: "graph" });
        }
        let version = u32::from_le_bytes(buf[8..12].try_into().unwrap());
        if version != FORMAT_VERSION {
            return Err(StoreError::UnsupportedVersion(version));
        }
        let directed = match buf[12] {
            0 => false,
            1 => true,
            other => return Err(StoreError::Corrupt(format!("bad directed flag {other}"))),
        };
        let u64_at = |at: usize| u64::from_le_bytes(buf[at..at + 8].try_into().unwrap());
        let header = GraphHeader {
            version,
            directed,
            num_vertices: u64_at(13),
            num_edges: u64_at(21),
            attr_bytes: u16::from_le_bytes(buf[29..31].try_into().unwrap()),
            in_region_offset: u64_at(31),
            out_region_offset: u64_at(39),
        };
        if !header.in_region_offset.is_multiple_of(REGION_ALIGN)
            || !header.out_region_offset.is_multiple_of(REGION_ALIGN)
        {
            return Err(StoreError::Corrupt(
                "edge region is not page aligned".into(),
            ));
        }
        if !directed && header.in_region_offset != header.out_region_offset {
            return Err(StoreError::Corrupt(
                "undirected graph with two regions".into(),
            ));
        }
        Ok(header)
    }
}

/// Appends one encoded edge list. `attrs` holds `neighbors.len() * attr_bytes` bytes.
pub(crate) fn encode_list(
    out: &mut Vec<u8>,
    owner: VertexId,
    neighbors: &[VertexId],
    attrs: &[u8],
) {
    out.extend_from_slice(&owner.to_le_bytes());
    out.extend_from_slice(&(neighbors.len() as u32).to_le_bytes());
    for n in neighbors {
        out.extend_from_slice(&n.to_le_bytes());
    }
    out.extend_from_slice(attrs);
}
