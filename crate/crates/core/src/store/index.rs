//! Compact in-memory graph index.
//!
//! Degrees are kept in one byte per vertex and side; degrees that do not fit
//! are flagged with [`OVERFLOW_CODE`] and stored in a sorted side table. The
//! absolute offset of every `anchor_stride`-th edge list is kept, and the
//! offsets in between are recomputed by summing list sizes from the nearest
//! preceding anchor.

use std::io::{Read, Write};

use super::format::list_bytes;
use super::{Side, StoreError, VertexId};

pub const INDEX_MAGIC: [u8; 8] = *b"SEMIGIDX";
pub const INDEX_VERSION: u32 = 1;
pub const INDEX_HEADER_BYTES: usize = 64;
pub const DEFAULT_ANCHOR_STRIDE: u32 = 32;
/// Degree code marking a vertex whose degree lives in the overflow table.
pub const OVERFLOW_CODE: u8 = u8::MAX;

/// Degrees of a vertex whose in- or out-degree reached [`OVERFLOW_CODE`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LargeDegree {
    pub id: VertexId,
    pub in_degree: u32,
    pub out_degree: u32,
}

/// Absolute location of one edge list in the graph file.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ListLocation {
    pub offset: u64,
    pub len: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphIndex {
    num_vertices: u64,
    directed: bool,
    attr_bytes: u16,
    anchor_shift: u32,
    codes: Vec<u8>,
    anchors: Vec<u64>,
    large: Vec<LargeDegree>,
}

impl GraphIndex {
    /// Builds the index from exact degrees. For undirected graphs only
    /// `out_degrees` and `out_start` are used.
    pub fn build(
        directed: bool,
        attr_bytes: u16,
        anchor_stride: u32,
        in_degrees: &[u32],
        out_degrees: &[u32],
        in_start: u64,
        out_start: u64,
    ) -> Result<Self, StoreError> {
        if anchor_stride == 0 || !anchor_stride.is_power_of_two() {
            return Err(StoreError::InvalidStride(anchor_stride));
        }
        let n = out_degrees.len();
        if directed && in_degrees.len() != n {
            return Err(StoreError::Corrupt(
                "in/out degree arrays differ in length".into(),
            ));
        }
        let sides = if directed { 2 } else { 1 };
        let stride = anchor_stride as usize;
        let mut codes = Vec::with_capacity(n * sides);
        let mut anchors = Vec::with_capacity(n.div_ceil(stride) * sides);
        let mut large = Vec::new();
        let (mut in_off, mut out_off) = (in_start, out_start);
        for v in 0..n {
            let out = out_degrees[v];
            let inn = if directed { in_degrees[v] } else { out };
            if v % stride == 0 {
                if directed {
                    anchors.push(in_off);
                }
                anchors.push(out_off);
            }
            if directed {
                codes.push(code_for(inn));
            }
            codes.push(code_for(out));
            if inn >= u32::from(OVERFLOW_CODE) || out >= u32::from(OVERFLOW_CODE) {
                large.push(LargeDegree {
                    id: v as VertexId,
                    in_degree: inn,
                    out_degree: out,
                });
            }
            in_off += list_bytes(inn, attr_bytes);
            out_off += list_bytes(out, attr_bytes);
        }
        Ok(GraphIndex {
            num_vertices: n as u64,
            directed,
            attr_bytes,
            anchor_shift: anchor_stride.trailing_zeros(),
            codes,
            anchors,
            large,
        })
    }

    pub fn num_vertices(&self) -> u64 {
        self.num_vertices
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn attr_bytes(&self) -> u16 {
        self.attr_bytes
    }

    pub fn anchor_stride(&self) -> u32 {
        1 << self.anchor_shift
    }

    pub fn large_degrees(&self) -> &[LargeDegree] {
        &self.large
    }

    #[inline]
    fn sides(&self) -> usize {
        if self.directed {
            2
        } else {
            1
        }
    }

    #[inline]
    fn slot(&self, side: Side) -> usize {
        match (self.directed, side) {
            (true, Side::In) => 0,
            (true, Side::Out) => 1,
            (false, _) => 0,
        }
    }

    /// Exact degree of `v` on `side`. Undirected graphs ignore `side`.
    #[inline]
    pub fn degree(&self, v: VertexId, side: Side) -> u32 {
        let code = self.codes[v as usize * self.sides() + self.slot(side)];
        if code != OVERFLOW_CODE {
            return u32::from(code);
        }
        let entry = self
            .large
            .binary_search_by_key(&v, |e| e.id)
            .map(|i| &self.large[i])
            .expect("overflow code without a large-degree entry");
        match side {
            Side::In if self.directed => entry.in_degree,
            _ => entry.out_degree,
        }
    }

    /// Location of `v`'s edge list on `side`, walking at most
    /// `anchor_stride - 1` degree codes from the preceding anchor.
    pub fn locate(&self, v: VertexId, side: Side) -> ListLocation {
        let sides = self.sides();
        let slot = self.slot(side);
        let anchor = (v >> self.anchor_shift) as usize;
        let mut offset = self.anchors[anchor * sides + slot];
        let first = (anchor as VertexId) << self.anchor_shift;
        for u in first..v {
            offset += list_bytes(self.degree(u, side), self.attr_bytes);
        }
        ListLocation {
            offset,
            len: list_bytes(self.degree(v, side), self.attr_bytes),
        }
    }

    /// Heap and inline bytes held by the index.
    pub fn memory_bytes(&self) -> usize {
        std::mem::size_of::<Self>()
            + self.codes.capacity()
            + self.anchors.capacity() * std::mem::size_of::<u64>()
            + self.large.capacity() * std::mem::size_of::<LargeDegree>()
    }

    pub fn write_to<W: Write>(&self, mut out: W) -> Result<(), StoreError> {
        let mut header = [0u8; INDEX_HEADER_BYTES];
        header[0..8].copy_from_slice(&INDEX_MAGIC);
        header[8..12].copy_from_slice(&INDEX_VERSION.to_le_bytes());
        header[12..20].copy_from_slice(&self.num_vertices.to_le_bytes());
        header[20..24].copy_from_slice(&self.anchor_stride().to_le_bytes());
        header[24] = u8::from(self.directed);
        header[25..27].copy_from_slice(&self.attr_bytes.to_le_bytes());
        header[27..35].copy_from_slice(&(self.large.len() as u64).to_le_bytes());
        out.write_all(&header)?;
        out.write_all(&self.codes)?;
        let mut buf = Vec::with_capacity(self.anchors.len() * 8 + self.large.len() * 12);
        for a in &self.anchors {
            buf.extend_from_slice(&a.to_le_bytes());
        }
        for e in &self.large {
            buf.extend_from_slice(&e.id.to_le_bytes());
            buf.extend_from_slice(&e.in_degree.to_le_bytes());
            buf.extend_from_slice(&e.out_degree.to_le_bytes());
        }
        out.write_all(&buf)?;
        Ok(())
    }

    pub fn read_from<R: Read>(mut input: R) -> Result<Self, StoreError> {
        let mut header = [0u8; INDEX_HEADER_BYTES];
        input.read_exact(&mut header)?;
        if header[0..8] != INDEX_MAGIC {
            return Err(StoreError::BadMagic { expected: "index" });
        }
        let version = u32::from_le_bytes(header[8..12].try_into().unwrap());
        if version != INDEX_VERSION {
            return Err(StoreError::UnsupportedVersion(version));
        }
        let num_vertices = u64::from_le_bytes(header[12..20].try_into().unwrap());
        let stride = u32::from_le_bytes(header[20..24].try_into().unwrap());
        if stride == 0 || !stride.is_power_of_two() {
            return Err(StoreError::InvalidStride(stride));
        }
        let directed = match header[24] {
            0 => false,
            1 => true,
            other => return Err(StoreError::Corrupt(format!("bad directed flag {other}"))),
        };
        let attr_bytes = u16::from_le_bytes(header[25..27].try_into().unwrap());
        let num_large = u64::from_le_bytes(header[27..35].try_into().unwrap()) as usize;
        if num_vertices > u64::from(u32::MAX) + 1 {
            return Err(StoreError::Corrupt(
                "vertex count exceeds 32-bit ids".into(),
            ));
        }
        let n = num_vertices as usize;
        let sides = if directed { 2 } else { 1 };

        let mut codes = vec![0u8; n * sides];
        input.read_exact(&mut codes)?;
        let num_anchors = n.div_ceil(stride as usize) * sides;
        let mut raw = vec![0u8; num_anchors * 8];
        input.read_exact(&mut raw)?;
        let anchors: Vec<u64> = raw
            .chunks_exact(8)
            .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
            .collect();
        let mut raw = vec![0u8; num_large * 12];
        input.read_exact(&mut raw)?;
        let large: Vec<LargeDegree> = raw
            .chunks_exact(12)
            .map(|c| LargeDegree {
                id: u32::from_le_bytes(c[0..4].try_into().unwrap()),
                in_degree: u32::from_le_bytes(c[4..8].try_into().unwrap()),
                out_degree: u32::from_le_bytes(c[8..12].try_into().unwrap()),
            })
            .collect();
        if large.windows(2).any(|w| w[0].id >= w[1].id)
            || large
                .last()
                .is_some_and(|e| u64::from(e.id) >= num_vertices)
        {
            return Err(StoreError::Corrupt(
                "large-degree table is not sorted by id".into(),
            ));
        }
        let flagged = codes
            .chunks_exact(sides)
            .filter(|c| c.contains(&OVERFLOW_CODE))
            .count();
        if flagged != large.len() {
            return Err(StoreError::Corrupt(format!(
                "{flagged} overflow codes but {} large-degree entries",
                large.len()
            )));
        }
        Ok(GraphIndex {
            num_vertices,
            directed,
            attr_bytes,
            anchor_shift: stride.trailing_zeros(),
            codes,
            anchors,
            large,
        })
    }
}

#[inline]
fn code_for(degree: u32) -> u8 {
    if degree >= u32::from(OVERFLOW_CODE) {
        OVERFLOW_CODE
    } else {
        degree as u8
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn undirected(degrees: &[u32], stride: u32) -> GraphIndex {
        GraphIndex::build(false, 0, stride, &[], degrees, 4096, 4096).unwrap()
    }

    #[test]
    fn offset_walks_from_anchor() {
        let idx = undirected(&[3, 5, 2], 32);
        assert_eq!(
            idx.locate(0, Side::Out),
            ListLocation {
                offset: 4096,
                len: 20
            }
        );
        assert_eq!(
            idx.locate(2, Side::Out),
            ListLocation {
                offset: 4096 + 48,
                len: 16
            }
        );
    }

    #[test]
    fn anchored_vertex_returns_stored_anchor() {
        let degrees: Vec<u32> = (0..10).collect();
        let idx = undirected(&degrees, 4);
        let at4 = idx.locate(4, Side::Out).offset;
        assert_eq!(at4, idx.anchors[1]);
        assert_eq!(idx.locate(8, Side::Out).offset, idx.anchors[2]);
    }

    #[test]
    fn overflow_threshold_is_255() {
        let idx = undirected(&[254, 255, 0, 1000], 32);
        assert_eq!(idx.codes[0], 254);
        assert_eq!(idx.degree(0, Side::Out), 254);
        assert_eq!(idx.codes[1], OVERFLOW_CODE);
        assert_eq!(idx.degree(1, Side::Out), 255);
        assert_eq!(idx.degree(2, Side::Out), 0);
        assert_eq!(idx.degree(3, Side::Out), 1000);
        let ids: Vec<_> = idx.large_degrees().iter().map(|e| e.id).collect();
        assert_eq!(ids, vec![1, 3]);
    }

    #[test]
    fn directed_sides_are_independent() {
        let idx = GraphIndex::build(true, 2, 2, &[1, 300, 0], &[2, 0, 4], 4096, 8192).unwrap();
        assert_eq!(idx.degree(1, Side::In), 300);
        assert_eq!(idx.degree(1, Side::Out), 0);
        assert_eq!(idx.degree(2, Side::Out), 4);
        // out list of v2: out lists of v0 (2 edges) and v1 (0 edges) precede it
        let loc = idx.locate(2, Side::Out);
        assert_eq!(loc.offset, 8192 + (8 + 2 * 6) + 8);
        assert_eq!(loc.len, 8 + 4 * 6);
        assert_eq!(
            idx.locate(2, Side::In).offset,
            4096 + (8 + 6) + (8 + 300 * 6)
        );
    }

    #[test]
    fn stride_must_be_power_of_two() {
        assert!(matches!(
            GraphIndex::build(false, 0, 24, &[], &[1], 4096, 4096),
            Err(StoreError::InvalidStride(24))
        ));
    }

    #[test]
    fn serialization_round_trip() {
        let idx = GraphIndex::build(
            true,
            0,
            4,
            &[1, 300, 0, 7, 9],
            &[2, 0, 4, 255, 1],
            4096,
            8192,
        )
        .unwrap();
        let mut bytes = Vec::new();
        idx.write_to(&mut bytes).unwrap();
        assert_eq!(GraphIndex::read_from(bytes.as_slice()).unwrap(), idx);
        bytes.truncate(bytes.len() - 1);
        assert!(GraphIndex::read_from(bytes.as_slice()).is_err());
    }
}
