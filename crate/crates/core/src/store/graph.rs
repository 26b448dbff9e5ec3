use std::path::Path;
use std::sync::Arc;

use super::format::{GraphHeader, HEADER_BYTES};
use super::index::{GraphIndex, ListLocation};
use super::{Side, StoreError, VertexId};
use crate::pagecache::{FileSource, PageSource};

/// A converted graph: header, in-memory index, and the backing bytes.
#[derive(Clone)]
pub struct Graph {
    header: GraphHeader,
    index: GraphIndex,
    source: Arc<dyn PageSource>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Graph")
            .field("header", &self.header)
            .field("source_len", &self.source.len())
            .finish()
    }
}

impl Graph {
    pub fn open(graph_path: &Path, index_path: &Path) -> Result<Self, StoreError> {
        let source = Arc::new(FileSource::open(graph_path)?);
        let index =
            GraphIndex::read_from(std::io::BufReader::new(std::fs::File::open(index_path)?))?;
        Self::from_source(source, index)
    }

    pub fn from_bytes(graph_bytes: Vec<u8>, index: GraphIndex) -> Result<Self, StoreError> {
        Self::from_source(Arc::new(graph_bytes), index)
    }

    /// Reads the header from `source` and checks it against `index`.
    pub fn from_source(source: Arc<dyn PageSource>, index: GraphIndex) -> Result<Self, StoreError> {
        let mut raw = [0u8; HEADER_BYTES];
        if source.read_at(&mut raw, 0)? < HEADER_BYTES {
            return Err(StoreError::Corrupt(
                "graph file shorter than its header".into(),
            ));
        }
        let header = GraphHeader::decode(&raw)?;
        let mismatch = |what: &str| StoreError::IndexMismatch(what.to_string());
        if header.num_vertices != index.num_vertices() {
            return Err(mismatch("vertex count"));
        }
        if header.directed != index.is_directed() {
            return Err(mismatch("directedness"));
        }
        if header.attr_bytes != index.attr_bytes() {
            return Err(mismatch("attribute width"));
        }
        if header.num_vertices > 0 {
            let last = (header.num_vertices - 1) as VertexId;
            for side in [Side::In, Side::Out] {
                if index.locate(0, side).offset != header.region_offset(side) {
                    return Err(mismatch("region start"));
                }
                let end = index.locate(last, side);
                if end.offset + end.len > source.len() {
                    return Err(mismatch("region extends past end of file"));
                }
            }
        }
        Ok(Graph {
            header,
            index,
            source,
        })
    }

    pub fn header(&self) -> &GraphHeader {
        &self.header
    }

    pub fn index(&self) -> &GraphIndex {
        &self.index
    }

    pub fn source(&self) -> &Arc<dyn PageSource> {
        &self.source
    }

    pub fn num_vertices(&self) -> u64 {
        self.header.num_vertices
    }

    pub fn is_directed(&self) -> bool {
        self.header.directed
    }

    /// Reads `v`'s list directly from the source, bypassing any cache.
    pub fn read_list(&self, v: VertexId, side: Side) -> Result<Vec<VertexId>, StoreError> {
        let ListLocation { offset, len } = self.index.locate(v, side);
        let mut raw = vec![0u8; len as usize];
        if self.source.read_at(&mut raw, offset)? < raw.len() {
            return Err(StoreError::Corrupt(format!(
                "list of vertex {v} runs past end of file"
            )));
        }
        let pages = [Arc::<[u8]>::from(raw)];
        let list = super::EdgeList::parse(
            crate::pagecache::PageSpan::new(&pages, 0, len as usize),
            v,
            side,
            self.header.attr_bytes,
        )?;
        Ok(list.neighbors().collect())
    }

    /// Checks every edge-list header against the offsets the index computes.
    pub fn check_offsets(&self) -> Result<(), StoreError> {
        let sides: &[Side] = if self.is_directed() {
            &[Side::In, Side::Out]
        } else {
            &[Side::Out]
        };
        for &side in sides {
            for v in 0..self.num_vertices() as VertexId {
                let loc = self.index.locate(v, side);
                let mut raw = [0u8; 8];
                if self.source.read_at(&mut raw, loc.offset)? < 8 {
                    return Err(StoreError::OffsetMismatch {
                        vertex: v,
                        side,
                        offset: loc.offset,
                        found_owner: None,
                    });
                }
                let owner = u32::from_le_bytes(raw[0..4].try_into().unwrap());
                let degree = u32::from_le_bytes(raw[4..8].try_into().unwrap());
                if owner != v || degree != self.index.degree(v, side) {
                    return Err(StoreError::OffsetMismatch {
                        vertex: v,
                        side,
                        offset: loc.offset,
                        found_owner: Some(owner),
                    });
                }
            }
        }
        Ok(())
    }
}
