use crate::store::VertexId;

/// Horizontal range partitioning: vertex `v` belongs to partition
/// `(v >> r) % n`. Each partition keeps its vertices in a dense local array.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RangePartitioner {
    shift: u32,
    parts: u32,
}

impl RangePartitioner {
    pub fn new(shift: u32, parts: u32) -> Self {
        assert!(parts >= 1, "need at least one partition");
        assert!(shift <= 32, "range shift above 32");
        RangePartitioner { shift, parts }
    }

    pub fn shift(&self) -> u32 {
        self.shift
    }

    pub fn num_partitions(&self) -> u32 {
        self.parts
    }

    #[inline]
    pub fn partition(&self, v: VertexId) -> u32 {
        ((u64::from(v) >> self.shift) % u64::from(self.parts)) as u32
    }

    /// Position of `v` inside its partition's local array.
    #[inline]
    pub fn local_index(&self, v: VertexId) -> usize {
        let v = u64::from(v);
        let range = v >> self.shift;
        let mask = (1u64 << self.shift) - 1;
        (((range / u64::from(self.parts)) << self.shift) | (v & mask)) as usize
    }

    /// Inverse of [`local_index`](Self::local_index).
    #[inline]
    pub fn vertex_id(&self, partition: u32, local: usize) -> VertexId {
        let local = local as u64;
        let mask = (1u64 << self.shift) - 1;
        let range = (local >> self.shift) * u64::from(self.parts) + u64::from(partition);
        ((range << self.shift) | (local & mask)) as VertexId
    }

    /// Number of vertices of a graph with `num_vertices` that land in `partition`.
    pub fn partition_len(&self, partition: u32, num_vertices: u64) -> usize {
        if num_vertices == 0 {
            return 0;
        }
        let width = 1u64 << self.shift;
        let ranges = num_vertices.div_ceil(width);
        let p = u64::from(partition);
        let n = u64::from(self.parts);
        if p >= ranges {
            return 0;
        }
        let owned = (ranges - 1 - p) / n + 1;
        let last = ranges - 1;
        let mut len = owned * width;
        if last % n == p {
            len -= width - (num_vertices - last * width);
        }
        len as usize
    }
}

/// Neighbor-ID window `[n*j/P, n*(j+1)/P)` that part `j` of `P` may read.
pub fn part_window(num_vertices: u64, part: u32, parts: u32) -> (u64, u64) {
    let (j, p) = (u64::from(part), u64::from(parts));
    (num_vertices * j / p, num_vertices * (j + 1) / p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn window_formula() {
        let windows: Vec<_> = (0..4).map(|j| part_window(8, j, 4)).collect();
        assert_eq!(windows, vec![(0, 2), (2, 4), (4, 6), (6, 8)]);
        assert_eq!(part_window(10, 0, 1), (0, 10));
    }

    #[test]
    fn ranges_of_two_to_the_r() {
        let p = RangePartitioner::new(2, 3);
        let owners: Vec<u32> = (0..14).map(|v| p.partition(v)).collect();
        assert_eq!(owners, vec![0, 0, 0, 0, 1, 1, 1, 1, 2, 2, 2, 2, 0, 0]);
        assert_eq!(p.local_index(12), 4);
        assert_eq!(p.vertex_id(0, 4), 12);
        assert_eq!(p.partition_len(0, 14), 6);
        assert_eq!(p.partition_len(2, 14), 4);
    }

    proptest! {
        #[test]
        fn local_index_is_a_dense_bijection(shift in 0u32..6, parts in 1u32..9, n in 0u64..300) {
            let p = RangePartitioner::new(shift, parts);
            let mut seen: Vec<Vec<bool>> = (0..parts).map(|q| vec![false; p.partition_len(q, n)]).collect();
            for v in 0..n as VertexId {
                let q = p.partition(v);
                prop_assert_eq!(q, (v >> shift) % parts);
                let l = p.local_index(v);
                prop_assert!(l < seen[q as usize].len());
                prop_assert!(!seen[q as usize][l]);
                seen[q as usize][l] = true;
                prop_assert_eq!(p.vertex_id(q, l), v);
            }
            prop_assert!(seen.iter().flatten().all(|&b| b));
        }
    }
}
