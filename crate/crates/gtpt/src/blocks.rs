//! Block view of the adjacency matrix of a clustered graph: an `n x n` grid
//! of `m x m` 0/1 blocks, where block `(i, j)` records the adjacencies
//! between clusters `C_i` and `C_j`.

use crate::graph::{ClusteredGraph, VertexLabel};
use crate::matrix::IntMatrix;

/// Adjacency matrix of a clustered graph, stored blockwise.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockAdjacency {
    n: usize,
    m: usize,
    blocks: Vec<IntMatrix>,
}

impl BlockAdjacency {
    pub fn cluster_count(&self) -> usize {
        self.n
    }

    pub fn cluster_size(&self) -> usize {
        self.m
    }

    /// Block `A_{i,j}` (1-based cluster indices).
    pub fn block(&self, i: usize, j: usize) -> &IntMatrix {
        &self.blocks[(i - 1) * self.n + (j - 1)]
    }

    pub fn blocks(&self) -> impl Iterator<Item = ((usize, usize), &IntMatrix)> + '_ {
        let n = self.n;
        self.blocks
            .iter()
            .enumerate()
            .map(move |(idx, b)| ((idx / n + 1, idx % n + 1), b))
    }

    /// The full `mn x mn` adjacency matrix.
    pub fn dense(&self) -> IntMatrix {
        let size = self.n * self.m;
        let mut out = IntMatrix::zero(size);
        for ((i, j), block) in self.blocks() {
            for k in 0..self.m {
                for l in 0..self.m {
                    out.set((i - 1) * self.m + k, (j - 1) * self.m + l, block.get(k, l));
                }
            }
        }
        out
    }

    /// Reconstructs the clustered graph; inverse of [`block_matrix`].
    pub fn to_graph(&self) -> ClusteredGraph {
        let mut edges = Vec::new();
        for ((i, j), block) in self.blocks() {
            if i > j {
                continue;
            }
            for k in 0..self.m {
                for l in 0..self.m {
                    if block.get(k, l) == 1 && (i < j || k < l) {
                        edges.push((VertexLabel::new(i, k + 1), VertexLabel::new(j, l + 1)));
                    }
                }
            }
        }
        ClusteredGraph::from_edges(self.n, self.m, edges)
            .expect("block adjacency encodes a valid graph")
    }

    /// Builds directly from blocks; panics unless the grid is globally
    /// symmetric with symmetric zero-diagonal diagonal blocks.
    pub fn from_blocks(n: usize, m: usize, blocks: Vec<IntMatrix>) -> Self {
        assert_eq!(blocks.len(), n * n);
        assert!(blocks.iter().all(|b| b.order() == m && b.is_binary()));
        let ba = BlockAdjacency { n, m, blocks };
        for ((i, j), block) in ba.blocks() {
            assert_eq!(
                block,
                &ba.block(j, i).transpose(),
                "block ({i},{j}) must be the transpose of block ({j},{i})"
            );
            if i == j {
                assert!((0..m).all(|k| block.get(k, k) == 0), "diagonal block has a self-loop");
            }
        }
        ba
    }
}

/// Block adjacency matrix of `g`: `block(i,j)[k,l] = 1` iff
/// `(v_{i,k+1}, v_{j,l+1})` is an edge.
pub fn block_matrix(g: &ClusteredGraph) -> BlockAdjacency {
    let (n, m) = (g.cluster_count(), g.cluster_size());
    let mut blocks = vec![IntMatrix::zero(m); n * n];
    for (u, v) in g.edges() {
        let (i, k) = (u.cluster, u.position);
        let (j, l) = (v.cluster, v.position);
        blocks[(i - 1) * n + (j - 1)].set(k - 1, l - 1, 1);
        blocks[(j - 1) * n + (i - 1)].set(l - 1, k - 1, 1);
    }
    BlockAdjacency { n, m, blocks }
}
