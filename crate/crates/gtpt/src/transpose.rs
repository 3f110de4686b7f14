//! The graph-theoretical partial transpose (GTPT): every inter-cluster edge
//! `(v_{i,k}, v_{j,l})` with `k != l` moves to `(v_{i,l}, v_{j,k})`;
//! intra-cluster edges and position-aligned inter-cluster edges stay put.
//! On the block adjacency matrix this transposes every block.

use crate::blocks::BlockAdjacency;
use crate::graph::{ClusteredGraph, VertexLabel};
use crate::matrix::IntMatrix;

/// Returns `G^tau`. Involutive and edge-count preserving.
pub fn partial_transpose(g: &ClusteredGraph) -> ClusteredGraph {
    let edges = g.edges().map(|&(u, v)| {
        if u.cluster != v.cluster && u.position != v.position {
            (
                VertexLabel::new(u.cluster, v.position),
                VertexLabel::new(v.cluster, u.position),
            )
        } else {
            (u, v)
        }
    });
    ClusteredGraph::from_edges(g.cluster_count(), g.cluster_size(), edges)
        .expect("partial transpose maps valid edges to valid edges")
}

/// Transposes every block of the adjacency matrix; the matrix-level route
/// to the same operation.
pub fn partial_transpose_blocks(a: &BlockAdjacency) -> BlockAdjacency {
    let (n, m) = (a.cluster_count(), a.cluster_size());
    let blocks: Vec<IntMatrix> = (1..=n)
        .flat_map(|i| (1..=n).map(move |j| (i, j)))
        .map(|(i, j)| a.block(i, j).transpose())
        .collect();
    BlockAdjacency::from_blocks(n, m, blocks)
}

/// True iff `G` and `G^tau` have identical edge sets, i.e. the identity map
/// is an isomorphism between them.
pub fn is_partially_symmetric(g: &ClusteredGraph) -> bool {
    partial_transpose(g) == *g
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blocks::block_matrix;
    use crate::graph::edge;
    use proptest::prelude::*;

    fn g1() -> ClusteredGraph {
        ClusteredGraph::from_edges(
            2,
            2,
            [edge((1, 1), (2, 1)), edge((1, 1), (2, 2)), edge((1, 2), (2, 2))],
        )
        .unwrap()
    }

    #[test]
    fn transpose_of_known_graphs() {
        let g1t = partial_transpose(&g1());
        let expected = ClusteredGraph::from_edges(
            2,
            2,
            [edge((1, 1), (2, 1)), edge((1, 2), (2, 2)), edge((1, 2), (2, 1))],
        )
        .unwrap();
        assert_eq!(g1t, expected);

        let g2 = ClusteredGraph::from_edges(
            2,
            2,
            [edge((1, 1), (1, 2)), edge((1, 2), (2, 2)), edge((1, 2), (2, 1))],
        )
        .unwrap();
        let g2t = ClusteredGraph::from_edges(
            2,
            2,
            [edge((1, 1), (1, 2)), edge((1, 2), (2, 2)), edge((1, 1), (2, 2))],
        )
        .unwrap();
        assert_eq!(partial_transpose(&g2), g2t);

        let empty = ClusteredGraph::edgeless(2, 3).unwrap();
        assert_eq!(partial_transpose(&empty), empty);
    }

    #[test]
    fn partial_symmetry() {
        // only position-aligned inter-cluster edges: fixed by GTPT
        let aligned = ClusteredGraph::from_edges(
            2,
            3,
            [edge((1, 1), (2, 1)), edge((1, 3), (2, 3))],
        )
        .unwrap();
        assert!(is_partially_symmetric(&aligned));
        assert!(!is_partially_symmetric(&g1()));
    }

    fn arb_graph() -> impl Strategy<Value = ClusteredGraph> {
        (1usize..=4, 1usize..=4).prop_flat_map(|(n, m)| {
            let max_pairs = (n * m) * (n * m);
            proptest::collection::vec((1usize..=n, 1usize..=m, 1usize..=n, 1usize..=m), 0..max_pairs)
                .prop_map(move |pairs| {
                    let edges = pairs
                        .into_iter()
                        .filter(|(a, b, c, d)| (a, b) != (c, d))
                        .map(|(a, b, c, d)| edge((a, b), (c, d)));
                    ClusteredGraph::from_edges(n, m, edges).unwrap()
                })
        })
    }

    proptest! {
        #[test]
        fn involution_and_edge_count(g in arb_graph()) {
            let t = partial_transpose(&g);
            prop_assert_eq!(t.edge_count(), g.edge_count());
            prop_assert_eq!(partial_transpose(&t), g);
        }

        #[test]
        fn intra_cluster_edges_fixed(g in arb_graph()) {
            let t = partial_transpose(&g);
            for i in 1..=g.cluster_count() {
                prop_assert_eq!(
                    g.induced_bipartite(i, i).unwrap(),
                    t.induced_bipartite(i, i).unwrap()
                );
            }
        }

        #[test]
        fn edge_and_block_routes_agree(g in arb_graph()) {
            let via_blocks = partial_transpose_blocks(&block_matrix(&g)).to_graph();
            prop_assert_eq!(partial_transpose(&g), via_blocks);
        }
    }
}
