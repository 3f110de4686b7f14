//! Builders that manufacture new GTPT-cospectral graphs from existing ones:
//! bipartite padding, cluster-copy composition, the mirror extension that
//! grows clusters from `m` to `2m - 1` vertices, alternate clustering, and
//! the non-normal block template.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::Zero;

use crate::blocks::block_matrix;
use crate::error::{Error, Result};
use crate::exact::RatMatrix;
use crate::graph::{ClusteredGraph, VertexLabel};
use crate::iso::are_isomorphic;
use crate::matrix::IntMatrix;
use crate::spectral::are_cospectral;
use crate::structure::{
    certify_cospectral_by_blocks_with, commuting_condition, conjugates_block,
    conjugation_system_rows, is_normal_binary, normality_condition,
    nullspace_element_satisfying, BlockConjugationCertificate, SimilarityWitness, WitnessSearch,
};
use crate::transpose::partial_transpose;

/// Pads the smaller side of a bipartite graph (given as two parts and the
/// cross edges between them) with isolated vertices, producing a 2-cluster
/// graph with equal cluster sizes. The result is isomorphic to its partial
/// transpose, and dropping the isolated vertices from both recovers the
/// original graph and a relabeling of it.
pub fn pad_bipartite(m1: usize, m2: usize, edges: &[(usize, usize)]) -> Result<ClusteredGraph> {
    if m1 < 1 || m2 < 1 {
        return Err(Error::EmptyPart { m1, m2 });
    }
    for &(a, b) in edges {
        if a < 1 || a > m1 || b < 1 || b > m2 {
            return Err(Error::PartEdgeOutOfRange(a, b, m1, m2));
        }
    }
    let m = m1.max(m2);
    ClusteredGraph::from_edges(
        2,
        m,
        edges
            .iter()
            .map(|&(a, b)| (VertexLabel::new(1, a), VertexLabel::new(2, b))),
    )
}

/// Re-partitions the clusters along positions: label `(i, j)` becomes
/// `(j, i)`, swapping the roles of `n` and `m`. The underlying unlabeled
/// graph is unchanged.
pub fn alternate_clustering(g: &ClusteredGraph) -> ClusteredGraph {
    let swap = |v: VertexLabel| VertexLabel::new(v.position, v.cluster);
    ClusteredGraph::from_edges(
        g.cluster_size(),
        g.cluster_count(),
        g.edges().map(|&(u, v)| (swap(u), swap(v))),
    )
    .expect("transposing labels preserves validity")
}

/// Inter-cluster block content for [`procedure_1`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockAssignment {
    Zero,
    Identity,
    /// reuse the off-diagonal block `(i, j)` of the source graph
    CopyOf(usize, usize),
}

fn require_conditions(g: &ClusteredGraph, waive_check: bool) -> Result<()> {
    if waive_check {
        return Ok(());
    }
    if commuting_condition(g).holds && normality_condition(g).holds {
        Ok(())
    } else {
        Err(Error::ConditionsNotSatisfied)
    }
}

/// Assembles a new clustered graph from copies of the clusters of `g`.
/// Cluster `D_p` copies `C_{choices[p]}` (intra-cluster edges included); the
/// block between `D_p` and `D_q` is the zero block, the identity matching,
/// or a copy of an off-diagonal block of `g`, as assigned (missing pairs
/// default to zero). Keys must satisfy `p < q`.
pub fn procedure_1(
    g: &ClusteredGraph,
    choices: &[usize],
    assignments: &BTreeMap<(usize, usize), BlockAssignment>,
    waive_check: bool,
) -> Result<ClusteredGraph> {
    require_conditions(g, waive_check)?;
    let k = choices.len();
    if k < 2 {
        return Err(Error::TooFewClusters(k));
    }
    let (n, m) = (g.cluster_count(), g.cluster_size());
    for &c in choices {
        if c < 1 || c > n {
            return Err(Error::ClusterOutOfRange { index: c, n });
        }
    }
    for (&(p, q), assignment) in assignments {
        if p < 1 || q <= p || q > k {
            return Err(Error::ClusterOutOfRange { index: q.max(p), n: k });
        }
        if let BlockAssignment::CopyOf(i, j) = assignment {
            if *i == *j {
                return Err(Error::CopyOfDiagonal(*i));
            }
            for &idx in [i, j] {
                if idx < 1 || idx > n {
                    return Err(Error::ClusterOutOfRange { index: idx, n });
                }
            }
        }
    }

    let source_blocks = block_matrix(g);
    let mut edges: Vec<(VertexLabel, VertexLabel)> = Vec::new();
    for (p, &c) in choices.iter().enumerate() {
        let p = p + 1;
        for (u, v) in g.induced_bipartite(c, c)?.edges() {
            edges.push((
                VertexLabel::new(p, u.position),
                VertexLabel::new(p, v.position),
            ));
        }
    }
    for p in 1..=k {
        for q in p + 1..=k {
            match assignments.get(&(p, q)).copied().unwrap_or(BlockAssignment::Zero) {
                BlockAssignment::Zero => {}
                BlockAssignment::Identity => {
                    for l in 1..=m {
                        edges.push((VertexLabel::new(p, l), VertexLabel::new(q, l)));
                    }
                }
                BlockAssignment::CopyOf(i, j) => {
                    let block = source_blocks.block(i, j);
                    for r in 0..m {
                        for c in 0..m {
                            if block.get(r, c) == 1 {
                                edges.push((
                                    VertexLabel::new(p, r + 1),
                                    VertexLabel::new(q, c + 1),
                                ));
                            }
                        }
                    }
                }
            }
        }
    }
    ClusteredGraph::from_edges(k, m, edges)
}

/// Grows every cluster from `m` to `2m - 1` vertices: positions
/// `m+1..=2m-1` are new, position `m` is shared between the original
/// vertices and their mirror images `f(v_{i,l}) = v_{i,2m-l}`. All edges of
/// `g` are kept, and every inter-cluster edge is duplicated between the
/// mirror images of its endpoints.
pub fn procedure_2(g: &ClusteredGraph, waive_check: bool) -> Result<ClusteredGraph> {
    grow_clusters(g, waive_check, false)
}

/// Variant of [`procedure_2`] that mirrors intra-cluster edges as well as
/// inter-cluster ones. The two agree whenever the clusters of `g` are
/// edgeless (such as the worked 9-vertex example); the enumeration models
/// that pipe an alternate clustering through this construction reproduce
/// their published counts with this variant.
pub fn procedure_2_mirror_intra(g: &ClusteredGraph, waive_check: bool) -> Result<ClusteredGraph> {
    grow_clusters(g, waive_check, true)
}

fn grow_clusters(g: &ClusteredGraph, waive_check: bool, mirror_intra: bool) -> Result<ClusteredGraph> {
    require_conditions(g, waive_check)?;
    let (n, m) = (g.cluster_count(), g.cluster_size());
    let mirror = |v: VertexLabel| VertexLabel::new(v.cluster, 2 * m - v.position);
    let mut edges: Vec<(VertexLabel, VertexLabel)> = g.edges().copied().collect();
    for &(u, v) in g.edges() {
        if u.cluster != v.cluster || mirror_intra {
            edges.push((mirror(u), mirror(v)));
        }
    }
    ClusteredGraph::from_edges(n, 2 * m - 1, edges)
}

/// The column-mirroring map that sends an `m x m` block of the source graph
/// to the corresponding `(2m-1) x (2m-1)` block of the [`procedure_2`]
/// output, and a base similarity witness to its extended counterpart.
pub fn mirror_extend(mat: &RatMatrix) -> RatMatrix {
    let m = mat.order();
    let last = m - 1;
    let size = 2 * m - 1;
    let mut out = RatMatrix::zero(size);
    for r in 0..size {
        for k in 0..size {
            let entry = if r <= last && k <= last {
                Some((r, k))
            } else if r == last && k > last {
                Some((last, 2 * last - k))
            } else if r > last && k == last {
                Some((2 * last - r, last))
            } else if r > last && k > last {
                Some((2 * last - r, 2 * last - k))
            } else {
                None
            };
            if let Some((i, j)) = entry {
                out.set(r, k, mat.get(i, j).clone());
            }
        }
    }
    out
}

/// Integer version of [`mirror_extend`] for adjacency blocks.
pub fn mirror_extend_int(mat: &IntMatrix) -> IntMatrix {
    let rat = mirror_extend(&RatMatrix::from_int(mat));
    let size = rat.order();
    let mut out = IntMatrix::zero(size);
    for r in 0..size {
        for k in 0..size {
            let v = rat.get(r, k);
            debug_assert!(v.denom() == &BigInt::from(1));
            out.set(r, k, v.numer().try_into().expect("small integer entry"));
        }
    }
    out
}

/// A base witness for the blocks of `g` together with its mirror extension,
/// exactly verified against every block of the [`procedure_2`] output.
#[derive(Debug, Clone)]
pub struct MirrorExtensionWitness {
    pub base: RatMatrix,
    pub extended: RatMatrix,
}

/// Finds a similarity witness for the blocks of `g` whose mirror extension
/// is again a witness for the blocks of `procedure_2(g)`. On top of the
/// stacked conjugation systems this imposes the linear compatibility
/// constraints that make the extension commute with the conjugations:
/// writing `u` and `v` for the last column and last row of the witness and
/// `c` for the last column of a block, `u[i] c[j] = c[i] v[j]` must hold on
/// the non-shared coordinates, and `u`, `v` must vanish there whenever a
/// cluster's shared vertex has intra-cluster neighbors.
pub fn procedure_2_extended_witness(
    g: &ClusteredGraph,
    search: &WitnessSearch,
) -> Option<MirrorExtensionWitness> {
    let m = g.cluster_size();
    let blocks = block_matrix(g);
    let mut inter: BTreeSet<IntMatrix> = BTreeSet::new();
    let mut diag: BTreeSet<IntMatrix> = BTreeSet::new();
    for ((i, j), b) in blocks.blocks() {
        if i == j {
            diag.insert(b.clone());
        } else {
            inter.insert(b.clone());
        }
    }
    let var = |k: usize, l: usize| k * m + l;
    let mut rows = Vec::new();
    for b in inter.iter().chain(diag.iter()) {
        rows.extend(conjugation_system_rows(b));
    }
    if m >= 2 {
        let last = m - 1;
        for b in &inter {
            let c: Vec<i64> = (0..m).map(|r| b.get(r, last)).collect();
            for i in 0..last {
                for j in 0..last {
                    // u[i] c[j] - c[i] v[j] = 0
                    let mut row = vec![BigInt::zero(); m * m];
                    row[var(i, last)] += BigInt::from(c[j]);
                    row[var(last, j)] -= BigInt::from(c[i]);
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        for b in &diag {
            let shared_has_neighbors = (0..m).any(|r| b.get(r, last) != 0);
            if !shared_has_neighbors {
                continue;
            }
            for l in 0..last {
                for target in [var(l, last), var(last, l)] {
                    let mut row = vec![BigInt::zero(); m * m];
                    row[target] += BigInt::from(1);
                    rows.push(row);
                }
            }
        }
    }
    // the mirror extension of a nonsingular matrix can be singular, so the
    // extension is part of the acceptance check
    let base = nullspace_element_satisfying(&rows, m, search, &|x| {
        mirror_extend(x).is_nonsingular()
    })?
    .normalized();
    let extended = mirror_extend(&base);
    let h = procedure_2(g, true).expect("waived preconditions");
    let h_blocks = block_matrix(&h);
    for (_, b) in h_blocks.blocks() {
        if !conjugates_block(&extended, b) {
            return None;
        }
    }
    debug_assert!(extended.is_nonsingular());
    Some(MirrorExtensionWitness { base, extended })
}

/// Inter-cluster block content for the non-normal template builder.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateAssignment {
    Template,
    Identity,
    Zero,
}

/// Everything the non-normal template builder can say about its output.
#[derive(Debug, Clone)]
pub struct NonnormalModel {
    pub graph: ClusteredGraph,
    pub transpose: ClusteredGraph,
    pub cospectral: bool,
    pub isomorphic: bool,
    pub degree_sequence: Vec<usize>,
    pub degree_sequence_transpose: Vec<usize>,
    pub template_witness: SimilarityWitness,
    pub certificate: Option<BlockConjugationCertificate>,
}

/// Builds a clustered graph with edgeless clusters whose off-diagonal
/// blocks are drawn from `{A, I, 0}` for a non-normal binary template `A`.
/// Assignment keys must satisfy `i < j`; missing pairs default to zero.
/// The report carries both degree sequences and the exact cospectrality and
/// isomorphism verdicts for the pair `(G, G^tau)`.
pub fn build_nonnormal_model(
    a: &IntMatrix,
    n: usize,
    assignments: &BTreeMap<(usize, usize), TemplateAssignment>,
    search: &WitnessSearch,
) -> Result<NonnormalModel> {
    let m = a.order();
    if n < 2 {
        return Err(Error::TooFewClusters(n));
    }
    if is_normal_binary(a) {
        return Err(Error::MatrixIsNormal);
    }
    if !assignments
        .values()
        .any(|&v| v == TemplateAssignment::Template)
    {
        return Err(Error::TemplateUnused);
    }
    for &(i, j) in assignments.keys() {
        if i < 1 || j <= i || j > n {
            return Err(Error::ClusterOutOfRange { index: j.max(i), n });
        }
    }
    let template_witness =
        crate::structure::similarity_witness_with(std::slice::from_ref(a), search)
            .expect("every rational matrix is similar to its transpose; search budget exhausted");

    let mut edges = Vec::new();
    for (&(i, j), assignment) in assignments {
        match assignment {
            TemplateAssignment::Zero => {}
            TemplateAssignment::Identity => {
                for l in 1..=m {
                    edges.push((VertexLabel::new(i, l), VertexLabel::new(j, l)));
                }
            }
            TemplateAssignment::Template => {
                for r in 0..m {
                    for c in 0..m {
                        if a.get(r, c) == 1 {
                            edges.push((VertexLabel::new(i, r + 1), VertexLabel::new(j, c + 1)));
                        }
                    }
                }
            }
        }
    }
    let graph = ClusteredGraph::from_edges(n, m, edges)?;
    let transpose = partial_transpose(&graph);
    let cospectral = are_cospectral(&graph, &transpose)?;
    let isomorphic = are_isomorphic(&graph, &transpose);
    let certificate = certify_cospectral_by_blocks_with(&graph, search);
    Ok(NonnormalModel {
        degree_sequence: graph.degree_sequence(),
        degree_sequence_transpose: transpose.degree_sequence(),
        cospectral,
        isomorphic,
        template_witness,
        certificate,
        graph,
        transpose,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::edge;
    use crate::transpose::is_partially_symmetric;

    fn example_chain() -> ClusteredGraph {
        ClusteredGraph::from_edges(
            3,
            2,
            [
                edge((1, 1), (2, 1)),
                edge((1, 1), (2, 2)),
                edge((2, 1), (3, 1)),
                edge((2, 2), (3, 2)),
            ],
        )
        .unwrap()
    }

    #[test]
    fn pad_star_with_unequal_parts() {
        let star = pad_bipartite(1, 3, &[(1, 1), (1, 2), (1, 3)]).unwrap();
        assert_eq!(star.cluster_size(), 3);
        assert_eq!(star.vertex_count(), 6);
        assert_eq!(star.edge_count(), 3);
        assert!(are_isomorphic(&star, &partial_transpose(&star)));

        let equal = pad_bipartite(2, 2, &[(1, 2)]).unwrap();
        assert_eq!(equal.cluster_size(), 2);

        assert!(pad_bipartite(0, 2, &[]).is_err());
        assert!(pad_bipartite(2, 2, &[(3, 1)]).is_err());
    }

    #[test]
    fn alternate_clustering_transposes_labels() {
        let g = ClusteredGraph::from_edges(2, 3, [edge((1, 2), (2, 3)), edge((1, 1), (1, 2))]).unwrap();
        let ga = alternate_clustering(&g);
        assert_eq!(ga.cluster_count(), 3);
        assert_eq!(ga.cluster_size(), 2);
        assert!(ga.has_edge(VertexLabel::new(2, 1), VertexLabel::new(3, 2)));
        assert!(ga.has_edge(VertexLabel::new(1, 1), VertexLabel::new(2, 1)));
        assert!(are_isomorphic(&g, &ga));
        assert_eq!(alternate_clustering(&ga), g);
    }

    #[test]
    fn procedure_1_model_two_shape() {
        // bipartite base between clusters 1 and 2, cluster 3 isolated,
        // then attach an identity matching between clusters 2 and 3
        let base = ClusteredGraph::from_edges(
            3,
            2,
            [edge((1, 1), (2, 1)), edge((1, 1), (2, 2))],
        )
        .unwrap();
        let mut assignments = BTreeMap::new();
        assignments.insert((1, 2), BlockAssignment::CopyOf(1, 2));
        assignments.insert((2, 3), BlockAssignment::Identity);
        let h = procedure_1(&base, &[1, 2, 3], &assignments, true).unwrap();
        let expected = ClusteredGraph::from_edges(
            3,
            2,
            [
                edge((1, 1), (2, 1)),
                edge((1, 1), (2, 2)),
                edge((2, 1), (3, 1)),
                edge((2, 2), (3, 2)),
            ],
        )
        .unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn procedure_1_zero_assignments_give_disjoint_copies() {
        let g = ClusteredGraph::from_edges(2, 2, [edge((1, 1), (1, 2))]).unwrap();
        let h = procedure_1(&g, &[1, 1, 2], &BTreeMap::new(), true).unwrap();
        assert_eq!(h.cluster_count(), 3);
        assert_eq!(h.edge_count(), 2);
        assert!(h.has_edge(VertexLabel::new(1, 1), VertexLabel::new(1, 2)));
        assert!(h.has_edge(VertexLabel::new(2, 1), VertexLabel::new(2, 2)));
    }

    #[test]
    fn procedure_1_validation() {
        let g = ClusteredGraph::edgeless(2, 2).unwrap();
        assert!(matches!(
            procedure_1(&g, &[1], &BTreeMap::new(), true),
            Err(Error::TooFewClusters(1))
        ));
        let mut bad = BTreeMap::new();
        bad.insert((1, 2), BlockAssignment::CopyOf(1, 1));
        assert!(matches!(
            procedure_1(&g, &[1, 2], &bad, true),
            Err(Error::CopyOfDiagonal(1))
        ));
        // the chain violates the conditions, so an unwaived call refuses
        assert!(matches!(
            procedure_1(&example_chain(), &[1, 2], &BTreeMap::new(), false),
            Err(Error::ConditionsNotSatisfied)
        ));
    }

    #[test]
    fn procedure_2_grows_the_example_chain() {
        let h = procedure_2(&example_chain(), true).unwrap();
        let expected = ClusteredGraph::from_edges(
            3,
            3,
            [
                edge((1, 1), (2, 1)),
                edge((1, 1), (2, 2)),
                edge((1, 3), (2, 2)),
                edge((1, 3), (2, 3)),
                edge((2, 1), (3, 1)),
                edge((2, 2), (3, 2)),
                edge((2, 3), (3, 3)),
            ],
        )
        .unwrap();
        assert_eq!(h, expected);
        let b12 = block_matrix(&h);
        assert_eq!(
            b12.block(1, 2),
            &IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 0], vec![0, 1, 1]])
        );
    }

    #[test]
    fn procedure_2_blocks_follow_the_mirror_map() {
        let g = example_chain();
        let h = procedure_2(&g, true).unwrap();
        let gb = block_matrix(&g);
        let hb = block_matrix(&h);
        for i in 1..=3 {
            for j in 1..=3 {
                if i == j {
                    continue;
                }
                assert_eq!(hb.block(i, j), &mirror_extend_int(gb.block(i, j)));
            }
        }
    }

    #[test]
    fn procedure_2_without_inter_edges_is_disjoint() {
        let g = ClusteredGraph::from_edges(2, 2, [edge((1, 1), (1, 2))]).unwrap();
        let h = procedure_2(&g, true).unwrap();
        assert_eq!(h.vertex_count(), 6);
        assert_eq!(h.edge_count(), 1);
    }

    #[test]
    fn extended_witness_for_example_chain() {
        let w = procedure_2_extended_witness(&example_chain(), &WitnessSearch::default()).unwrap();
        let expected = RatMatrix::from_int(&IntMatrix::from_rows(&[vec![1, 1], vec![1, -1]]));
        assert_eq!(w.base.normalized(), expected.normalized());
        let h = procedure_2(&example_chain(), true).unwrap();
        for (_, b) in block_matrix(&h).blocks() {
            assert!(conjugates_block(&w.extended, b));
        }
    }

    #[test]
    fn extended_witness_on_circulant_block_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let n = rng.gen_range(1..=3);
            let m = rng.gen_range(1..=4);
            let mut edges = Vec::new();
            for i in 1..=n {
                for j in i..=n {
                    // every block a union of cyclic shifts, so the whole
                    // family is circulant and hence commuting normal; on the
                    // diagonal the undirected edges symmetrize the shift
                    for s in 0..m {
                        if (i == j && s == 0) || !rng.gen_bool(0.4) {
                            continue;
                        }
                        for r in 0..m {
                            edges.push((
                                VertexLabel::new(i, r + 1),
                                VertexLabel::new(j, (r + s) % m + 1),
                            ));
                        }
                    }
                }
            }
            let g = ClusteredGraph::from_edges(n, m, edges).unwrap();
            assert!(commuting_condition(&g).holds && normality_condition(&g).holds);
            let w = procedure_2_extended_witness(&g, &WitnessSearch::default())
                .expect("commuting-normal circulant blocks admit an extendable witness");
            let h = procedure_2(&g, true).unwrap();
            for (_, b) in block_matrix(&h).blocks() {
                assert!(conjugates_block(&w.extended, b));
            }
        }
    }

    #[test]
    fn nonnormal_template_two_clusters() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![0, 0]]);
        let mut assignments = BTreeMap::new();
        assignments.insert((1, 2), TemplateAssignment::Template);
        let report =
            build_nonnormal_model(&a, 2, &assignments, &WitnessSearch::default()).unwrap();
        assert!(report.cospectral);
        assert_eq!(report.graph.edge_count(), 2);
        assert!(report.certificate.is_some());
    }

    #[test]
    fn nonnormal_template_identity_only_is_rejected() {
        let a = IntMatrix::from_rows(&[vec![1, 1], vec![0, 0]]);
        let mut assignments = BTreeMap::new();
        assignments.insert((1, 2), TemplateAssignment::Identity);
        assert!(matches!(
            build_nonnormal_model(&a, 2, &assignments, &WitnessSearch::default()),
            Err(Error::TemplateUnused)
        ));
        let normal = IntMatrix::identity(2);
        let mut with_template = BTreeMap::new();
        with_template.insert((1, 2), TemplateAssignment::Template);
        assert!(matches!(
            build_nonnormal_model(&normal, 2, &with_template, &WitnessSearch::default()),
            Err(Error::MatrixIsNormal)
        ));
    }

    #[test]
    fn nonnormal_template_all_identity_blocks_are_partially_symmetric() {
        // sanity check on the degenerate corner through procedure_1 instead:
        // identity matchings are fixed by the transpose
        let g = ClusteredGraph::from_edges(
            2,
            2,
            [edge((1, 1), (2, 1)), edge((1, 2), (2, 2))],
        )
        .unwrap();
        assert!(is_partially_symmetric(&g));
    }

    #[test]
    fn nonnormal_template_three_clusters_row_sum_violation() {
        let a = IntMatrix::from_rows(&[vec![1, 1, 0], vec![0, 0, 0], vec![0, 0, 1]]);
        assert!(!is_normal_binary(&a));
        let mut assignments = BTreeMap::new();
        assignments.insert((1, 2), TemplateAssignment::Template);
        assignments.insert((2, 3), TemplateAssignment::Identity);
        let report =
            build_nonnormal_model(&a, 3, &assignments, &WitnessSearch::default()).unwrap();
        assert!(report.cospectral);
        // isomorphism is reported, not asserted either way
        let _ = report.isomorphic;
    }
}
