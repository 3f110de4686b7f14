//! Sufficient-condition machinery for GTPT cospectrality: neighborhood-level
//! commuting/normality conditions, their matrix-level counterparts, and
//! exact rational similarity witnesses found in the null space of the
//! stacked conjugation systems `X A^t = A X`.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::blocks::{block_matrix, BlockAdjacency};
use crate::error::{Error, Result};
use crate::exact::{int_det, null_space_basis, RatMatrix};
use crate::graph::{ClusteredGraph, VertexLabel};
use crate::matrix::IntMatrix;
use crate::spectral::are_cospectral;
use crate::transpose::partial_transpose;

/// Positions in the target cluster adjacent to a source vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NeighborhoodIndexSet {
    pub source: VertexLabel,
    pub target_cluster: usize,
    pub indices: BTreeSet<usize>,
}

/// `beta` is in the result iff `(v, v_{j,beta})` is an edge.
pub fn nbd_index_set(g: &ClusteredGraph, v: VertexLabel, j: usize) -> Result<NeighborhoodIndexSet> {
    let (n, m) = (g.cluster_count(), g.cluster_size());
    if v.cluster < 1 || v.cluster > n || v.position < 1 || v.position > m {
        return Err(Error::LabelOutOfRange { label: v, n, m });
    }
    if j < 1 || j > n {
        return Err(Error::ClusterOutOfRange { index: j, n });
    }
    let indices = (1..=m)
        .filter(|&beta| g.has_edge(v, VertexLabel::new(j, beta)))
        .collect();
    Ok(NeighborhoodIndexSet {
        source: v,
        target_cluster: j,
        indices,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CommutingViolation {
    pub i1: usize,
    pub j1: usize,
    pub i2: usize,
    pub j2: usize,
    pub alpha: usize,
    pub beta: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalityViolation {
    pub i: usize,
    pub j: usize,
    pub alpha: usize,
    pub beta: usize,
    pub left: usize,
    pub right: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionCheck<V> {
    pub holds: bool,
    pub violation: Option<V>,
}

fn nbd_masks(g: &ClusteredGraph) -> Vec<Vec<Vec<u64>>> {
    let (n, m) = (g.cluster_count(), g.cluster_size());
    let mut table = vec![vec![vec![0u64; m + 1]; n + 1]; n + 1];
    for i in 1..=n {
        for j in 1..=n {
            for alpha in 1..=m {
                let mut mask = 0u64;
                for beta in 1..=m {
                    if g.has_edge(VertexLabel::new(i, alpha), VertexLabel::new(j, beta)) {
                        mask |= 1 << beta;
                    }
                }
                table[i][j][alpha] = mask;
            }
        }
    }
    table
}

/// Commuting condition over all ordered cluster pairs `(i1,j1)`, `(i2,j2)`:
/// `|nbd_{C_{j1}}(v_{i1,a}) ∩ nbd_{C_{i2}}(v_{j2,b})|` must equal
/// `|nbd_{C_{i1}}(v_{j1,b}) ∩ nbd_{C_{j2}}(v_{i2,a})|`. The first violating
/// tuple in lexicographic order is reported.
pub fn commuting_condition(g: &ClusteredGraph) -> ConditionCheck<CommutingViolation> {
    let (n, m) = (g.cluster_count(), g.cluster_size());
    let nbd = nbd_masks(g);
    for i1 in 1..=n {
        for j1 in 1..=n {
            for i2 in 1..=n {
                for j2 in 1..=n {
                    for alpha in 1..=m {
                        for beta in 1..=m {
                            let left =
                                (nbd[i1][j1][alpha] & nbd[j2][i2][beta]).count_ones() as usize;
                            let right =
                                (nbd[j1][i1][beta] & nbd[i2][j2][alpha]).count_ones() as usize;
                            if left != right {
                                return ConditionCheck {
                                    holds: false,
                                    violation: Some(CommutingViolation {
                                        i1,
                                        j1,
                                        i2,
                                        j2,
                                        alpha,
                                        beta,
                                        left,
                                        right,
                                    }),
                                };
                            }
                        }
                    }
                }
            }
        }
    }
    ConditionCheck {
        holds: true,
        violation: None,
    }
}

/// Normality condition: for every `i != j` and positions `alpha, beta`, the
/// number of common neighbors in `C_j` of `v_{i,alpha}, v_{i,beta}` equals
/// the number of common neighbors in `C_i` of `v_{j,alpha}, v_{j,beta}`.
pub fn normality_condition(g: &ClusteredGraph) -> ConditionCheck<NormalityViolation> {
    let (n, m) = (g.cluster_count(), g.cluster_size());
    let nbd = nbd_masks(g);
    for i in 1..=n {
        for j in 1..=n {
            if i == j {
                continue;
            }
            for alpha in 1..=m {
                for beta in 1..=m {
                    let left = (nbd[i][j][alpha] & nbd[i][j][beta]).count_ones() as usize;
                    let right = (nbd[j][i][alpha] & nbd[j][i][beta]).count_ones() as usize;
                    if left != right {
                        return ConditionCheck {
                            holds: false,
                            violation: Some(NormalityViolation {
                                i,
                                j,
                                alpha,
                                beta,
                                left,
                                right,
                            }),
                        };
                    }
                }
            }
        }
    }
    ConditionCheck {
        holds: true,
        violation: None,
    }
}

/// Matrix-level counterpart of the two neighborhood conditions: every block
/// is normal and every ordered pair of blocks commutes, in exact integer
/// arithmetic.
pub fn blocks_commuting_normal(a: &BlockAdjacency) -> bool {
    let blocks: Vec<&IntMatrix> = a.blocks().map(|(_, b)| b).collect();
    blocks.iter().all(|b| b.is_normal())
        && blocks
            .iter()
            .enumerate()
            .all(|(i, b)| blocks[i + 1..].iter().all(|c| b.commutes_with(c)))
}

/// Row sums equal column sums: a necessary condition for a binary matrix to
/// be normal, and a cheap pre-filter for [`is_normal_binary`].
pub fn row_col_sums_match(a: &IntMatrix) -> bool {
    (0..a.order()).all(|i| {
        let r: i64 = (0..a.order()).map(|j| a.get(i, j)).sum();
        let c: i64 = (0..a.order()).map(|j| a.get(j, i)).sum();
        r == c
    })
}

/// Exact normality of a 0/1 matrix.
pub fn is_normal_binary(a: &IntMatrix) -> bool {
    debug_assert!(a.is_binary());
    row_col_sums_match(a) && a.is_normal()
}

/// Search policy for the nonsingular-element hunt inside a null space.
#[derive(Debug, Clone, Copy)]
pub struct WitnessSearch {
    pub seed: u64,
    pub max_random_trials: usize,
}

impl Default for WitnessSearch {
    fn default() -> Self {
        WitnessSearch {
            seed: 0,
            max_random_trials: 10_000,
        }
    }
}

/// Nonsingular exact rational matrix with `X * A^t == A * X` for every
/// verified block.
#[derive(Debug, Clone)]
pub struct SimilarityWitness {
    pub matrix: RatMatrix,
    /// indices into the family of blocks the witness was requested for
    pub verified_blocks: Vec<usize>,
}

/// Linear system rows (over the flattened row-major unknown `X`) encoding
/// `X * A^t - A * X = 0`.
pub fn conjugation_system_rows(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let m = a.order();
    let var = |k: usize, l: usize| k * m + l;
    let mut rows = Vec::with_capacity(m * m);
    for r in 0..m {
        for c in 0..m {
            let mut row = vec![BigInt::from(0); m * m];
            for l in 0..m {
                // (X A^t)[r,c] term: X[r,l] * A[c,l]
                row[var(r, l)] += BigInt::from(a.get(c, l));
            }
            for k in 0..m {
                // -(A X)[r,c] term: -A[r,k] * X[k,c]
                row[var(k, c)] -= BigInt::from(a.get(r, k));
            }
            rows.push(row);
        }
    }
    rows
}

/// Solves a stacked homogeneous system over the flattened `m x m` unknown
/// and hunts for a nonsingular element of its null space: each basis vector
/// first, then small deterministic integer combinations, then seeded random
/// combinations up to the trial budget. Exhausting the budget returns `None`
/// without claiming non-existence.
pub fn nonsingular_nullspace_element(
    rows: &[Vec<BigInt>],
    order: usize,
    search: &WitnessSearch,
) -> Option<RatMatrix> {
    nullspace_element_satisfying(rows, order, search, &|_| true)
}

/// Like [`nonsingular_nullspace_element`] but with an extra acceptance
/// predicate on top of nonsingularity.
pub fn nullspace_element_satisfying(
    rows: &[Vec<BigInt>],
    order: usize,
    search: &WitnessSearch,
    accept: &dyn Fn(&RatMatrix) -> bool,
) -> Option<RatMatrix> {
    let basis = null_space_basis(rows, order * order);
    if basis.is_empty() {
        return None;
    }
    let good = |candidate: &[BigInt]| -> Option<RatMatrix> {
        use num_traits::Zero;
        if int_det(order, candidate).is_zero() {
            return None;
        }
        let mat = RatMatrix::from_flat(order, candidate);
        accept(&mat).then_some(mat)
    };
    for vec in &basis {
        if let Some(found) = good(vec) {
            return Some(found);
        }
    }
    let dims = basis.len();
    let combine = |coeffs: &[i64]| -> Vec<BigInt> {
        let mut out = vec![BigInt::from(0); order * order];
        for (c, vec) in coeffs.iter().zip(&basis) {
            if *c == 0 {
                continue;
            }
            for (o, v) in out.iter_mut().zip(vec) {
                *o += v * BigInt::from(*c);
            }
        }
        out
    };
    // deterministic sweep of small coefficients when the space is small
    if dims <= 5 {
        let mut coeffs = vec![-2i64; dims];
        loop {
            if coeffs.iter().any(|&c| c != 0) {
                if let Some(found) = good(&combine(&coeffs)) {
                    return Some(found);
                }
            }
            let mut idx = 0;
            loop {
                if idx == dims {
                    return random_phase(dims, &combine, &good, search);
                }
                coeffs[idx] += 1;
                if coeffs[idx] <= 2 {
                    break;
                }
                coeffs[idx] = -2;
                idx += 1;
            }
        }
    }
    random_phase(dims, &combine, &good, search)
}

fn random_phase(
    dims: usize,
    combine: &dyn Fn(&[i64]) -> Vec<BigInt>,
    good: &dyn Fn(&[BigInt]) -> Option<RatMatrix>,
    search: &WitnessSearch,
) -> Option<RatMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(search.seed);
    for trial in 0..search.max_random_trials {
        let range = 2 + (trial / 1000) as i64;
        let coeffs: Vec<i64> = (0..dims).map(|_| rng.gen_range(-range..=range)).collect();
        if coeffs.iter().all(|&c| c == 0) {
            continue;
        }
        if let Some(found) = good(&combine(&coeffs)) {
            return Some(found);
        }
    }
    None
}

/// Verifies `X * A^t == A * X` exactly for one block.
pub fn conjugates_block(x: &RatMatrix, a: &IntMatrix) -> bool {
    let a_rat = RatMatrix::from_int(a);
    x.mul(&a_rat.transpose()) == a_rat.mul(x)
}

/// A common similarity witness for a family of same-order blocks, found in
/// the exact rational null space of the stacked conjugation systems. When
/// the family is commuting normal a witness is guaranteed to exist; the
/// search is still a semi-decision and may return `None` on budget
/// exhaustion.
pub fn similarity_witness_with(
    blocks: &[IntMatrix],
    search: &WitnessSearch,
) -> Option<SimilarityWitness> {
    assert!(!blocks.is_empty(), "witness needs at least one block");
    let order = blocks[0].order();
    assert!(
        blocks.iter().all(|b| b.order() == order),
        "all blocks must share one order"
    );
    let mut rows = Vec::new();
    for b in blocks {
        rows.extend(conjugation_system_rows(b));
    }
    let x = nonsingular_nullspace_element(&rows, order, search)?;
    let x = x.normalized();
    assert!(x.is_nonsingular());
    assert!(
        blocks.iter().all(|b| conjugates_block(&x, b)),
        "null-space element failed exact verification"
    );
    Some(SimilarityWitness {
        matrix: x,
        verified_blocks: (0..blocks.len()).collect(),
    })
}

pub fn similarity_witness(blocks: &[IntMatrix]) -> Option<SimilarityWitness> {
    similarity_witness_with(blocks, &WitnessSearch::default())
}

/// Witness that a single matrix is similar to its transpose. Over the
/// rationals one always exists; a `None` here means the search budget ran
/// out, which is a defect to investigate rather than a domain answer.
pub fn is_similar_to_transpose(a: &IntMatrix) -> Option<SimilarityWitness> {
    similarity_witness(std::slice::from_ref(a))
}

pub fn is_similar_to_transpose_with(
    a: &IntMatrix,
    search: &WitnessSearch,
) -> Option<SimilarityWitness> {
    similarity_witness_with(std::slice::from_ref(a), search)
}

/// Certificate that `diag(X, ..., X)` conjugates the adjacency matrix of
/// `G` onto that of `G^tau`, which forces the two graphs to be cospectral.
#[derive(Debug, Clone)]
pub struct BlockConjugationCertificate {
    /// the common block witness `X`
    pub witness: SimilarityWitness,
    /// all block positions `(i, j)` the witness was verified against
    pub conjugated_blocks: Vec<(usize, usize)>,
    /// exact cospectrality re-check through the characteristic polynomials
    pub cospectral_confirmed: bool,
}

/// Builds the block-diagonal conjugation certificate for `G` when a common
/// witness exists for the distinct blocks of its adjacency matrix.
pub fn certify_cospectral_by_blocks(g: &ClusteredGraph) -> Option<BlockConjugationCertificate> {
    certify_cospectral_by_blocks_with(g, &WitnessSearch::default())
}

pub fn certify_cospectral_by_blocks_with(
    g: &ClusteredGraph,
    search: &WitnessSearch,
) -> Option<BlockConjugationCertificate> {
    let blocks = block_matrix(g);
    let distinct: Vec<IntMatrix> = blocks
        .blocks()
        .map(|(_, b)| b.clone())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let witness = similarity_witness_with(&distinct, search)?;
    let all_positions: Vec<(usize, usize)> = blocks.blocks().map(|(pos, _)| pos).collect();
    debug_assert!(blocks
        .blocks()
        .all(|(_, b)| conjugates_block(&witness.matrix, b)));
    let cospectral = are_cospectral(g, &partial_transpose(g))
        .expect("G and G^tau share a vertex count");
    assert!(
        cospectral,
        "verified block conjugation certificate contradicts the characteristic polynomials"
    );
    Some(BlockConjugationCertificate {
        witness,
        conjugated_blocks: all_positions,
        cospectral_confirmed: cospectral,
    })
}
