//! Shared helpers for the integration tests: seeded random generators and
//! the independent brute-force oracles the acceptance suite checks against.

#![allow(dead_code)]

use gtpt::graph::{ClusteredGraph, VertexLabel};
use gtpt::matrix::IntMatrix;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random clustered graph with `n <= max_n`, `m <= max_m`.
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> ClusteredGraph {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let p: f64 = rng.gen_range(0.1..0.7);
    let mut edges = Vec::new();
    let vertices: Vec<VertexLabel> = (1..=n)
        .flat_map(|i| (1..=m).map(move |j| VertexLabel::new(i, j)))
        .collect();
    for (a, u) in vertices.iter().enumerate() {
        for v in &vertices[a + 1..] {
            if rng.gen_bool(p) {
                edges.push((*u, *v));
            }
        }
    }
    ClusteredGraph::from_edges(n, m, edges).unwrap()
}

/// Random 2-cluster graph whose clusters carry identical intra-cluster
/// edge sets under the position-identity map; inter-cluster edges are
/// arbitrary.
pub fn random_pseudo_bipartite(rng: &mut ChaCha8Rng, max_m: usize) -> ClusteredGraph {
    let m = rng.gen_range(1..=max_m);
    let mut edges = Vec::new();
    for a in 1..=m {
        for b in a + 1..=m {
            if rng.gen_bool(0.4) {
                edges.push((VertexLabel::new(1, a), VertexLabel::new(1, b)));
                edges.push((VertexLabel::new(2, a), VertexLabel::new(2, b)));
            }
        }
    }
    for a in 1..=m {
        for b in 1..=m {
            if rng.gen_bool(0.4) {
                edges.push((VertexLabel::new(1, a), VertexLabel::new(2, b)));
            }
        }
    }
    ClusteredGraph::from_edges(2, m, edges).unwrap()
}

/// Random bipartite graph given as parts and cross edges.
pub fn random_bipartite_parts(
    rng: &mut ChaCha8Rng,
    max_m: usize,
) -> (usize, usize, Vec<(usize, usize)>) {
    let m1 = rng.gen_range(1..=max_m);
    let m2 = rng.gen_range(1..=max_m);
    let mut edges = Vec::new();
    for a in 1..=m1 {
        for b in 1..=m2 {
            if rng.gen_bool(0.4) {
                edges.push((a, b));
            }
        }
    }
    (m1, m2, edges)
}

/// Random 0/1 circulant matrix of order `m`: a union of cyclic shifts.
pub fn random_circulant(rng: &mut ChaCha8Rng, m: usize) -> IntMatrix {
    let mut mat = IntMatrix::zero(m);
    for s in 0..m {
        if rng.gen_bool(0.4) {
            for i in 0..m {
                mat.set(i, (i + s) % m, 1);
            }
        }
    }
    mat
}

/// Random symmetric 0/1 circulant with zero diagonal (a valid cluster
/// adjacency matrix that commutes with every other circulant).
pub fn random_symmetric_circulant(rng: &mut ChaCha8Rng, m: usize) -> IntMatrix {
    let mut mat = IntMatrix::zero(m);
    for s in 1..=m / 2 {
        if rng.gen_bool(0.4) {
            for i in 0..m {
                mat.set(i, (i + s) % m, 1);
                mat.set((i + s) % m, i, 1);
            }
        }
    }
    mat
}

/// Random clustered graph whose blocks are all circulants of one order, so
/// the whole block family is commuting normal.
pub fn random_circulant_graph(rng: &mut ChaCha8Rng, max_n: usize, max_m: usize) -> ClusteredGraph {
    let n = rng.gen_range(1..=max_n);
    let m = rng.gen_range(1..=max_m);
    let mut edges = Vec::new();
    for i in 1..=n {
        let diag = random_symmetric_circulant(rng, m);
        for r in 0..m {
            for c in r + 1..m {
                if diag.get(r, c) == 1 {
                    edges.push((VertexLabel::new(i, r + 1), VertexLabel::new(i, c + 1)));
                }
            }
        }
        for j in i + 1..=n {
            let block = random_circulant(rng, m);
            for r in 0..m {
                for c in 0..m {
                    if block.get(r, c) == 1 {
                        edges.push((VertexLabel::new(i, r + 1), VertexLabel::new(j, c + 1)));
                    }
                }
            }
        }
    }
    ClusteredGraph::from_edges(n, m, edges).unwrap()
}

/// Brute-force isomorphism oracle: tries every vertex permutation.
pub fn brute_force_isomorphic(g: &ClusteredGraph, h: &ClusteredGraph) -> bool {
    if g.vertex_count() != h.vertex_count() {
        return false;
    }
    let ga = g.adjacency_bits();
    let ha = h.adjacency_bits();
    let mut perm: Vec<usize> = (0..ga.len()).collect();
    permute_check(&mut perm, 0, &ga, &ha)
}

fn permute_check(perm: &mut Vec<usize>, k: usize, ga: &[u64], ha: &[u64]) -> bool {
    let n = perm.len();
    if k == n {
        return (0..n).all(|i| (0..n).all(|j| (ga[i] >> j & 1) == (ha[perm[i]] >> perm[j] & 1)));
    }
    for i in k..n {
        perm.swap(k, i);
        if permute_check(perm, k + 1, ga, ha) {
            perm.swap(k, i);
            return true;
        }
        perm.swap(k, i);
    }
    false
}

/// Independent characteristic-polynomial oracle: cofactor expansion of
/// `det(xI - A)` over `i64` polynomials, memoized on column subsets.
/// Coefficients ascending (constant term first).
pub fn det_expansion_char_poly(g: &ClusteredGraph) -> Vec<i64> {
    let n = g.vertex_count();
    assert!(n <= 12, "oracle sized for small graphs");
    let adj = g.adjacency_bits();
    // entries of xI - A as (constant, x-coefficient)
    let entry = |i: usize, j: usize| -> (i64, i64) {
        let a = (adj[i] >> j & 1) as i64;
        if i == j {
            (-a, 1)
        } else {
            (-a, 0)
        }
    };
    let mut memo: std::collections::HashMap<u32, Vec<i64>> = std::collections::HashMap::new();
    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    det_minor(full, n, &entry, &mut memo)
}

fn det_minor(
    cols: u32,
    n: usize,
    entry: &dyn Fn(usize, usize) -> (i64, i64),
    memo: &mut std::collections::HashMap<u32, Vec<i64>>,
) -> Vec<i64> {
    if cols == 0 {
        return vec![1];
    }
    if let Some(p) = memo.get(&cols) {
        return p.clone();
    }
    // expand along the row whose index equals the number of used rows
    let row = n - cols.count_ones() as usize;
    let mut acc: Vec<i64> = Vec::new();
    let mut sign = 1i64;
    for j in 0..n {
        if cols >> j & 1 == 0 {
            continue;
        }
        let (c0, c1) = entry(row, j);
        if c0 != 0 || c1 != 0 {
            let minor = det_minor(cols & !(1 << j), n, entry, memo);
            // multiply minor by (c0 + c1 x) * sign and accumulate
            if acc.len() < minor.len() + 1 {
                acc.resize(minor.len() + 1, 0);
            }
            for (k, &m) in minor.iter().enumerate() {
                acc[k] += sign * c0 * m;
                acc[k + 1] += sign * c1 * m;
            }
        }
        sign = -sign;
    }
    if acc.is_empty() {
        acc.push(0);
    }
    memo.insert(cols, acc.clone());
    acc
}
