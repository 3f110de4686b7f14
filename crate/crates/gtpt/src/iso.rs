//! Graph isomorphism and canonical forms for the underlying unlabeled
//! graphs (cluster structure is ignored). Built for desk scale: the search
//! spaces here never exceed a few dozen vertices.
//!
//! Two independent routes are kept deliberately: a backtracking matcher
//! (`are_isomorphic`) and a canonical labeling (`canonical_form`), so each
//! can cross-check the other.

use crate::graph::ClusteredGraph;
use crate::spectral::{char_poly, traces_equal_fast};

fn bit_adjacency(g: &ClusteredGraph) -> (usize, Vec<u64>) {
    (g.vertex_count(), g.adjacency_bits())
}

/// Iterated neighborhood refinement. Colors are assigned by the rank of the
/// (old color, sorted neighbor-color multiset) signature, which makes them
/// comparable across different graphs.
fn refine(n: usize, adj: &[u64], colors: &mut [u32]) {
    loop {
        let mut sigs: Vec<(u32, Vec<u32>)> = Vec::with_capacity(n);
        for v in 0..n {
            let mut nb: Vec<u32> = (0..n)
                .filter(|&w| adj[v] >> w & 1 == 1)
                .map(|w| colors[w])
                .collect();
            nb.sort_unstable();
            sigs.push((colors[v], nb));
        }
        let mut distinct: Vec<&(u32, Vec<u32>)> = sigs.iter().collect();
        distinct.sort();
        distinct.dedup();
        let before = colors.iter().collect::<std::collections::BTreeSet<_>>().len();
        for v in 0..n {
            colors[v] = distinct.binary_search(&&sigs[v]).unwrap() as u32;
        }
        if distinct.len() == before {
            return;
        }
    }
}

fn color_histogram(n: usize, colors: &[u32]) -> Vec<(u32, usize)> {
    let mut hist = std::collections::BTreeMap::new();
    for v in 0..n {
        *hist.entry(colors[v]).or_insert(0usize) += 1;
    }
    hist.into_iter().collect()
}

/// True iff an edge-preserving bijection exists between the underlying
/// unlabeled graphs. Cheap certificates (counts, degree sequence, exact
/// spectrum, refinement histogram) run before the backtracking search.
pub fn are_isomorphic(g: &ClusteredGraph, h: &ClusteredGraph) -> bool {
    if g.vertex_count() != h.vertex_count() || g.edge_count() != h.edge_count() {
        return false;
    }
    if g.degree_sequence() != h.degree_sequence() {
        return false;
    }
    if !spectra_equal(g, h) {
        return false;
    }
    let (n, ga) = bit_adjacency(g);
    let (_, ha) = bit_adjacency(h);
    let mut gc = vec![0u32; n];
    let mut hc = vec![0u32; n];
    refine(n, &ga, &mut gc);
    refine(n, &ha, &mut hc);
    if color_histogram(n, &gc) != color_histogram(n, &hc) {
        return false;
    }
    let mut mapping = vec![usize::MAX; n];
    let mut used = 0u64;
    match_vertices(n, &ga, &ha, &gc, &hc, &mut mapping, &mut used, 0)
}

fn spectra_equal(g: &ClusteredGraph, h: &ClusteredGraph) -> bool {
    traces_equal_fast(g, h).unwrap_or_else(|| char_poly(g) == char_poly(h))
}

fn match_vertices(
    n: usize,
    ga: &[u64],
    ha: &[u64],
    gc: &[u32],
    hc: &[u32],
    mapping: &mut [usize],
    used: &mut u64,
    depth: usize,
) -> bool {
    if depth == n {
        return true;
    }
    // most-constrained next vertex: maximal mapped neighborhood, then degree
    let next = (0..n)
        .filter(|&v| mapping[v] == usize::MAX)
        .max_by_key(|&v| {
            let mapped_nb = (0..n)
                .filter(|&w| mapping[w] != usize::MAX && ga[v] >> w & 1 == 1)
                .count();
            (mapped_nb, ga[v].count_ones(), std::cmp::Reverse(v))
        })
        .expect("depth < n implies an unmapped vertex");
    for cand in 0..n {
        if *used >> cand & 1 == 1 || hc[cand] != gc[next] {
            continue;
        }
        let consistent = (0..n).all(|w| {
            mapping[w] == usize::MAX || (ga[next] >> w & 1) == (ha[cand] >> mapping[w] & 1)
        });
        if !consistent {
            continue;
        }
        mapping[next] = cand;
        *used |= 1 << cand;
        if match_vertices(n, ga, ha, gc, hc, mapping, used, depth + 1) {
            return true;
        }
        mapping[next] = usize::MAX;
        *used &= !(1 << cand);
    }
    false
}

/// Canonical byte string: equal iff the underlying graphs are isomorphic.
/// Individualization-refinement search over refined orbits, pruned by the
/// automorphisms discovered along the way.
pub fn canonical_form(g: &ClusteredGraph) -> Vec<u8> {
    let (n, adj) = bit_adjacency(g);
    let mut colors = vec![0u32; n];
    refine(n, &adj, &mut colors);
    let mut search = CanonSearch {
        n,
        adj: &adj,
        best: None,
        generators: Vec::new(),
    };
    search.dfs(colors, &mut Vec::new());
    let (cert, _) = search.best.expect("search visits at least one leaf");
    let mut bytes = Vec::with_capacity(1 + (n * (n - 1) / 2 + 7) / 8);
    bytes.push(n as u8);
    let mut bit = 0usize;
    let mut acc = 0u8;
    for i in 0..n {
        for j in i + 1..n {
            if cert_bit(&cert, i, j, n) {
                acc |= 1 << (bit % 8);
            }
            bit += 1;
            if bit % 8 == 0 {
                bytes.push(acc);
                acc = 0;
            }
        }
    }
    if bit % 8 != 0 {
        bytes.push(acc);
    }
    bytes
}

/// Certificate: relabeled adjacency rows, row `p` holds the neighbors of the
/// vertex at canonical position `p`, expressed in canonical positions.
type Cert = Vec<u64>;

fn cert_bit(cert: &Cert, i: usize, j: usize, _n: usize) -> bool {
    cert[i] >> j & 1 == 1
}

struct CanonSearch<'a> {
    n: usize,
    adj: &'a [u64],
    /// smallest certificate so far, with its position -> vertex map
    best: Option<(Cert, Vec<usize>)>,
    /// discovered automorphisms (vertex -> vertex)
    generators: Vec<Vec<usize>>,
}

impl CanonSearch<'_> {
    fn dfs(&mut self, colors: Vec<u32>, base: &mut Vec<usize>) {
        let cell = self.first_non_singleton_cell(&colors);
        let Some(cell_color) = cell else {
            self.visit_leaf(&colors);
            return;
        };
        let members: Vec<usize> =
            (0..self.n).filter(|&v| colors[v] == cell_color).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &members {
            if self.pruned_by_automorphisms(v, &explored, base) {
                continue;
            }
            let mut child = colors.clone();
            for w in 0..self.n {
                if child[w] > cell_color || (child[w] == cell_color && w != v) {
                    child[w] += 1;
                }
            }
            refine(self.n, self.adj, &mut child);
            base.push(v);
            self.dfs(child, base);
            base.pop();
            explored.push(v);
        }
    }

    fn first_non_singleton_cell(&self, colors: &[u32]) -> Option<u32> {
        let mut counts = std::collections::BTreeMap::new();
        for &c in colors {
            *counts.entry(c).or_insert(0usize) += 1;
        }
        counts.into_iter().find(|&(_, k)| k > 1).map(|(c, _)| c)
    }

    fn visit_leaf(&mut self, colors: &[u32]) {
        // discrete coloring: color values are exactly 0..n-1
        let mut pos_to_vertex = vec![0usize; self.n];
        for v in 0..self.n {
            pos_to_vertex[colors[v] as usize] = v;
        }
        let mut cert: Cert = vec![0; self.n];
        for p in 0..self.n {
            let v = pos_to_vertex[p];
            for q in 0..self.n {
                if self.adj[v] >> pos_to_vertex[q] & 1 == 1 {
                    cert[p] |= 1 << q;
                }
            }
        }
        match &self.best {
            None => self.best = Some((cert, pos_to_vertex)),
            Some((best_cert, best_map)) => {
                if cert < *best_cert {
                    self.best = Some((cert, pos_to_vertex));
                } else if cert == *best_cert {
                    // equal certificates expose an automorphism
                    let mut vertex_to_pos = vec![0usize; self.n];
                    for (p, &v) in best_map.iter().enumerate() {
                        vertex_to_pos[v] = p;
                    }
                    let auto: Vec<usize> =
                        (0..self.n).map(|v| pos_to_vertex[vertex_to_pos[v]]).collect();
                    if auto.iter().enumerate().any(|(v, &w)| v != w)
                        && !self.generators.contains(&auto)
                    {
                        self.generators.push(auto);
                    }
                }
            }
        }
    }

    /// True if some known automorphism fixing the current base pointwise
    /// maps `v` into the explored sibling set.
    fn pruned_by_automorphisms(&self, v: usize, explored: &[usize], base: &[usize]) -> bool {
        if explored.is_empty() || self.generators.is_empty() {
            return false;
        }
        let applicable: Vec<&Vec<usize>> = self
            .generators
            .iter()
            .filter(|auto| base.iter().all(|&b| auto[b] == b))
            .collect();
        if applicable.is_empty() {
            return false;
        }
        let mut orbit: u64 = explored.iter().map(|&w| 1u64 << w).fold(0, |a, b| a | b);
        loop {
            let mut next = orbit;
            for auto in &applicable {
                for w in 0..self.n {
                    if orbit >> w & 1 == 1 {
                        next |= 1 << auto[w];
                    }
                }
                // include the inverse image as well
                for w in 0..self.n {
                    if orbit >> auto[w] & 1 == 1 {
                        next |= 1 << w;
                    }
                }
            }
            if next == orbit {
                break;
            }
            orbit = next;
        }
        orbit >> v & 1 == 1
    }
}
