//! Exhaustive enumeration of the built-in clustered model families: every
//! assignment of the free inter-cluster block is generated, pushed through
//! the model's construction pipeline, and kept iff the result is cospectral
//! with and non-isomorphic to its partial transpose. Counts are reported
//! under three explicit counting modes.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::constructions::{alternate_clustering, procedure_2_mirror_intra};
use crate::error::{Error, Result};
use crate::graph::{ClusteredGraph, Edge, VertexLabel};
use crate::iso::{are_isomorphic, canonical_form};
use crate::spectral::{are_cospectral, char_poly, traces_equal_fast};
use crate::transpose::{is_partially_symmetric, partial_transpose};

/// The nine built-in model families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub enum ModelId {
    M1a,
    M1b,
    M2,
    M3a,
    M3b,
    M3c,
    M4a,
    M4b,
    M4c,
}

impl ModelId {
    pub const ALL: [ModelId; 9] = [
        ModelId::M1a,
        ModelId::M1b,
        ModelId::M2,
        ModelId::M3a,
        ModelId::M3b,
        ModelId::M3c,
        ModelId::M4a,
        ModelId::M4b,
        ModelId::M4c,
    ];
}

impl fmt::Display for ModelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            ModelId::M1a => "1a",
            ModelId::M1b => "1b",
            ModelId::M2 => "2",
            ModelId::M3a => "3a",
            ModelId::M3b => "3b",
            ModelId::M3c => "3c",
            ModelId::M4a => "4a",
            ModelId::M4b => "4b",
            ModelId::M4c => "4c",
        };
        f.write_str(name)
    }
}

impl FromStr for ModelId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "1a" => Ok(ModelId::M1a),
            "1b" => Ok(ModelId::M1b),
            "2" => Ok(ModelId::M2),
            "3a" => Ok(ModelId::M3a),
            "3b" => Ok(ModelId::M3b),
            "3c" => Ok(ModelId::M3c),
            "4a" => Ok(ModelId::M4a),
            "4b" => Ok(ModelId::M4b),
            "4c" => Ok(ModelId::M4c),
            other => Err(format!("unknown model id: {other}")),
        }
    }
}

/// How kept candidates are counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CountingMode {
    /// raw count of free-block assignments kept
    Labeled,
    /// distinct isomorphism classes among the kept graphs
    DedupGraph,
    /// distinct isomorphism classes of the unordered pair (G, G^tau)
    DedupPair,
}

impl fmt::Display for CountingMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            CountingMode::Labeled => "labeled",
            CountingMode::DedupGraph => "dedup-graph",
            CountingMode::DedupPair => "dedup-pair",
        };
        f.write_str(name)
    }
}

impl FromStr for CountingMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "labeled" => Ok(CountingMode::Labeled),
            "dedup-graph" => Ok(CountingMode::DedupGraph),
            "dedup-pair" => Ok(CountingMode::DedupPair),
            other => Err(format!("unknown counting mode: {other}")),
        }
    }
}

/// One row of the model tables. For models 1a, 1b and 2 the free parameter
/// is the cluster size `m` (with `n` fixed at 2 or 3); for models 3a-4c the
/// output graph always has clusters of size 3 and the free parameter is its
/// cluster count `n`, which equals the cluster size of the 2-cluster base
/// graph the pipeline starts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ModelSpec {
    pub model: ModelId,
    pub m: usize,
    pub n: usize,
    pub mode: CountingMode,
}

impl ModelSpec {
    pub fn new(model: ModelId, m: usize, n: usize, mode: CountingMode) -> Self {
        ModelSpec { model, m, n, mode }
    }

    fn unsupported(&self) -> Error {
        Error::UnsupportedModel {
            model: self.model.to_string(),
            m: self.m,
            n: self.n,
        }
    }

    /// Cluster size of the base graph, i.e. the order of the free block.
    pub fn base_m(&self) -> Result<usize> {
        match self.model {
            ModelId::M1a | ModelId::M1b => {
                if self.n != 2 || self.m < 2 || self.m > 5 {
                    return Err(self.unsupported());
                }
                Ok(self.m)
            }
            ModelId::M2 => {
                if self.n != 3 || self.m < 2 || self.m > 5 {
                    return Err(self.unsupported());
                }
                Ok(self.m)
            }
            _ => {
                if self.m != 3 || self.n < 2 || self.n > 5 {
                    return Err(self.unsupported());
                }
                Ok(self.n)
            }
        }
    }
}

fn path_edges(cluster: usize, m: usize) -> Vec<Edge> {
    (1..m)
        .map(|k| (VertexLabel::new(cluster, k), VertexLabel::new(cluster, k + 1)))
        .collect()
}

fn cycle_edges(cluster: usize, m: usize) -> Vec<Edge> {
    let mut edges = path_edges(cluster, m);
    if m >= 3 {
        edges.push((VertexLabel::new(cluster, m), VertexLabel::new(cluster, 1)));
    }
    edges
}

/// Fixed part of a model: the base graph skeleton plus the block positions
/// that range over all 0/1 assignments.
#[derive(Debug, Clone)]
pub struct ModelBase {
    pub base_n: usize,
    pub base_m: usize,
    pub skeleton: Vec<Edge>,
    pub free_slots: Vec<(usize, usize)>,
}

impl ModelBase {
    pub fn candidate_count(&self) -> u64 {
        1u64 << (self.free_slots.len() * self.base_m * self.base_m)
    }
}

/// The fixed skeleton and free block slots of a model row.
pub fn model_base(spec: &ModelSpec) -> Result<ModelBase> {
    let base_m = spec.base_m()?;
    let (base_n, skeleton) = match spec.model {
        ModelId::M1a => (2, path_edges(2, base_m)),
        ModelId::M1b => (2, cycle_edges(2, base_m)),
        ModelId::M2 => {
            let matching = (1..=base_m)
                .map(|k| (VertexLabel::new(2, k), VertexLabel::new(3, k)))
                .collect();
            (3, matching)
        }
        ModelId::M3a => (2, Vec::new()),
        ModelId::M3b | ModelId::M4a => (2, path_edges(2, base_m)),
        ModelId::M3c | ModelId::M4c => (2, cycle_edges(2, base_m)),
        ModelId::M4b => {
            let mut edges = path_edges(1, base_m);
            edges.extend(path_edges(2, base_m));
            (2, edges)
        }
    };
    Ok(ModelBase {
        base_n,
        base_m,
        skeleton,
        free_slots: vec![(1, 2)],
    })
}

/// Materializes the candidate for a free-block bitmask and runs the model's
/// construction pipeline.
pub fn candidate_graph(spec: &ModelSpec, base: &ModelBase, mask: u64) -> ClusteredGraph {
    let m = base.base_m;
    let mut edges = base.skeleton.clone();
    let (bi, bj) = base.free_slots[0];
    for k in 0..m {
        for l in 0..m {
            if mask >> (k * m + l) & 1 == 1 {
                edges.push((VertexLabel::new(bi, k + 1), VertexLabel::new(bj, l + 1)));
            }
        }
    }
    let base_graph = ClusteredGraph::from_edges(base.base_n, m, edges)
        .expect("model skeleton and mask edges are in range");
    match spec.model {
        ModelId::M1a | ModelId::M1b | ModelId::M2 => base_graph,
        ModelId::M3a | ModelId::M3b | ModelId::M3c => {
            procedure_2_mirror_intra(&alternate_clustering(&base_graph), true).expect("waived")
        }
        ModelId::M4a | ModelId::M4b | ModelId::M4c => {
            let grown =
                procedure_2_mirror_intra(&alternate_clustering(&base_graph), true).expect("waived");
            // link the added vertices (position 3 of each cluster)
            let clusters = grown.cluster_count();
            let mut edges: Vec<Edge> = grown.edges().copied().collect();
            let new_pos = grown.cluster_size();
            for j in 1..clusters {
                edges.push((VertexLabel::new(j, new_pos), VertexLabel::new(j + 1, new_pos)));
            }
            if spec.model == ModelId::M4c && clusters >= 3 {
                edges.push((VertexLabel::new(clusters, new_pos), VertexLabel::new(1, new_pos)));
            }
            ClusteredGraph::from_edges(clusters, grown.cluster_size(), edges).expect("in range")
        }
    }
}

#[derive(Debug, Clone)]
struct KeptCandidate {
    mask: u64,
    graph: ClusteredGraph,
    transpose: ClusteredGraph,
    canon: Vec<u8>,
    canon_transpose: Vec<u8>,
}

fn process_candidate(spec: &ModelSpec, base: &ModelBase, mask: u64) -> Option<KeptCandidate> {
    let g = candidate_graph(spec, base, mask);
    let t = partial_transpose(&g);
    // cheap exact spectral filter first, certified polynomial comparison on
    // the survivors
    match traces_equal_fast(&g, &t) {
        Some(false) => return None,
        Some(true) | None => {
            if !are_cospectral(&g, &t).expect("equal vertex counts") {
                return None;
            }
        }
    }
    if g.degree_sequence() == t.degree_sequence() && are_isomorphic(&g, &t) {
        return None;
    }
    let canon = canonical_form(&g);
    let canon_transpose = canonical_form(&t);
    Some(KeptCandidate {
        mask,
        graph: g,
        transpose: t,
        canon,
        canon_transpose,
    })
}

/// Result of one enumeration run. `kappa` is the count under the requested
/// mode; all three mode counts are always reported.
#[derive(Debug, Clone)]
pub struct EnumerationReport {
    pub spec: ModelSpec,
    pub kappa: usize,
    pub kappa_labeled: usize,
    pub kappa_dedup_graph: usize,
    pub kappa_dedup_pair: usize,
    pub candidates_scanned: u64,
    /// one representative (G, G^tau) per distinct unordered pair
    pub pairs: Vec<(ClusteredGraph, ClusteredGraph)>,
    pub elapsed: Duration,
}

const DEFAULT_GUARD: u64 = 1 << 24;

fn candidate_guard() -> u64 {
    std::env::var("GTPT_MAX_CANDIDATES")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_GUARD)
}

/// Scans every free-block assignment of the model row, keeps the candidates
/// whose partial transpose is a cospectral non-isomorphic mate, and counts
/// them under all three modes. Deterministic regardless of the rayon
/// schedule.
pub fn enumerate_kappa(spec: &ModelSpec) -> Result<EnumerationReport> {
    let start = Instant::now();
    let base = model_base(spec)?;
    let candidates = base.candidate_count();
    let guard = candidate_guard();
    if candidates > guard {
        return Err(Error::SearchSpaceExceeded { candidates, guard });
    }
    let kept: Vec<KeptCandidate> = (0..candidates)
        .into_par_iter()
        .map(|mask| process_candidate(spec, &base, mask))
        .collect::<Vec<Option<KeptCandidate>>>()
        .into_iter()
        .flatten()
        .collect();

    let kappa_labeled = kept.len();
    let distinct_graphs: BTreeSet<&Vec<u8>> = kept.iter().map(|k| &k.canon).collect();
    let kappa_dedup_graph = distinct_graphs.len();

    let mut pair_reps: BTreeMap<(Vec<u8>, Vec<u8>), &KeptCandidate> = BTreeMap::new();
    for k in &kept {
        let key = if k.canon <= k.canon_transpose {
            (k.canon.clone(), k.canon_transpose.clone())
        } else {
            (k.canon_transpose.clone(), k.canon.clone())
        };
        pair_reps
            .entry(key)
            .and_modify(|existing| {
                if k.mask < existing.mask {
                    *existing = k;
                }
            })
            .or_insert(k);
    }
    let kappa_dedup_pair = pair_reps.len();
    let pairs: Vec<(ClusteredGraph, ClusteredGraph)> = pair_reps
        .values()
        .map(|k| (k.graph.clone(), k.transpose.clone()))
        .collect();

    let kappa = match spec.mode {
        CountingMode::Labeled => kappa_labeled,
        CountingMode::DedupGraph => kappa_dedup_graph,
        CountingMode::DedupPair => kappa_dedup_pair,
    };
    debug_assert!(kappa_dedup_pair <= kappa_dedup_graph);
    debug_assert!(kappa_dedup_graph <= kappa_labeled);
    Ok(EnumerationReport {
        spec: *spec,
        kappa,
        kappa_labeled,
        kappa_dedup_graph,
        kappa_dedup_pair,
        candidates_scanned: candidates,
        pairs,
        elapsed: start.elapsed(),
    })
}

/// Full verdict on the pair `(G, G^tau)`; the record behind `gtpt verify`
/// and the enumeration filter.
#[derive(Debug, Clone, Serialize)]
pub struct PairVerdict {
    pub cospectral: bool,
    pub isomorphic: bool,
    pub partially_symmetric: bool,
    /// characteristic polynomial of G, leading coefficient first
    pub char_poly: Vec<String>,
    /// characteristic polynomial of G^tau, leading coefficient first
    pub char_poly_transpose: Vec<String>,
    pub degree_sequence: Vec<usize>,
    pub degree_sequence_transpose: Vec<usize>,
}

pub fn verify_pair(g: &ClusteredGraph) -> PairVerdict {
    let t = partial_transpose(g);
    let pg = char_poly(g);
    let pt = char_poly(&t);
    PairVerdict {
        cospectral: pg == pt,
        isomorphic: are_isomorphic(g, &t),
        partially_symmetric: is_partially_symmetric(g),
        char_poly: pg.coefficients_descending().iter().map(|c| c.to_string()).collect(),
        char_poly_transpose: pt.coefficients_descending().iter().map(|c| c.to_string()).collect(),
        degree_sequence: g.degree_sequence(),
        degree_sequence_transpose: t.degree_sequence(),
    }
}
