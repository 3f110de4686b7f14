//! Clustered graphs: simple undirected graphs on `m * n` vertices whose
//! vertex set is partitioned into `n` clusters of `m` vertices each.
//!
//! Vertices carry no names beyond their `(cluster, position)` label; isolated
//! vertices exist implicitly through the `(n, m)` bounds.

use std::collections::BTreeSet;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Label of a vertex: `cluster` in `1..=n`, `position` in `1..=m`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VertexLabel {
    pub cluster: usize,
    pub position: usize,
}

impl VertexLabel {
    pub fn new(cluster: usize, position: usize) -> Self {
        VertexLabel { cluster, position }
    }

    /// Zero-based flat index in row-major (cluster, position) order.
    pub fn index(&self, m: usize) -> usize {
        (self.cluster - 1) * m + (self.position - 1)
    }
}

impl fmt::Display for VertexLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v_{{{},{}}}", self.cluster, self.position)
    }
}

impl Serialize for VertexLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        (self.cluster, self.position).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for VertexLabel {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let (cluster, position) = <(usize, usize)>::deserialize(deserializer)?;
        Ok(VertexLabel { cluster, position })
    }
}

/// An edge stored with its endpoints in ascending label order.
pub type Edge = (VertexLabel, VertexLabel);

fn order_edge(u: VertexLabel, v: VertexLabel) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A simple undirected clustered graph. Immutable after construction.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ClusteredGraph {
    n: usize,
    m: usize,
    edges: BTreeSet<Edge>,
}

impl ClusteredGraph {
    /// Builds a graph from an edge list, deduplicating and canonically
    /// ordering the edges. Rejects out-of-range labels and self-loops.
    pub fn from_edges<I>(n: usize, m: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (VertexLabel, VertexLabel)>,
    {
        if n < 1 || m < 1 {
            return Err(Error::InvalidDimensions { n, m });
        }
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            for label in [u, v] {
                if label.cluster < 1 || label.cluster > n || label.position < 1 || label.position > m {
                    return Err(Error::LabelOutOfRange { label, n, m });
                }
            }
            if u == v {
                return Err(Error::SelfLoop { label: u });
            }
            set.insert(order_edge(u, v));
        }
        Ok(ClusteredGraph { n, m, edges: set })
    }

    /// Edgeless graph on `m * n` vertices.
    pub fn edgeless(n: usize, m: usize) -> Result<Self> {
        Self::from_edges(n, m, std::iter::empty())
    }

    pub fn cluster_count(&self) -> usize {
        self.n
    }

    pub fn cluster_size(&self) -> usize {
        self.m
    }

    pub fn vertex_count(&self) -> usize {
        self.n * self.m
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges in canonical (lexicographic) order.
    pub fn edges(&self) -> impl Iterator<Item = &Edge> + '_ {
        self.edges.iter()
    }

    pub fn has_edge(&self, u: VertexLabel, v: VertexLabel) -> bool {
        self.edges.contains(&order_edge(u, v))
    }

    /// All vertex labels in (cluster, position) order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexLabel> + '_ {
        let m = self.m;
        (1..=self.n).flat_map(move |i| (1..=m).map(move |j| VertexLabel::new(i, j)))
    }

    pub fn degree(&self, v: VertexLabel) -> usize {
        self.edges
            .iter()
            .filter(|(a, b)| *a == v || *b == v)
            .count()
    }

    /// Non-increasing degree list of length `m * n`.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut degs = vec![0usize; self.vertex_count()];
        for (u, v) in &self.edges {
            degs[u.index(self.m)] += 1;
            degs[v.index(self.m)] += 1;
        }
        degs.sort_unstable_by(|a, b| b.cmp(a));
        degs
    }

    /// Keeps only the edges of the bipartite subgraph between clusters `i`
    /// and `j` (the cluster subgraph itself when `i == j`). Labels and the
    /// `(n, m)` bounds are preserved.
    pub fn induced_bipartite(&self, i: usize, j: usize) -> Result<Self> {
        for index in [i, j] {
            if index < 1 || index > self.n {
                return Err(Error::ClusterOutOfRange { index, n: self.n });
            }
        }
        let edges = self
            .edges
            .iter()
            .filter(|(u, v)| {
                (u.cluster == i && v.cluster == j) || (u.cluster == j && v.cluster == i)
            })
            .copied();
        Ok(ClusteredGraph {
            n: self.n,
            m: self.m,
            edges: edges.collect(),
        })
    }

    /// Dense 0/1 adjacency rows as bitmasks, indexed by `VertexLabel::index`.
    pub fn adjacency_bits(&self) -> Vec<u64> {
        assert!(self.vertex_count() <= 64, "bit adjacency limited to 64 vertices");
        let mut rows = vec![0u64; self.vertex_count()];
        for (u, v) in &self.edges {
            let (a, b) = (u.index(self.m), v.index(self.m));
            rows[a] |= 1 << b;
            rows[b] |= 1 << a;
        }
        rows
    }

    /// GraphViz DOT rendering; each cluster becomes a same-rank group.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph {\n");
        for i in 1..=self.n {
            out.push_str("  { rank=same;");
            for j in 1..=self.m {
                out.push_str(&format!(" v_{}_{};", i, j));
            }
            out.push_str(" }\n");
        }
        for (u, v) in &self.edges {
            out.push_str(&format!(
                "  v_{}_{} -- v_{}_{};\n",
                u.cluster, u.position, v.cluster, v.position
            ));
        }
        out.push_str("}\n");
        out
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    m: usize,
    edges: Vec<Edge>,
}

impl Serialize for ClusteredGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            n: self.n,
            m: self.m,
            edges: self.edges.iter().copied().collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ClusteredGraph {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = GraphJson::deserialize(deserializer)?;
        ClusteredGraph::from_edges(raw.n, raw.m, raw.edges).map_err(D::Error::custom)
    }
}

/// Shorthand for building an edge from bare `(cluster, position)` pairs.
pub fn edge(a: (usize, usize), b: (usize, usize)) -> Edge {
    (VertexLabel::new(a.0, a.1), VertexLabel::new(b.0, b.1))
}
