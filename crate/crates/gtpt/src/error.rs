use thiserror::Error;

use crate::graph::VertexLabel;

/// Errors raised by graph construction, builders and enumeration.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum Error {
    #[error("cluster count and cluster size must be at least 1 (got n = {n}, m = {m})")]
    InvalidDimensions { n: usize, m: usize },
    #[error("label v_{{{},{}}} out of range for n = {n}, m = {m}", label.cluster, label.position)]
    LabelOutOfRange { label: VertexLabel, n: usize, m: usize },
    #[error("self-loop at v_{{{},{}}}", label.cluster, label.position)]
    SelfLoop { label: VertexLabel },
    #[error("cluster index {index} out of range for n = {n}")]
    ClusterOutOfRange { index: usize, n: usize },
    #[error("graphs have different vertex counts ({0} vs {1})")]
    VertexCountMismatch(usize, usize),
    #[error("bipartite part sizes must be at least 1 (got {m1} and {m2})")]
    EmptyPart { m1: usize, m2: usize },
    #[error("bipartite edge ({0}, {1}) out of range for parts of size {2} and {3}")]
    PartEdgeOutOfRange(usize, usize, usize, usize),
    #[error("graph does not satisfy the commuting/normality conditions (pass waive_check to build anyway)")]
    ConditionsNotSatisfied,
    #[error("procedure 1 needs at least 2 clusters (got k = {0})")]
    TooFewClusters(usize),
    #[error("block assignment copies diagonal block ({0}, {0}); only off-diagonal blocks may be copied")]
    CopyOfDiagonal(usize),
    #[error("matrix of order {0} expected, got order {1}")]
    OrderMismatch(usize, usize),
    #[error("matrix is normal; the non-normal template requires a non-normal matrix")]
    MatrixIsNormal,
    #[error("no block assignment uses the template matrix")]
    TemplateUnused,
    #[error("unsupported model row: model {model}, m = {m}, n = {n}")]
    UnsupportedModel { model: String, m: usize, n: usize },
    #[error("search space of {candidates} candidates exceeds the guard of {guard}")]
    SearchSpaceExceeded { candidates: u64, guard: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;
