//! Clustered graphs, their graph-theoretical partial transpose (GTPT), and
//! exact machinery for constructing and certifying cospectral
//! non-isomorphic graph pairs.
//!
//! A clustered graph partitions its `m * n` vertices into `n` clusters of
//! `m` vertices. The partial transpose moves every inter-cluster edge
//! `(v_{i,k}, v_{j,l})` with `k != l` to `(v_{i,l}, v_{j,k})` — equivalently,
//! it transposes every block of the block adjacency matrix. The crate
//! provides:
//!
//! * the graph and block-matrix data model with JSON and DOT serialization
//!   ([`graph`], [`blocks`]);
//! * the transpose itself and partial-symmetry detection ([`transpose`]);
//! * exact cospectrality certificates via integer characteristic
//!   polynomials, plus floating eigenvalues for reports ([`spectral`]);
//! * isomorphism testing and canonical forms ([`iso`]);
//! * sufficient-condition checks and exact rational similarity witnesses
//!   ([`structure`]);
//! * builders that manufacture new cospectral pairs ([`constructions`]);
//! * exhaustive enumeration of the built-in model families with
//!   non-isomorphic-cospectral pair counts ([`enumeration`]).

pub mod blocks;
pub mod cli;
pub mod constructions;
pub mod enumeration;
pub mod error;
pub mod exact;
pub mod graph;
pub mod iso;
pub mod matrix;
pub mod spectral;
pub mod structure;
pub mod transpose;

pub use blocks::{block_matrix, BlockAdjacency};
pub use error::{Error, Result};
pub use graph::{ClusteredGraph, VertexLabel};
pub use transpose::{is_partially_symmetric, partial_transpose, partial_transpose_blocks};
