//! Combinatorial machinery for k vertex-disjoint paths in embedded planar
//! digraphs: rotation-system embeddings, combinatorial curves and their
//! alternation, ring duality certificates, a cohomology labelling bridge,
//! the irrelevant-vertex rule, graph decompositions, bundles and bundle
//! words, and an exhaustive reference solver.

#![forbid(unsafe_code)]

pub mod bundles;
pub mod cohomology;
pub mod curves;
pub mod decomposition;
pub mod irrelevant;
pub mod embed;
pub mod fixtures;
pub mod generate;
pub mod rings;
pub mod solver;

pub use embed::{ArcId, Dart, EmbeddedDigraph, End, FaceId, GraphError, Orientation, VertexId};
