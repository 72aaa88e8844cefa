//! Certificates for k-extendibility of simple graphs, and a harness that
//! checks the classical structure theorems about k-extendible graphs against
//! exhaustive reference computations.
//!
//! Every negative answer carries a witness that can be re-verified on its
//! own: a size-k matching with no perfect extension, a Hall violator, or a
//! vertex cut.

pub mod connectivity;
pub mod error;
pub mod extendibility;
pub mod format;
pub mod graph;
pub mod matching;
pub mod oracle;
pub mod verifier;

pub use error::{Error, Result};
pub use graph::{Bipartition, Edge, Graph, OddCycle, Relabel, Vertex, VertexSet};
pub use matching::Matching;
