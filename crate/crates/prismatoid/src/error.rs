//! Crate-wide error type.

use crate::flip::FlipRejection;
use crate::prism::Width;
use crate::vertex::{Face, VertexId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("bad vertex token {0:?}")]
    BadToken(String),
    #[error("facet list is empty")]
    Empty,
    #[error("facets of mixed sizes {0} and {1}")]
    MixedDimension(usize, usize),
    #[error("{0} is not a face")]
    NotAFace(Face),
    #[error("{0} is not a facet")]
    NotAFacet(Face),
    #[error("unknown facet {0}")]
    UnknownFacet(Face),
    #[error("ridge {0} lies in {1} facets")]
    NotPseudomanifold(Face, usize),
    #[error("complex is not pure")]
    NotPure,
    #[error("facet size {0} is below the supported minimum of 3")]
    UnsupportedDimension(usize),
    #[error("link of vertex {0} is not a path")]
    BadVertexLink(VertexId),
    #[error("vertex {0} already present in both operands")]
    VertexClash(VertexId),
    #[error("{0} is not a vertex")]
    NotAVertex(VertexId),
    #[error("gluing map is not a bijection between {0} and {1}")]
    NonBijective(Face, Face),
    #[error("base {0} does not induce its boundary component")]
    BaseNotInduced(Face),
    #[error("bases share vertex {0}")]
    BasesOverlap(VertexId),
    #[error("vertex {0} lies outside both bases")]
    VertexOutsideBases(VertexId),
    #[error("expected 2 boundary components, found {0}")]
    WrongBoundaryCount(usize),
    #[error("dual graph is disconnected")]
    DualDisconnected,
    #[error("Euler characteristic is {actual}, expected {expected}")]
    EulerMismatch { expected: i64, actual: i64 },
    #[error("order is not a permutation of the facets")]
    NotAPermutation,
    #[error("support has {actual} vertices, expected {expected}")]
    BadSupportSize { expected: usize, actual: usize },
    #[error("invalid flip: {0}")]
    InvalidFlip(FlipRejection),
    #[error("no valid flips available")]
    NoValidFlips,
    #[error("temperature {0} is not positive")]
    NonpositiveTemperature(f64),
    #[error("no facet of the base avoids apex {0}")]
    DegenerateCone(VertexId),
    #[error("no apex pair yields a covering sphere")]
    NoValidPair,
    #[error("width did not increase: {before} before, {after} after")]
    WidthRegression { before: Width, after: Width },
    #[error("bases are not simplex boundaries")]
    NotSimplexBases,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("{0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
