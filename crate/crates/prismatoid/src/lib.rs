//! A workbench for topological prismatoids: simplicial complexes presented
//! by their face tables, the flip calculus on prismatoids, simulated
//! annealing toward small wide prismatoids, and the dimension-raising step
//! that turns a wide prismatoid into a sphere violating the Hirsch bound.

pub mod anneal;
pub mod complex;
pub mod dstep;
pub mod error;
pub mod flip;
pub mod io;
pub mod iso;
pub mod prism;
pub mod vertex;

#[cfg(test)]
pub(crate) mod fixtures;

pub use complex::SimplicialComplex;
pub use error::Error;
pub use flip::{Flip, FlipKind, RidgeIndex};
pub use prism::{Certificate, CertificateKind, IncidencePattern, Prismatoid, Sign, Width};
pub use vertex::{Face, VertexId};
