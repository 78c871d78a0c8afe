//! Shared unit-test fixtures.

use crate::complex::SimplicialComplex;
use crate::prism::Prismatoid;
use crate::vertex::fc;

/// Triangulated annulus on six vertices: the smallest 2-prismatoid fixture.
pub(crate) fn ann6() -> SimplicialComplex {
    SimplicialComplex::from_facets(["12a", "2ab", "23b", "3bc", "13c", "1ac"].map(fc)).unwrap()
}

pub(crate) fn ann6_prismatoid() -> Prismatoid {
    Prismatoid::validate(ann6(), fc("123"), fc("abc")).unwrap()
}

pub(crate) fn tetra_boundary() -> SimplicialComplex {
    SimplicialComplex::from_facets(["123", "124", "134", "234"].map(fc)).unwrap()
}

/// Stacked 3-ball shared by all bundled prismatoid bases.
pub(crate) fn stacked_ball() -> SimplicialComplex {
    SimplicialComplex::from_facets(["01234", "01245", "01256"].map(fc)).unwrap()
}

/// Boundary sphere of the stacked ball: 7 vertices, 11 facets.
pub(crate) fn stacked_sphere() -> SimplicialComplex {
    let comps = stacked_ball().boundary_components().unwrap();
    assert_eq!(comps.len(), 1);
    comps.into_iter().next().unwrap()
}
