//! The dimension-raising step: replace a base by a covering sphere, suspend,
//! and contract one vertex of the other base. Each step trades one dimension
//! for one vertex while the width grows by at least one, and iterating it
//! drives a wide prismatoid down to the `n = 2d` regime where the two bases
//! close up into a sphere violating the Hirsch bound.

use std::collections::BTreeSet;

use crate::complex::SimplicialComplex;
use crate::error::Error;
use crate::prism::{Prismatoid, Sign, Width};
use crate::vertex::{Face, VertexId};

/// Cone `v` over the facets of `b` avoiding `v`. For a closed pseudomanifold
/// this is a ball whose boundary is `b` again.
pub fn pull_cone(b: &SimplicialComplex, v: VertexId) -> Result<SimplicialComplex, Error> {
    if !b.used_vertices().contains(&v) {
        return Err(Error::NotAVertex(v));
    }
    let facets: Vec<Face> = b
        .facets()
        .iter()
        .filter(|f| !f.contains(&v))
        .map(|f| f.with(v))
        .collect();
    if facets.is_empty() {
        return Err(Error::DegenerateCone(v));
    }
    SimplicialComplex::from_facets(facets)
}

/// A sphere one dimension up, written as the union of two pull cones over `b`
/// that intersect exactly in `b`.
#[derive(Clone, Debug)]
pub struct CoveringSphere {
    pub sphere: SimplicialComplex,
    pub half1: Vec<Face>,
    pub half2: Vec<Face>,
    pub apex1: VertexId,
    pub apex2: VertexId,
}

/// Searches vertex pairs of `b` in lexicographic order for two pull cones
/// whose face sets intersect exactly in `b` and whose union is a closed,
/// dual-connected sphere. Returns the first valid pair.
pub fn covering_sphere(b: &SimplicialComplex) -> Result<CoveringSphere, Error> {
    if !b.is_pure() {
        return Err(Error::NotPure);
    }
    for (r, neigh) in b.ridges() {
        let deg = neigh.len() - r.len();
        if deg != 2 {
            return Err(Error::NotPseudomanifold(r.clone(), deg));
        }
    }
    if !b.dual_connected()? {
        return Err(Error::DualDisconnected);
    }
    let verts: Vec<VertexId> = b.used_vertices().iter().collect();
    let cones: Vec<SimplicialComplex> = verts
        .iter()
        .map(|&v| pull_cone(b, v))
        .collect::<Result<_, _>>()?;
    let dim_up = b.top_size(); // sphere dimension after coning
    for i in 0..verts.len() {
        for j in (i + 1)..verts.len() {
            let (c1, c2) = (&cones[i], &cones[j]);
            // exact intersection: the faces shared by both cones are the
            // faces of b, nothing more
            let shared: BTreeSet<&Face> = c1
                .face_map()
                .keys()
                .filter(|f| c2.contains_face(f))
                .collect();
            if shared.len() != b.face_map().len()
                || !shared.iter().all(|f| b.contains_face(f))
            {
                continue;
            }
            let mut facets: Vec<Face> = c1.facets().iter().cloned().collect();
            facets.extend(c2.facets().iter().cloned());
            let sphere = match SimplicialComplex::from_facets(facets) {
                Ok(s) => s,
                Err(_) => continue,
            };
            if sphere.used_vertices() != b.used_vertices() {
                continue;
            }
            if !sphere.is_closed_pseudomanifold()? || !sphere.dual_connected()? {
                continue;
            }
            let expected_chi = 1 + if dim_up % 2 == 0 { 1 } else { -1 };
            if sphere.euler_characteristic() != expected_chi as i64 {
                continue;
            }
            return Ok(CoveringSphere {
                sphere,
                half1: c1.facets().iter().cloned().collect(),
                half2: c2.facets().iter().cloned().collect(),
                apex1: verts[i],
                apex2: verts[j],
            });
        }
    }
    Err(Error::NoValidPair)
}

/// What one dimension-raising step did, with enough detail to audit it.
#[derive(Clone, Debug)]
pub struct StepCertificate {
    pub step: usize,
    pub chosen: Sign,
    pub apexes: (VertexId, VertexId),
    pub suspension_labels: (VertexId, VertexId),
    pub contracted: VertexId,
    pub cover_facets: usize,
    pub vertices_before: usize,
    pub vertices_after: usize,
    pub d_before: usize,
    pub d_after: usize,
    pub facets_before: usize,
    pub facets_after: usize,
    pub width_before: Width,
    pub width_after: Width,
}

/// One step: pick the base with more slack (vertices beyond the simplex
/// minimum, ties to the plus side), cover it by a sphere, suspend with two
/// fresh vertices `_s<step>1`, `_s<step>2`, and contract the
/// lexicographically least vertex of the other base. The result is a
/// prismatoid with one more dimension, one more vertex, and width at least
/// one larger.
pub fn dstep_step(p: &Prismatoid, step: usize) -> Result<(Prismatoid, StepCertificate), Error> {
    let d = p.d();
    let slack_plus = p.base(Sign::Plus).len() as i64 - d as i64;
    let slack_minus = p.base(Sign::Minus).len() as i64 - d as i64;
    let chosen = if slack_plus >= slack_minus {
        Sign::Plus
    } else {
        Sign::Minus
    };
    let base_chosen = p.base(chosen).clone();
    let base_other = p.base(chosen.opposite()).clone();

    let cover = covering_sphere(&p.complex().induced(&base_chosen))?;

    let w1 = VertexId::new(&format!("_s{step}1"))?;
    let w2 = VertexId::new(&format!("_s{step}2"))?;
    for w in [w1, w2] {
        if p.complex().used_vertices().contains(&w) {
            return Err(Error::VertexClash(w));
        }
    }
    let u = base_other.iter().next().expect("nonempty base");

    let star_u: Vec<Face> = p.complex().star_facets(&Face::singleton(u))?;
    let mut facets: Vec<Face> = Vec::new();
    for f in p.complex().facets() {
        if !f.contains(&u) {
            facets.push(f.with(w1));
            facets.push(f.with(w2));
        }
    }
    for g in &cover.half1 {
        facets.push(g.with(w1));
    }
    for g in &cover.half2 {
        facets.push(g.with(w2));
    }
    for f in &star_u {
        facets.push(f.without(&u).with(w1).with(w2));
    }
    let expected_facets =
        2 * p.facet_count() + cover.sphere.facet_count() - star_u.len();
    let complex = SimplicialComplex::from_facets(facets)?;
    assert_eq!(complex.facet_count(), expected_facets);

    let new_other: Face = base_other.without(&u).with(w1).with(w2);
    let (new_plus, new_minus) = match chosen {
        Sign::Plus => (base_chosen, new_other),
        Sign::Minus => (new_other, base_chosen),
    };
    let next = Prismatoid::validate(complex, new_plus, new_minus)?;

    assert_eq!(next.d(), d + 1);
    assert_eq!(next.vertex_count(), p.vertex_count() + 1);
    let (width_before, width_after) = (p.width(), next.width());
    let grew = match (width_before, width_after) {
        (Width::Finite(b), Width::Finite(a)) => a >= b + 1,
        _ => false,
    };
    if !grew {
        return Err(Error::WidthRegression {
            before: width_before,
            after: width_after,
        });
    }
    let cert = StepCertificate {
        step,
        chosen,
        apexes: (cover.apex1, cover.apex2),
        suspension_labels: (w1, w2),
        contracted: u,
        cover_facets: cover.sphere.facet_count(),
        vertices_before: p.vertex_count(),
        vertices_after: next.vertex_count(),
        d_before: d,
        d_after: next.d(),
        facets_before: p.facet_count(),
        facets_after: next.facet_count(),
        width_before,
        width_after,
    };
    Ok((next, cert))
}

/// The closed sphere obtained by iterating the step down to `n = 2d` and
/// gluing both (by then simplex-boundary) bases shut with one facet each.
#[derive(Clone, Debug)]
pub struct SphereCertificate {
    pub sphere: SimplicialComplex,
    pub facet_plus: Face,
    pub facet_minus: Face,
    pub vertices: usize,
    pub dim: usize,
    pub facets: usize,
    pub distance: u32,
    pub diameter: u32,
    pub hirsch_bound: u32,
    pub non_hirsch: bool,
    pub steps: Vec<StepCertificate>,
    pub start_vertices: usize,
    pub start_width: Width,
}

pub fn build_nonhirsch_sphere(start: &Prismatoid) -> Result<SphereCertificate, Error> {
    let mut p = start.clone();
    let mut steps = Vec::new();
    let mut idx = 1;
    while p.vertex_count() > 2 * p.d() {
        let (next, cert) = dstep_step(&p, idx)?;
        steps.push(cert);
        p = next;
        idx += 1;
    }
    let d = p.d();
    for sign in [Sign::Plus, Sign::Minus] {
        let b = p.base(sign);
        if b.len() != d {
            return Err(Error::NotSimplexBases);
        }
        let induced = p.complex().induced(b);
        if induced.facet_count() != d || !b.subfacets().all(|s| induced.is_facet(&s)) {
            return Err(Error::NotSimplexBases);
        }
    }
    let facet_plus = p.base(Sign::Plus).clone();
    let facet_minus = p.base(Sign::Minus).clone();
    let mut facets: Vec<Face> = p.complex().facets().iter().cloned().collect();
    facets.push(facet_plus.clone());
    facets.push(facet_minus.clone());
    let sphere = SimplicialComplex::from_facets(facets)?;
    for (r, neigh) in sphere.ridges() {
        let deg = neigh.len() - r.len();
        if deg != 2 {
            return Err(Error::NotPseudomanifold(r.clone(), deg));
        }
    }
    if !sphere.dual_connected()? {
        return Err(Error::DualDisconnected);
    }
    let dim = d - 1;
    let expected_chi = 1 + if dim % 2 == 0 { 1i64 } else { -1 };
    if sphere.euler_characteristic() != expected_chi {
        return Err(Error::EulerMismatch {
            expected: expected_chi,
            actual: sphere.euler_characteristic(),
        });
    }
    let distance = sphere
        .dual_distance(&[facet_plus.clone()], &[facet_minus.clone()])?
        .ok_or(Error::DualDisconnected)?;
    let diameter = sphere.dual_diameter()?.ok_or(Error::DualDisconnected)?;
    let hirsch_bound = (sphere.vertex_count() - d) as u32;
    Ok(SphereCertificate {
        vertices: sphere.vertex_count(),
        dim,
        facets: sphere.facet_count(),
        distance,
        diameter,
        hirsch_bound,
        non_hirsch: distance > hirsch_bound,
        sphere,
        facet_plus,
        facet_minus,
        steps,
        start_vertices: start.vertex_count(),
        start_width: start.width(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ann6_prismatoid, stacked_sphere};
    use crate::vertex::fc;
    use crate::vertex::vx;

    fn square() -> SimplicialComplex {
        SimplicialComplex::from_facets(vec![fc("12"), fc("23"), fc("34"), fc("14")]).unwrap()
    }

    #[test]
    fn pull_cone_of_a_square() {
        let cone = pull_cone(&square(), vx("1")).unwrap();
        let want: Vec<Face> = vec![fc("123"), fc("134")];
        assert_eq!(cone.facets().iter().cloned().collect::<Vec<_>>(), want);
        assert_eq!(
            cone.boundary_components()
                .unwrap()
                .into_iter()
                .collect::<Vec<_>>(),
            vec![square()]
        );
    }

    #[test]
    fn pull_cone_errors() {
        let edge = SimplicialComplex::from_facets(vec![fc("12")]).unwrap();
        assert_eq!(pull_cone(&edge, vx("1")), Err(Error::DegenerateCone(vx("1"))));
        assert_eq!(pull_cone(&square(), vx("9")), Err(Error::NotAVertex(vx("9"))));
    }

    #[test]
    fn covering_sphere_of_a_square_is_the_tetrahedron_boundary() {
        let c = covering_sphere(&square()).unwrap();
        assert_eq!((c.apex1, c.apex2), (vx("1"), vx("2")));
        assert_eq!(c.half1, vec![fc("123"), fc("134")]);
        assert_eq!(c.half2, vec![fc("124"), fc("234")]);
        assert_eq!(c.sphere, crate::fixtures::tetra_boundary());
    }

    #[test]
    fn simplex_boundary_has_no_covering_pair() {
        assert!(matches!(
            covering_sphere(&crate::fixtures::tetra_boundary()),
            Err(Error::NoValidPair)
        ));
    }

    #[test]
    fn covering_sphere_of_the_stacked_sphere() {
        let b = stacked_sphere();
        let c = covering_sphere(&b).unwrap();
        assert_eq!((c.apex1, c.apex2), (vx("0"), vx("3")));
        assert_eq!(c.half1.len(), 3);
        assert_eq!(c.half2.len(), 7);
        assert_eq!(c.sphere.facet_count(), 10);
        assert_eq!(c.sphere.used_vertices(), b.used_vertices());
        assert!(c.sphere.is_closed_pseudomanifold().unwrap());
        assert_eq!(c.sphere.euler_characteristic(), 2);
    }

    #[test]
    fn covering_sphere_rejects_open_input() {
        let path = SimplicialComplex::from_facets(vec![fc("12"), fc("23")]).unwrap();
        assert!(matches!(
            covering_sphere(&path),
            Err(Error::NotPseudomanifold(_, 1))
        ));
    }

    /// ANN6 with one insertion applied: 7 vertices, still d = 3, so exactly
    /// one step away from the terminal n = 2d regime.
    fn inflated_ann6() -> Prismatoid {
        let mut p = ann6_prismatoid();
        let flip = p
            .derive_flip_from_support(&fc("12a"), Some(vx("_x0")))
            .unwrap()
            .unwrap();
        p.apply_flip(&flip).unwrap();
        assert_eq!(p.vertex_count(), 7);
        p
    }

    #[test]
    fn one_step_on_the_inflated_annulus() {
        let p = inflated_ann6();
        assert_eq!(p.width(), Width::Finite(3));
        let (next, cert) = dstep_step(&p, 1).unwrap();
        assert_eq!(cert.chosen, Sign::Plus);
        assert_eq!(cert.apexes, (vx("1"), vx("3")));
        assert_eq!(cert.contracted, vx("a"));
        assert_eq!(cert.cover_facets, 4);
        assert_eq!((cert.vertices_before, cert.vertices_after), (7, 8));
        assert_eq!((cert.d_before, cert.d_after), (3, 4));
        assert_eq!(cert.facets_before, 7);
        assert_eq!(cert.facets_after, 14);
        assert_eq!(next.base(Sign::Plus), &fc("123").with(vx("_x0")));
        assert_eq!(
            next.base(Sign::Minus),
            &Face::parse("b c _s11 _s12").unwrap()
        );
        assert!(next.width() >= Width::Finite(4));
        next.consistency_check().unwrap();
    }

    #[test]
    fn terminal_annulus_closes_into_the_octahedron_like_sphere() {
        let cert = build_nonhirsch_sphere(&ann6_prismatoid()).unwrap();
        assert!(cert.steps.is_empty());
        assert_eq!(cert.vertices, 6);
        assert_eq!(cert.dim, 2);
        assert_eq!(cert.facets, 8);
        assert_eq!(cert.distance, 3);
        assert_eq!(cert.diameter, 3);
        assert_eq!(cert.hirsch_bound, 3);
        assert!(!cert.non_hirsch);
        assert_eq!(cert.sphere.euler_characteristic(), 2);
    }

    #[test]
    fn full_pipeline_on_the_inflated_annulus() {
        let cert = build_nonhirsch_sphere(&inflated_ann6()).unwrap();
        assert_eq!(cert.steps.len(), 1);
        assert_eq!(cert.vertices, 8);
        assert_eq!(cert.dim, 3);
        assert_eq!(cert.facets, 16);
        assert_eq!(cert.hirsch_bound, 4);
        assert_eq!(cert.sphere.euler_characteristic(), 0);
        assert!(cert.sphere.is_closed_pseudomanifold().unwrap());
        assert_eq!(cert.non_hirsch, cert.distance > cert.hirsch_bound);
        assert!(cert.diameter >= cert.distance);
    }
}
