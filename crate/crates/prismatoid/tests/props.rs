//! Property tests for the complex core: randomized small complexes checked
//! against naive full-scan oracles.

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use prismatoid::complex::SimplicialComplex;
use prismatoid::iso::{are_isomorphic, find_isomorphism};
use prismatoid::vertex::{Face, VertexId};

fn vid(i: u8) -> VertexId {
    VertexId::new(&i.to_string()).unwrap()
}

fn face_of(set: BTreeSet<u8>) -> Face {
    Face::new(set.into_iter().map(vid).collect())
}

/// Random generator lists over vertices 0..8, face sizes 1..=4. The resulting
/// closure may be non-pure.
fn arb_generators() -> impl Strategy<Value = Vec<Face>> {
    proptest::collection::vec(proptest::collection::btree_set(0u8..8, 1..=4), 1..8)
        .prop_map(|sets| sets.into_iter().map(face_of).collect())
}

/// Smaller universe for the factorial-time isomorphism oracle.
fn arb_small_generators() -> impl Strategy<Value = Vec<Face>> {
    proptest::collection::vec(proptest::collection::btree_set(0u8..6, 1..=3), 1..6)
        .prop_map(|sets| sets.into_iter().map(face_of).collect())
}

fn perms(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in perms(n - 1) {
        for i in 0..n {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Ground-truth isomorphism test: try every vertex bijection.
fn brute_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    let va: Vec<VertexId> = a.used_vertices().iter().collect();
    let vb: Vec<VertexId> = b.used_vertices().iter().collect();
    if va.len() != vb.len() || a.facet_count() != b.facet_count() {
        return false;
    }
    perms(va.len()).into_iter().any(|p| {
        let map: BTreeMap<VertexId, VertexId> =
            va.iter().zip(p.iter()).map(|(x, i)| (*x, vb[*i])).collect();
        match a.relabeled(&map) {
            Ok(r) => r.facets() == b.facets(),
            Err(_) => false,
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// Rebuilding from the maximal faces is a fixpoint.
    #[test]
    fn rebuild_from_facets_is_fixpoint(gens in arb_generators()) {
        let c = SimplicialComplex::from_face_set(gens);
        let rebuilt = SimplicialComplex::from_face_set(c.facets().iter().cloned());
        prop_assert_eq!(c.face_map(), rebuilt.face_map());
        prop_assert_eq!(c.facets(), rebuilt.facets());
    }

    /// Pure complexes additionally round-trip through the strict constructor.
    #[test]
    fn pure_rebuild_roundtrip(sets in proptest::collection::vec(
        proptest::collection::btree_set(0u8..8, 4), 1..8))
    {
        let facets: Vec<Face> = sets.into_iter().map(face_of).collect();
        let c = SimplicialComplex::from_facets(facets).unwrap();
        prop_assert!(c.is_pure());
        let rebuilt = SimplicialComplex::from_facets(c.facets().iter().cloned()).unwrap();
        prop_assert_eq!(c.face_map(), rebuilt.face_map());
    }

    /// Stored neighborhoods equal the union of incident facets.
    #[test]
    fn neighborhoods_match_naive_scan(gens in arb_generators()) {
        let c = SimplicialComplex::from_face_set(gens);
        for (f, stored) in c.face_map() {
            let naive = c
                .facets()
                .iter()
                .filter(|m| f.is_subset_of(m))
                .fold(Face::empty(), |acc, m| acc.union(m));
            prop_assert_eq!(stored, &naive, "neighborhood of {:?}", f);
        }
    }

    /// Hasse neighbors agree with a direct scan of the face map.
    #[test]
    fn hasse_neighbors_match_naive_scan(gens in arb_generators()) {
        let c = SimplicialComplex::from_face_set(gens);
        for f in c.face_map().keys() {
            let (down, up) = c.hasse_neighbors(f).unwrap();
            let down: BTreeSet<Face> = down.into_iter().collect();
            let up: BTreeSet<Face> = up.into_iter().collect();
            let naive_down: BTreeSet<Face> = if f.is_empty() {
                BTreeSet::new()
            } else {
                f.subfacets().collect()
            };
            let naive_up: BTreeSet<Face> = c
                .face_map()
                .keys()
                .filter(|g| g.len() == f.len() + 1 && f.is_subset_of(g))
                .cloned()
                .collect();
            prop_assert_eq!(&down, &naive_down, "down-set of {:?}", f);
            // Closure: every subfacet of a face is itself a face.
            for s in &down {
                prop_assert!(c.contains_face(s));
            }
            prop_assert_eq!(&up, &naive_up, "up-set of {:?}", f);
        }
    }

    /// Star and link agree with full-scan recomputation.
    #[test]
    fn star_and_link_match_naive_scan(gens in arb_generators()) {
        let c = SimplicialComplex::from_face_set(gens);
        for f in c.face_map().keys() {
            let incident: Vec<Face> = c
                .facets()
                .iter()
                .filter(|m| f.is_subset_of(m))
                .cloned()
                .collect();
            let star = c.star(f).unwrap();
            let naive_star = SimplicialComplex::from_face_set(incident.iter().cloned());
            prop_assert_eq!(star.face_map(), naive_star.face_map());
            let link = c.link(f).unwrap();
            let naive_link =
                SimplicialComplex::from_face_set(incident.iter().map(|m| m.minus(f)));
            prop_assert_eq!(link.face_map(), naive_link.face_map());
            for g in link.face_map().keys() {
                prop_assert_eq!(g.intersection_size(f), 0);
                prop_assert!(c.contains_face(&g.union(f)));
            }
        }
    }

    /// The backtracking isomorphism search agrees with trying all bijections.
    #[test]
    fn isomorphism_matches_brute_force(
        ga in arb_small_generators(),
        gb in arb_small_generators(),
    ) {
        let a = SimplicialComplex::from_face_set(ga);
        let b = SimplicialComplex::from_face_set(gb);
        prop_assert_eq!(are_isomorphic(&a, &b), brute_isomorphic(&a, &b));
    }

    /// A relabeled copy is always found isomorphic, with a verified witness.
    #[test]
    fn relabeled_copy_is_isomorphic(ga in arb_small_generators(), seed in any::<u64>()) {
        let a = SimplicialComplex::from_face_set(ga);
        let mut targets: Vec<VertexId> = a.used_vertices().iter().collect();
        targets.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let map: BTreeMap<VertexId, VertexId> = a
            .used_vertices()
            .iter()
            .zip(targets)
            .collect();
        let b = a.relabeled(&map).unwrap();
        let witness = find_isomorphism(&a, &b);
        prop_assert!(witness.is_some());
        let mapped = a.relabeled(&witness.unwrap()).unwrap();
        prop_assert_eq!(mapped.facets(), b.facets());
    }
}
