//! Flip calculus on prismatoids.
//!
//! A flip is a triple (f, l, v): f a face, l a minimal nonface disjoint from
//! it, and for boundary flips a base vertex v with f and l in the opposite
//! base. Applying a flip removes the open star of f and glues in the faces
//! over l instead: the new faces are the subsets of the support f ∪ l ∪ v
//! that contain l but not f. The inverse flip swaps f and l.
//!
//! Flips correspond bijectively to the distinct flip-defining
//! ridge-neighborhood values: interior ridges have neighborhoods of size d+1
//! (the union of their two facets), boundary ridges of size d (their unique
//! facet, the seat of an insertion flip that subdivides it with a fresh
//! vertex). Sampling draws uniformly over the distinct values and rejects
//! invalid candidates, which keeps the distribution uniform over valid flips.

use std::collections::{BTreeMap, BTreeSet};

use rand::Rng;

use crate::error::Error;
use crate::prism::{Prismatoid, Sign};
use crate::vertex::{Face, VertexId};

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum FlipKind {
    Interior,
    Boundary,
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Flip {
    pub f: Face,
    pub l: Face,
    pub v: Option<VertexId>,
    pub kind: FlipKind,
}

impl Flip {
    pub fn support(&self) -> Face {
        let fl = self.f.union(&self.l);
        match self.v {
            Some(v) => fl.with(v),
            None => fl,
        }
    }

    /// The flip undoing this one: f and l swap roles, v stays.
    pub fn inverse(&self) -> Flip {
        Flip {
            f: self.l.clone(),
            l: self.f.clone(),
            v: self.v,
            kind: self.kind,
        }
    }

    fn sort_key(&self) -> (Face, Face) {
        (self.support(), self.f.clone())
    }
}

/// Why a candidate flip was rejected, in check order.
#[derive(Clone, PartialEq, Eq, Debug, thiserror::Error)]
pub enum FlipRejection {
    #[error("support is not a ridge neighborhood")]
    SupportNotRidgeNeighborhood,
    #[error("f is not a face")]
    FNotAFace,
    #[error("neighborhood of f has {actual} vertices, expected {expected}")]
    WrongNeighborhoodSize { expected: usize, actual: usize },
    #[error("l is already a face")]
    LIsAFace,
    #[error("malformed flip: {0}")]
    MalformedShape(&'static str),
    #[error("side constraint violated: {0}")]
    SideConstraint(&'static str),
    #[error("link of f is not the boundary of l joined with v")]
    LinkMismatch,
    #[error("insertion label is already in use")]
    VertexNotFresh,
}

/// Multiset of ridge-neighborhood values with O(1) uniform draws over the
/// distinct values. Multiple ridges of one flip support share a value; the
/// refcount tracks them.
#[derive(Clone, Debug, Default)]
pub struct RidgeIndex {
    values: Vec<Face>,
    index: BTreeMap<Face, (usize, u32)>,
}

impl PartialEq for RidgeIndex {
    fn eq(&self, other: &Self) -> bool {
        if self.index.len() != other.index.len() {
            return false;
        }
        self.index
            .iter()
            .zip(other.index.iter())
            .all(|((fa, (_, ca)), (fb, (_, cb)))| fa == fb && ca == cb)
    }
}

impl Eq for RidgeIndex {}

impl RidgeIndex {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn distinct_len(&self) -> usize {
        self.values.len()
    }

    pub fn contains(&self, value: &Face) -> bool {
        self.index.contains_key(value)
    }

    pub fn values(&self) -> &[Face] {
        &self.values
    }

    pub fn add(&mut self, value: Face) {
        match self.index.get_mut(&value) {
            Some((_, count)) => *count += 1,
            None => {
                self.index.insert(value.clone(), (self.values.len(), 1));
                self.values.push(value);
            }
        }
    }

    pub fn remove(&mut self, value: &Face) {
        let (pos, count) = self.index.get_mut(value).expect("value present");
        if *count > 1 {
            *count -= 1;
            return;
        }
        let pos = *pos;
        self.index.remove(value);
        self.values.swap_remove(pos);
        if pos < self.values.len() {
            let moved = self.values[pos].clone();
            self.index.get_mut(&moved).expect("moved value present").0 = pos;
        }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<&Face> {
        if self.values.is_empty() {
            return None;
        }
        Some(&self.values[rng.random_range(0..self.values.len())])
    }
}

impl Prismatoid {
    /// Reconstructs the unique flip candidate carried by the support `u`.
    ///
    /// Without `fresh`, u must have d+1 vertices (an interior
    /// ridge-neighborhood value); with `fresh` it must have d (a boundary
    /// facet about to be subdivided by the fresh label). v is the unique
    /// vertex of u in one base when u meets that base in exactly one vertex,
    /// f ∪ v is the intersection of all facets inside u, and l is the rest of
    /// the support. Returns `None` when no facet lies inside u or when u
    /// stays in one base.
    pub fn derive_flip_from_support(
        &self,
        u: &Face,
        fresh: Option<VertexId>,
    ) -> Result<Option<Flip>, Error> {
        let d = self.d();
        let expected = if fresh.is_some() { d } else { d + 1 };
        if u.len() != expected {
            return Err(Error::BadSupportSize {
                expected,
                actual: u.len(),
            });
        }
        if let Some(w) = fresh {
            if self.complex().used_vertices().contains(&w) || u.contains(&w) {
                return Err(Error::InvalidFlip(FlipRejection::VertexNotFresh));
            }
        }
        let in_plus = u.intersection_size(self.base(Sign::Plus));
        let in_minus = u.intersection_size(self.base(Sign::Minus));
        if in_plus == 0 || in_minus == 0 {
            return Ok(None);
        }
        let mut inside: Vec<Face> = Vec::new();
        if u.len() == d {
            if self.complex().is_facet(u) {
                inside.push(u.clone());
            }
        } else {
            for s in u.subfacets() {
                if self.complex().is_facet(&s) {
                    inside.push(s);
                }
            }
        }
        let Some(first) = inside.first() else {
            return Ok(None);
        };
        let mut inter = first.clone();
        for s in &inside[1..] {
            inter = inter.intersection(s);
        }
        let support = match fresh {
            Some(w) => u.with(w),
            None => u.clone(),
        };
        let v = if in_plus == 1 {
            Some(u.intersection(self.base(Sign::Plus)).iter().next().unwrap())
        } else if in_minus == 1 {
            Some(u.intersection(self.base(Sign::Minus)).iter().next().unwrap())
        } else {
            None
        };
        let flip = match v {
            Some(vv) => {
                let f = inter.without(&vv);
                let l = support.minus(&f.with(vv));
                Flip {
                    f,
                    l,
                    v: Some(vv),
                    kind: FlipKind::Boundary,
                }
            }
            None => {
                let l = support.minus(&inter);
                Flip {
                    f: inter,
                    l,
                    v: None,
                    kind: FlipKind::Interior,
                }
            }
        };
        Ok(Some(flip))
    }

    /// Validity per the flip definition, reported as the first failed check:
    /// the support must be a current ridge-neighborhood value, f a face whose
    /// neighborhood has d+1 vertices (d for insertions), l a nonface, the
    /// parts disjoint with the right sizes and sides, and link(f) must equal
    /// ∂(l) * v exactly.
    pub fn check_flip(&self, flip: &Flip) -> Option<FlipRejection> {
        let d = self.d();
        let used = self.complex().used_vertices();
        let insertion = flip.l.len() == 1
            && !used.contains(&flip.l.iter().next().expect("nonempty l"));
        let support = flip.support();
        let value = if insertion {
            support.minus(&flip.l)
        } else {
            support.clone()
        };
        if !self.ridge_index.contains(&value) {
            return Some(FlipRejection::SupportNotRidgeNeighborhood);
        }
        let Some(nf) = self.complex().neighborhood(&flip.f) else {
            return Some(FlipRejection::FNotAFace);
        };
        let expected_n = if insertion { d } else { d + 1 };
        if nf.len() != expected_n {
            return Some(FlipRejection::WrongNeighborhoodSize {
                expected: expected_n,
                actual: nf.len(),
            });
        }
        if self.complex().contains_face(&flip.l) {
            return Some(FlipRejection::LIsAFace);
        }
        if let Some(r) = self.check_shape(flip, insertion) {
            return Some(r);
        }
        // link(f) must equal ∂(l) * v as a face set.
        let mut expected: BTreeSet<Face> = BTreeSet::new();
        for s in flip.l.subsets() {
            if s.len() < flip.l.len() {
                match flip.v {
                    Some(vv) => {
                        expected.insert(s.with(vv));
                        expected.insert(s);
                    }
                    None => {
                        expected.insert(s);
                    }
                }
            }
        }
        let mut actual: BTreeSet<Face> = BTreeSet::new();
        for m in self.complex().star_facets(&flip.f).expect("f is a face") {
            for s in m.minus(&flip.f).subsets() {
                actual.insert(s);
            }
        }
        if expected != actual {
            return Some(FlipRejection::LinkMismatch);
        }
        None
    }

    fn check_shape(&self, flip: &Flip, insertion: bool) -> Option<FlipRejection> {
        let d = self.d();
        if flip.f.intersection_size(&flip.l) != 0 {
            return Some(FlipRejection::MalformedShape("f and l overlap"));
        }
        if flip.l.is_empty() {
            return Some(FlipRejection::MalformedShape("l is empty"));
        }
        match (flip.kind, flip.v) {
            (FlipKind::Interior, None) => {
                if flip.f.len() + flip.l.len() != d + 1 {
                    return Some(FlipRejection::MalformedShape("interior sizes must total d+1"));
                }
                if insertion {
                    return Some(FlipRejection::MalformedShape("interior flips cannot insert"));
                }
                let in_plus = flip.l.intersection_size(self.base(Sign::Plus));
                let in_minus = flip.l.intersection_size(self.base(Sign::Minus));
                if in_plus + in_minus != flip.l.len() {
                    return Some(FlipRejection::SideConstraint("l must lie in the bases"));
                }
                if in_plus == 0 || in_minus == 0 {
                    return Some(FlipRejection::SideConstraint("l must meet both bases"));
                }
                None
            }
            (FlipKind::Boundary, Some(vv)) => {
                if flip.f.len() + flip.l.len() != d {
                    return Some(FlipRejection::MalformedShape("boundary sizes must total d"));
                }
                if flip.f.contains(&vv) || flip.l.contains(&vv) {
                    return Some(FlipRejection::MalformedShape("v must avoid f and l"));
                }
                let Some(side) = self.side_of(&vv) else {
                    return Some(FlipRejection::SideConstraint("v must lie in a base"));
                };
                let opposite = self.base(side.opposite());
                if !flip.f.is_subset_of(opposite) {
                    return Some(FlipRejection::SideConstraint("f must lie in the base opposite v"));
                }
                let l_used = if insertion {
                    Face::empty()
                } else {
                    flip.l.clone()
                };
                if !l_used.is_subset_of(opposite) {
                    return Some(FlipRejection::SideConstraint("l must lie in the base opposite v"));
                }
                None
            }
            _ => Some(FlipRejection::MalformedShape("kind and v disagree")),
        }
    }

    pub fn is_valid_flip(&self, flip: &Flip) -> bool {
        self.check_flip(flip).is_none()
    }

    /// Applies a valid flip in place and returns its inverse. Face table,
    /// neighborhoods, bases, ridge index and width labels are all updated
    /// locally: every face whose star changes is a subset of the support.
    pub fn apply_flip(&mut self, flip: &Flip) -> Result<Flip, Error> {
        if let Some(rej) = self.check_flip(flip) {
            return Err(Error::InvalidFlip(rej));
        }
        let d = self.d();
        let support = flip.support();
        let insertion =
            flip.l.len() == 1
                && !self
                    .complex
                    .used_vertices()
                    .contains(&flip.l.iter().next().unwrap());
        let removal = flip.f.len() == 1 && flip.kind == FlipKind::Boundary;

        // Pre-state: stars of all affected faces and neighbors of the
        // outgoing facets, all served from the per-vertex facet index so the
        // update cost stays local to the flip site.
        let affected: Vec<Face> = support
            .subsets()
            .into_iter()
            .filter(|s| self.complex.contains_face(s))
            .collect();
        let mut old_stars: BTreeMap<&Face, Vec<Face>> = BTreeMap::new();
        for g in &affected {
            if !g.is_empty() {
                old_stars.insert(g, self.complex.star_facets(g)?);
            }
        }
        let removed: Vec<Face> = old_stars[&flip.f].clone();
        let removed_set: BTreeSet<&Face> = removed.iter().collect();
        let mut touched: BTreeSet<Face> = BTreeSet::new();
        for m in &removed {
            for g in self.complex.dual_neighbors(m)? {
                if !removed_set.contains(&g) {
                    touched.insert(g);
                }
            }
        }
        let inserted: Vec<Face> = flip.f.iter().map(|y| support.without(&y)).collect();

        // Old ridge values out, before the table changes.
        for r in &affected {
            if r.len() == d - 1 {
                let value = self.complex.neighborhood(r).expect("ridge present").clone();
                self.ridge_index.remove(&value);
            }
        }

        // Face table update: drop everything over f, add the faces over l.
        for g in &affected {
            if flip.f.is_subset_of(g) {
                self.complex.remove_face_raw(g);
            }
        }
        for s in support.minus(&flip.l).subsets() {
            let g = s.union(&flip.l);
            if flip.f.is_subset_of(&g) {
                continue;
            }
            let mut neigh = Face::empty();
            for m in &inserted {
                if g.is_subset_of(m) {
                    neigh = neigh.union(m);
                }
            }
            self.complex.insert_face_raw(g, neigh);
        }

        // Neighborhood repair for the surviving faces inside the support.
        let mut acc: Vec<VertexId> = Vec::new();
        for (g, star) in &old_stars {
            if flip.f.is_subset_of(g) {
                continue;
            }
            acc.clear();
            for m in star.iter().filter(|m| !removed_set.contains(m)) {
                acc.extend(m.iter());
            }
            for m in &inserted {
                if g.is_subset_of(m) {
                    acc.extend(m.iter());
                }
            }
            self.complex.set_neighborhood(g, Face::new(acc.clone()));
        }

        // The empty face's neighborhood is the used vertex set. A support
        // vertex leaves only when every facet containing it was removed; the
        // inserted facets contribute their own vertices, including a fresh
        // label on insertions.
        let mut used = self.complex.used_vertices().clone();
        for x in support.iter() {
            let sx = Face::singleton(x);
            let Some(star) = old_stars.get(&sx) else {
                continue;
            };
            if star.iter().all(|m| removed_set.contains(m))
                && !inserted.iter().any(|m| m.contains(&x))
            {
                used = used.without(&x);
            }
        }
        for m in &inserted {
            used = used.union(m);
        }
        self.complex.set_neighborhood(&Face::empty(), used);

        // Base and fresh-label bookkeeping.
        if insertion {
            let w = flip.l.iter().next().unwrap();
            let vv = flip.v.expect("insertions are boundary flips");
            let side = self.side_of(&vv).expect("v lies in a base").opposite();
            match side {
                Sign::Plus => self.base_plus = self.base_plus.with(w),
                Sign::Minus => self.base_minus = self.base_minus.with(w),
            }
            self.fresh.commit(w);
            self.generated.insert(w);
        }
        if removal {
            let x = flip.f.iter().next().unwrap();
            self.base_plus = self.base_plus.without(&x);
            self.base_minus = self.base_minus.without(&x);
            if self.generated.remove(&x) {
                self.fresh.release(x);
            }
        }

        // New ridge values in.
        for s in support.subsets() {
            if s.len() == d - 1 {
                if let Some(n) = self.complex.neighborhood(&s) {
                    self.ridge_index.add(n.clone());
                }
            }
        }
        self.repair_labels(&removed, &inserted, touched);
        Ok(flip.inverse())
    }

    /// All valid flips, one per flip-defining ridge-neighborhood value.
    /// Insertion candidates all borrow the same peeked fresh label.
    pub fn enumerate_flips(&self) -> Vec<Flip> {
        self.enumerate_flips_within(None)
    }

    /// Like `enumerate_flips`, but on a bounded ground set: with
    /// `max_vertices = Some(cap)`, insertion flips exist only while the
    /// vertex count is below the cap, as if the label pool held exactly
    /// `cap` points.
    pub fn enumerate_flips_within(&self, max_vertices: Option<usize>) -> Vec<Flip> {
        let d = self.d();
        let full = max_vertices.is_some_and(|cap| self.complex.vertex_count() >= cap);
        let fresh = self.fresh.peek(self.complex.used_vertices());
        let mut out = Vec::new();
        for value in self.ridge_index.values() {
            let candidate = if value.len() == d {
                if full {
                    continue;
                }
                self.derive_flip_from_support(value, Some(fresh))
            } else {
                self.derive_flip_from_support(value, None)
            };
            if let Ok(Some(flip)) = candidate {
                if self.is_valid_flip(&flip) {
                    out.push(flip);
                }
            }
        }
        out.sort_by_key(|f| f.sort_key());
        out
    }

    /// Uniform draw over the valid flips: rejection sampling over the
    /// distinct ridge-neighborhood values with a bounded retry count, then an
    /// exact enumeration fallback.
    pub fn sample_flip<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Flip, Error> {
        self.sample_flip_within(rng, None)
    }

    /// Uniform draw over the valid flips on a bounded ground set (see
    /// `enumerate_flips_within`). Boundary values drawn while the cap is
    /// reached count as invalid draws.
    pub fn sample_flip_within<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        max_vertices: Option<usize>,
    ) -> Result<Flip, Error> {
        const RETRIES: usize = 64;
        let d = self.d();
        let full = max_vertices.is_some_and(|cap| self.complex.vertex_count() >= cap);
        for _ in 0..RETRIES {
            let Some(value) = self.ridge_index.draw(rng) else { break };
            let candidate = if value.len() == d {
                if full {
                    continue;
                }
                let fresh = self.fresh.peek(self.complex.used_vertices());
                self.derive_flip_from_support(value, Some(fresh))
            } else {
                self.derive_flip_from_support(value, None)
            };
            if let Ok(Some(flip)) = candidate {
                if self.is_valid_flip(&flip) {
                    return Ok(flip);
                }
            }
        }
        let all = self.enumerate_flips_within(max_vertices);
        if all.is_empty() {
            return Err(Error::NoValidFlips);
        }
        Ok(all[rng.random_range(0..all.len())].clone())
    }

    /// Uniform draw restricted to insertion flips.
    pub fn sample_insertion_flip<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Flip, Error> {
        const RETRIES: usize = 256;
        let d = self.d();
        for _ in 0..RETRIES {
            let Some(value) = self.ridge_index.draw(rng) else { break };
            if value.len() != d {
                continue;
            }
            let fresh = self.fresh.peek(self.complex.used_vertices());
            if let Ok(Some(flip)) = self.derive_flip_from_support(value, Some(fresh)) {
                if self.is_valid_flip(&flip) {
                    return Ok(flip);
                }
            }
        }
        let all: Vec<Flip> = self
            .enumerate_flips()
            .into_iter()
            .filter(|f| {
                f.l.len() == 1
                    && !self
                        .complex
                        .used_vertices()
                        .contains(&f.l.iter().next().unwrap())
            })
            .collect();
        if all.is_empty() {
            return Err(Error::NoValidFlips);
        }
        Ok(all[rng.random_range(0..all.len())].clone())
    }
}
