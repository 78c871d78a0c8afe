//! Simplicial complexes stored as an explicit face table.
//!
//! Every face (including the empty face) maps to its neighborhood: the union
//! of the vertex sets of all maximal faces containing it. The neighborhood of
//! the empty face is therefore the used vertex set. The Hasse diagram is
//! implicit: subfaces of F are F minus one vertex, superfaces are F plus one
//! vertex drawn from neighborhood(F).
//!
//! For a pure complex of facet size d, a ridge (face of size d-1) lies in
//! exactly `|neighborhood| - (d-1)` facets, since distinct facets over a ridge
//! contribute distinct extra vertices. Dual-graph traversal uses this to find
//! facet neighbors without any auxiliary index.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::Error;
use crate::vertex::{Face, VertexId};

#[derive(Clone)]
pub struct SimplicialComplex {
    faces: BTreeMap<Face, Face>,
    maximal: BTreeSet<Face>,
    /// Maximal faces indexed by vertex, kept in lockstep with `maximal` so
    /// star queries need not scan the facet list.
    by_vertex: BTreeMap<VertexId, BTreeSet<Face>>,
    top_size: usize,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.top_size == other.top_size && self.faces == other.faces
    }
}

impl Eq for SimplicialComplex {}

impl std::fmt::Debug for SimplicialComplex {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "SimplicialComplex(dim {}, {} maximal, {} faces)",
            self.dim(),
            self.maximal.len(),
            self.faces.len() - 1
        )
    }
}

impl SimplicialComplex {
    /// The trivial complex containing only the empty face.
    pub fn trivial() -> Self {
        let mut faces = BTreeMap::new();
        faces.insert(Face::empty(), Face::empty());
        SimplicialComplex {
            faces,
            maximal: BTreeSet::from([Face::empty()]),
            by_vertex: BTreeMap::new(),
            top_size: 0,
        }
    }

    /// Builds the pure complex generated by `facets`. Duplicates are merged.
    pub fn from_facets(facets: impl IntoIterator<Item = Face>) -> Result<Self, Error> {
        let mut set = BTreeSet::new();
        let mut size = None;
        for f in facets {
            match size {
                None => size = Some(f.len()),
                Some(s) if s != f.len() => return Err(Error::MixedDimension(s, f.len())),
                _ => {}
            }
            set.insert(f);
        }
        if set.is_empty() {
            return Err(Error::Empty);
        }
        Ok(Self::close(set))
    }

    /// Builds the complex generated by an arbitrary face collection
    /// (its downward closure). The result may be non-pure.
    pub fn from_face_set(generators: impl IntoIterator<Item = Face>) -> Self {
        let mut by_size: Vec<Face> = generators.into_iter().collect();
        by_size.sort_by_key(|f| std::cmp::Reverse(f.len()));
        let mut maximal: Vec<Face> = Vec::new();
        for f in by_size {
            if !maximal.iter().any(|m| f.is_subset_of(m)) {
                maximal.push(f);
            }
        }
        if maximal.is_empty() || maximal == [Face::empty()] {
            return Self::trivial();
        }
        Self::close(maximal.into_iter().collect())
    }

    fn close(maximal: BTreeSet<Face>) -> Self {
        let top_size = maximal.iter().map(Face::len).max().unwrap_or(0);
        let mut neigh: BTreeMap<Face, BTreeSet<VertexId>> = BTreeMap::new();
        let mut by_vertex: BTreeMap<VertexId, BTreeSet<Face>> = BTreeMap::new();
        for m in &maximal {
            for s in m.subsets() {
                let entry = neigh.entry(s).or_default();
                entry.extend(m.iter());
            }
            for v in m.iter() {
                by_vertex.entry(v).or_default().insert(m.clone());
            }
        }
        neigh.entry(Face::empty()).or_default();
        let faces = neigh
            .into_iter()
            .map(|(f, n)| (f, n.into_iter().collect()))
            .collect();
        SimplicialComplex {
            faces,
            maximal,
            by_vertex,
            top_size,
        }
    }

    /// Removes a face from the table without any closure maintenance.
    /// Callers are responsible for keeping the table downward closed.
    pub(crate) fn remove_face_raw(&mut self, f: &Face) {
        self.faces.remove(f);
        if self.maximal.remove(f) {
            for v in f.iter() {
                if let Some(set) = self.by_vertex.get_mut(&v) {
                    set.remove(f);
                    if set.is_empty() {
                        self.by_vertex.remove(&v);
                    }
                }
            }
        }
    }

    /// Inserts a face with the given neighborhood, marking it maximal when it
    /// has top size. Same caveat as `remove_face_raw`.
    pub(crate) fn insert_face_raw(&mut self, f: Face, neighborhood: Face) {
        if f.len() == self.top_size {
            self.maximal.insert(f.clone());
            for v in f.iter() {
                self.by_vertex.entry(v).or_default().insert(f.clone());
            }
        }
        self.faces.insert(f, neighborhood);
    }

    pub(crate) fn set_neighborhood(&mut self, f: &Face, neighborhood: Face) {
        *self.faces.get_mut(f).expect("face present") = neighborhood;
    }

    /// Facet size of a pure complex; max face size otherwise. 0 when trivial.
    pub fn top_size(&self) -> usize {
        self.top_size
    }

    pub fn dim(&self) -> isize {
        self.top_size as isize - 1
    }

    pub fn is_pure(&self) -> bool {
        self.maximal.iter().all(|m| m.len() == self.top_size)
    }

    /// Maximal faces. For a pure complex these are the facets.
    pub fn facets(&self) -> &BTreeSet<Face> {
        &self.maximal
    }

    pub fn facet_count(&self) -> usize {
        self.maximal.len()
    }

    /// All faces including the empty face.
    pub fn face_map(&self) -> &BTreeMap<Face, Face> {
        &self.faces
    }

    pub fn contains_face(&self, f: &Face) -> bool {
        self.faces.contains_key(f)
    }

    pub fn is_facet(&self, f: &Face) -> bool {
        self.maximal.contains(f)
    }

    /// Union of the vertex sets of all maximal faces containing `f`.
    pub fn neighborhood(&self, f: &Face) -> Option<&Face> {
        self.faces.get(f)
    }

    pub fn used_vertices(&self) -> &Face {
        self.faces.get(&Face::empty()).expect("empty face is always present")
    }

    pub fn vertex_count(&self) -> usize {
        self.used_vertices().len()
    }

    /// Immediate Hasse neighbors of `f`: (subfaces, superfaces).
    pub fn hasse_neighbors(&self, f: &Face) -> Result<(Vec<Face>, Vec<Face>), Error> {
        let neigh = self.faces.get(f).ok_or_else(|| Error::NotAFace(f.clone()))?;
        let down: Vec<Face> = if f.is_empty() {
            Vec::new()
        } else {
            f.subfacets().collect()
        };
        let up: Vec<Face> = neigh
            .minus(f)
            .iter()
            .map(|w| f.with(w))
            .filter(|g| self.faces.contains_key(g))
            .collect();
        Ok((down, up))
    }

    /// Maximal faces containing `f`.
    ///
    /// For nonempty `f` this scans the per-vertex index entry of the vertex
    /// with the fewest maximal faces, so the cost depends on the star of `f`
    /// and not on the total facet count.
    pub fn star_facets(&self, f: &Face) -> Result<Vec<Face>, Error> {
        if !self.faces.contains_key(f) {
            return Err(Error::NotAFace(f.clone()));
        }
        if f.is_empty() {
            return Ok(self.maximal.iter().cloned().collect());
        }
        let pivot = f
            .iter()
            .min_by_key(|v| self.by_vertex.get(v).map_or(0, BTreeSet::len))
            .expect("nonempty face");
        let Some(candidates) = self.by_vertex.get(&pivot) else {
            return Ok(Vec::new());
        };
        Ok(candidates
            .iter()
            .filter(|m| f.is_subset_of(m))
            .cloned()
            .collect())
    }

    /// Closed star of `f`: the subcomplex generated by all facets containing `f`.
    pub fn star(&self, f: &Face) -> Result<Self, Error> {
        Ok(Self::from_face_set(self.star_facets(f)?))
    }

    /// Link of `f`: faces G disjoint from f with G ∪ f a face.
    pub fn link(&self, f: &Face) -> Result<Self, Error> {
        let gens = self.star_facets(f)?.into_iter().map(|m| m.minus(f));
        Ok(Self::from_face_set(gens))
    }

    /// Deletion of `f`: all faces not containing f.
    pub fn deletion(&self, f: &Face) -> Result<Self, Error> {
        if !self.faces.contains_key(f) {
            return Err(Error::NotAFace(f.clone()));
        }
        let mut gens = Vec::new();
        for m in &self.maximal {
            if f.is_subset_of(m) {
                gens.extend(f.iter().map(|x| m.without(&x)));
            } else {
                gens.push(m.clone());
            }
        }
        Ok(Self::from_face_set(gens))
    }

    /// Induced subcomplex on the vertex set `w`: all faces contained in w.
    pub fn induced(&self, w: &Face) -> Self {
        Self::from_face_set(self.maximal.iter().map(|m| m.intersection(w)))
    }

    /// Face counts by dimension: (f_0, ..., f_{dim}). Empty face excluded.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut fv = vec![0usize; self.top_size];
        for f in self.faces.keys() {
            if !f.is_empty() {
                fv[f.len() - 1] += 1;
            }
        }
        fv
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(i, &c)| if i % 2 == 0 { c as i64 } else { -(c as i64) })
            .sum()
    }

    /// Number of facets containing the ridge `r`, using the neighborhood size.
    /// Only meaningful on pure complexes with |r| = facet size - 1.
    pub fn ridge_degree(&self, r: &Face) -> Option<usize> {
        self.faces.get(r).map(|n| n.len() - r.len())
    }

    /// Iterator over the ridges (faces of size facet size - 1) of a pure complex.
    pub fn ridges(&self) -> impl Iterator<Item = (&Face, &Face)> {
        let want = self.top_size.saturating_sub(1);
        self.faces
            .iter()
            .filter(move |(f, _)| f.len() == want)
    }

    /// Checks every ridge lies in at most two facets; returns the number of
    /// boundary ridges (degree one).
    pub fn pseudomanifold_boundary_ridges(&self) -> Result<usize, Error> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        let mut boundary = 0;
        for (r, n) in self.ridges() {
            match n.len() - r.len() {
                1 => boundary += 1,
                2 => {}
                k => return Err(Error::NotPseudomanifold(r.clone(), k)),
            }
        }
        Ok(boundary)
    }

    pub fn is_closed_pseudomanifold(&self) -> Result<bool, Error> {
        Ok(self.pseudomanifold_boundary_ridges()? == 0)
    }

    /// Facets adjacent to `f` across interior ridges.
    pub fn dual_neighbors(&self, f: &Face) -> Result<Vec<Face>, Error> {
        if !self.maximal.contains(f) {
            return Err(Error::UnknownFacet(f.clone()));
        }
        let mut out = Vec::new();
        for r in f.subfacets() {
            let n = &self.faces[&r];
            match n.len() - r.len() {
                1 => {}
                2 => {
                    let extra = n
                        .iter()
                        .find(|v| !f.contains(v))
                        .expect("interior ridge neighborhood adds one vertex");
                    out.push(r.with(extra));
                }
                k => return Err(Error::NotPseudomanifold(r, k)),
            }
        }
        Ok(out)
    }

    /// BFS distance in the dual graph between two facet sets. `None` if
    /// unreachable.
    pub fn dual_distance(&self, from: &[Face], to: &[Face]) -> Result<Option<u32>, Error> {
        for f in from.iter().chain(to) {
            if !self.maximal.contains(f) {
                return Err(Error::UnknownFacet(f.clone()));
            }
        }
        let targets: BTreeSet<&Face> = to.iter().collect();
        let mut dist: BTreeMap<Face, u32> = BTreeMap::new();
        let mut queue = std::collections::VecDeque::new();
        for f in from {
            if !dist.contains_key(f) {
                dist.insert(f.clone(), 0);
                queue.push_back(f.clone());
            }
        }
        while let Some(f) = queue.pop_front() {
            let d = dist[&f];
            if targets.contains(&f) {
                return Ok(Some(d));
            }
            for g in self.dual_neighbors(&f)? {
                if !dist.contains_key(&g) {
                    dist.insert(g.clone(), d + 1);
                    queue.push_back(g);
                }
            }
        }
        Ok(None)
    }

    /// Eccentricity sweep; `None` if the dual graph is disconnected.
    pub fn dual_diameter(&self) -> Result<Option<u32>, Error> {
        let mut best = 0;
        for start in &self.maximal {
            let mut dist: BTreeMap<&Face, u32> = BTreeMap::new();
            let mut queue = std::collections::VecDeque::new();
            dist.insert(start, 0);
            queue.push_back(start.clone());
            let mut seen = 1;
            while let Some(f) = queue.pop_front() {
                let d = dist[&f];
                best = best.max(d);
                for g in self.dual_neighbors(&f)? {
                    let g_ref = self.maximal.get(&g).expect("neighbor is a facet");
                    if !dist.contains_key(g_ref) {
                        dist.insert(g_ref, d + 1);
                        seen += 1;
                        queue.push_back(g);
                    }
                }
            }
            if seen < self.maximal.len() {
                return Ok(None);
            }
        }
        Ok(Some(best))
    }

    pub fn dual_connected(&self) -> Result<bool, Error> {
        if self.maximal.len() <= 1 {
            return Ok(true);
        }
        let start = self.maximal.iter().next().unwrap().clone();
        let mut seen = BTreeSet::from([start.clone()]);
        let mut queue = std::collections::VecDeque::from([start]);
        while let Some(f) = queue.pop_front() {
            for g in self.dual_neighbors(&f)? {
                if seen.insert(g.clone()) {
                    queue.push_back(g);
                }
            }
        }
        Ok(seen.len() == self.maximal.len())
    }

    /// Splits the boundary (ridges of degree one, as facets of a pure
    /// (d-2)-complex) into connected components. Closed complexes yield an
    /// empty list. Components are connected through shared sub-ridges.
    pub fn boundary_components(&self) -> Result<Vec<SimplicialComplex>, Error> {
        if !self.is_pure() {
            return Err(Error::NotPure);
        }
        let mut boundary: Vec<Face> = Vec::new();
        for (r, n) in self.ridges() {
            match n.len() - r.len() {
                1 => boundary.push(r.clone()),
                2 => {}
                k => return Err(Error::NotPseudomanifold(r.clone(), k)),
            }
        }
        if boundary.is_empty() {
            return Ok(Vec::new());
        }
        // Union-find keyed by position in `boundary`.
        let mut parent: Vec<usize> = (0..boundary.len()).collect();
        fn find(parent: &mut Vec<usize>, i: usize) -> usize {
            if parent[i] != i {
                let root = find(parent, parent[i]);
                parent[i] = root;
            }
            parent[i]
        }
        let mut by_subridge: BTreeMap<Face, usize> = BTreeMap::new();
        for (i, b) in boundary.iter().enumerate() {
            for s in b.subfacets() {
                match by_subridge.get(&s) {
                    Some(&j) => {
                        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                        parent[ri] = rj;
                    }
                    None => {
                        by_subridge.insert(s, i);
                    }
                }
            }
        }
        let mut groups: BTreeMap<usize, Vec<Face>> = BTreeMap::new();
        for (i, b) in boundary.iter().enumerate() {
            let root = find(&mut parent, i);
            groups.entry(root).or_default().push(b.clone());
        }
        let mut comps: Vec<SimplicialComplex> = groups
            .into_values()
            .map(|fs| Self::from_facets(fs).expect("boundary ridges share a size"))
            .collect();
        comps.sort_by(|a, b| a.maximal.iter().next().cmp(&b.maximal.iter().next()));
        Ok(comps)
    }

    /// Join: faces are unions of a face of `self` and a face of `other`.
    /// Vertex sets must be disjoint.
    pub fn join(&self, other: &Self) -> Result<Self, Error> {
        if let Some(v) = self
            .used_vertices()
            .iter()
            .find(|v| other.used_vertices().contains(v))
        {
            return Err(Error::VertexClash(v));
        }
        let mut gens = Vec::with_capacity(self.maximal.len() * other.maximal.len());
        for a in &self.maximal {
            for b in &other.maximal {
                gens.push(a.union(b));
            }
        }
        Ok(Self::from_face_set(gens))
    }

    /// Join with the two-point complex on fresh labels `w1`, `w2`.
    pub fn suspension(&self, w1: VertexId, w2: VertexId) -> Result<Self, Error> {
        if w1 == w2 {
            return Err(Error::VertexClash(w1));
        }
        let poles = Self::from_facets([Face::singleton(w1), Face::singleton(w2)])?;
        self.join(&poles)
    }

    /// One-point suspension at the used vertex `w`: replaces w by the pair
    /// w1, w2, taking each facet F with w to (F - w) ∪ {w1, w2} and each
    /// facet without w to both F ∪ {w1} and F ∪ {w2}.
    pub fn one_point_suspension(
        &self,
        w: VertexId,
        w1: VertexId,
        w2: VertexId,
    ) -> Result<Self, Error> {
        if !self.used_vertices().contains(&w) {
            return Err(Error::NotAVertex(w));
        }
        if w1 == w2 {
            return Err(Error::VertexClash(w1));
        }
        for label in [w1, w2] {
            if self.used_vertices().contains(&label) {
                return Err(Error::VertexClash(label));
            }
        }
        let both = Face::new(vec![w1, w2]);
        let mut gens = Vec::new();
        for m in &self.maximal {
            if m.contains(&w) {
                gens.push(m.without(&w).union(&both));
            } else {
                gens.push(m.with(w1));
                gens.push(m.with(w2));
            }
        }
        Ok(Self::from_face_set(gens))
    }

    /// Renames vertices via `map` (identity off its domain). The map must not
    /// merge vertices.
    pub fn relabeled(&self, map: &BTreeMap<VertexId, VertexId>) -> Result<Self, Error> {
        let image = self.used_vertices().relabel(map);
        if image.len() != self.vertex_count() {
            return Err(Error::NotAPermutation);
        }
        Ok(Self::from_face_set(
            self.maximal.iter().map(|m| m.relabel(map)),
        ))
    }

    /// Glues `self` and `other` along the facets `f1` and `f2`, which are
    /// removed after identifying f2 with f1 via `glue` (a bijection from the
    /// vertices of f2 to the vertices of f1). Apart from the glued facet the
    /// vertex sets must be disjoint.
    pub fn connected_sum(
        &self,
        other: &Self,
        f1: &Face,
        f2: &Face,
        glue: &BTreeMap<VertexId, VertexId>,
    ) -> Result<Self, Error> {
        if self.top_size != other.top_size {
            return Err(Error::MixedDimension(self.top_size, other.top_size));
        }
        if !self.maximal.contains(f1) {
            return Err(Error::NotAFacet(f1.clone()));
        }
        if !other.maximal.contains(f2) {
            return Err(Error::NotAFacet(f2.clone()));
        }
        let domain: Face = glue.keys().copied().collect();
        let image: Face = glue.values().copied().collect();
        if &domain != f2 || &image != f1 || glue.len() != image.len() {
            return Err(Error::NonBijective(f2.clone(), f1.clone()));
        }
        let relabeled = other.relabeled(glue).map_err(|_| {
            Error::NonBijective(f2.clone(), f1.clone())
        })?;
        let overlap = self
            .used_vertices()
            .intersection(relabeled.used_vertices());
        if &overlap != f1 {
            let bad = overlap.minus(f1);
            return Err(Error::VertexClash(bad.iter().next().expect("clash vertex")));
        }
        let facets = self
            .maximal
            .iter()
            .filter(|m| *m != f1)
            .cloned()
            .chain(relabeled.maximal.iter().filter(|m| *m != f1).cloned());
        Self::from_facets(facets)
    }
}
