//! Topological prismatoids: pure complexes homeomorphic to a cylinder over a
//! sphere, with the two boundary spheres as induced bases.
//!
//! Width bookkeeping: a facet is incident to a base when it contains d-1 of
//! the base's vertices; such an intersection is a face of the induced base
//! complex of top dimension, hence a base boundary facet, so this test is
//! equivalent to containing a base facet. Every facet carries a label with
//! its dual-graph distance from the facets incident to the first base, plus
//! the number of shortest paths mod 2^64. Labels are repaired incrementally
//! after flips (invalidate unsupported labels, then rebuild in distance
//! order) and always agree with a fresh BFS.

use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

use crate::complex::SimplicialComplex;
use crate::error::Error;
use crate::flip::RidgeIndex;
use crate::vertex::{Face, FreshVertexSource, VertexId};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Width {
    Finite(u32),
    Infinite,
}

impl Width {
    pub fn as_finite(self) -> Option<u32> {
        match self {
            Width::Finite(w) => Some(w),
            Width::Infinite => None,
        }
    }
}

impl std::fmt::Display for Width {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Width::Finite(w) => write!(f, "{w}"),
            Width::Infinite => write!(f, "inf"),
        }
    }
}

/// Distance from the facets incident to the first base, with the number of
/// shortest dual paths modulo 2^64. `dist` is `None` when unreachable.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct WidthLabel {
    pub dist: Option<u32>,
    pub paths: u64,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn opposite(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone)]
pub struct Prismatoid {
    pub(crate) complex: SimplicialComplex,
    pub(crate) base_plus: Face,
    pub(crate) base_minus: Face,
    pub(crate) labels: BTreeMap<Face, WidthLabel>,
    pub(crate) ridge_index: RidgeIndex,
    pub(crate) fresh: FreshVertexSource,
    /// Labels minted by `fresh` (and only those) are recycled on deletion.
    pub(crate) generated: BTreeSet<VertexId>,
}

impl std::fmt::Debug for Prismatoid {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Prismatoid(d {}, {} vertices, {} facets, width {})",
            self.d(),
            self.vertex_count(),
            self.facet_count(),
            self.width()
        )
    }
}

impl Prismatoid {
    /// Checks the prismatoid conditions and assembles width labels and the
    /// ridge-neighborhood index.
    ///
    /// Conditions: pure, pseudomanifold with exactly two boundary components,
    /// both induced by the given bases, bases disjoint and jointly covering
    /// all vertices, connected dual graph, and the cylinder Euler
    /// characteristic 1 + (-1)^d. In dimension two vertex links are verified
    /// to be paths, which makes the cylinder test conclusive there; in higher
    /// dimensions these checks are a partial certificate.
    pub fn validate(
        complex: SimplicialComplex,
        base_plus: Face,
        base_minus: Face,
    ) -> Result<Self, Error> {
        let d = complex.top_size();
        if d < 3 {
            return Err(Error::UnsupportedDimension(d));
        }
        if !complex.is_pure() {
            return Err(Error::NotPure);
        }
        if let Some(v) = base_plus.iter().find(|v| base_minus.contains(v)) {
            return Err(Error::BasesOverlap(v));
        }
        for v in base_plus.iter().chain(base_minus.iter()) {
            if !complex.used_vertices().contains(&v) {
                return Err(Error::NotAVertex(v));
            }
        }
        let both = base_plus.union(&base_minus);
        if let Some(v) = complex.used_vertices().iter().find(|v| !both.contains(v)) {
            return Err(Error::VertexOutsideBases(v));
        }
        let comps = complex.boundary_components()?;
        if comps.len() != 2 {
            return Err(Error::WrongBoundaryCount(comps.len()));
        }
        let ind_plus = complex.induced(&base_plus);
        let ind_minus = complex.induced(&base_minus);
        let straight = ind_plus == comps[0] && ind_minus == comps[1];
        let swapped = ind_plus == comps[1] && ind_minus == comps[0];
        if !straight && !swapped {
            let bad = if ind_plus == comps[0] || ind_plus == comps[1] {
                base_minus.clone()
            } else {
                base_plus.clone()
            };
            return Err(Error::BaseNotInduced(bad));
        }
        if !complex.dual_connected()? {
            return Err(Error::DualDisconnected);
        }
        let expected = 1 + if d % 2 == 0 { 1 } else { -1 };
        let actual = complex.euler_characteristic();
        if actual != expected {
            return Err(Error::EulerMismatch { expected, actual });
        }
        if d == 3 {
            for v in complex.used_vertices().clone().iter() {
                let link = complex.link(&Face::singleton(v))?;
                if !is_path(&link) {
                    return Err(Error::BadVertexLink(v));
                }
            }
        }
        let mut p = Prismatoid {
            complex,
            base_plus,
            base_minus,
            labels: BTreeMap::new(),
            ridge_index: RidgeIndex::new(),
            fresh: FreshVertexSource::new(),
            generated: BTreeSet::new(),
        };
        p.labels = p.bfs_labels();
        for (_, neigh) in p.complex.ridges() {
            p.ridge_index.add(neigh.clone());
        }
        Ok(p)
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    /// Facet size (the `d` in (d-1)-prismatoid).
    pub fn d(&self) -> usize {
        self.complex.top_size()
    }

    pub fn base(&self, sign: Sign) -> &Face {
        match sign {
            Sign::Plus => &self.base_plus,
            Sign::Minus => &self.base_minus,
        }
    }

    /// The label the next insertion flip will mint.
    pub fn peek_fresh_label(&self) -> VertexId {
        self.fresh.peek(self.complex.used_vertices())
    }

    pub fn vertex_count(&self) -> usize {
        self.complex.vertex_count()
    }

    pub fn facet_count(&self) -> usize {
        self.complex.facet_count()
    }

    pub fn width_labels(&self) -> &BTreeMap<Face, WidthLabel> {
        &self.labels
    }

    pub fn ridge_index(&self) -> &RidgeIndex {
        &self.ridge_index
    }

    /// Which base the vertex belongs to.
    pub fn side_of(&self, v: &VertexId) -> Option<Sign> {
        if self.base_plus.contains(v) {
            Some(Sign::Plus)
        } else if self.base_minus.contains(v) {
            Some(Sign::Minus)
        } else {
            None
        }
    }

    pub fn is_incident(&self, facet: &Face, sign: Sign) -> bool {
        facet.intersection_size(self.base(sign)) == self.d() - 1
    }

    pub fn incident_facets(&self, sign: Sign) -> Vec<Face> {
        self.complex
            .facets()
            .iter()
            .filter(|f| self.is_incident(f, sign))
            .cloned()
            .collect()
    }

    /// Width: 2 plus the dual distance between the facets incident to the
    /// two bases, read off the maintained labels.
    pub fn width(&self) -> Width {
        let mut best = None;
        for f in self.complex.facets() {
            if self.is_incident(f, Sign::Minus) {
                if let Some(d) = self.labels[f].dist {
                    best = Some(best.map_or(d, |b: u32| b.min(d)));
                }
            }
        }
        match best {
            Some(d) => Width::Finite(d + 2),
            None => Width::Infinite,
        }
    }

    /// Width recomputed from scratch by dual BFS, independent of the labels.
    pub fn width_by_bfs(&self) -> Width {
        let from = self.incident_facets(Sign::Plus);
        let to = self.incident_facets(Sign::Minus);
        if from.is_empty() || to.is_empty() {
            return Width::Infinite;
        }
        match self.complex.dual_distance(&from, &to).expect("known facets") {
            Some(d) => Width::Finite(d + 2),
            None => Width::Infinite,
        }
    }

    /// Full label recomputation: multi-source BFS from the facets incident to
    /// the first base, counting shortest paths mod 2^64.
    pub fn bfs_labels(&self) -> BTreeMap<Face, WidthLabel> {
        let mut labels: BTreeMap<Face, WidthLabel> = self
            .complex
            .facets()
            .iter()
            .map(|f| (f.clone(), WidthLabel::default()))
            .collect();
        let mut queue = VecDeque::new();
        for f in self.complex.facets() {
            if self.is_incident(f, Sign::Plus) {
                labels.insert(f.clone(), WidthLabel { dist: Some(0), paths: 1 });
                queue.push_back(f.clone());
            }
        }
        while let Some(f) = queue.pop_front() {
            let here = labels[&f];
            let d = here.dist.expect("queued facets are labeled");
            for g in self.complex.dual_neighbors(&f).expect("valid facet") {
                let entry = labels.get_mut(&g).expect("neighbor is a facet");
                match entry.dist {
                    None => {
                        entry.dist = Some(d + 1);
                        entry.paths = here.paths;
                        queue.push_back(g);
                    }
                    Some(dg) if dg == d + 1 => {
                        entry.paths = entry.paths.wrapping_add(here.paths);
                    }
                    _ => {}
                }
            }
        }
        labels
    }

    /// Repairs labels after a local change to the facet set. `removed` have
    /// already left the complex, `inserted` are present; `touched` are
    /// surviving facets that were adjacent to a removed facet.
    pub(crate) fn repair_labels(
        &mut self,
        removed: &[Face],
        inserted: &[Face],
        touched: impl IntoIterator<Item = Face>,
    ) {
        for f in removed {
            self.labels.remove(f);
        }
        let mut dirty: BTreeSet<Face> = BTreeSet::new();
        for f in inserted {
            self.labels.insert(f.clone(), WidthLabel::default());
            dirty.insert(f.clone());
        }
        for f in touched {
            if self.labels.contains_key(&f) {
                dirty.insert(f);
            }
        }

        // Phase 1: strip labels that lost their shortest-path support.
        let mut worklist: VecDeque<Face> = dirty.iter().cloned().collect();
        while let Some(f) = worklist.pop_front() {
            if !self.labels.contains_key(&f) || self.is_incident(&f, Sign::Plus) {
                continue;
            }
            let Some(df) = self.labels[&f].dist else { continue };
            let neighbors = self.complex.dual_neighbors(&f).expect("valid facet");
            let supported = neighbors
                .iter()
                .any(|g| self.labels[g].dist == Some(df - 1));
            if !supported {
                self.labels.insert(f.clone(), WidthLabel::default());
                dirty.insert(f.clone());
                for g in neighbors {
                    if self.labels[&g].dist == Some(df + 1) {
                        dirty.insert(g.clone());
                        worklist.push_back(g);
                    }
                }
            }
        }

        // Phase 2: settle dirty facets in distance order, cascading changes.
        let mut heap: BinaryHeap<std::cmp::Reverse<(u32, Face)>> = BinaryHeap::new();
        for f in &dirty {
            if let Some(cand) = self.candidate_label(f) {
                heap.push(std::cmp::Reverse((cand.dist.unwrap(), f.clone())));
            }
        }
        while let Some(std::cmp::Reverse((_, f))) = heap.pop() {
            let Some(cand) = self.candidate_label(&f) else { continue };
            if self.labels[&f] == cand {
                continue;
            }
            let d = cand.dist.unwrap();
            self.labels.insert(f.clone(), cand);
            for g in self.complex.dual_neighbors(&f).expect("valid facet") {
                if !self.is_incident(&g, Sign::Plus) {
                    heap.push(std::cmp::Reverse((d + 1, g)));
                }
            }
        }
    }

    fn candidate_label(&self, f: &Face) -> Option<WidthLabel> {
        if self.is_incident(f, Sign::Plus) {
            return Some(WidthLabel { dist: Some(0), paths: 1 });
        }
        let mut best: Option<u32> = None;
        let mut paths: u64 = 0;
        for g in self.complex.dual_neighbors(f).expect("valid facet") {
            let lbl = self.labels[&g];
            if let Some(dg) = lbl.dist {
                match best {
                    None => {
                        best = Some(dg);
                        paths = lbl.paths;
                    }
                    Some(b) if dg < b => {
                        best = Some(dg);
                        paths = lbl.paths;
                    }
                    Some(b) if dg == b => {
                        paths = paths.wrapping_add(lbl.paths);
                    }
                    _ => {}
                }
            }
        }
        best.map(|b| WidthLabel { dist: Some(b + 1), paths })
    }

    /// Public repair entry point: marks `changed` facets and their current
    /// dual neighbors dirty and re-settles them. With an empty change set the
    /// labels are untouched.
    pub fn update_width_labels(&mut self, changed: &[Face]) {
        let mut touched = BTreeSet::new();
        for f in changed {
            if self.complex.facets().contains(f) {
                touched.insert(f.clone());
                for g in self.complex.dual_neighbors(f).expect("valid facet") {
                    touched.insert(g);
                }
            }
        }
        self.repair_labels(&[], &[], touched);
    }

    /// Layer counts: facets grouped by |F ∩ base_plus| from d-1 down to 1.
    pub fn layer_vector(&self) -> Vec<usize> {
        let d = self.d();
        let mut counts = vec![0usize; d - 1];
        for f in self.complex.facets() {
            let k = f.intersection_size(&self.base_plus);
            debug_assert!((1..d).contains(&k), "facet meets a base fully");
            counts[d - 1 - k] += 1;
        }
        counts
    }

    /// Width excess (width - d) / (n - d) as a reduced fraction.
    pub fn excess(&self) -> Option<(i64, i64)> {
        let w = self.width().as_finite()? as i64;
        let d = self.d() as i64;
        let n = self.vertex_count() as i64;
        let (mut num, mut den) = (w - d, n - d);
        let g = gcd(num.unsigned_abs(), den.unsigned_abs()).max(1) as i64;
        num /= g;
        den /= g;
        Some((num, den))
    }

    pub fn incidence_pattern(&self) -> IncidencePattern {
        let mut arcs: BTreeSet<(VertexId, VertexId)> = BTreeSet::new();
        for f in self.complex.facets() {
            let plus = f.intersection(&self.base_plus);
            let minus = f.intersection(&self.base_minus);
            if self.is_incident(f, Sign::Plus) {
                for v in plus.iter() {
                    for w in minus.iter() {
                        arcs.insert((v, w));
                    }
                }
            }
            if self.is_incident(f, Sign::Minus) {
                for v in plus.iter() {
                    for w in minus.iter() {
                        arcs.insert((w, v));
                    }
                }
            }
        }
        let mut has_in: BTreeSet<VertexId> = BTreeSet::new();
        for (_, to) in &arcs {
            has_in.insert(*to);
        }
        let reduced_plus: Face = self
            .base_plus
            .iter()
            .filter(|v| has_in.contains(v))
            .collect();
        let reduced_minus: Face = self
            .base_minus
            .iter()
            .filter(|v| has_in.contains(v))
            .collect();
        let keep = reduced_plus.union(&reduced_minus);
        let reduced_arcs: BTreeSet<(VertexId, VertexId)> = arcs
            .iter()
            .filter(|(a, b)| keep.contains(a) && keep.contains(b))
            .cloned()
            .collect();
        let mut two_cycles = Vec::new();
        for (a, b) in &reduced_arcs {
            if a < b && reduced_arcs.contains(&(*b, *a)) {
                two_cycles.push((*a, *b));
            }
        }
        IncidencePattern {
            nodes_plus: self.base_plus.clone(),
            nodes_minus: self.base_minus.clone(),
            arcs,
            reduced_plus,
            reduced_minus,
            reduced_arcs,
            two_cycles,
        }
    }

    /// Non-d-step certificate. The incidence-pattern route (no two-cycles in
    /// the reduced pattern) is preferred; the measured width is always
    /// attached and is the ground truth.
    pub fn certify_non_dstep(&self) -> Certificate {
        let pattern = self.incidence_pattern();
        let width = self.width();
        let d = self.d() as u32;
        let exceeds = match width {
            Width::Finite(w) => w > d,
            Width::Infinite => true,
        };
        let kind = if pattern.two_cycles.is_empty() {
            CertificateKind::PatternAcyclic
        } else if exceeds {
            CertificateKind::WidthExceeds
        } else {
            CertificateKind::DStep
        };
        Certificate {
            width,
            d: self.d(),
            non_dstep: exceeds || pattern.two_cycles.is_empty(),
            kind,
            pattern,
        }
    }

    /// Structural equality ignoring fresh-label bookkeeping.
    pub fn structurally_eq(&self, other: &Self) -> bool {
        self.base_plus == other.base_plus
            && self.base_minus == other.base_minus
            && self.complex == other.complex
            && self.labels == other.labels
    }

    /// Rebuilds everything from the facet list and compares. Test support.
    pub fn consistency_check(&self) -> Result<(), String> {
        let rebuilt = SimplicialComplex::from_facets(self.complex.facets().iter().cloned())
            .map_err(|e| e.to_string())?;
        if &rebuilt != &self.complex {
            return Err("face table differs from rebuild".into());
        }
        if self.labels != self.bfs_labels() {
            return Err("width labels differ from BFS".into());
        }
        let mut index = RidgeIndex::new();
        for (_, neigh) in self.complex.ridges() {
            index.add(neigh.clone());
        }
        if &index != &self.ridge_index {
            return Err("ridge-neighborhood index differs from rebuild".into());
        }
        let revalidated = Prismatoid::validate(
            self.complex.clone(),
            self.base_plus.clone(),
            self.base_minus.clone(),
        )
        .map_err(|e| format!("revalidation failed: {e}"))?;
        if !revalidated.structurally_eq(self) {
            return Err("revalidated prismatoid differs".into());
        }
        Ok(())
    }

    pub fn check_shelling(
        &self,
        order: &[Face],
        direction: ShellDirection,
    ) -> Result<ShellingReport, Error> {
        let facets = self.complex.facets();
        if order.len() != facets.len()
            || order.iter().collect::<BTreeSet<_>>().len() != order.len()
            || order.iter().any(|f| !facets.contains(f))
        {
            return Err(Error::NotAPermutation);
        }
        let base = match direction {
            ShellDirection::FromPlus => self.base_plus.clone(),
            ShellDirection::FromMinus => self.base_minus.clone(),
        };
        let d = self.d();
        let mut seen: BTreeSet<Face> = BTreeSet::new();
        let mut ridge_counts = Vec::with_capacity(order.len());
        let mut failing_step = None;
        for (i, f) in order.iter().enumerate() {
            let count = shelling_step_ridges(f, &base, &seen, d);
            match count {
                Some(c) => ridge_counts.push(c),
                None => {
                    failing_step = Some(i);
                    break;
                }
            }
            for s in f.subsets() {
                seen.insert(s);
            }
        }
        Ok(ShellingReport {
            direction,
            ok: failing_step.is_none(),
            failing_step,
            ridge_counts,
        })
    }

    /// Backtracking search for a shelling that works through the layers
    /// monotonically (all layer-k facets before any layer-(k+1) facet, layers
    /// counted from the start base). Tries both directions.
    pub fn find_layer_monotone_shelling(
        &self,
        node_budget: usize,
    ) -> Option<(Vec<Face>, ShellDirection)> {
        for direction in [ShellDirection::FromPlus, ShellDirection::FromMinus] {
            let base = match direction {
                ShellDirection::FromPlus => &self.base_plus,
                ShellDirection::FromMinus => &self.base_minus,
            };
            let d = self.d();
            let mut layers: Vec<Vec<Face>> = vec![Vec::new(); d - 1];
            for f in self.complex.facets() {
                let k = f.intersection_size(base);
                layers[d - 1 - k].push(f.clone());
            }
            let mut order = Vec::with_capacity(self.facet_count());
            let mut seen: BTreeSet<Face> = BTreeSet::new();
            let mut budget = node_budget;
            if search_shelling(&layers, 0, base, d, &mut seen, &mut order, &mut budget) {
                debug_assert!(self
                    .check_shelling(&order, direction)
                    .map(|r| r.ok)
                    .unwrap_or(false));
                return Some((order, direction));
            }
        }
        None
    }
}

/// Number of maximal faces of the intersection of `f` with the union of the
/// start base and the already-shelled part, provided that intersection is
/// pure of size d-1 with between 1 and d-1 maximal faces; `None` otherwise.
fn shelling_step_ridges(f: &Face, base: &Face, seen: &BTreeSet<Face>, d: usize) -> Option<usize> {
    let subs = f.subsets();
    let qualifying: Vec<&Face> = subs
        .iter()
        .filter(|g| g.is_subset_of(base) || seen.contains(*g))
        .collect();
    let mut maximal = Vec::new();
    'outer: for g in &qualifying {
        for h in &qualifying {
            if g.len() < h.len() && g.is_subset_of(h) {
                continue 'outer;
            }
        }
        maximal.push(*g);
    }
    if maximal.is_empty() || maximal.len() >= d {
        return None;
    }
    if maximal.iter().any(|g| g.len() != d - 1) {
        return None;
    }
    Some(maximal.len())
}

fn search_shelling(
    layers: &[Vec<Face>],
    layer: usize,
    base: &Face,
    d: usize,
    seen: &mut BTreeSet<Face>,
    order: &mut Vec<Face>,
    budget: &mut usize,
) -> bool {
    if layer == layers.len() {
        return true;
    }
    let remaining: Vec<&Face> = layers[layer].iter().filter(|f| !seen.contains(*f)).collect();
    if remaining.is_empty() {
        return search_shelling(layers, layer + 1, base, d, seen, order, budget);
    }
    for f in remaining {
        if *budget == 0 {
            return false;
        }
        *budget -= 1;
        if shelling_step_ridges(f, base, seen, d).is_none() {
            continue;
        }
        let mut added = Vec::new();
        for s in f.subsets() {
            if seen.insert(s.clone()) {
                added.push(s);
            }
        }
        order.push(f.clone());
        if search_shelling(layers, layer, base, d, seen, order, budget) {
            return true;
        }
        order.pop();
        for s in added {
            seen.remove(&s);
        }
    }
    false
}

fn is_path(link: &SimplicialComplex) -> bool {
    if link.top_size() != 2 || !link.is_pure() {
        return false;
    }
    let mut degree: BTreeMap<VertexId, usize> = BTreeMap::new();
    for e in link.facets() {
        for v in e.iter() {
            *degree.entry(v).or_default() += 1;
        }
    }
    let ends = degree.values().filter(|&&d| d == 1).count();
    if ends != 2 || degree.values().any(|&d| d > 2) {
        return false;
    }
    link.dual_connected().unwrap_or(false)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum ShellDirection {
    FromPlus,
    FromMinus,
}

impl std::fmt::Display for ShellDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ShellDirection::FromPlus => f.write_str("plus"),
            ShellDirection::FromMinus => f.write_str("minus"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct ShellingReport {
    pub direction: ShellDirection,
    pub ok: bool,
    pub failing_step: Option<usize>,
    pub ridge_counts: Vec<usize>,
}

/// Directed bipartite incidence structure between base vertices: an arc
/// v -> w for v in base-plus, w in base-minus whenever some facet incident to
/// base-plus contains both, and w -> v via facets incident to base-minus.
/// The reduced pattern drops source nodes (no incoming arcs).
#[derive(Clone, Debug)]
pub struct IncidencePattern {
    pub nodes_plus: Face,
    pub nodes_minus: Face,
    pub arcs: BTreeSet<(VertexId, VertexId)>,
    pub reduced_plus: Face,
    pub reduced_minus: Face,
    pub reduced_arcs: BTreeSet<(VertexId, VertexId)>,
    pub two_cycles: Vec<(VertexId, VertexId)>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum CertificateKind {
    /// Reduced pattern has no two-cycles, which forces width > d.
    PatternAcyclic,
    /// Measured width exceeds d.
    WidthExceeds,
    /// Width equals d (or less): the prismatoid satisfies the d-step bound.
    DStep,
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub width: Width,
    pub d: usize,
    pub non_dstep: bool,
    pub kind: CertificateKind,
    pub pattern: IncidencePattern,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ann6, ann6_prismatoid, tetra_boundary};
    use crate::vertex::{fc, vx};

    #[test]
    fn ann6_validates_with_expected_labels() {
        let p = ann6_prismatoid();
        assert_eq!(p.d(), 3);
        assert_eq!(p.width(), Width::Finite(3));
        assert_eq!(p.width_by_bfs(), Width::Finite(3));
        let l = p.width_labels();
        for f in ["12a", "23b", "13c"] {
            assert_eq!(l[&fc(f)], WidthLabel { dist: Some(0), paths: 1 });
        }
        for f in ["2ab", "3bc", "1ac"] {
            assert_eq!(l[&fc(f)], WidthLabel { dist: Some(1), paths: 2 });
        }
    }

    #[test]
    fn validation_rejections() {
        let c = ann6();
        assert!(matches!(
            Prismatoid::validate(c.clone(), fc("123a"), fc("abc")),
            Err(Error::BasesOverlap(_))
        ));
        assert!(matches!(
            Prismatoid::validate(c.clone(), fc("12"), fc("abc")),
            Err(Error::VertexOutsideBases(_))
        ));
        assert!(matches!(
            Prismatoid::validate(c.clone(), fc("12x"), fc("abc")),
            Err(Error::NotAVertex(_))
        ));
        assert!(matches!(
            Prismatoid::validate(c.clone(), fc("12b"), fc("3ac")),
            Err(Error::BaseNotInduced(_))
        ));
        assert!(matches!(
            Prismatoid::validate(tetra_boundary(), fc("12"), fc("34")),
            Err(Error::WrongBoundaryCount(0))
        ));
    }

    #[test]
    fn swapped_bases_still_validate() {
        let p = Prismatoid::validate(ann6(), fc("abc"), fc("123")).unwrap();
        assert_eq!(p.base(Sign::Plus), &fc("abc"));
        assert_eq!(p.width(), Width::Finite(3));
    }

    #[test]
    fn incidence_sets() {
        let p = ann6_prismatoid();
        assert_eq!(
            p.incident_facets(Sign::Plus),
            vec![fc("12a"), fc("13c"), fc("23b")]
        );
        assert_eq!(
            p.incident_facets(Sign::Minus),
            vec![fc("1ac"), fc("2ab"), fc("3bc")]
        );
    }

    #[test]
    fn layers_and_excess() {
        let p = ann6_prismatoid();
        assert_eq!(p.layer_vector(), vec![3, 3]);
        assert_eq!(p.excess(), Some((0, 1)));
    }

    #[test]
    fn ann6_pattern_is_full_with_two_cycles() {
        let p = ann6_prismatoid();
        let pat = p.incidence_pattern();
        assert_eq!(pat.arcs.len(), 12);
        assert_eq!(pat.reduced_plus, fc("123"));
        assert_eq!(pat.reduced_minus, fc("abc"));
        assert_eq!(pat.reduced_arcs.len(), 12);
        let cycles: Vec<(String, String)> = pat
            .two_cycles
            .iter()
            .map(|(a, b)| (a.as_str().to_string(), b.as_str().to_string()))
            .collect();
        assert_eq!(
            cycles,
            [
                ("1", "a"),
                ("1", "c"),
                ("2", "a"),
                ("2", "b"),
                ("3", "b"),
                ("3", "c")
            ]
            .map(|(a, b)| (a.to_string(), b.to_string()))
        );
    }

    #[test]
    fn ann6_certifies_dstep() {
        let cert = ann6_prismatoid().certify_non_dstep();
        assert!(!cert.non_dstep);
        assert_eq!(cert.kind, CertificateKind::DStep);
        assert_eq!(cert.width, Width::Finite(3));
    }

    #[test]
    fn shelling_checker_on_the_hand_order() {
        let p = ann6_prismatoid();
        let order: Vec<Face> = ["12a", "2ab", "23b", "3bc", "13c", "1ac"]
            .iter()
            .map(|s| fc(s))
            .collect();
        let report = p.check_shelling(&order, ShellDirection::FromPlus).unwrap();
        assert!(report.ok);
        assert_eq!(report.ridge_counts, vec![1, 1, 2, 1, 2, 2]);
        let bad: Vec<Face> = ["12a", "3bc", "2ab", "23b", "13c", "1ac"]
            .iter()
            .map(|s| fc(s))
            .collect();
        let report = p.check_shelling(&bad, ShellDirection::FromPlus).unwrap();
        assert!(!report.ok);
        assert_eq!(report.failing_step, Some(1));
        assert!(matches!(
            p.check_shelling(&order[..4], ShellDirection::FromPlus),
            Err(Error::NotAPermutation)
        ));
    }

    #[test]
    fn shelling_search_finds_an_order() {
        let p = ann6_prismatoid();
        let (order, direction) = p.find_layer_monotone_shelling(10_000).unwrap();
        assert_eq!(order.len(), 6);
        let report = p.check_shelling(&order, direction).unwrap();
        assert!(report.ok);
    }

    #[test]
    fn update_width_labels_is_a_noop_without_changes() {
        let mut p = ann6_prismatoid();
        let before = p.width_labels().clone();
        p.update_width_labels(&[]);
        assert_eq!(p.width_labels(), &before);
        let all: Vec<Face> = p.complex().facets().iter().cloned().collect();
        p.update_width_labels(&all);
        assert_eq!(p.width_labels(), &before);
    }

    #[test]
    fn consistency_check_passes_on_fresh_prismatoid() {
        ann6_prismatoid().consistency_check().unwrap();
    }
}
