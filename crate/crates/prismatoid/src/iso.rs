//! Combinatorial isomorphism of complexes, prismatoids, and reduced
//! incidence patterns.
//!
//! Vertices are first partitioned by iterated refinement of local invariants
//! (facet count, then multisets of pair-cofacet counts against the current
//! classes); backtracking then only matches vertices inside a class, and
//! every facet is checked the moment its image is fully decided.

use std::collections::{BTreeMap, BTreeSet};

use crate::complex::SimplicialComplex;
use crate::prism::{IncidencePattern, Prismatoid, Sign};
use crate::vertex::VertexId;

struct Side {
    verts: Vec<VertexId>,
    color: Vec<u64>,
    pair: Vec<Vec<u32>>,
    facets: Vec<Vec<usize>>,
    vertex_facets: Vec<Vec<usize>>,
}

fn build_side(c: &SimplicialComplex, classes: &BTreeMap<VertexId, u64>) -> Side {
    let verts: Vec<VertexId> = c.used_vertices().iter().collect();
    let index: BTreeMap<VertexId, usize> =
        verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let n = verts.len();
    let mut pair = vec![vec![0u32; n]; n];
    let mut facets = Vec::new();
    let mut vertex_facets = vec![Vec::new(); n];
    for (fi, f) in c.facets().iter().enumerate() {
        let idxs: Vec<usize> = f.iter().map(|v| index[&v]).collect();
        for (a, &i) in idxs.iter().enumerate() {
            vertex_facets[i].push(fi);
            for &j in &idxs[a + 1..] {
                pair[i][j] += 1;
                pair[j][i] += 1;
            }
        }
        facets.push(idxs);
    }
    let color = verts
        .iter()
        .enumerate()
        .map(|(i, v)| {
            let class = classes.get(v).copied().unwrap_or(0);
            class * 1_000_003 + vertex_facets[i].len() as u64
        })
        .collect();
    Side {
        verts,
        color,
        pair,
        facets,
        vertex_facets,
    }
}

/// One joint refinement round over both sides, so equal colors mean equal
/// invariants across the two complexes. Returns the number of colors.
fn refine(a: &mut Side, b: &mut Side) -> usize {
    loop {
        let mut keys: Vec<(Vec<(u32, u64)>, u64)> = Vec::new();
        let key_of = |side: &Side, i: usize| -> (Vec<(u32, u64)>, u64) {
            let mut profile: Vec<(u32, u64)> = (0..side.verts.len())
                .filter(|&j| j != i && side.pair[i][j] > 0)
                .map(|j| (side.pair[i][j], side.color[j]))
                .collect();
            profile.sort_unstable();
            (profile, side.color[i])
        };
        let ka: Vec<_> = (0..a.verts.len()).map(|i| key_of(a, i)).collect();
        let kb: Vec<_> = (0..b.verts.len()).map(|i| key_of(b, i)).collect();
        keys.extend(ka.iter().cloned());
        keys.extend(kb.iter().cloned());
        keys.sort_unstable();
        keys.dedup();
        let id = |k: &(Vec<(u32, u64)>, u64)| keys.binary_search(k).unwrap() as u64;
        let new_a: Vec<u64> = ka.iter().map(&id).collect();
        let new_b: Vec<u64> = kb.iter().map(&id).collect();
        let stable = {
            let count = |colors: &[u64]| {
                let mut m = BTreeMap::new();
                for &c in colors {
                    *m.entry(c).or_insert(0usize) += 1;
                }
                m.len()
            };
            count(&new_a) == count(&a.color) && count(&new_b) == count(&b.color)
        };
        a.color = new_a;
        b.color = new_b;
        if stable {
            return keys.len();
        }
    }
}

fn color_histogram(side: &Side) -> BTreeMap<u64, usize> {
    let mut m = BTreeMap::new();
    for &c in &side.color {
        *m.entry(c).or_insert(0) += 1;
    }
    m
}

struct Search<'s> {
    a: &'s Side,
    b: &'s Side,
    map: Vec<Option<usize>>,
    used: Vec<bool>,
    remaining: Vec<usize>,
    b_facets: BTreeSet<Vec<usize>>,
    order: Vec<usize>,
}

impl Search<'_> {
    fn run(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let vi = self.order[depth];
        for ui in 0..self.b.verts.len() {
            if self.used[ui] || self.b.color[ui] != self.a.color[vi] {
                continue;
            }
            if !(0..self.a.verts.len()).all(|wi| match self.map[wi] {
                Some(xi) => self.a.pair[vi][wi] == self.b.pair[ui][xi],
                None => true,
            }) {
                continue;
            }
            self.map[vi] = Some(ui);
            self.used[ui] = true;
            let mut completed_ok = true;
            let mut touched = Vec::new();
            for &fi in &self.a.vertex_facets[vi] {
                self.remaining[fi] -= 1;
                touched.push(fi);
                if self.remaining[fi] == 0 {
                    let mut image: Vec<usize> = self.a.facets[fi]
                        .iter()
                        .map(|&wi| self.map[wi].expect("completed facet"))
                        .collect();
                    image.sort_unstable();
                    if !self.b_facets.contains(&image) {
                        completed_ok = false;
                        break;
                    }
                }
            }
            if completed_ok && self.run(depth + 1) {
                return true;
            }
            for fi in touched {
                self.remaining[fi] += 1;
            }
            self.map[vi] = None;
            self.used[ui] = false;
        }
        false
    }
}

fn isomorphism_with_classes(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
    classes_a: &BTreeMap<VertexId, u64>,
    classes_b: &BTreeMap<VertexId, u64>,
) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.vertex_count() != b.vertex_count()
        || a.facet_count() != b.facet_count()
        || a.f_vector() != b.f_vector()
    {
        return None;
    }
    let mut sa = build_side(a, classes_a);
    let mut sb = build_side(b, classes_b);
    refine(&mut sa, &mut sb);
    let hist_a = color_histogram(&sa);
    if hist_a != color_histogram(&sb) {
        return None;
    }
    // match the most constrained classes first
    let mut order: Vec<usize> = (0..sa.verts.len()).collect();
    order.sort_by_key(|&i| (hist_a[&sa.color[i]], sa.color[i], i));
    let b_facets: BTreeSet<Vec<usize>> = sb
        .facets
        .iter()
        .map(|f| {
            let mut f = f.clone();
            f.sort_unstable();
            f
        })
        .collect();
    let remaining: Vec<usize> = sa.facets.iter().map(|f| f.len()).collect();
    let mut search = Search {
        a: &sa,
        b: &sb,
        map: vec![None; sa.verts.len()],
        used: vec![false; sb.verts.len()],
        remaining,
        b_facets,
        order,
    };
    if !search.run(0) {
        return None;
    }
    let map: BTreeMap<VertexId, VertexId> = search
        .map
        .iter()
        .enumerate()
        .map(|(i, ui)| (sa.verts[i], sb.verts[ui.expect("complete map")]))
        .collect();
    debug_assert_eq!(&a.relabeled(&map).expect("bijection"), b);
    Some(map)
}

pub fn find_isomorphism(
    a: &SimplicialComplex,
    b: &SimplicialComplex,
) -> Option<BTreeMap<VertexId, VertexId>> {
    isomorphism_with_classes(a, b, &BTreeMap::new(), &BTreeMap::new())
}

pub fn are_isomorphic(a: &SimplicialComplex, b: &SimplicialComplex) -> bool {
    find_isomorphism(a, b).is_some()
}

/// With `respect_bases`, the map must send bases to bases; exchanging the two
/// bases counts, mirroring the symmetry of the prismatoid structure.
pub fn find_prismatoid_isomorphism(
    a: &Prismatoid,
    b: &Prismatoid,
    respect_bases: bool,
) -> Option<BTreeMap<VertexId, VertexId>> {
    if !respect_bases {
        return find_isomorphism(a.complex(), b.complex());
    }
    let side_classes = |p: &Prismatoid, swap: bool| -> BTreeMap<VertexId, u64> {
        let mut m = BTreeMap::new();
        for v in p.base(Sign::Plus).iter() {
            m.insert(v, if swap { 2 } else { 1 });
        }
        for v in p.base(Sign::Minus).iter() {
            m.insert(v, if swap { 1 } else { 2 });
        }
        m
    };
    let ca = side_classes(a, false);
    for swap in [false, true] {
        let cb = side_classes(b, swap);
        if let Some(map) = isomorphism_with_classes(a.complex(), b.complex(), &ca, &cb) {
            return Some(map);
        }
    }
    None
}

/// A directed graph on two vertex classes, as produced by reducing an
/// incidence pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DirectedPattern {
    pub class_a: Vec<String>,
    pub class_b: Vec<String>,
    pub arcs: BTreeSet<(String, String)>,
}

impl DirectedPattern {
    pub fn from_lists(class_a: &[&str], class_b: &[&str], arcs: &[(&str, &str)]) -> Self {
        DirectedPattern {
            class_a: class_a.iter().map(|s| s.to_string()).collect(),
            class_b: class_b.iter().map(|s| s.to_string()).collect(),
            arcs: arcs
                .iter()
                .map(|(x, y)| (x.to_string(), y.to_string()))
                .collect(),
        }
    }

    pub fn from_incidence(p: &IncidencePattern) -> Self {
        DirectedPattern {
            class_a: p.reduced_plus.iter().map(|v| v.as_str().to_string()).collect(),
            class_b: p.reduced_minus.iter().map(|v| v.as_str().to_string()).collect(),
            arcs: p
                .reduced_arcs
                .iter()
                .map(|(x, y)| (x.as_str().to_string(), y.as_str().to_string()))
                .collect(),
        }
    }
}

fn digraph_match(
    nodes_a: &[String],
    nodes_b: &[String],
    arcs_a: &BTreeSet<(String, String)>,
    arcs_b: &BTreeSet<(String, String)>,
    split_a: usize,
    split_b: usize,
) -> bool {
    let n = nodes_a.len();
    if n != nodes_b.len() || arcs_a.len() != arcs_b.len() || split_a != split_b {
        return false;
    }
    let idx_a: BTreeMap<&str, usize> =
        nodes_a.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let idx_b: BTreeMap<&str, usize> =
        nodes_b.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();
    let matrix = |arcs: &BTreeSet<(String, String)>, idx: &BTreeMap<&str, usize>| {
        let mut m = vec![vec![false; n]; n];
        for (x, y) in arcs {
            m[idx[x.as_str()]][idx[y.as_str()]] = true;
        }
        m
    };
    let ma = matrix(arcs_a, &idx_a);
    let mb = matrix(arcs_b, &idx_b);
    let degrees = |m: &Vec<Vec<bool>>, i: usize| {
        let out = m[i].iter().filter(|&&x| x).count();
        let inn = (0..n).filter(|&j| m[j][i]).count();
        (out, inn)
    };
    fn place(
        i: usize,
        n: usize,
        split: usize,
        ma: &Vec<Vec<bool>>,
        mb: &Vec<Vec<bool>>,
        map: &mut Vec<Option<usize>>,
        used: &mut Vec<bool>,
        degrees: &dyn Fn(&Vec<Vec<bool>>, usize) -> (usize, usize),
    ) -> bool {
        if i == n {
            return true;
        }
        let same_class = |x: usize, y: usize| (x < split) == (y < split);
        for j in 0..n {
            if used[j] || !same_class(i, j) || degrees(ma, i) != degrees(mb, j) {
                continue;
            }
            if !(0..n).all(|k| match map[k] {
                Some(l) => ma[i][k] == mb[j][l] && ma[k][i] == mb[l][j],
                None => true,
            }) {
                continue;
            }
            map[i] = Some(j);
            used[j] = true;
            if place(i + 1, n, split, ma, mb, map, used, degrees) {
                return true;
            }
            map[i] = None;
            used[j] = false;
        }
        false
    }
    let mut map = vec![None; n];
    let mut used = vec![false; n];
    place(0, n, split_a, &ma, &mb, &mut map, &mut used, &|m, i| {
        degrees(m, i)
    })
}

/// Class-respecting digraph isomorphism; with `allow_class_swap` the two
/// classes of `b` may also be exchanged.
pub fn patterns_isomorphic(a: &DirectedPattern, b: &DirectedPattern, allow_class_swap: bool) -> bool {
    let join = |p: &DirectedPattern, swapped: bool| -> (Vec<String>, usize) {
        let (first, second) = if swapped {
            (&p.class_b, &p.class_a)
        } else {
            (&p.class_a, &p.class_b)
        };
        let mut nodes = first.clone();
        nodes.extend(second.iter().cloned());
        (nodes, first.len())
    };
    let (na, sa) = join(a, false);
    let (nb, sb) = join(b, false);
    if digraph_match(&na, &nb, &a.arcs, &b.arcs, sa, sb) {
        return true;
    }
    if allow_class_swap {
        let (nb, sb) = join(b, true);
        if digraph_match(&na, &nb, &a.arcs, &b.arcs, sa, sb) {
            return true;
        }
    }
    false
}
