//! Vertex labels and vertex sets.
//!
//! A vertex is a short printable token ("3", "f", "_x12"). Faces and all other
//! vertex sets are sorted duplicate-free sequences of tokens, so set equality
//! is structural equality and iteration order is the lexicographic order on
//! tokens.

use std::fmt;

use smallvec::SmallVec;

use crate::error::Error;

/// Maximum token length in bytes.
pub const MAX_TOKEN_LEN: usize = 11;

/// A vertex label: an inline string of 1 to 11 printable ASCII bytes.
///
/// Tokens may not contain whitespace, `#` (comment marker) or `,` (list
/// separator in trace files), and the bare token `-` is reserved for "no
/// vertex" in trace files. Ordering is lexicographic on the token text.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct VertexId {
    len: u8,
    buf: [u8; MAX_TOKEN_LEN],
}

impl VertexId {
    pub fn new(token: &str) -> Result<Self, Error> {
        let bytes = token.as_bytes();
        if bytes.is_empty() || bytes.len() > MAX_TOKEN_LEN || token == "-" {
            return Err(Error::BadToken(token.to_string()));
        }
        if bytes
            .iter()
            .any(|&b| !(0x21..=0x7e).contains(&b) || b == b'#' || b == b',')
        {
            return Err(Error::BadToken(token.to_string()));
        }
        let mut buf = [0u8; MAX_TOKEN_LEN];
        buf[..bytes.len()].copy_from_slice(bytes);
        Ok(VertexId {
            len: bytes.len() as u8,
            buf,
        })
    }

    pub fn as_str(&self) -> &str {
        std::str::from_utf8(&self.buf[..self.len as usize]).expect("tokens are ASCII")
    }
}

impl Ord for VertexId {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Tokens contain no NUL bytes and `buf` is zero-padded, so the padded
        // buffers order exactly like the token strings.
        self.buf.cmp(&other.buf)
    }
}

impl PartialOrd for VertexId {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v\"{}\"", self.as_str())
    }
}

impl std::str::FromStr for VertexId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        VertexId::new(s)
    }
}

/// Inline capacity for vertex sets; larger sets spill to the heap. Ten covers
/// every face and ridge neighborhood up to dimension nine.
const INLINE_VERTS: usize = 10;

type Verts = SmallVec<[VertexId; INLINE_VERTS]>;

/// A set of vertices stored as a sorted duplicate-free sequence.
///
/// Used both for faces of a complex and for arbitrary vertex sets
/// (neighborhoods, bases, flip supports). The empty set is the empty face.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Face(Verts);

impl Face {
    pub fn empty() -> Self {
        Face(Verts::new())
    }

    pub fn new(vertices: Vec<VertexId>) -> Self {
        Face::from_vertices(&vertices)
    }

    /// Builds a face from an unsorted, possibly repetitive vertex list.
    pub fn from_vertices(vertices: &[VertexId]) -> Self {
        let mut vs = Verts::from_slice(vertices);
        vs.sort_unstable();
        vs.dedup();
        Face(vs)
    }

    pub fn singleton(v: VertexId) -> Self {
        Face(smallvec::smallvec![v])
    }

    /// Parses a whitespace-separated token list, e.g. `"0 2 5 6 g"`.
    pub fn parse(text: &str) -> Result<Self, Error> {
        let mut vs = Vec::new();
        for tok in text.split_whitespace() {
            vs.push(VertexId::new(tok)?);
        }
        Ok(Face::new(vs))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.0.binary_search(v).is_ok()
    }

    pub fn is_subset_of(&self, other: &Face) -> bool {
        if self.0.len() > other.0.len() {
            return false;
        }
        self.0.iter().all(|v| other.contains(v))
    }

    pub fn iter(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[VertexId] {
        &self.0
    }

    pub fn union(&self, other: &Face) -> Face {
        let mut out = Verts::new();
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => {
                    out.push(self.0[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(other.0[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(self.0[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Face(out)
    }

    pub fn intersection(&self, other: &Face) -> Face {
        Face(self.0.iter().filter(|v| other.contains(v)).copied().collect())
    }

    pub fn intersection_size(&self, other: &Face) -> usize {
        self.0.iter().filter(|v| other.contains(v)).count()
    }

    pub fn minus(&self, other: &Face) -> Face {
        Face(self.0.iter().filter(|v| !other.contains(v)).copied().collect())
    }

    pub fn with(&self, v: VertexId) -> Face {
        match self.0.binary_search(&v) {
            Ok(_) => self.clone(),
            Err(pos) => {
                let mut out = self.0.clone();
                out.insert(pos, v);
                Face(out)
            }
        }
    }

    pub fn without(&self, v: &VertexId) -> Face {
        match self.0.binary_search(v) {
            Ok(pos) => {
                let mut out = self.0.clone();
                out.remove(pos);
                Face(out)
            }
            Err(_) => self.clone(),
        }
    }

    /// All subsets of `self` of size `self.len() - 1`.
    pub fn subfacets(&self) -> impl Iterator<Item = Face> + '_ {
        (0..self.0.len()).map(move |i| {
            let mut out = self.0.clone();
            out.remove(i);
            Face(out)
        })
    }

    /// All subsets, smallest first within each iteration step (bitmask order).
    pub fn subsets(&self) -> Vec<Face> {
        let n = self.0.len();
        assert!(n < 24, "subset enumeration on oversized set");
        let mut out = Vec::with_capacity(1 << n);
        for mask in 0u32..(1 << n) {
            let vs = (0..n)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| self.0[i])
                .collect();
            out.push(Face(vs));
        }
        out
    }

    /// Renames vertices via `map`; identity on unmapped vertices.
    pub fn relabel(&self, map: &std::collections::BTreeMap<VertexId, VertexId>) -> Face {
        let mut vs: Verts = self
            .0
            .iter()
            .map(|v| map.get(v).copied().unwrap_or(*v))
            .collect();
        vs.sort_unstable();
        vs.dedup();
        Face(vs)
    }
}

impl fmt::Display for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("{}");
        }
        let toks: Vec<&str> = self.0.iter().map(|v| v.as_str()).collect();
        f.write_str(&toks.join(" "))
    }
}

impl fmt::Debug for Face {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f\"{self}\"")
    }
}

impl FromIterator<VertexId> for Face {
    fn from_iter<I: IntoIterator<Item = VertexId>>(iter: I) -> Self {
        Face::new(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a Face {
    type Item = &'a VertexId;
    type IntoIter = std::slice::Iter<'a, VertexId>;
    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Deterministic source of fresh vertex labels for insertion flips.
///
/// Emits `_x0`, `_x1`, ... skipping anything already in use. Labels released
/// by deletion flips are recycled smallest-first; labels that were never
/// emitted by the source (the original input tokens) are never recycled.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FreshVertexSource {
    counter: u64,
    free: std::collections::BTreeSet<VertexId>,
}

impl FreshVertexSource {
    pub fn new() -> Self {
        Self::default()
    }

    /// The label the next insertion will use. Does not advance the source.
    pub fn peek(&self, used: &Face) -> VertexId {
        if let Some(v) = self.free.iter().find(|v| !used.contains(v)) {
            return *v;
        }
        let mut c = self.counter;
        loop {
            let v = VertexId::new(&format!("_x{c}")).expect("generated token is valid");
            if !used.contains(&v) {
                return v;
            }
            c += 1;
        }
    }

    /// Marks `v` as consumed.
    pub fn commit(&mut self, v: VertexId) {
        if !self.free.remove(&v) {
            // Advance past the emitted counter value.
            let tok = v.as_str();
            if let Some(n) = tok.strip_prefix("_x").and_then(|s| s.parse::<u64>().ok()) {
                self.counter = self.counter.max(n + 1);
            }
        }
    }

    /// Returns a generator-created label to the pool.
    pub fn release(&mut self, v: VertexId) {
        self.free.insert(v);
    }
}

#[cfg(test)]
pub(crate) fn fc(compact: &str) -> Face {
    // Test helper: one character per token, e.g. fc("025g").
    Face::new(
        compact
            .chars()
            .map(|c| VertexId::new(&c.to_string()).unwrap())
            .collect(),
    )
}

#[cfg(test)]
pub(crate) fn vx(tok: &str) -> VertexId {
    VertexId::new(tok).unwrap()
}
