//! Plain-text formats: complexes, prismatoids, and flip traces.
//!
//! Complexes and prismatoids use a line-oriented format with `#` comments:
//!
//! ```text
//! PRISMATOID v1
//! dim 2
//! base+ 1 2 3
//! base- a b c
//! facet 1 2 a
//! ```
//!
//! Serialization is canonical (facets sorted), so parse/serialize round trips
//! are byte-exact on canonical files.

use std::path::Path;

use crate::complex::SimplicialComplex;
use crate::error::Error;
use crate::flip::{Flip, FlipKind};
use crate::prism::Prismatoid;
use crate::vertex::{Face, VertexId};

#[derive(Clone, Debug)]
pub struct Parsed<T> {
    pub value: T,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug)]
pub enum AnyFile {
    Complex(SimplicialComplex),
    Prismatoid(Prismatoid),
}

fn err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

struct RawFile {
    header: String,
    dim: Option<(usize, usize)>, // (line, value)
    base_plus: Option<(usize, Face)>,
    base_minus: Option<(usize, Face)>,
    facets: Vec<(usize, Face)>,
    warnings: Vec<String>,
}

fn parse_raw(text: &str) -> Result<RawFile, Error> {
    let mut header = None;
    let mut raw = RawFile {
        header: String::new(),
        dim: None,
        base_plus: None,
        base_minus: None,
        facets: Vec::new(),
        warnings: Vec::new(),
    };
    let mut seen = std::collections::BTreeSet::new();
    for (idx, full) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full.find('#') {
            Some(p) => &full[..p],
            None => full,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if header.is_none() {
            if line != "COMPLEX v1" && line != "PRISMATOID v1" {
                return Err(err(line_no, format!("unrecognized header `{line}`")));
            }
            header = Some(line.to_string());
            continue;
        }
        let mut words = line.split_whitespace();
        let directive = words.next().expect("nonempty line");
        let rest = line[directive.len()..].trim();
        match directive {
            "dim" => {
                if raw.dim.is_some() {
                    return Err(err(line_no, "duplicate dim line"));
                }
                let value: usize = rest
                    .parse()
                    .map_err(|_| err(line_no, format!("bad dimension `{rest}`")))?;
                raw.dim = Some((line_no, value));
            }
            "base+" | "base-" => {
                let face = Face::parse(rest)
                    .map_err(|e| err(line_no, format!("bad base: {e}")))?;
                let slot = if directive == "base+" {
                    &mut raw.base_plus
                } else {
                    &mut raw.base_minus
                };
                if slot.is_some() {
                    return Err(err(line_no, format!("duplicate {directive} line")));
                }
                *slot = Some((line_no, face));
            }
            "facet" => {
                let face = Face::parse(rest)
                    .map_err(|e| err(line_no, format!("bad facet: {e}")))?;
                if !seen.insert(face.clone()) {
                    raw.warnings
                        .push(format!("line {line_no}: duplicate facet `{face}` ignored"));
                } else {
                    raw.facets.push((line_no, face));
                }
            }
            other => {
                return Err(err(line_no, format!("unknown directive `{other}`")));
            }
        }
    }
    raw.header = header.ok_or_else(|| err(0, "empty file"))?;
    Ok(raw)
}

fn check_dim(raw: &RawFile, complex: &SimplicialComplex) -> Result<(), Error> {
    if let Some((line, dim)) = raw.dim {
        if complex.dim() != dim as isize {
            return Err(err(
                line,
                format!("declared dim {dim}, facets have dim {}", complex.dim()),
            ));
        }
    }
    Ok(())
}

pub fn parse_complex_str(text: &str) -> Result<Parsed<SimplicialComplex>, Error> {
    let raw = parse_raw(text)?;
    if raw.header != "COMPLEX v1" {
        return Err(err(1, "expected a COMPLEX v1 file"));
    }
    if let Some((line, _)) = raw.base_plus.as_ref().or(raw.base_minus.as_ref()) {
        return Err(err(*line, "base lines are not allowed in a COMPLEX file"));
    }
    let complex =
        SimplicialComplex::from_facets(raw.facets.iter().map(|(_, f)| f.clone()))?;
    check_dim(&raw, &complex)?;
    Ok(Parsed {
        value: complex,
        warnings: raw.warnings,
    })
}

pub fn parse_prismatoid_str(text: &str) -> Result<Parsed<Prismatoid>, Error> {
    let raw = parse_raw(text)?;
    if raw.header != "PRISMATOID v1" {
        return Err(err(1, "expected a PRISMATOID v1 file"));
    }
    let (_, plus) = raw
        .base_plus
        .clone()
        .ok_or_else(|| err(0, "missing base+ line"))?;
    let (_, minus) = raw
        .base_minus
        .clone()
        .ok_or_else(|| err(0, "missing base- line"))?;
    let complex =
        SimplicialComplex::from_facets(raw.facets.iter().map(|(_, f)| f.clone()))?;
    check_dim(&raw, &complex)?;
    let p = Prismatoid::validate(complex, plus, minus)?;
    Ok(Parsed {
        value: p,
        warnings: raw.warnings,
    })
}

/// Parses either file kind, keyed on the header line.
pub fn parse_any_str(text: &str) -> Result<Parsed<AnyFile>, Error> {
    let raw = parse_raw(text)?;
    if raw.header == "PRISMATOID v1" {
        let p = parse_prismatoid_str(text)?;
        Ok(Parsed {
            value: AnyFile::Prismatoid(p.value),
            warnings: p.warnings,
        })
    } else {
        let c = parse_complex_str(text)?;
        Ok(Parsed {
            value: AnyFile::Complex(c.value),
            warnings: c.warnings,
        })
    }
}

/// The facet lines of a file in their written order (for shelling checks,
/// where the file order is the candidate shelling order).
pub fn facet_order_str(text: &str) -> Result<Vec<Face>, Error> {
    let raw = parse_raw(text)?;
    Ok(raw.facets.into_iter().map(|(_, f)| f).collect())
}

pub fn serialize_complex(c: &SimplicialComplex) -> String {
    let mut out = String::from("COMPLEX v1\n");
    out.push_str(&format!("dim {}\n", c.dim()));
    for f in c.facets() {
        out.push_str(&format!("facet {f}\n"));
    }
    out
}

pub fn serialize_prismatoid(p: &Prismatoid) -> String {
    let mut out = String::from("PRISMATOID v1\n");
    out.push_str(&format!("dim {}\n", p.complex().dim()));
    out.push_str(&format!("base+ {}\n", p.base(crate::prism::Sign::Plus)));
    out.push_str(&format!("base- {}\n", p.base(crate::prism::Sign::Minus)));
    for f in p.complex().facets() {
        out.push_str(&format!("facet {f}\n"));
    }
    out
}

fn token_list(face: &Face) -> String {
    if face.is_empty() {
        "-".to_string()
    } else {
        face.iter()
            .map(|v| v.as_str().to_string())
            .collect::<Vec<_>>()
            .join(",")
    }
}

fn parse_token_list(s: &str, line: usize) -> Result<Face, Error> {
    if s == "-" {
        return Ok(Face::empty());
    }
    s.split(',')
        .map(VertexId::new)
        .collect::<Result<Vec<_>, _>>()
        .map(Face::new)
        .map_err(|e| err(line, format!("bad token list `{s}`: {e}")))
}

/// One flip per line: `flip <kind> f=<tokens> l=<tokens> v=<token|-> support=<tokens>`.
pub fn format_flip(flip: &Flip) -> String {
    let kind = match flip.kind {
        FlipKind::Interior => "interior",
        FlipKind::Boundary => "boundary",
    };
    let v = match flip.v {
        Some(v) => v.as_str().to_string(),
        None => "-".to_string(),
    };
    format!(
        "flip {kind} f={} l={} v={} support={}",
        token_list(&flip.f),
        token_list(&flip.l),
        v,
        token_list(&flip.support())
    )
}

pub fn parse_flip_line(line: &str, line_no: usize) -> Result<Flip, Error> {
    let words: Vec<&str> = line.split_whitespace().collect();
    if words.len() != 6 || words[0] != "flip" {
        return Err(err(line_no, "expected `flip <kind> f=.. l=.. v=.. support=..`"));
    }
    let kind = match words[1] {
        "interior" => FlipKind::Interior,
        "boundary" => FlipKind::Boundary,
        other => return Err(err(line_no, format!("unknown flip kind `{other}`"))),
    };
    let field = |idx: usize, name: &str| -> Result<&str, Error> {
        let prefix = format!("{name}=");
        words[idx]
            .strip_prefix(&prefix)
            .ok_or_else(|| err(line_no, format!("expected `{name}=...`, got `{}`", words[idx])))
    };
    let f = parse_token_list(field(2, "f")?, line_no)?;
    let l = parse_token_list(field(3, "l")?, line_no)?;
    let v_str = field(4, "v")?;
    let v = if v_str == "-" {
        None
    } else {
        Some(VertexId::new(v_str).map_err(|e| err(line_no, format!("bad v: {e}")))?)
    };
    let support = parse_token_list(field(5, "support")?, line_no)?;
    let flip = Flip { f, l, v, kind };
    if flip.support() != support {
        return Err(err(
            line_no,
            format!("support mismatch: stated {support}, derived {}", flip.support()),
        ));
    }
    Ok(flip)
}

pub fn parse_trace_str(text: &str) -> Result<Vec<Flip>, Error> {
    let mut flips = Vec::new();
    for (idx, full) in text.lines().enumerate() {
        let line = match full.find('#') {
            Some(p) => &full[..p],
            None => full,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        flips.push(parse_flip_line(line, idx + 1)?);
    }
    Ok(flips)
}

pub fn serialize_trace(flips: &[Flip]) -> String {
    let mut out = String::new();
    for f in flips {
        out.push_str(&format_flip(f));
        out.push('\n');
    }
    out
}

pub fn format_histogram_csv<'a, I>(histograms: I) -> String
where
    I: IntoIterator<Item = &'a std::collections::BTreeMap<(usize, usize), u64>>,
{
    let mut merged: std::collections::BTreeMap<(usize, usize), u64> = Default::default();
    for h in histograms {
        for (&k, &v) in h {
            *merged.entry(k).or_default() += v;
        }
    }
    let mut out = String::from("vertices,facets,count\n");
    for ((v, f), count) in merged {
        out.push_str(&format!("{v},{f},{count}\n"));
    }
    out
}

pub fn read_file(path: impl AsRef<Path>) -> Result<String, Error> {
    std::fs::read_to_string(path.as_ref())
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}

pub fn write_file(path: impl AsRef<Path>, content: &str) -> Result<(), Error> {
    std::fs::write(path.as_ref(), content)
        .map_err(|e| Error::Io(format!("{}: {e}", path.as_ref().display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{ann6, ann6_prismatoid};

    #[test]
    fn prismatoid_round_trip_is_canonical() {
        let p = ann6_prismatoid();
        let text = serialize_prismatoid(&p);
        let parsed = parse_prismatoid_str(&text).unwrap();
        assert!(parsed.warnings.is_empty());
        assert!(parsed.value.structurally_eq(&p));
        assert_eq!(serialize_prismatoid(&parsed.value), text);
    }

    #[test]
    fn complex_round_trip_is_canonical() {
        let c = ann6();
        let text = serialize_complex(&c);
        let parsed = parse_complex_str(&text).unwrap();
        assert_eq!(parsed.value, c);
        assert_eq!(serialize_complex(&parsed.value), text);
    }

    #[test]
    fn comments_blanks_and_duplicates_are_tolerated() {
        let text = "\n# a file\nPRISMATOID v1\ndim 2   # the annulus\nbase+ 1 2 3\nbase- a b c\nfacet 1 2 a\nfacet 2 a b\nfacet 2 3 b\nfacet 3 b c\nfacet 1 3 c\nfacet 1 a c\nfacet 1 2 a  # repeated on purpose\n";
        let parsed = parse_prismatoid_str(text).unwrap();
        assert_eq!(parsed.warnings.len(), 1);
        assert!(parsed.warnings[0].contains("line 13"), "{:?}", parsed.warnings);
        assert!(parsed.value.structurally_eq(&ann6_prismatoid()));
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let bad_header = "SPHERE v1\nfacet 1 2\n";
        match parse_complex_str(bad_header) {
            Err(Error::Parse { line: 1, msg }) => {
                assert_eq!(msg, "unrecognized header `SPHERE v1`")
            }
            other => panic!("unexpected {other:?}"),
        }
        let bad_token = "COMPLEX v1\nfacet 1 2\nfacet 1 2,3\n";
        assert!(matches!(
            parse_complex_str(bad_token),
            Err(Error::Parse { line: 3, .. })
        ));
        let bad_dim = "COMPLEX v1\ndim 2\nfacet 1 2\n";
        assert!(matches!(
            parse_complex_str(bad_dim),
            Err(Error::Parse { line: 2, .. })
        ));
        let missing_base = "PRISMATOID v1\nfacet 1 2 a\n";
        assert!(matches!(
            parse_prismatoid_str(missing_base),
            Err(Error::Parse { .. })
        ));
        let base_in_complex = "COMPLEX v1\nbase+ 1 2\nfacet 1 2\n";
        assert!(matches!(
            parse_complex_str(base_in_complex),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(parse_complex_str(""), Err(Error::Parse { line: 0, .. })));
    }

    #[test]
    fn any_file_dispatches_on_the_header() {
        let c = "COMPLEX v1\nfacet 1 2\n";
        assert!(matches!(
            parse_any_str(c).unwrap().value,
            AnyFile::Complex(_)
        ));
        let p = serialize_prismatoid(&ann6_prismatoid());
        assert!(matches!(
            parse_any_str(&p).unwrap().value,
            AnyFile::Prismatoid(_)
        ));
    }

    #[test]
    fn facet_order_preserves_the_file_order() {
        let text = "COMPLEX v1\nfacet 2 3 b\nfacet 1 2 a\n";
        let order = facet_order_str(text).unwrap();
        assert_eq!(order, vec![Face::parse("2 3 b").unwrap(), Face::parse("1 2 a").unwrap()]);
    }

    #[test]
    fn flip_lines_round_trip() {
        let mut p = ann6_prismatoid();
        let flips = p.enumerate_flips();
        for flip in &flips {
            let line = format_flip(flip);
            let parsed = parse_flip_line(&line, 1).unwrap();
            assert_eq!(&parsed, flip);
        }
        let trace = serialize_trace(&flips);
        let parsed = parse_trace_str(&trace).unwrap();
        assert_eq!(parsed, flips);
        // applying a parsed flip works end to end
        let inverse = p.apply_flip(&parsed[0]).unwrap();
        p.apply_flip(&inverse).unwrap();
        assert!(p.structurally_eq(&ann6_prismatoid()));
    }

    #[test]
    fn flip_parse_rejects_malformed_lines() {
        assert!(parse_flip_line("flip interior f=1 l=2", 4).is_err());
        assert!(parse_flip_line("flip sideways f=1 l=2 v=- support=1,2", 4).is_err());
        // stated support disagrees with f ∪ l ∪ v
        assert!(matches!(
            parse_flip_line("flip interior f=2,a l=1,b v=- support=1,2,a", 9),
            Err(Error::Parse { line: 9, .. })
        ));
    }

    #[test]
    fn histogram_csv_merges_and_sorts() {
        let mut h1 = std::collections::BTreeMap::new();
        h1.insert((6, 6), 10u64);
        h1.insert((7, 8), 2);
        let mut h2 = std::collections::BTreeMap::new();
        h2.insert((6, 6), 5u64);
        let csv = format_histogram_csv([&h1, &h2]);
        assert_eq!(csv, "vertices,facets,count\n6,6,15\n7,8,2\n");
    }
}
