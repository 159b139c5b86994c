//! Line-based text formats.
//!
//! ```text
//! cmplx v1            msec v1
//! dim 3               dim 2
//! v 0 R               corner 0
//! v 4 B               ...
//! ...                 cell quad 0 1 2 3 R B R B
//! s 0 1 2 4
//! ```
//!
//! `cmplx v1` lists vertices with colour `R` or `B` in ascending order, then
//! facets as ascending id lists in ascending order. Edge-coloured complexes
//! use the same header with uncoloured `v <id>` lines (ids `0..n`) followed
//! by `e <a> <b> <R|B|K>` lines, `K` marking black edges. A triangulation is
//! a sequence of `cmplx v1` blocks, one per slice, followed by one section
//! `iface <i>` per interface with `p <blue id> <red id>` lines mapping the
//! blue boundary of slice `i` onto the red boundary of slice `i + 1`.
//!
//! `msec v1` lists corners `0..n`, then cells in canonical order: kind
//! token, corners, and the colour of each template edge.
//!
//! Every format has exactly one serialization per object. Parsers accept
//! only that serialization, so parsing and writing back is byte-identical.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use causal_core::complex::Simplex;
use causal_core::midsection::{Cell, CellKind, EdgeColouredComplex, MidsectionComplex, MidsectionError, SubdivideError};
use causal_core::{CausalTriangulation, Colour, ColouredComplex, ComplexError, EdgeColour, VertexId};
use thiserror::Error;

pub const CMPLX_HEADER: &str = "cmplx v1";
pub const MSEC_HEADER: &str = "msec v1";

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: expected `{expected}`")]
    Header { line: usize, expected: &'static str },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: not in canonical form, expected `{expected}`")]
    NotCanonical { line: usize, expected: String },
    #[error("unexpected end of input")]
    Eof,
    #[error("unrecognised file; expected a `{CMPLX_HEADER}` or `{MSEC_HEADER}` header")]
    UnknownHeader,
    #[error(transparent)]
    Complex(#[from] ComplexError),
    #[error(transparent)]
    Midsection(#[from] MidsectionError),
    #[error(transparent)]
    EdgeColoured(#[from] SubdivideError),
}

fn syntax(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Syntax { line, message: message.into() }
}

/// Cursor over numbered, whitespace-split lines.
struct Lines<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

impl<'a> Lines<'a> {
    fn new(text: &'a str) -> Self {
        Lines {
            lines: text.lines().enumerate().map(|(i, l)| (i + 1, l)).collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<(usize, Vec<&'a str>)> {
        self.lines
            .get(self.pos)
            .map(|&(n, l)| (n, l.split_whitespace().collect()))
    }

    fn next(&mut self) -> Option<(usize, Vec<&'a str>)> {
        let out = self.peek();
        self.pos += 1;
        out
    }

    fn line_number(&self) -> usize {
        self.lines.get(self.pos).map_or(self.lines.len() + 1, |l| l.0)
    }

    fn header(&mut self, expected: &'static str) -> Result<(), FormatError> {
        let line = self.line_number();
        match self.next() {
            Some((_, t)) if t.join(" ") == expected => Ok(()),
            Some(_) => Err(FormatError::Header { line, expected }),
            None => Err(FormatError::Eof),
        }
    }

    fn dim(&mut self) -> Result<usize, FormatError> {
        match self.next() {
            Some((n, t)) if t.len() == 2 && t[0] == "dim" => number(n, t[1]),
            Some((n, _)) => Err(syntax(n, "expected `dim <D>`")),
            None => Err(FormatError::Eof),
        }
    }

    /// Consumes lines starting with `keyword`.
    fn take(&mut self, keyword: &str) -> Vec<(usize, Vec<&'a str>)> {
        let mut out = Vec::new();
        while let Some((n, t)) = self.peek() {
            if t.first() != Some(&keyword) {
                break;
            }
            out.push((n, t));
            self.pos += 1;
        }
        out
    }

    fn done(&self) -> bool {
        self.pos >= self.lines.len()
    }
}

fn number<T: std::str::FromStr>(line: usize, token: &str) -> Result<T, FormatError> {
    token.parse().map_err(|_| syntax(line, format!("`{token}` is not a number")))
}

fn numbers(line: usize, tokens: &[&str]) -> Result<Vec<u32>, FormatError> {
    tokens.iter().map(|t| number(line, t)).collect()
}

/// Rejects input that parsed but is not the canonical serialization.
fn require_canonical(input: &str, canonical: &str) -> Result<(), FormatError> {
    if input == canonical {
        return Ok(());
    }
    let mut expected = canonical.lines();
    for (i, got) in input.lines().enumerate() {
        match expected.next() {
            Some(e) if e == got => continue,
            Some(e) => {
                return Err(FormatError::NotCanonical {
                    line: i + 1,
                    expected: e.to_string(),
                })
            }
            None => return Err(syntax(i + 1, "trailing content")),
        }
    }
    let line = input.lines().count() + 1;
    Err(FormatError::NotCanonical {
        line,
        expected: expected.next().map_or_else(|| "a final newline".into(), str::to_string),
    })
}

fn write_simplices(out: &mut String, facets: &[Simplex]) {
    for f in facets {
        out.push('s');
        for v in f.vertices() {
            write!(out, " {v}").unwrap();
        }
        out.push('\n');
    }
}

pub fn write_complex(k: &ColouredComplex) -> String {
    let mut out = format!("{CMPLX_HEADER}\ndim {}\n", k.dim());
    for (v, c) in k.colours() {
        writeln!(out, "v {v} {}", c.token()).unwrap();
    }
    write_simplices(&mut out, k.facets());
    out
}

fn complex_block(lines: &mut Lines<'_>) -> Result<ColouredComplex, FormatError> {
    lines.header(CMPLX_HEADER)?;
    let dim = lines.dim()?;
    let mut colours = Vec::new();
    for (n, t) in lines.take("v") {
        if t.len() != 3 {
            return Err(syntax(n, "expected `v <id> <R|B>`"));
        }
        let c = Colour::from_token(t[2]).ok_or_else(|| syntax(n, format!("unknown colour `{}`", t[2])))?;
        colours.push((number::<VertexId>(n, t[1])?, c));
    }
    let facets = simplices(lines)?;
    Ok(ColouredComplex::build(dim, colours, facets)?)
}

fn simplices(lines: &mut Lines<'_>) -> Result<Vec<Vec<VertexId>>, FormatError> {
    lines
        .take("s")
        .into_iter()
        .map(|(n, t)| numbers(n, &t[1..]))
        .collect()
}

fn expect_end(lines: &Lines<'_>) -> Result<(), FormatError> {
    if lines.done() {
        Ok(())
    } else {
        Err(syntax(lines.line_number(), "trailing content"))
    }
}

pub fn parse_complex(text: &str) -> Result<ColouredComplex, FormatError> {
    let mut lines = Lines::new(text);
    let k = complex_block(&mut lines)?;
    expect_end(&lines)?;
    require_canonical(text, &write_complex(&k))?;
    Ok(k)
}

pub fn write_edge_coloured(k: &EdgeColouredComplex) -> String {
    let mut out = format!("{CMPLX_HEADER}\ndim 3\n");
    for v in 0..k.vertex_count() {
        writeln!(out, "v {v}").unwrap();
    }
    for (&(a, b), c) in k.colours() {
        writeln!(out, "e {a} {b} {}", c.token()).unwrap();
    }
    write_simplices(&mut out, k.tets());
    out
}

pub fn parse_edge_coloured(text: &str) -> Result<EdgeColouredComplex, FormatError> {
    let mut lines = Lines::new(text);
    lines.header(CMPLX_HEADER)?;
    let dim_line = lines.line_number();
    if lines.dim()? != 3 {
        return Err(syntax(dim_line, "edge-coloured complexes have dimension 3"));
    }
    let vertex_count = lines.take("v").len() as u32;
    let mut colours = BTreeMap::new();
    for (n, t) in lines.take("e") {
        if t.len() != 4 {
            return Err(syntax(n, "expected `e <a> <b> <R|B|K>`"));
        }
        let c = EdgeColour::from_token(t[3]).ok_or_else(|| syntax(n, format!("unknown colour `{}`", t[3])))?;
        let (a, b): (u32, u32) = (number(n, t[1])?, number(n, t[2])?);
        colours.insert((a.min(b), a.max(b)), c);
    }
    let tets = simplices(&mut lines)?
        .into_iter()
        .map(Simplex::new)
        .collect::<Result<Vec<_>, _>>()?;
    expect_end(&lines)?;
    let k = EdgeColouredComplex::new(vertex_count, tets, colours)?;
    require_canonical(text, &write_edge_coloured(&k))?;
    Ok(k)
}

pub fn write_midsection(s: &MidsectionComplex) -> String {
    let mut out = format!("{MSEC_HEADER}\ndim {}\n", s.dim());
    for c in 0..s.corner_count() {
        writeln!(out, "corner {c}").unwrap();
    }
    for cell in s.cells() {
        out.push_str("cell ");
        out.push_str(cell.kind().token());
        for c in cell.corners() {
            write!(out, " {c}").unwrap();
        }
        for (_, _, colour) in cell.edges() {
            write!(out, " {}", colour.token()).unwrap();
        }
        out.push('\n');
    }
    out
}

pub fn parse_midsection(text: &str) -> Result<MidsectionComplex, FormatError> {
    let mut lines = Lines::new(text);
    lines.header(MSEC_HEADER)?;
    let dim = lines.dim()?;
    let corner_count = lines.take("corner").len() as u32;
    let mut cells = Vec::new();
    for (n, t) in lines.take("cell") {
        let kind = t
            .get(1)
            .and_then(|k| CellKind::from_token(k))
            .ok_or_else(|| syntax(n, "expected `cell <kind> ...`"))?;
        let (corners, edges) = (kind.corner_count(), kind.edge_template().len());
        if t.len() != 2 + corners + edges {
            return Err(syntax(n, format!("{kind} needs {corners} corners and {edges} edge colours")));
        }
        let cell = Cell::new(kind, numbers(n, &t[2..2 + corners])?);
        for ((_, _, expected), token) in kind.edge_template().iter().zip(&t[2 + corners..]) {
            if Colour::from_token(token) != Some(*expected) {
                return Err(syntax(n, format!("edge colours of a {kind} do not match its template")));
            }
        }
        cells.push(cell);
    }
    expect_end(&lines)?;
    let s = MidsectionComplex::from_cells(dim, corner_count, cells)?;
    require_canonical(text, &write_midsection(&s))?;
    Ok(s)
}

/// Slices as complexes plus interface maps, not yet validated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawTriangulation {
    pub slices: Vec<ColouredComplex>,
    pub interfaces: Vec<BTreeMap<VertexId, VertexId>>,
}

fn write_raw(slices: &[&ColouredComplex], interfaces: &[BTreeMap<VertexId, VertexId>]) -> String {
    let mut out: String = slices.iter().map(|k| write_complex(k)).collect();
    for (i, iso) in interfaces.iter().enumerate() {
        writeln!(out, "iface {i}").unwrap();
        for (b, r) in iso {
            writeln!(out, "p {b} {r}").unwrap();
        }
    }
    out
}

pub fn write_triangulation(t: &CausalTriangulation) -> String {
    let slices: Vec<&ColouredComplex> = t.slices().iter().map(|s| s.complex()).collect();
    write_raw(&slices, t.interfaces())
}

pub fn parse_triangulation(text: &str) -> Result<RawTriangulation, FormatError> {
    let mut lines = Lines::new(text);
    let mut slices = vec![complex_block(&mut lines)?];
    while lines.peek().is_some_and(|(_, t)| t.join(" ") == CMPLX_HEADER) {
        slices.push(complex_block(&mut lines)?);
    }
    let mut interfaces = Vec::new();
    while let Some((n, t)) = lines.next() {
        if t.len() != 2 || t[0] != "iface" || number::<usize>(n, t[1])? != interfaces.len() {
            return Err(syntax(n, format!("expected `iface {}`", interfaces.len())));
        }
        let mut iso = BTreeMap::new();
        for (n, t) in lines.take("p") {
            if t.len() != 3 {
                return Err(syntax(n, "expected `p <blue id> <red id>`"));
            }
            iso.insert(number(n, t[1])?, number(n, t[2])?);
        }
        interfaces.push(iso);
    }
    if interfaces.len() + 1 != slices.len() {
        return Err(syntax(
            lines.line_number(),
            format!("{} slices need {} interfaces", slices.len(), slices.len() - 1),
        ));
    }
    let refs: Vec<&ColouredComplex> = slices.iter().collect();
    require_canonical(text, &write_raw(&refs, &interfaces))?;
    Ok(RawTriangulation { slices, interfaces })
}

/// Any supported document, told apart by its header and vertex lines.
#[derive(Clone, Debug)]
pub enum Document {
    Complex(ColouredComplex),
    Triangulation(RawTriangulation),
    EdgeColoured(EdgeColouredComplex),
    Midsection(MidsectionComplex),
}

pub fn parse_document(text: &str) -> Result<Document, FormatError> {
    let mut lines = text.lines();
    match lines.next().map(str::trim) {
        Some(MSEC_HEADER) => parse_midsection(text).map(Document::Midsection),
        Some(CMPLX_HEADER) => {
            let uncoloured = text.lines().any(|l| {
                let t: Vec<&str> = l.split_whitespace().collect();
                t.len() == 2 && t[0] == "v"
            });
            if uncoloured {
                return parse_edge_coloured(text).map(Document::EdgeColoured);
            }
            let t = parse_triangulation(text)?;
            Ok(if t.slices.len() == 1 {
                Document::Complex(t.slices.into_iter().next().expect("one slice"))
            } else {
                Document::Triangulation(t)
            })
        }
        _ => Err(FormatError::UnknownHeader),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use causal_core::causal::{prism_slice, stack_with_found_isos};
    use causal_core::fixtures;
    use causal_core::midsection::{midsection, subdivide_4d};

    #[test]
    fn complex_round_trip() {
        let k = prism_slice(&fixtures::sigma_t(), None).unwrap().complex().clone();
        let text = write_complex(&k);
        assert!(text.starts_with("cmplx v1\ndim 3\nv 0 R\n"));
        assert_eq!(parse_complex(&text).unwrap(), k);
    }

    #[test]
    fn non_canonical_input_is_rejected() {
        let text = "cmplx v1\ndim 2\nv 0 R\nv 1 R\nv 2 R\ns 2 1 0\n";
        assert!(matches!(parse_complex(text), Err(FormatError::NotCanonical { line: 6, .. })));
        assert!(parse_complex("cmplx v1\ndim 2\nv 0 R\nv 1 R\nv 2 R\ns 0 1 2\n").is_ok());
        assert!(matches!(parse_complex("cmplx v1\ndim 2\nv 0 R\nv 1 R\nv 2 R\ns 0 1 2\nx\n"), Err(FormatError::Syntax { line: 7, .. })));
    }

    #[test]
    fn midsection_round_trip() {
        let s = fixtures::fig4();
        let text = write_midsection(&s);
        assert_eq!(parse_midsection(&text).unwrap(), s);
        let bad = text.replacen("R B R B", "R R B B", 1);
        assert!(matches!(parse_midsection(&bad), Err(FormatError::Syntax { .. })));
    }

    #[test]
    fn edge_coloured_round_trip() {
        let slice = prism_slice(&fixtures::boundary_4simplex(), None).unwrap();
        let sub = subdivide_4d(&midsection(&slice)).unwrap();
        let text = write_edge_coloured(&sub);
        assert!(text.contains(" K\n"));
        assert!(matches!(parse_document(&text).unwrap(), Document::EdgeColoured(k) if k == sub));
    }

    #[test]
    fn triangulation_round_trip() {
        let s = prism_slice(&fixtures::sigma_t(), None).unwrap();
        let t = stack_with_found_isos(vec![s.clone(), s]).unwrap();
        let text = write_triangulation(&t);
        let raw = parse_triangulation(&text).unwrap();
        assert_eq!(raw.interfaces, t.interfaces());
        assert_eq!(write_raw(&raw.slices.iter().collect::<Vec<_>>(), &raw.interfaces), text);
    }
}
