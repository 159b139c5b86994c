//! Subdivision of 3-dimensional midsections into edge-coloured simplicial
//! complexes, and the inverse reassembly.
//!
//! Every rectangular face of a prism receives a black diagonal starting at
//! its least corner. Both prisms sharing a face make the same choice, and the
//! least corner of a prism carries the diagonals of both of its faces, so the
//! three diagonals never form the twisted configuration that admits no
//! triangulation. Each prism then splits into three tetrahedra around the
//! diagonal joining the two corners that carry two diagonals each.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::{Cell, CellKind, CornerId, MidsectionComplex};
use crate::canon::{CanonicalForm, Hypergraph};
use crate::colour::{Colour, EdgeColour};
use crate::complex::Simplex;
use crate::unionfind::UnionFind;

type Pair = (CornerId, CornerId);

fn pair(a: CornerId, b: CornerId) -> Pair {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SubdivideError {
    #[error("subdivision needs a 3-dimensional midsection, got dimension {0}")]
    WrongDimension(usize),
    #[error("corners {0:?} are joined by edges of two colours")]
    ColourConflict(Pair),
    #[error("prism {0} did not split into three tetrahedra")]
    Untriangulable(usize),
    #[error("tetrahedron {0} occurs twice")]
    DuplicateTet(Simplex),
    #[error("edge {0:?} has no colour")]
    Uncoloured(Pair),
    #[error("coloured pair {0:?} is not an edge of any tetrahedron")]
    StrayEdge(Pair),
}

/// A 3-dimensional simplicial complex on vertices `0..n` with every edge
/// coloured red, blue or black.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeColouredComplex {
    vertex_count: u32,
    tets: Vec<Simplex>,
    colours: BTreeMap<Pair, EdgeColour>,
}

impl EdgeColouredComplex {
    pub fn new(
        vertex_count: u32,
        mut tets: Vec<Simplex>,
        colours: BTreeMap<Pair, EdgeColour>,
    ) -> Result<Self, SubdivideError> {
        tets.sort();
        if let Some(w) = tets.windows(2).find(|w| w[0] == w[1]) {
            return Err(SubdivideError::DuplicateTet(w[0].clone()));
        }
        let mut edges = BTreeSet::new();
        for t in &tets {
            for e in t.subsets(2) {
                let p = (e.vertices()[0], e.vertices()[1]);
                if !colours.contains_key(&p) {
                    return Err(SubdivideError::Uncoloured(p));
                }
                edges.insert(p);
            }
        }
        if let Some(p) = colours.keys().find(|p| !edges.contains(*p)) {
            return Err(SubdivideError::StrayEdge(*p));
        }
        Ok(EdgeColouredComplex {
            vertex_count,
            tets,
            colours,
        })
    }

    pub fn vertex_count(&self) -> u32 {
        self.vertex_count
    }

    pub fn tets(&self) -> &[Simplex] {
        &self.tets
    }

    pub fn colours(&self) -> &BTreeMap<Pair, EdgeColour> {
        &self.colours
    }

    pub fn colour(&self, a: CornerId, b: CornerId) -> Option<EdgeColour> {
        self.colours.get(&pair(a, b)).copied()
    }

    pub fn black_edges(&self) -> impl Iterator<Item = Pair> + '_ {
        self.colours
            .iter()
            .filter(|(_, c)| **c == EdgeColour::Black)
            .map(|(p, _)| *p)
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        let mut h = Hypergraph::new(0x4543_0003, vec![0; self.vertex_count as usize]);
        for t in &self.tets {
            h.add_edge(0, t.vertices().to_vec());
        }
        for (&(a, b), c) in &self.colours {
            let label = match c {
                EdgeColour::Red => 1,
                EdgeColour::Blue => 2,
                EdgeColour::Black => 3,
            };
            h.add_edge(label, vec![a, b]);
        }
        h.canonical().form
    }

    fn black_count(&self, tri: &Simplex) -> usize {
        tri.subsets(2)
            .iter()
            .filter(|e| self.colour(e.vertices()[0], e.vertices()[1]) == Some(EdgeColour::Black))
            .count()
    }
}

fn set_colour(map: &mut BTreeMap<Pair, EdgeColour>, p: Pair, c: EdgeColour) -> Result<(), SubdivideError> {
    match map.insert(p, c) {
        Some(old) if old != c => Err(SubdivideError::ColourConflict(p)),
        _ => Ok(()),
    }
}

/// Splits every prism into three tetrahedra, colouring the new edges black.
pub fn subdivide_4d(s: &MidsectionComplex) -> Result<EdgeColouredComplex, SubdivideError> {
    if s.dim() != 3 {
        return Err(SubdivideError::WrongDimension(s.dim()));
    }
    let mut colours = BTreeMap::new();
    let mut tets = Vec::new();
    for (index, cell) in s.cells().iter().enumerate() {
        for (a, b, c) in cell.edges() {
            set_colour(&mut colours, pair(a, b), c.into())?;
        }
        let x = cell.corners();
        match cell.kind() {
            CellKind::RedTet | CellKind::BlueTet => tets.push(Simplex::from_sorted(x.to_vec())),
            CellKind::RedPrism | CellKind::BluePrism => {
                let mut allowed: BTreeSet<Pair> = cell.edges().map(|(a, b, _)| pair(a, b)).collect();
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let quad = [x[i], x[j], x[j + 3], x[i + 3]];
                    let p = (0..4).min_by_key(|&k| quad[k]).expect("four corners");
                    let diagonal = pair(quad[p], quad[(p + 2) % 4]);
                    set_colour(&mut colours, diagonal, EdgeColour::Black)?;
                    allowed.insert(diagonal);
                }
                let all = Simplex::from_sorted({
                    let mut v = x.to_vec();
                    v.sort_unstable();
                    v
                });
                let pieces: Vec<Simplex> = all
                    .subsets(4)
                    .into_iter()
                    .filter(|t| {
                        t.subsets(2)
                            .iter()
                            .all(|e| allowed.contains(&(e.vertices()[0], e.vertices()[1])))
                    })
                    .collect();
                if pieces.len() != 3 {
                    return Err(SubdivideError::Untriangulable(index));
                }
                tets.extend(pieces);
            }
            _ => return Err(SubdivideError::WrongDimension(2)),
        }
    }
    EdgeColouredComplex::new(s.corner_count(), tets, colours)
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReassembleError {
    #[error("triangle {0} has three black edges")]
    BlackTriangle(Simplex),
    #[error("black edge {edge:?} bounds {count} triangles with no other black edge, expected 2")]
    BlackEdgeFaces { edge: Pair, count: usize },
    #[error("tetrahedron {0} has no black edge but is not monochrome")]
    MixedTet(Simplex),
    #[error("tetrahedra around {0} do not form a prism")]
    BadPrism(Simplex),
}

/// Rebuilds the prisms of a subdivided midsection.
///
/// For every black edge `e` the two triangles containing `e` whose other
/// edges are not black must exist and be unique; they form the rectangle
/// `f_e`. Tetrahedra of one prism meet along triangles with two black edges,
/// which occur nowhere else, so prisms are the classes of tetrahedra joined
/// through such triangles. Each class is checked to have the combinatorics
/// of a prism before it is replaced by a prism cell.
pub fn reassemble_4d(s: &EdgeColouredComplex) -> Result<MidsectionComplex, ReassembleError> {
    let mut triangles: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
    for (i, t) in s.tets().iter().enumerate() {
        for f in t.faces() {
            triangles.entry(f).or_default().push(i);
        }
    }
    let mut uf = UnionFind::new(s.tets().len());
    for (tri, inc) in &triangles {
        match s.black_count(tri) {
            3 => return Err(ReassembleError::BlackTriangle(tri.clone())),
            2 => {
                for w in inc.windows(2) {
                    uf.union(w[0], w[1]);
                }
            }
            _ => {}
        }
    }
    for edge in s.black_edges() {
        let count = triangles
            .keys()
            .filter(|t| t.contains(edge.0) && t.contains(edge.1) && s.black_count(t) == 1)
            .count();
        if count != 2 {
            return Err(ReassembleError::BlackEdgeFaces { edge, count });
        }
    }

    let (label, groups) = uf.classes();
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); groups];
    for (t, &g) in label.iter().enumerate() {
        members[g].push(t);
    }
    let mut cells = Vec::with_capacity(groups);
    for m in members {
        let first = &s.tets()[m[0]];
        if m.len() == 1 && first.subsets(2).iter().all(|e| s.colour(e.vertices()[0], e.vertices()[1]) != Some(EdgeColour::Black)) {
            let cols: BTreeSet<EdgeColour> = first
                .subsets(2)
                .iter()
                .map(|e| s.colour(e.vertices()[0], e.vertices()[1]).expect("coloured"))
                .collect();
            let kind = match cols.into_iter().collect::<Vec<_>>().as_slice() {
                [EdgeColour::Red] => CellKind::RedTet,
                [EdgeColour::Blue] => CellKind::BlueTet,
                _ => return Err(ReassembleError::MixedTet(first.clone())),
            };
            cells.push(Cell::new(kind, first.vertices().to_vec()));
            continue;
        }
        cells.push(prism_from(s, &m)?);
    }
    Ok(MidsectionComplex::from_cells(3, s.vertex_count(), cells).expect("corners come from a valid complex"))
}

fn prism_from(s: &EdgeColouredComplex, members: &[usize]) -> Result<Cell, ReassembleError> {
    let tets: Vec<&Simplex> = members.iter().map(|&t| &s.tets()[t]).collect();
    let corners: BTreeSet<CornerId> = tets.iter().flat_map(|t| t.vertices().iter().copied()).collect();
    let bad = || ReassembleError::BadPrism(Simplex::from_sorted(corners.iter().copied().collect()));
    if tets.len() != 3 || corners.len() != 6 {
        return Err(bad());
    }
    let colour_of = |a: CornerId, b: CornerId| s.colour(a, b).and_then(EdgeColour::as_colour);
    // end triangles: faces of the group with no black edge and a single colour
    let mut ends: Vec<(Simplex, Colour)> = Vec::new();
    for t in &tets {
        for f in t.faces() {
            let v = f.vertices();
            let cols = [colour_of(v[0], v[1]), colour_of(v[0], v[2]), colour_of(v[1], v[2])];
            if let [Some(a), Some(b), Some(c)] = cols {
                if a == b && b == c && !ends.iter().any(|(e, _)| *e == f) {
                    ends.push((f, a));
                }
            }
        }
    }
    if ends.len() != 2 || ends[0].1 != ends[1].1 || ends[0].0.vertices().iter().any(|v| ends[1].0.contains(*v)) {
        return Err(bad());
    }
    let face = ends[0].1;
    let (a, b) = (ends[0].0.vertices(), ends[1].0.vertices());
    let mut partners = Vec::with_capacity(3);
    for &x in a {
        let p: Vec<CornerId> = b.iter().copied().filter(|&y| colour_of(x, y) == Some(face.other())).collect();
        if p.len() != 1 {
            return Err(bad());
        }
        partners.push(p[0]);
    }
    let mut sorted = partners.clone();
    sorted.sort_unstable();
    if sorted != b {
        return Err(bad());
    }
    let kind = if face == Colour::Red { CellKind::RedPrism } else { CellKind::BluePrism };
    Ok(Cell::new(kind, [a.to_vec(), partners].concat()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::prism_slice;
    use crate::fixtures;
    use crate::midsection::midsection;

    #[test]
    fn boundary_of_four_simplex() {
        let m = midsection(&prism_slice(&fixtures::boundary_4simplex(), None).unwrap());
        let sub = subdivide_4d(&m).unwrap();
        assert_eq!(sub.tets().len(), 40);
        assert_eq!(sub.black_edges().count(), {
            // one diagonal per rectangular face, each shared by two prisms
            // or lying on a slice face shared with no second prism
            let mut faces = BTreeSet::new();
            for c in m.cells().iter().filter(|c| matches!(c.kind(), CellKind::RedPrism | CellKind::BluePrism)) {
                let x = c.corners();
                for (i, j) in [(0, 1), (0, 2), (1, 2)] {
                    let mut q = vec![x[i], x[j], x[j + 3], x[i + 3]];
                    q.sort_unstable();
                    faces.insert(q);
                }
            }
            faces.len()
        });
        let back = reassemble_4d(&sub).unwrap();
        assert_eq!(back, MidsectionComplex::from_cells(3, m.corner_count(), m.cells().to_vec()).unwrap());
    }

    #[test]
    fn lone_red_tet_is_unchanged() {
        let m = MidsectionComplex::from_cells(3, 4, vec![Cell::new(CellKind::RedTet, vec![0, 1, 2, 3])]).unwrap();
        let sub = subdivide_4d(&m).unwrap();
        assert_eq!(sub.tets().len(), 1);
        assert_eq!(sub.black_edges().count(), 0);
        assert_eq!(reassemble_4d(&sub).unwrap(), m);
    }

    #[test]
    fn lone_prism_splits_around_one_black_edge() {
        let m = MidsectionComplex::from_cells(3, 6, vec![Cell::new(CellKind::BluePrism, vec![0, 1, 2, 3, 4, 5])]).unwrap();
        let sub = subdivide_4d(&m).unwrap();
        assert_eq!(sub.tets().len(), 3);
        let shared: Vec<Pair> = sub
            .black_edges()
            .filter(|&(a, b)| sub.tets().iter().all(|t| t.contains(a) && t.contains(b)))
            .collect();
        assert_eq!(shared.len(), 1);
        assert_eq!(reassemble_4d(&sub).unwrap(), m);
    }

    #[test]
    fn black_triangle_is_rejected() {
        let tet = Simplex::from_sorted(vec![0, 1, 2, 3]);
        let mut colours = BTreeMap::new();
        for e in tet.subsets(2) {
            let v = e.vertices();
            let c = if v[1] == 3 { EdgeColour::Red } else { EdgeColour::Black };
            colours.insert((v[0], v[1]), c);
        }
        let s = EdgeColouredComplex::new(4, vec![tet], colours).unwrap();
        assert!(matches!(reassemble_4d(&s), Err(ReassembleError::BlackTriangle(_))));
    }
}
