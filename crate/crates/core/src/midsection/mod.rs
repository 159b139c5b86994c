//! Midsections: the coloured cell complex cut out of a slice half way
//! between its red and blue boundary.
//!
//! Each top simplex of type `(k, l)` contributes one cell whose corners are
//! its `k·l` mixed edges. Two corners of a cell are joined by an edge when
//! the mixed edges share exactly one endpoint; the cell edge is red when the
//! shared endpoint is blue and blue when it is red.
//!
//! | simplex | cell |
//! |---------|------|
//! | (3,1), (1,3) | red, blue triangle |
//! | (2,2) | quadrangle, sides alternately red and blue |
//! | (4,1), (1,4) | red, blue tetrahedron |
//! | (3,2), (2,3) | prism with red (blue) end triangles and blue (red) verticals |

mod dual;
mod subdivide;

pub use dual::{dual_graph, euler_identity_check, DualError, DualGraph, EulerReport};
pub use subdivide::{reassemble_4d, subdivide_4d, EdgeColouredComplex, ReassembleError, SubdivideError};

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::canon::{CanonicalForm, Hypergraph};
use crate::causal::{CausalSlice, SimplexType};
use crate::colour::Colour;
use crate::complex::{Simplex, VertexId};

pub type CornerId = u32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CellKind {
    RedTriangle,
    BlueTriangle,
    Quadrangle,
    RedTet,
    BlueTet,
    RedPrism,
    BluePrism,
}

impl CellKind {
    pub const ALL: [CellKind; 7] = [
        CellKind::RedTriangle,
        CellKind::BlueTriangle,
        CellKind::Quadrangle,
        CellKind::RedTet,
        CellKind::BlueTet,
        CellKind::RedPrism,
        CellKind::BluePrism,
    ];

    pub fn dim(self) -> usize {
        match self {
            CellKind::RedTriangle | CellKind::BlueTriangle | CellKind::Quadrangle => 2,
            _ => 3,
        }
    }

    pub fn corner_count(self) -> usize {
        match self {
            CellKind::RedTriangle | CellKind::BlueTriangle => 3,
            CellKind::Quadrangle | CellKind::RedTet | CellKind::BlueTet => 4,
            CellKind::RedPrism | CellKind::BluePrism => 6,
        }
    }

    /// Type of the simplex this cell comes from.
    pub fn simplex_type(self) -> SimplexType {
        let (red, blue) = match self {
            CellKind::RedTriangle => (3, 1),
            CellKind::BlueTriangle => (1, 3),
            CellKind::Quadrangle => (2, 2),
            CellKind::RedTet => (4, 1),
            CellKind::BlueTet => (1, 4),
            CellKind::RedPrism => (3, 2),
            CellKind::BluePrism => (2, 3),
        };
        SimplexType { red, blue }
    }

    pub fn from_type(t: SimplexType) -> Option<CellKind> {
        CellKind::ALL.into_iter().find(|k| k.simplex_type() == t)
    }

    pub fn token(self) -> &'static str {
        match self {
            CellKind::RedTriangle => "rtri",
            CellKind::BlueTriangle => "btri",
            CellKind::Quadrangle => "quad",
            CellKind::RedTet => "rtet",
            CellKind::BlueTet => "btet",
            CellKind::RedPrism => "rprism",
            CellKind::BluePrism => "bprism",
        }
    }

    pub fn from_token(s: &str) -> Option<CellKind> {
        CellKind::ALL.into_iter().find(|k| k.token() == s)
    }

    fn index(self) -> u32 {
        self as u32
    }

    /// Edge template on corner positions, in the normalised corner order.
    /// For 2-cells edge `p` joins positions `p` and `p + 1` cyclically.
    pub fn edge_template(self) -> &'static [(usize, usize, Colour)] {
        use Colour::{Blue as B, Red as R};
        match self {
            CellKind::RedTriangle => &[(0, 1, R), (1, 2, R), (2, 0, R)],
            CellKind::BlueTriangle => &[(0, 1, B), (1, 2, B), (2, 0, B)],
            CellKind::Quadrangle => &[(0, 1, R), (1, 2, B), (2, 3, R), (3, 0, B)],
            CellKind::RedTet => &[(0, 1, R), (0, 2, R), (0, 3, R), (1, 2, R), (1, 3, R), (2, 3, R)],
            CellKind::BlueTet => &[(0, 1, B), (0, 2, B), (0, 3, B), (1, 2, B), (1, 3, B), (2, 3, B)],
            CellKind::RedPrism => &[
                (0, 1, R),
                (0, 2, R),
                (1, 2, R),
                (3, 4, R),
                (3, 5, R),
                (4, 5, R),
                (0, 3, B),
                (1, 4, B),
                (2, 5, B),
            ],
            CellKind::BluePrism => &[
                (0, 1, B),
                (0, 2, B),
                (1, 2, B),
                (3, 4, B),
                (3, 5, B),
                (4, 5, B),
                (0, 3, R),
                (1, 4, R),
                (2, 5, R),
            ],
        }
    }
}

impl fmt::Display for CellKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

/// One cell with its corners in normalised order:
///
/// * triangles and tetrahedra: ascending;
/// * quadrangles: cyclic, least corner first, first side red;
/// * prisms: `[a0, a1, a2, b0, b1, b2]` where the `a` triangle holds the least
///   corner and is ascending, and `b_i` is the vertical partner of `a_i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Cell {
    kind: CellKind,
    corners: Vec<CornerId>,
}

impl Cell {
    /// Normalises `corners`, given in any order valid for the kind: a cyclic
    /// order with a red first side for quadrangles, and triangle-then-partners
    /// for prisms.
    ///
    /// # Panics
    /// If the corner count does not match the kind.
    pub fn new(kind: CellKind, mut corners: Vec<CornerId>) -> Cell {
        assert_eq!(corners.len(), kind.corner_count(), "wrong corner count for {kind}");
        match kind {
            CellKind::Quadrangle => {
                let i = (0..4).min_by_key(|&i| corners[i]).expect("four corners");
                corners = if i % 2 == 0 {
                    (0..4).map(|k| corners[(i + k) % 4]).collect()
                } else {
                    (0..4).map(|k| corners[(i + 4 - k) % 4]).collect()
                };
            }
            CellKind::RedPrism | CellKind::BluePrism => {
                let (mut a, mut b) = (corners[..3].to_vec(), corners[3..].to_vec());
                if b.iter().min() < a.iter().min() {
                    core::mem::swap(&mut a, &mut b);
                }
                let mut pairs: Vec<(CornerId, CornerId)> = a.into_iter().zip(b).collect();
                pairs.sort_unstable();
                corners = pairs.iter().map(|p| p.0).chain(pairs.iter().map(|p| p.1)).collect();
            }
            _ => corners.sort_unstable(),
        }
        Cell { kind, corners }
    }

    pub fn kind(&self) -> CellKind {
        self.kind
    }

    pub fn corners(&self) -> &[CornerId] {
        &self.corners
    }

    /// Edges as `(corner, corner, colour)` following the kind's template.
    pub fn edges(&self) -> impl Iterator<Item = (CornerId, CornerId, Colour)> + '_ {
        self.kind
            .edge_template()
            .iter()
            .map(move |&(i, j, c)| (self.corners[i], self.corners[j], c))
    }

    /// Corners of a 2-cell in boundary order.
    pub fn boundary_cycle(&self) -> &[CornerId] {
        debug_assert_eq!(self.kind.dim(), 2);
        &self.corners
    }

    fn has_repeated_corner(&self) -> bool {
        let mut c = self.corners.clone();
        c.sort_unstable();
        c.windows(2).any(|w| w[0] == w[1])
    }
}

/// Key of a cell edge: unordered corner pair plus colour. Corners may be
/// joined by one edge of each colour.
pub type EdgeKey = (CornerId, CornerId, Colour);

pub(crate) fn edge_key(a: CornerId, b: CornerId, c: Colour) -> EdgeKey {
    if a <= b {
        (a, b, c)
    } else {
        (b, a, c)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum MidsectionError {
    #[error("midsections have dimension 2 or 3, got {0}")]
    WrongDimension(usize),
    #[error("cell {cell} of kind {kind} does not fit dimension {dim}")]
    KindDimension { cell: usize, kind: CellKind, dim: usize },
    #[error("cell {cell} uses corner {corner}, but there are only {count} corners")]
    CornerOutOfRange { cell: usize, corner: CornerId, count: u32 },
    #[error("cell {0} repeats a corner")]
    RepeatedCorner(usize),
    #[error("corner {0} lies in no cell")]
    UnusedCorner(CornerId),
    #[error("no cells")]
    Empty,
}

/// A coloured cell complex on corners `0..corner_count`, optionally
/// remembering the slice it was cut from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MidsectionComplex {
    dim: usize,
    corner_count: u32,
    cells: Vec<Cell>,
    corner_origin: Option<Vec<(VertexId, VertexId)>>,
    cell_origin: Option<Vec<Simplex>>,
}

impl MidsectionComplex {
    /// Validating constructor; cells are stored sorted.
    pub fn from_cells(dim: usize, corner_count: u32, mut cells: Vec<Cell>) -> Result<Self, MidsectionError> {
        check_cells(dim, corner_count, &cells)?;
        cells.sort();
        Ok(MidsectionComplex {
            dim,
            corner_count,
            cells,
            corner_origin: None,
            cell_origin: None,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn corner_count(&self) -> u32 {
        self.corner_count
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    /// Mixed edge `(red, blue)` of the source slice for each corner.
    pub fn corner_origin(&self) -> Option<&[(VertexId, VertexId)]> {
        self.corner_origin.as_deref()
    }

    /// Source simplex of each cell.
    pub fn cell_origin(&self) -> Option<&[Simplex]> {
        self.cell_origin.as_deref()
    }

    pub fn kind_counts(&self) -> BTreeMap<CellKind, usize> {
        let mut out = BTreeMap::new();
        for c in &self.cells {
            *out.entry(c.kind).or_insert(0) += 1;
        }
        out
    }

    pub fn count(&self, kind: CellKind) -> usize {
        self.cells.iter().filter(|c| c.kind == kind).count()
    }

    /// Every edge with the cells containing it.
    pub fn edges(&self) -> BTreeMap<EdgeKey, Vec<usize>> {
        let mut out: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
        for (i, c) in self.cells.iter().enumerate() {
            for (a, b, col) in c.edges() {
                out.entry(edge_key(a, b, col)).or_default().push(i);
            }
        }
        out
    }

    /// Euler characteristic of a 2-dimensional midsection after splitting
    /// each quadrangle along the diagonal from its least corner.
    pub fn triangulated_euler_characteristic(&self) -> i64 {
        let quads = self.count(CellKind::Quadrangle) as i64;
        let tris = self.cells.len() as i64 - quads;
        let edges = self.edges().len() as i64 + quads;
        self.corner_count as i64 - edges + tris + 2 * quads
    }

    /// Form equal for two midsections exactly when a cell- and
    /// colour-preserving isomorphism exists.
    pub fn canonical_form(&self) -> CanonicalForm {
        self.hypergraph().canonical().form
    }

    /// Corners are hypergraph vertices of colour 0, cells are vertices of
    /// colour `1 + kind`; every cell edge becomes a hyperedge
    /// `{cell, a, b}` labelled by its colour.
    pub(crate) fn hypergraph(&self) -> Hypergraph {
        let n = self.corner_count as usize;
        let mut colours = vec![0u32; n];
        colours.extend(self.cells.iter().map(|c| 1 + c.kind.index()));
        let mut h = Hypergraph::new(0x4d53_0000 | self.dim as u32, colours);
        for (i, c) in self.cells.iter().enumerate() {
            let node = (n + i) as u32;
            for (a, b, col) in c.edges() {
                h.add_edge(col.index(), vec![node, a, b]);
            }
        }
        h
    }

    /// Applies a corner renaming (must be a permutation of `0..n`).
    pub fn relabel<F: Fn(CornerId) -> CornerId>(&self, f: F) -> MidsectionComplex {
        let cells: Vec<Cell> = self
            .cells
            .iter()
            .map(|c| {
                let raw = c.corners.iter().map(|&x| f(x)).collect();
                Cell::new(c.kind, raw)
            })
            .collect();
        MidsectionComplex::from_cells(self.dim, self.corner_count, cells).expect("relabelling keeps validity")
    }
}

fn check_cells(dim: usize, corner_count: u32, cells: &[Cell]) -> Result<(), MidsectionError> {
    if dim != 2 && dim != 3 {
        return Err(MidsectionError::WrongDimension(dim));
    }
    if cells.is_empty() {
        return Err(MidsectionError::Empty);
    }
    let mut used = vec![false; corner_count as usize];
    for (i, c) in cells.iter().enumerate() {
        if c.kind.dim() != dim {
            return Err(MidsectionError::KindDimension { cell: i, kind: c.kind, dim });
        }
        for &x in &c.corners {
            if x >= corner_count {
                return Err(MidsectionError::CornerOutOfRange {
                    cell: i,
                    corner: x,
                    count: corner_count,
                });
            }
            used[x as usize] = true;
        }
        if c.has_repeated_corner() {
            return Err(MidsectionError::RepeatedCorner(i));
        }
    }
    if let Some(x) = used.iter().position(|u| !u) {
        return Err(MidsectionError::UnusedCorner(x as CornerId));
    }
    Ok(())
}

/// Cuts a slice at half height. Corners are numbered by the ascending order
/// of the mixed edges `(red, blue)`.
pub fn midsection(slice: &CausalSlice) -> MidsectionComplex {
    let k = slice.complex();
    let is_red = |v: VertexId| k.colour(v) == Some(Colour::Red);
    let mut mixed: Vec<(VertexId, VertexId)> = Vec::new();
    for f in k.facets() {
        let (reds, blues): (Vec<VertexId>, Vec<VertexId>) = f.vertices().iter().partition(|&&v| is_red(v));
        for &r in &reds {
            for &b in &blues {
                mixed.push((r, b));
            }
        }
    }
    mixed.sort_unstable();
    mixed.dedup();
    let id = |r: VertexId, b: VertexId| mixed.binary_search(&(r, b)).expect("mixed edge") as CornerId;

    let mut cells: Vec<(Cell, Simplex)> = Vec::with_capacity(k.facets().len());
    for f in k.facets() {
        let (reds, blues): (Vec<VertexId>, Vec<VertexId>) = f.vertices().iter().partition(|&&v| is_red(v));
        let kind = CellKind::from_type(SimplexType { red: reds.len(), blue: blues.len() })
            .expect("slice facets are mixed and of dimension 3 or 4");
        let corners = match kind {
            CellKind::Quadrangle => {
                let (r, b) = (&reds, &blues);
                // (r0 b0) -red- (r1 b0) -blue- (r1 b1) -red- (r0 b1)
                vec![id(r[0], b[0]), id(r[1], b[0]), id(r[1], b[1]), id(r[0], b[1])]
            }
            CellKind::RedPrism => {
                let a: Vec<CornerId> = reds.iter().map(|&r| id(r, blues[0])).collect();
                let b: Vec<CornerId> = reds.iter().map(|&r| id(r, blues[1])).collect();
                [a, b].concat()
            }
            CellKind::BluePrism => {
                let a: Vec<CornerId> = blues.iter().map(|&b| id(reds[0], b)).collect();
                let b: Vec<CornerId> = blues.iter().map(|&b| id(reds[1], b)).collect();
                [a, b].concat()
            }
            _ => reds.iter().flat_map(|&r| blues.iter().map(move |&b| (r, b))).map(|(r, b)| id(r, b)).collect(),
        };
        cells.push((Cell::new(kind, corners), f.clone()));
    }
    cells.sort();
    let (cells, origins): (Vec<Cell>, Vec<Simplex>) = cells.into_iter().unzip();
    MidsectionComplex {
        dim: k.dim() - 1,
        corner_count: mixed.len() as u32,
        cells,
        corner_origin: Some(mixed),
        cell_origin: Some(origins),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{lemma3_slice, prism_slice};
    use crate::fixtures;

    #[test]
    fn quad_normalisation() {
        // cyclic order 3 -R- 1 -B- 0 -R- 2 -B- 3
        let c = Cell::new(CellKind::Quadrangle, vec![3, 1, 0, 2]);
        assert_eq!(c.corners(), &[0, 2, 3, 1]);
        let c = Cell::new(CellKind::Quadrangle, vec![0, 2, 3, 1]);
        assert_eq!(c.corners(), &[0, 2, 3, 1]);
    }

    #[test]
    fn prism_normalisation() {
        let c = Cell::new(CellKind::RedPrism, vec![9, 4, 7, 2, 8, 3]);
        // b triangle {2,8,3} holds the least corner
        assert_eq!(c.corners(), &[2, 3, 8, 9, 7, 4]);
    }

    #[test]
    fn prism_over_sigma_t_cells() {
        let s = midsection(&prism_slice(&fixtures::sigma_t(), None).unwrap());
        assert_eq!(s.cells().len(), 12);
        assert_eq!(s.count(CellKind::RedTriangle), 4);
        assert_eq!(s.count(CellKind::BlueTriangle), 4);
        assert_eq!(s.count(CellKind::Quadrangle), 4);
        assert_eq!(s.triangulated_euler_characteristic(), 2);
        assert!(s.edges().values().all(|cells| cells.len() == 2));
    }

    #[test]
    fn lemma3_cells() {
        let s = midsection(&lemma3_slice(&fixtures::sigma_t()).unwrap());
        let k = s.kind_counts();
        assert_eq!(k[&CellKind::RedTriangle], 4);
        assert_eq!(k[&CellKind::BlueTriangle], 4);
        assert_eq!(k[&CellKind::Quadrangle], 6);
    }

    #[test]
    fn four_dimensional_cells() {
        let s = midsection(&prism_slice(&fixtures::boundary_4simplex(), None).unwrap());
        assert_eq!(s.dim(), 3);
        for kind in [CellKind::RedTet, CellKind::BlueTet, CellKind::RedPrism, CellKind::BluePrism] {
            assert_eq!(s.count(kind), 5, "{kind}");
        }
    }

    #[test]
    fn corner_counts_match_types() {
        let slice = prism_slice(&fixtures::torus7(), None).unwrap();
        let s = midsection(&slice);
        for (cell, origin) in s.cells().iter().zip(s.cell_origin().unwrap()) {
            assert_eq!(cell.corners().len(), slice.simplex_type(origin).corner_count());
        }
    }

    #[test]
    fn form_is_relabelling_invariant() {
        let s = midsection(&lemma3_slice(&fixtures::sigma_t()).unwrap());
        let n = s.corner_count();
        let moved = s.relabel(|c| (c * 5 + 3) % n);
        assert_eq!(gcd(5, n), 1);
        assert_eq!(s.canonical_form(), moved.canonical_form());
    }

    fn gcd(a: u32, b: u32) -> u32 {
        if b == 0 {
            a
        } else {
            gcd(b, a % b)
        }
    }

    #[test]
    fn repeated_corner_rejected() {
        let cells = vec![Cell::new(CellKind::RedTriangle, vec![0, 0, 1])];
        assert_eq!(MidsectionComplex::from_cells(2, 2, cells), Err(MidsectionError::RepeatedCorner(0)));
    }
}
