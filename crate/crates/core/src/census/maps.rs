//! Midsection census: glue coloured polygons into closed oriented surfaces,
//! then keep those that are midsections of a slice.
//!
//! Pieces are red triangles, blue triangles and quadrangles with sides
//! alternately red and blue, all oriented alike; side `p` runs from corner
//! position `p` to `p + 1`. Two sides of the same colour are glued
//! reversing orientation. The search is rooted at a red triangle, which
//! every midsection of a slice contains.

use alloc::collections::btree_map::Entry;
use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use super::{CensusConfig, CensusTable, Step, Strategy};
use crate::canon::{CanonicalForm, Hypergraph};
use crate::colour::Colour;
use crate::midsection::{midsection, Cell, CellKind, MidsectionComplex};
use crate::reconstruct::{reconstruct, ReconstructError};
use crate::unionfind::{Merge, UndoUnionFind, UnionFind};

const KINDS: [CellKind; 3] = [CellKind::RedTriangle, CellKind::BlueTriangle, CellKind::Quadrangle];

fn size(kind: usize) -> usize {
    if kind == 2 {
        4
    } else {
        3
    }
}

fn side_colour(kind: usize, p: usize) -> Colour {
    match kind {
        0 => Colour::Red,
        1 => Colour::Blue,
        _ if p.is_multiple_of(2) => Colour::Red,
        _ => Colour::Blue,
    }
}

/// New piece kinds, with their joining side, for an open side of `colour`.
fn new_pieces(colour: Colour) -> &'static [(usize, usize)] {
    match colour {
        Colour::Red => &[(0, 0), (2, 0)],
        Colour::Blue => &[(1, 0), (2, 1)],
    }
}

/// Distinct triangulated surfaces with `triangles` triangles, with and
/// without the edge colouring.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ColouringRow {
    pub triangles: usize,
    pub coloured: u64,
    pub uncoloured: u64,
}

impl ColouringRow {
    /// `3^(3N/2)`, the number of ways to colour the `3N/2` edges with three
    /// colours, saturating.
    pub fn colouring_bound(&self) -> u128 {
        3u128.saturating_pow((3 * self.triangles / 2) as u32)
    }

    pub fn within_bound(&self) -> bool {
        (self.coloured as u128) <= self.colouring_bound().saturating_mul(self.uncoloured as u128)
    }
}

/// Resumable state of the polygon search.
pub struct MapSearch {
    config: CensusConfig,
    kinds: Vec<usize>,
    start: Vec<usize>,
    glued: Vec<[Option<(u8, u8)>; 4]>,
    corners: UndoUnionFind,
    table: CensusTable,
    trace: Vec<Step>,
    collect: Option<(usize, Vec<Vec<Step>>)>,
    capped: bool,
    colourings: Option<BTreeMap<usize, (BTreeSet<CanonicalForm>, BTreeSet<CanonicalForm>)>>,
}

impl MapSearch {
    pub fn new(config: CensusConfig) -> Self {
        assert!(config.vmax <= 64, "piece count is limited to 64");
        MapSearch {
            config,
            kinds: Vec::new(),
            start: Vec::new(),
            glued: Vec::new(),
            corners: UndoUnionFind::new(),
            table: CensusTable::new(Strategy::Midsection, &config),
            trace: Vec::new(),
            collect: None,
            capped: false,
            colourings: None,
        }
    }

    fn elem(&self, c: usize, p: usize) -> u32 {
        (self.start[c] + p % size(self.kinds[c])) as u32
    }

    fn add_piece(&mut self, kind: usize) {
        let c = self.kinds.len();
        self.kinds.push(kind);
        self.start.push(self.corners.len());
        self.glued.push([None; 4]);
        for _ in 0..size(kind) {
            self.corners.push(c as u32);
        }
    }

    fn remove_piece(&mut self) {
        self.kinds.pop();
        let s = self.start.pop().expect("piece");
        self.glued.pop();
        self.corners.truncate(s);
    }

    fn glue(&mut self, c: usize, p: usize, d: usize, q: usize) -> bool {
        let pairs = [(self.elem(c, p), self.elem(d, q + 1)), (self.elem(c, p + 1), self.elem(d, q))];
        for (x, y) in pairs {
            if self.corners.union(x, y) == Merge::Conflict {
                self.table.stats.rejected.degenerate += 1;
                return false;
            }
        }
        self.glued[c][p] = Some((d as u8, q as u8));
        self.glued[d][q] = Some((c as u8, p as u8));
        true
    }

    /// The open side to extend next: the lowest one starting at a corner
    /// whose fan is largest, so that corners close early and the closed
    /// corner prunes apply soon.
    fn next_open(&self) -> Option<(usize, usize)> {
        let mut best: Option<(u32, (usize, usize))> = None;
        for c in 0..self.kinds.len() {
            for p in 0..size(self.kinds[c]) {
                if self.glued[c][p].is_some() {
                    continue;
                }
                let fan = self.corners.class_size(self.elem(c, p));
                if best.is_none_or(|(f, _)| fan > f) {
                    best = Some((fan, (c, p)));
                }
            }
        }
        best.map(|b| b.1)
    }

    fn choices(&self, c: usize, p: usize) -> Vec<Step> {
        let colour = side_colour(self.kinds[c], p);
        let mut out = Vec::new();
        for d in 0..self.kinds.len() {
            for q in 0..size(self.kinds[d]) {
                if (d, q) != (c, p) && self.glued[d][q].is_none() && side_colour(self.kinds[d], q) == colour {
                    out.push(Step::Glue { piece: d as u8, face: q as u8 });
                }
            }
        }
        if self.kinds.len() < self.config.vmax {
            for &(kind, _) in new_pieces(colour) {
                out.push(Step::New(kind as u8));
            }
        }
        out
    }

    fn apply(&mut self, c: usize, p: usize, step: Step) -> Option<usize> {
        let mark = self.corners.mark();
        let ok = match step {
            Step::Glue { piece, face } => self.glue(c, p, piece as usize, face as usize),
            Step::New(kind) => {
                let kind = kind as usize;
                let colour = side_colour(self.kinds[c], p);
                let q = new_pieces(colour).iter().find(|n| n.0 == kind).expect("offered kind").1;
                self.add_piece(kind);
                let d = self.kinds.len() - 1;
                self.glue(c, p, d, q)
            }
        };
        if ok {
            Some(mark)
        } else {
            self.corners.rollback(mark);
            if matches!(step, Step::New(_)) {
                self.remove_piece();
            }
            None
        }
    }

    fn undo(&mut self, c: usize, p: usize, step: Step, mark: usize) {
        let (d, q) = self.glued[c][p].expect("glued");
        self.glued[c][p] = None;
        self.glued[d as usize][q as usize] = None;
        self.corners.rollback(mark);
        if matches!(step, Step::New(_)) {
            self.remove_piece();
        }
    }

    fn dfs(&mut self) {
        if let Some((depth, out)) = &mut self.collect {
            if self.trace.len() == *depth {
                out.push(self.trace.clone());
                return;
            }
        }
        self.table.stats.nodes += 1;
        if self.config.max_nodes.is_some_and(|m| self.table.stats.nodes > m) {
            self.capped = true;
            return;
        }
        if !self.viable() {
            return;
        }
        let Some((c, p)) = self.next_open() else {
            if let Some((_, out)) = &mut self.collect {
                out.push(self.trace.clone());
            } else {
                self.leaf();
            }
            return;
        };
        for step in self.choices(c, p) {
            if self.capped {
                return;
            }
            if let Some(mark) = self.apply(c, p, step) {
                self.trace.push(step);
                self.dfs();
                self.trace.pop();
                self.undo(c, p, step, mark);
            }
        }
    }

    /// Sound prunes on the partial surface. Gluing sides only joins fans of
    /// corners, so the partial complex is a surface with boundary whose genus
    /// can only grow; and two distinct edges with the same ends and colour
    /// stay distinct, so the final surface would not be simple.
    fn viable(&mut self) -> bool {
        const NONE: u32 = u32::MAX;
        let n = self.corners.len();
        let root: Vec<u32> = (0..n as u32).map(|x| self.corners.find(x)).collect();
        // outgoing open side at each boundary corner class, as an element id
        let mut open_out = vec![NONE; n];
        let mut glued_edges: Vec<(u32, u32, Colour)> = Vec::new();
        let mut open_edges: Vec<(u32, u32, Colour)> = Vec::new();
        for c in 0..self.kinds.len() {
            for p in 0..size(self.kinds[c]) {
                let (a, b) = (root[self.elem(c, p) as usize], root[self.elem(c, p + 1) as usize]);
                let key = (a.min(b), a.max(b), side_colour(self.kinds[c], p));
                match self.glued[c][p] {
                    Some((d, q)) if (c, p) < (d as usize, q as usize) => glued_edges.push(key),
                    Some(_) => {}
                    None => {
                        open_out[a as usize] = self.elem(c, p);
                        open_edges.push(key);
                    }
                }
            }
        }
        glued_edges.sort_unstable();
        let simple = glued_edges.windows(2).all(|w| w[0] != w[1])
            && open_edges.iter().all(|e| glued_edges.binary_search(e).is_err());
        if !simple {
            self.table.stats.rejected.not_simple += 1;
            return false;
        }

        // boundary cycles: each boundary corner has one outgoing open side
        let mut seen = vec![false; n];
        let mut boundaries = 0i64;
        for start in 0..n {
            let first = open_out[start];
            if first == NONE || seen[first as usize] {
                continue;
            }
            boundaries += 1;
            let mut e = first as usize;
            while !seen[e] {
                seen[e] = true;
                let (c, p) = self.side_of(e);
                e = open_out[root[self.elem(c, p + 1) as usize] as usize] as usize;
            }
        }
        let classes = (n - self.corners.mark()) as i64;
        let edges = (glued_edges.len() + open_edges.len()) as i64;
        let chi = classes - edges + self.kinds.len() as i64;
        if 2 - boundaries - chi > 2 * self.config.genus as i64 {
            self.table.stats.rejected.other_genus += 1;
            return false;
        }

        if self.closed_obstruction(&root, &open_out, glued_edges.iter().chain(&open_edges)) {
            self.table.stats.rejected.obstruction += 1;
            return false;
        }
        true
    }

    /// Piece and position of corner element `e`.
    fn side_of(&self, e: usize) -> (usize, usize) {
        let c = self.start.partition_point(|&s| s <= e) - 1;
        (c, e - self.start[c])
    }

    /// A closed corner (all sides around it glued) is never identified with
    /// another corner again, so red and blue paths joining it to a distinct
    /// corner persist and the surface can never be a midsection.
    fn closed_obstruction<'a>(
        &self,
        root: &[u32],
        open_out: &[u32],
        edges: impl Iterator<Item = &'a (u32, u32, Colour)>,
    ) -> bool {
        let n = root.len();
        let (mut by_red, mut by_blue) = (UnionFind::new(n), UnionFind::new(n));
        for &(a, b, c) in edges {
            match c {
                Colour::Red => by_red.union(a as usize, b as usize),
                Colour::Blue => by_blue.union(a as usize, b as usize),
            };
        }
        let mut buckets: Vec<(usize, usize, bool)> = (0..n)
            .filter(|&x| root[x] as usize == x)
            .map(|x| (by_red.find(x), by_blue.find(x), open_out[x] == u32::MAX))
            .collect();
        buckets.sort_unstable();
        buckets
            .windows(2)
            .any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1) && (w[0].2 || w[1].2))
    }

    /// Dense corner labels and their count.
    fn corner_labels(&self) -> (Vec<u32>, u32) {
        let mut label = vec![u32::MAX; self.corners.len()];
        let mut out = vec![0; self.corners.len()];
        let mut next = 0;
        for (x, slot) in out.iter_mut().enumerate() {
            let r = self.corners.find(x as u32) as usize;
            if label[r] == u32::MAX {
                label[r] = next;
                next += 1;
            }
            *slot = label[r];
        }
        (out, next)
    }

    fn leaf(&mut self) {
        self.table.stats.leaves += 1;
        let (labels, corner_count) = self.corner_labels();
        let faces = self.kinds.len() as i64;
        let sides: usize = self.kinds.iter().map(|&k| size(k)).sum();
        let edges = (sides / 2) as i64;
        let chi = corner_count as i64 - edges + faces;
        if chi != 2 - 2 * self.config.genus as i64 {
            self.table.stats.rejected.other_genus += 1;
            return;
        }
        if self.colourings.is_some() {
            self.record_colouring(&labels, corner_count);
        }
        let cells: Vec<Cell> = (0..self.kinds.len())
            .map(|c| {
                let raw = (0..size(self.kinds[c])).map(|p| labels[self.elem(c, p) as usize]).collect();
                Cell::new(KINDS[self.kinds[c]], raw)
            })
            .collect();
        let s = MidsectionComplex::from_cells(2, corner_count, cells).expect("no corner repeats within a piece");
        if s.edges().len() as i64 != edges {
            self.table.stats.rejected.not_simple += 1;
            return;
        }
        let r = &mut self.table.stats.rejected;
        match reconstruct(&s) {
            Err(ReconstructError::Obstruction(..)) => r.obstruction += 1,
            Err(ReconstructError::Collision(_) | ReconstructError::DegenerateCell { .. }) => r.collision += 1,
            Err(ReconstructError::Validation(_)) => r.validation += 1,
            Ok(k) if midsection(&k).canonical_form() != s.canonical_form() => r.mismatch += 1,
            Ok(k) => {
                self.table.stats.accepted += 1;
                self.table.insert(k.complex().clone());
            }
        }
    }

    /// Splits each quadrangle along the diagonal from its least corner and
    /// records the coloured and uncoloured forms of the triangulation.
    fn record_colouring(&mut self, labels: &[u32], corner_count: u32) {
        // edge node per glued side pair, keyed by its lower side
        let mut edge_of: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        let mut edge_ends: Vec<(u32, u32, u32)> = Vec::new();
        for c in 0..self.kinds.len() {
            for p in 0..size(self.kinds[c]) {
                let (d, q) = self.glued[c][p].expect("closed");
                let key = (c, p).min((d as usize, q as usize));
                if let Entry::Vacant(e) = edge_of.entry(key) {
                    e.insert(edge_ends.len());
                    let a = labels[self.elem(c, p) as usize];
                    let b = labels[self.elem(c, p + 1) as usize];
                    edge_ends.push((a, b, 1 + side_colour(self.kinds[c], p).index()));
                }
            }
        }
        let side_edge = |c: usize, p: usize| {
            let (d, q) = self.glued[c][p].expect("closed");
            edge_of[&(c, p).min((d as usize, q as usize))]
        };
        let mut triangles: Vec<[usize; 3]> = Vec::new();
        for c in 0..self.kinds.len() {
            if self.kinds[c] != 2 {
                triangles.push([side_edge(c, 0), side_edge(c, 1), side_edge(c, 2)]);
                continue;
            }
            let lab: Vec<u32> = (0..4).map(|p| labels[self.elem(c, p) as usize]).collect();
            let i = (0..4).min_by_key(|&i| lab[i]).expect("four corners");
            let diagonal = edge_ends.len();
            edge_ends.push((lab[i], lab[(i + 2) % 4], 3));
            triangles.push([side_edge(c, i), side_edge(c, (i + 1) % 4), diagonal]);
            triangles.push([side_edge(c, (i + 2) % 4), side_edge(c, (i + 3) % 4), diagonal]);
        }
        let n = triangles.len();
        let form = |coloured: bool| {
            let base = corner_count as usize;
            let mut colours = vec![0u32; base];
            colours.extend(edge_ends.iter().map(|e| if coloured { e.2 } else { 1 }));
            colours.extend(core::iter::repeat_n(5, n));
            let mut h = Hypergraph::new(0x5452_0000 | coloured as u32, colours);
            for (e, &(a, b, _)) in edge_ends.iter().enumerate() {
                h.add_edge(0, vec![(base + e) as u32, a, b]);
            }
            for (t, es) in triangles.iter().enumerate() {
                let node = (base + edge_ends.len() + t) as u32;
                h.add_edge(1, vec![node, (base + es[0]) as u32, (base + es[1]) as u32, (base + es[2]) as u32]);
            }
            h.canonical().form
        };
        let (c, u) = (form(true), form(false));
        let entry = self.colourings.as_mut().expect("enabled").entry(n).or_default();
        entry.0.insert(c);
        entry.1.insert(u);
    }

    fn begin(&mut self) {
        self.add_piece(0);
    }

    fn replay(&mut self, prefix: &[Step]) {
        self.begin();
        for &step in prefix {
            let (c, p) = self.next_open().expect("prefix fits the search");
            self.apply(c, p, step).expect("prefix steps are legal");
            self.trace.push(step);
        }
    }

    pub fn partitions(config: CensusConfig, depth: usize) -> Vec<Vec<Step>> {
        let mut s = MapSearch::new(CensusConfig { max_nodes: None, ..config });
        s.collect = Some((depth, Vec::new()));
        s.begin();
        s.dfs();
        s.collect.take().map(|c| c.1).unwrap_or_default()
    }

    pub fn run(config: CensusConfig, prefix: &[Step]) -> CensusTable {
        let mut s = MapSearch::new(config);
        s.replay(prefix);
        s.dfs();
        let mut table = s.table;
        table.complete = !s.capped;
        table
    }

    /// Runs the whole search and also reports, per triangle count, the
    /// number of distinct coloured and uncoloured triangulations met at the
    /// leaves of the right genus.
    pub fn run_with_colourings(config: CensusConfig) -> (CensusTable, Vec<ColouringRow>) {
        let mut s = MapSearch::new(config);
        s.colourings = Some(BTreeMap::new());
        s.replay(&[]);
        s.dfs();
        let rows = s
            .colourings
            .take()
            .unwrap_or_default()
            .into_iter()
            .map(|(triangles, (c, u))| ColouringRow {
                triangles,
                coloured: c.len() as u64,
                uncoloured: u.len() as u64,
            })
            .collect();
        let mut table = s.table;
        table.complete = !s.capped;
        (table, rows)
    }
}

/// Census of slices obtained by filtering polygon surfaces with at most
/// `config.vmax` cells through reconstruction.
pub fn enumerate_via_midsections(config: CensusConfig) -> CensusTable {
    MapSearch::run(config, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_slices;

    #[test]
    fn agrees_with_direct_search_at_small_volume() {
        let config = CensusConfig::new(12, 0);
        let a = enumerate_via_midsections(config);
        let b = enumerate_slices(config);
        assert!(a.same_classes(&b));
        assert!(a.total() > 0);
    }

    #[test]
    fn colouring_counts_respect_the_bound() {
        let (_, rows) = MapSearch::run_with_colourings(CensusConfig::new(8, 0));
        assert!(!rows.is_empty());
        assert!(rows.iter().all(ColouringRow::within_bound));
    }
}
