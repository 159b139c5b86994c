//! Direct census: glue typed tetrahedra along mixed triangles.
//!
//! Tetrahedra have slots `0..4` coloured by type, `(3,1)` as `RRRB`, `(2,2)`
//! as `RRBB` and `(1,3)` as `RBBB`, and are all positively oriented in slot
//! order. A face pairing must preserve colours and reverse orientation,
//! which fixes the slot map uniquely for mixed triangles. Mono-coloured
//! triangles always lie on the boundary and are never glued; mixed ones are
//! always glued.
//!
//! A new tetrahedron joins through one fixed face per triangle pattern: the
//! colour- and orientation-preserving symmetries of each type act
//! transitively on its faces of a given pattern.

use alloc::vec;
use alloc::vec::Vec;

use super::{CensusConfig, CensusTable, Step, Strategy};
use crate::causal::validate_slice;
use crate::colour::Colour;
use crate::complex::{ColouredComplex, ComplexError};
use crate::unionfind::{Merge, UndoUnionFind};

const R: Colour = Colour::Red;
const B: Colour = Colour::Blue;
const TYPES: [[Colour; 4]; 3] = [[R, R, R, B], [R, R, B, B], [R, B, B, B]];

const EDGES: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn edge_index(a: usize, b: usize) -> usize {
    let (a, b) = if a < b { (a, b) } else { (b, a) };
    EDGES.iter().position(|&e| e == (a, b)).expect("edge")
}

fn face_slots(i: usize) -> [usize; 3] {
    let mut out = [0; 3];
    let mut k = 0;
    for s in 0..4 {
        if s != i {
            out[k] = s;
            k += 1;
        }
    }
    out
}

/// Red slots on face `i` of a tetrahedron of type `ty`.
fn pattern(ty: usize, i: usize) -> usize {
    face_slots(i).iter().filter(|&&s| TYPES[ty][s] == R).count()
}

fn mixed(ty: usize, i: usize) -> bool {
    (1..=2).contains(&pattern(ty, i))
}

const PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
const PERM_SIGN: [i32; 6] = [1, -1, -1, 1, 1, -1];

/// Slot map from face `i` of type `ta` onto face `j` of type `tb`: the
/// image of each slot of face `i`, listed in ascending slot order.
fn face_map(ta: usize, i: usize, tb: usize, j: usize) -> Option<[usize; 3]> {
    let (a, b) = (face_slots(i), face_slots(j));
    let face_sign = if (i + j).is_multiple_of(2) { 1 } else { -1 };
    PERMS.iter().zip(PERM_SIGN).find_map(|(p, sign)| {
        let colours_match = (0..3).all(|k| TYPES[ta][a[k]] == TYPES[tb][b[p[k]]]);
        (colours_match && face_sign * sign == -1).then(|| [b[p[0]], b[p[1]], b[p[2]]])
    })
}

/// New tetrahedron types, with their joining face, for a face of `pattern`.
fn new_pieces(pattern: usize) -> &'static [(usize, usize)] {
    match pattern {
        // RRB: (3,1) through face 0, (2,2) through face 2
        2 => &[(0, 0), (1, 2)],
        // RBB: (1,3) through face 1, (2,2) through face 0
        1 => &[(2, 1), (1, 0)],
        _ => &[],
    }
}

/// Resumable state of the direct search.
pub struct DirectSearch {
    config: CensusConfig,
    maps: Vec<Option<[usize; 3]>>,
    types: Vec<usize>,
    glued: Vec<[Option<(u8, u8)>; 4]>,
    verts: UndoUnionFind,
    edges: UndoUnionFind,
    table: CensusTable,
    trace: Vec<Step>,
    collect: Option<(usize, Vec<Vec<Step>>)>,
    capped: bool,
}

impl DirectSearch {
    pub fn new(config: CensusConfig) -> Self {
        let mut maps = Vec::with_capacity(144);
        for ta in 0..3 {
            for i in 0..4 {
                for tb in 0..3 {
                    for j in 0..4 {
                        maps.push(face_map(ta, i, tb, j));
                    }
                }
            }
        }
        DirectSearch {
            config,
            maps,
            types: Vec::new(),
            glued: Vec::new(),
            verts: UndoUnionFind::new(),
            edges: UndoUnionFind::new(),
            table: CensusTable::new(Strategy::Direct, &config),
            trace: Vec::new(),
            collect: None,
            capped: false,
        }
    }

    fn map(&self, ta: usize, i: usize, tb: usize, j: usize) -> Option<[usize; 3]> {
        self.maps[((ta * 4 + i) * 3 + tb) * 4 + j]
    }

    fn add_tet(&mut self, ty: usize) {
        let t = self.types.len() as u32;
        self.types.push(ty);
        self.glued.push([None; 4]);
        for _ in 0..4 {
            self.verts.push(t);
        }
        for _ in 0..6 {
            self.edges.push(t);
        }
    }

    fn remove_tet(&mut self) {
        let t = self.types.len() - 1;
        self.types.pop();
        self.glued.pop();
        self.verts.truncate(4 * t);
        self.edges.truncate(6 * t);
    }

    /// Glues face `(t, i)` to `(u, j)`. On failure the caller rolls back.
    fn glue(&mut self, t: usize, i: usize, u: usize, j: usize) -> bool {
        let Some(img) = self.map(self.types[t], i, self.types[u], j) else {
            return false;
        };
        let a = face_slots(i);
        for k in 0..3 {
            if self.verts.union((4 * t + a[k]) as u32, (4 * u + img[k]) as u32) == Merge::Conflict {
                self.table.stats.rejected.degenerate += 1;
                return false;
            }
        }
        for (k, l) in [(0, 1), (0, 2), (1, 2)] {
            let e1 = 6 * t + edge_index(a[k], a[l]);
            let e2 = 6 * u + edge_index(img[k], img[l]);
            let mono = TYPES[self.types[t]][a[k]] == TYPES[self.types[t]][a[l]];
            match self.edges.union(e1 as u32, e2 as u32) {
                Merge::Conflict => {
                    self.table.stats.rejected.degenerate += 1;
                    return false;
                }
                Merge::Already if mono => {
                    self.table.stats.rejected.closed_boundary_edge += 1;
                    return false;
                }
                _ => {}
            }
        }
        self.glued[t][i] = Some((u as u8, j as u8));
        self.glued[u][j] = Some((t as u8, i as u8));
        true
    }

    fn unglue(&mut self, t: usize, i: usize, u: usize, j: usize) {
        self.glued[t][i] = None;
        self.glued[u][j] = None;
    }

    fn lowest_open(&self) -> Option<(usize, usize)> {
        (0..self.types.len())
            .flat_map(|t| (0..4).map(move |i| (t, i)))
            .find(|&(t, i)| self.glued[t][i].is_none() && mixed(self.types[t], i))
    }

    /// Choices available at the current node, in search order.
    fn choices(&self, t: usize, i: usize) -> Vec<Step> {
        let p = pattern(self.types[t], i);
        let mut out = Vec::new();
        for u in 0..self.types.len() {
            for j in 0..4 {
                if (u, j) != (t, i)
                    && self.glued[u][j].is_none()
                    && mixed(self.types[u], j)
                    && pattern(self.types[u], j) == p
                {
                    out.push(Step::Glue { piece: u as u8, face: j as u8 });
                }
            }
        }
        if self.types.len() < self.config.vmax {
            for &(ty, _) in new_pieces(p) {
                out.push(Step::New(ty as u8));
            }
        }
        out
    }

    /// Applies a step at face `(t, i)`; returns the marks needed to undo it,
    /// or `None` (with state restored) if the step is illegal.
    fn apply(&mut self, t: usize, i: usize, step: Step) -> Option<(usize, usize)> {
        let marks = (self.verts.mark(), self.edges.mark());
        let ok = match step {
            Step::Glue { piece, face } => self.glue(t, i, piece as usize, face as usize),
            Step::New(ty) => {
                let ty = ty as usize;
                let j = new_pieces(pattern(self.types[t], i))
                    .iter()
                    .find(|p| p.0 == ty)
                    .expect("offered type")
                    .1;
                self.add_tet(ty);
                let u = self.types.len() - 1;
                self.glue(t, i, u, j)
            }
        };
        if ok {
            Some(marks)
        } else {
            self.verts.rollback(marks.0);
            self.edges.rollback(marks.1);
            if matches!(step, Step::New(_)) {
                self.remove_tet();
            }
            None
        }
    }

    fn undo(&mut self, t: usize, i: usize, step: Step, marks: (usize, usize)) {
        let (u, j) = self.glued[t][i].expect("glued");
        self.unglue(t, i, u as usize, j as usize);
        self.verts.rollback(marks.0);
        self.edges.rollback(marks.1);
        if matches!(step, Step::New(_)) {
            self.remove_tet();
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
        let Some((t, i)) = self.lowest_open() else {
            if let Some((_, out)) = &mut self.collect {
                out.push(self.trace.clone());
            } else {
                self.leaf();
            }
            return;
        };
        for step in self.choices(t, i) {
            if self.capped {
                return;
            }
            if let Some(marks) = self.apply(t, i, step) {
                self.trace.push(step);
                self.dfs();
                self.trace.pop();
                self.undo(t, i, step, marks);
            }
        }
    }

    /// Sound prunes: vertex classes only ever merge, so two tetrahedra on the
    /// same vertices, or a triangle that cannot end up in at most two
    /// tetrahedra glued to each other, stay that way.
    fn viable(&mut self) -> bool {
        let n = self.types.len();
        let mut tets: Vec<[u32; 4]> = (0..n)
            .map(|t| {
                let mut v = [0; 4];
                for (s, x) in v.iter_mut().enumerate() {
                    *x = self.verts.find((4 * t + s) as u32);
                }
                v.sort_unstable();
                v
            })
            .collect();
        let mut faces: Vec<([u32; 3], usize, usize)> = Vec::with_capacity(4 * n);
        for t in 0..n {
            for i in 0..4 {
                let a = face_slots(i);
                let mut f = [0; 3];
                for k in 0..3 {
                    f[k] = self.verts.find((4 * t + a[k]) as u32);
                }
                f.sort_unstable();
                faces.push((f, t, i));
            }
        }
        tets.sort_unstable();
        if tets.windows(2).any(|w| w[0] == w[1]) {
            self.table.stats.rejected.duplicate_simplex += 1;
            return false;
        }
        faces.sort_unstable();
        for w in faces.windows(2) {
            let ((f, t, i), (g, u, j)) = (w[0], w[1]);
            if f != g {
                continue;
            }
            let partners = self.glued[t][i] == Some((u as u8, j as u8));
            if !partners && (self.glued[t][i].is_some() || self.glued[u][j].is_some() || !mixed(self.types[t], i)) {
                self.table.stats.rejected.validation += 1;
                return false;
            }
        }
        true
    }

    fn leaf(&mut self) {
        self.table.stats.leaves += 1;
        let n = self.types.len();
        let mut ids: Vec<u32> = vec![u32::MAX; 4 * n];
        let mut colours = Vec::new();
        let mut facets = Vec::with_capacity(n);
        for t in 0..n {
            let mut f = Vec::with_capacity(4);
            for s in 0..4 {
                let root = self.verts.find((4 * t + s) as u32) as usize;
                if ids[root] == u32::MAX {
                    ids[root] = colours.len() as u32;
                    colours.push((ids[root], TYPES[self.types[t]][s]));
                }
                f.push(ids[root]);
            }
            facets.push(f);
        }
        let k = match ColouredComplex::build(3, colours, facets) {
            Ok(k) => k,
            Err(ComplexError::DuplicateSimplex(_)) => {
                self.table.stats.rejected.duplicate_simplex += 1;
                return;
            }
            Err(e) => unreachable!("glued tetrahedra are well formed: {e}"),
        };
        match validate_slice(&k, false) {
            Ok(s) if s.genus() == Some(self.config.genus) => {
                self.table.stats.accepted += 1;
                self.table.insert(k);
            }
            Ok(_) => self.table.stats.rejected.other_genus += 1,
            Err(_) => self.table.stats.rejected.validation += 1,
        }
    }

    fn start(&mut self) {
        self.add_tet(0);
    }

    /// Splits the search into independent partitions given by the choices
    /// made in the first `depth` steps.
    pub fn partitions(config: CensusConfig, depth: usize) -> Vec<Vec<Step>> {
        let mut s = DirectSearch::new(CensusConfig { max_nodes: None, ..config });
        s.collect = Some((depth, Vec::new()));
        s.start();
        s.dfs();
        s.collect.take().map(|c| c.1).unwrap_or_default()
    }

    /// Runs the subtree below `prefix` (the whole search when empty).
    pub fn run(config: CensusConfig, prefix: &[Step]) -> CensusTable {
        let mut s = DirectSearch::new(config);
        s.start();
        for &step in prefix {
            let (t, i) = s.lowest_open().expect("prefix fits the search");
            s.apply(t, i, step).expect("prefix steps are legal");
            s.trace.push(step);
        }
        s.dfs();
        let mut table = s.table;
        table.complete = !s.capped;
        table
    }
}

/// Exhaustive direct census up to `config.vmax` tetrahedra.
pub fn enumerate_slices(config: CensusConfig) -> CensusTable {
    DirectSearch::run(config, &[])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::prism_slice;
    use crate::fixtures;

    #[test]
    fn face_maps_exist_exactly_for_equal_patterns() {
        for ta in 0..3 {
            for i in 0..4 {
                for tb in 0..3 {
                    for j in 0..4 {
                        let same = pattern(ta, i) == pattern(tb, j);
                        assert_eq!(face_map(ta, i, tb, j).is_some(), same, "{ta} {i} {tb} {j}");
                    }
                }
            }
        }
    }

    #[test]
    fn new_piece_faces_have_the_pattern() {
        for p in [1, 2] {
            for &(ty, j) in new_pieces(p) {
                assert_eq!(pattern(ty, j), p);
            }
        }
    }

    #[test]
    fn census_contains_the_prism() {
        let table = enumerate_slices(CensusConfig::new(12, 0));
        let prism = prism_slice(&fixtures::sigma_t(), None).unwrap();
        let form = prism.complex().canonical_form();
        assert!(table.forms(12).contains(&&form));
    }

    #[test]
    fn partitions_cover_the_search() {
        let config = CensusConfig::new(12, 0);
        let whole = enumerate_slices(config);
        let mut merged = CensusTable::new(Strategy::Direct, &config);
        for p in DirectSearch::partitions(config, 3) {
            merged.merge(DirectSearch::run(config, &p));
        }
        assert!(merged.same_classes(&whole));
        assert_eq!(merged.stats.leaves, whole.stats.leaves);
    }
}
