//! Finite abstract simplicial complexes with red/blue vertex colouring.
//!
//! A complex is stored as its dimension, the colour of every vertex and the
//! sorted list of maximal simplices. Lower-dimensional simplices are derived
//! on demand as the downward closure of the facets, so the stored data can
//! never disagree with itself.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::colour::Colour;
use crate::unionfind::UnionFind;

pub type VertexId = u32;

/// A simplex as a strictly increasing list of vertex ids.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex(Vec<VertexId>);

impl Simplex {
    /// Sorts the ids; fails on a repeated vertex.
    pub fn new(mut vertices: Vec<VertexId>) -> Result<Self, ComplexError> {
        vertices.sort_unstable();
        for w in vertices.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::RepeatedVertex {
                    simplex: vertices.clone(),
                    vertex: w[0],
                });
            }
        }
        Ok(Simplex(vertices))
    }

    pub(crate) fn from_sorted(vertices: Vec<VertexId>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        Simplex(vertices)
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    /// Number of vertices minus one.
    pub fn dim(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn contains_all(&self, other: &Simplex) -> bool {
        other.0.iter().all(|v| self.contains(*v))
    }

    /// The face opposite the vertex at position `i`.
    pub fn face(&self, i: usize) -> Simplex {
        let mut v = self.0.clone();
        v.remove(i);
        Simplex(v)
    }

    /// Codimension-one faces, in order of the removed position.
    pub fn faces(&self) -> impl Iterator<Item = Simplex> + '_ {
        (0..self.0.len()).map(move |i| self.face(i))
    }

    /// All subsets with exactly `k` vertices, lexicographically ordered.
    pub fn subsets(&self, k: usize) -> Vec<Simplex> {
        let n = self.0.len();
        let mut out = Vec::new();
        if k > n {
            return out;
        }
        let mut idx: Vec<usize> = (0..k).collect();
        loop {
            out.push(Simplex(idx.iter().map(|&i| self.0[i]).collect()));
            let mut i = k;
            while i > 0 && idx[i - 1] == n - k + i - 1 {
                i -= 1;
            }
            if i == 0 {
                return out;
            }
            idx[i - 1] += 1;
            for j in i..k {
                idx[j] = idx[j - 1] + 1;
            }
        }
    }

    /// Vertices of `self` not in `other`.
    pub fn minus(&self, other: &Simplex) -> Simplex {
        Simplex(self.0.iter().copied().filter(|v| !other.contains(*v)).collect())
    }

    pub fn union(&self, other: &Simplex) -> Simplex {
        let mut v: Vec<VertexId> = self.0.iter().chain(other.0.iter()).copied().collect();
        v.sort_unstable();
        v.dedup();
        Simplex(v)
    }

    pub fn into_vec(self) -> Vec<VertexId> {
        self.0
    }
}

impl fmt::Display for Simplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ComplexError {
    #[error("simplex {simplex:?} lists vertex {vertex} more than once")]
    RepeatedVertex { simplex: Vec<VertexId>, vertex: VertexId },
    #[error("simplex {simplex:?} uses undeclared vertex {vertex}")]
    UndeclaredVertex { simplex: Vec<VertexId>, vertex: VertexId },
    #[error("simplex {simplex:?} has {found} vertices, expected {expected}")]
    WrongArity {
        simplex: Vec<VertexId>,
        expected: usize,
        found: usize,
    },
    #[error("simplex {0} is listed twice")]
    DuplicateSimplex(Simplex),
    #[error("vertex {0} is declared twice")]
    DuplicateVertex(VertexId),
    #[error("vertex {0} lies in no maximal simplex")]
    IsolatedVertex(VertexId),
    #[error("complex has no simplices")]
    Empty,
}

/// A pure `dim`-dimensional abstract simplicial complex with coloured vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ColouredComplex {
    dim: usize,
    colours: BTreeMap<VertexId, Colour>,
    facets: Vec<Simplex>,
}

impl ColouredComplex {
    /// Validating constructor. Every facet must have `dim + 1` distinct,
    /// declared vertices; every declared vertex must be used; a facet may not
    /// be listed twice.
    pub fn build<C, F, S>(dim: usize, colours: C, facets: F) -> Result<Self, ComplexError>
    where
        C: IntoIterator<Item = (VertexId, Colour)>,
        F: IntoIterator<Item = S>,
        S: Into<Vec<VertexId>>,
    {
        let mut colour_map = BTreeMap::new();
        for (v, c) in colours {
            if colour_map.insert(v, c).is_some() {
                return Err(ComplexError::DuplicateVertex(v));
            }
        }
        let mut list = Vec::new();
        for s in facets {
            let raw: Vec<VertexId> = s.into();
            if raw.len() != dim + 1 {
                return Err(ComplexError::WrongArity {
                    found: raw.len(),
                    simplex: raw,
                    expected: dim + 1,
                });
            }
            let simplex = Simplex::new(raw)?;
            if let Some(&v) = simplex.vertices().iter().find(|v| !colour_map.contains_key(v)) {
                return Err(ComplexError::UndeclaredVertex {
                    simplex: simplex.into_vec(),
                    vertex: v,
                });
            }
            list.push(simplex);
        }
        if list.is_empty() {
            return Err(ComplexError::Empty);
        }
        list.sort();
        for w in list.windows(2) {
            if w[0] == w[1] {
                return Err(ComplexError::DuplicateSimplex(w[0].clone()));
            }
        }
        let used: BTreeSet<VertexId> = list.iter().flat_map(|s| s.vertices().iter().copied()).collect();
        if let Some(&v) = colour_map.keys().find(|v| !used.contains(v)) {
            return Err(ComplexError::IsolatedVertex(v));
        }
        Ok(ColouredComplex {
            dim,
            colours: colour_map,
            facets: list,
        })
    }

    /// Builds from facets, colouring each vertex with `colour_of`.
    pub fn from_facets<F>(dim: usize, facets: Vec<Vec<VertexId>>, colour_of: F) -> Result<Self, ComplexError>
    where
        F: Fn(VertexId) -> Colour,
    {
        let verts: BTreeSet<VertexId> = facets.iter().flatten().copied().collect();
        Self::build(dim, verts.into_iter().map(|v| (v, colour_of(v))), facets)
    }

    /// The empty complex of a given dimension, e.g. the boundary of a closed
    /// manifold.
    pub fn empty(dim: usize) -> Self {
        ColouredComplex {
            dim,
            colours: BTreeMap::new(),
            facets: Vec::new(),
        }
    }

    /// Internal constructor for facets already known to be valid.
    pub(crate) fn from_parts(dim: usize, colours: BTreeMap<VertexId, Colour>, mut facets: Vec<Simplex>) -> Self {
        facets.sort();
        facets.dedup();
        ColouredComplex { dim, colours, facets }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.facets.is_empty()
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn vertex_count(&self) -> usize {
        self.colours.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.colours.keys().copied()
    }

    pub fn colours(&self) -> &BTreeMap<VertexId, Colour> {
        &self.colours
    }

    pub fn colour(&self, v: VertexId) -> Option<Colour> {
        self.colours.get(&v).copied()
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.colours.contains_key(&v)
    }

    /// The set `K^p` of `p`-simplices.
    pub fn simplices(&self, p: usize) -> BTreeSet<Simplex> {
        if p > self.dim {
            return BTreeSet::new();
        }
        if p == self.dim {
            return self.facets.iter().cloned().collect();
        }
        self.facets.iter().flat_map(|f| f.subsets(p + 1)).collect()
    }

    /// `|K^p|`.
    pub fn count(&self, p: usize) -> usize {
        if p == 0 {
            self.colours.len()
        } else {
            self.simplices(p).len()
        }
    }

    /// `(|K^0|, ..., |K^D|)`.
    pub fn f_vector(&self) -> Vec<usize> {
        (0..=self.dim).map(|p| self.count(p)).collect()
    }

    /// Alternating sum of simplex counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.f_vector()
            .iter()
            .enumerate()
            .map(|(p, &n)| if p % 2 == 0 { n as i64 } else { -(n as i64) })
            .sum()
    }

    /// Maps each codimension-one face to the indices of the facets containing it.
    pub fn ridge_incidence(&self) -> BTreeMap<Simplex, Vec<usize>> {
        let mut map: BTreeMap<Simplex, Vec<usize>> = BTreeMap::new();
        for (i, f) in self.facets.iter().enumerate() {
            for face in f.faces() {
                map.entry(face).or_default().push(i);
            }
        }
        map
    }

    /// The sub-complex generated by `facets`, with inherited colours.
    pub fn subcomplex(&self, dim: usize, facets: Vec<Simplex>) -> ColouredComplex {
        let colours = facets
            .iter()
            .flat_map(|s| s.vertices().iter().copied())
            .map(|v| (v, self.colours[&v]))
            .collect();
        ColouredComplex::from_parts(dim, colours, facets)
    }

    /// The boundary complex: all codimension-one faces lying in exactly one
    /// facet.
    pub fn boundary(&self) -> ColouredComplex {
        if self.dim == 0 {
            return ColouredComplex::empty(0);
        }
        let faces: Vec<Simplex> = self
            .ridge_incidence()
            .into_iter()
            .filter(|(_, inc)| inc.len() == 1)
            .map(|(f, _)| f)
            .collect();
        if faces.is_empty() {
            return ColouredComplex::empty(self.dim - 1);
        }
        self.subcomplex(self.dim - 1, faces)
    }

    /// Connected components (through shared vertices), ordered by least vertex.
    pub fn components(&self) -> Vec<ColouredComplex> {
        if self.facets.is_empty() {
            return Vec::new();
        }
        let ids: Vec<VertexId> = self.colours.keys().copied().collect();
        let index = |v: VertexId| ids.binary_search(&v).expect("declared vertex");
        let mut uf = UnionFind::new(ids.len());
        for f in &self.facets {
            let first = index(f.vertices()[0]);
            for &v in &f.vertices()[1..] {
                uf.union(first, index(v));
            }
        }
        let (labels, k) = uf.classes();
        let mut parts: Vec<Vec<Simplex>> = alloc::vec![Vec::new(); k];
        for f in &self.facets {
            parts[labels[index(f.vertices()[0])]].push(f.clone());
        }
        parts.into_iter().map(|p| self.subcomplex(self.dim, p)).collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Link of a simplex: `{ f \ s : f facet, s ⊆ f }` as a complex of
    /// dimension `dim - |s|`. Returns the empty complex when `s` lies in no
    /// facet or is itself a facet.
    pub fn link(&self, s: &Simplex) -> ColouredComplex {
        let ldim = self.dim as isize - s.len() as isize;
        if ldim < 0 {
            return ColouredComplex::empty(0);
        }
        let facets: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|f| f.contains_all(s))
            .map(|f| f.minus(s))
            .filter(|f| !f.is_empty())
            .collect();
        if facets.is_empty() {
            return ColouredComplex::empty(ldim as usize);
        }
        self.subcomplex(ldim as usize, facets)
    }

    /// Facets containing `s`.
    pub fn star(&self, s: &Simplex) -> Vec<&Simplex> {
        self.facets.iter().filter(|f| f.contains_all(s)).collect()
    }

    /// Coherent orientation signs, one per facet (relative to ascending vertex
    /// order), found by propagating across shared codimension-one faces. Each
    /// such face must lie in at most two facets. Returns `None` when no
    /// coherent choice exists.
    pub fn coherent_orientation(&self) -> Option<Vec<i8>> {
        let n = self.facets.len();
        let mut sign = alloc::vec![0i8; n];
        let incidence = self.ridge_incidence();
        // (facet, position of removed vertex) for each side of a ridge
        let mut adj: Vec<Vec<(usize, usize, usize)>> = alloc::vec![Vec::new(); n];
        for (face, inc) in &incidence {
            if inc.len() > 2 {
                return None;
            }
            if inc.len() == 2 {
                let (a, b) = (inc[0], inc[1]);
                let pa = removed_position(&self.facets[a], face);
                let pb = removed_position(&self.facets[b], face);
                adj[a].push((b, pa, pb));
                adj[b].push((a, pb, pa));
            }
        }
        let mut stack = Vec::new();
        for start in 0..n {
            if sign[start] != 0 {
                continue;
            }
            sign[start] = 1;
            stack.push(start);
            while let Some(f) = stack.pop() {
                for &(g, pf, pg) in &adj[f] {
                    // induced orientations (-1)^p * sign must cancel
                    let parity = if (pf + pg) % 2 == 0 { 1 } else { -1 };
                    let want = -sign[f] * parity;
                    if sign[g] == 0 {
                        sign[g] = want;
                        stack.push(g);
                    } else if sign[g] != want {
                        return None;
                    }
                }
            }
        }
        Some(sign)
    }

    /// Applies a vertex renaming. The map must be injective on the vertices.
    pub fn relabel<F>(&self, map: F) -> ColouredComplex
    where
        F: Fn(VertexId) -> VertexId,
    {
        let colours = self.colours.iter().map(|(&v, &c)| (map(v), c)).collect();
        let facets = self
            .facets
            .iter()
            .map(|f| {
                let mut v: Vec<VertexId> = f.vertices().iter().map(|&x| map(x)).collect();
                v.sort_unstable();
                Simplex::from_sorted(v)
            })
            .collect();
        ColouredComplex::from_parts(self.dim, colours, facets)
    }

    /// Same complex with every vertex recoloured by `colour_of`.
    pub fn recolour<F>(&self, colour_of: F) -> ColouredComplex
    where
        F: Fn(VertexId) -> Colour,
    {
        ColouredComplex {
            dim: self.dim,
            colours: self.colours.keys().map(|&v| (v, colour_of(v))).collect(),
            facets: self.facets.clone(),
        }
    }

    /// Vertices adjacent to `v` through an edge.
    pub fn neighbours(&self, v: VertexId) -> BTreeSet<VertexId> {
        self.facets
            .iter()
            .filter(|f| f.contains(v))
            .flat_map(|f| f.vertices().iter().copied())
            .filter(|&w| w != v)
            .collect()
    }

    /// Whether every simplex of `other` is a simplex of `self`.
    pub fn contains_simplex(&self, s: &Simplex) -> bool {
        self.facets.iter().any(|f| f.contains_all(s))
    }
}

fn removed_position(facet: &Simplex, face: &Simplex) -> usize {
    facet
        .vertices()
        .iter()
        .position(|v| !face.contains(*v))
        .expect("face of facet")
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn tet() -> ColouredComplex {
        ColouredComplex::build(
            3,
            [(0, Colour::Red), (1, Colour::Red), (2, Colour::Red), (3, Colour::Blue)],
            [vec![0, 1, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn single_tetrahedron_counts() {
        let k = tet();
        assert_eq!(k.f_vector(), vec![4, 6, 4, 1]);
    }

    #[test]
    fn boundary_of_tetrahedron_is_sphere() {
        let b = tet().boundary();
        assert_eq!(b.dim(), 2);
        assert_eq!(b.f_vector(), vec![4, 6, 4]);
        assert_eq!(b.euler_characteristic(), 2);
        assert_eq!(b.components().len(), 1);
    }

    #[test]
    fn closed_complex_has_empty_boundary() {
        let k = ColouredComplex::from_facets(3, Simplex::new(vec![0, 1, 2, 3, 4]).unwrap().subsets(4).into_iter().map(Simplex::into_vec).collect(), |_| Colour::Red).unwrap();
        assert!(k.boundary().is_empty());
        assert_eq!(k.euler_characteristic(), 0);
    }

    #[test]
    fn rejects_repeated_vertex() {
        let err = ColouredComplex::build(3, [(0, Colour::Red), (1, Colour::Red), (2, Colour::Blue)], [vec![0, 1, 1, 2]]);
        assert!(matches!(err, Err(ComplexError::RepeatedVertex { vertex: 1, .. })));
    }

    #[test]
    fn rejects_undeclared_and_empty() {
        let err = ColouredComplex::build(1, [(0, Colour::Red)], [vec![0, 7]]);
        assert!(matches!(err, Err(ComplexError::UndeclaredVertex { vertex: 7, .. })));
        let err = ColouredComplex::build(1, [(0, Colour::Red)], Vec::<Vec<u32>>::new());
        assert_eq!(err, Err(ComplexError::Empty));
    }

    #[test]
    fn rejects_duplicate_facets() {
        // two triangles on the same three vertices are one simplex under set semantics
        let err = ColouredComplex::build(
            2,
            [(0, Colour::Red), (1, Colour::Red), (2, Colour::Red)],
            [vec![0, 1, 2], vec![2, 1, 0]],
        );
        assert!(matches!(err, Err(ComplexError::DuplicateSimplex(_))));
    }

    #[test]
    fn subsets_enumerates_binomial() {
        let s = Simplex::new(vec![0, 1, 2, 3, 4]).unwrap();
        assert_eq!(s.subsets(0).len(), 1);
        assert_eq!(s.subsets(2).len(), 10);
        assert_eq!(s.subsets(3).len(), 10);
        assert_eq!(s.subsets(5).len(), 1);
        assert_eq!(s.subsets(6).len(), 0);
    }

    #[test]
    fn link_of_edge_in_tetrahedron() {
        let k = tet();
        let l = k.link(&Simplex::new(vec![0, 1]).unwrap());
        assert_eq!(l.dim(), 1);
        assert_eq!(l.facets().len(), 1);
    }

    #[test]
    fn orientation_of_sphere_exists() {
        let b = tet().boundary();
        assert!(b.coherent_orientation().is_some());
    }
}
