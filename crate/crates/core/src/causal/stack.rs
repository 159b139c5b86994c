use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::Range;

use thiserror::Error;

use super::build::{lemma3_slice, BuildError};
use super::slice::CausalSlice;
use crate::canon::{is_isomorphism, isomorphism, CanonicalForm, Hypergraph};
use crate::colour::Colour;
use crate::complex::{ColouredComplex, Simplex, VertexId};

const TAG_LAYERED: u32 = 0x4c59_0000;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum StackError {
    #[error("a triangulation needs at least one slice")]
    Empty,
    #[error("expected {expected} interface maps, got {found}")]
    IsoCount { expected: usize, found: usize },
    #[error("slice {index} has dimension {found}, expected {expected}")]
    DimensionMismatch { index: usize, expected: usize, found: usize },
    #[error("blue boundary of slice {index} is not isomorphic to the red boundary of slice {}", index + 1)]
    NotIsomorphic { index: usize },
    #[error("interface map {index} is not a simplicial isomorphism")]
    BadIso { index: usize },
}

/// A complex whose vertices carry a layer index instead of a colour. Layer
/// `i` is the red boundary of slice `i` and the blue boundary of slice `i-1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LayeredComplex {
    dim: usize,
    layers: BTreeMap<VertexId, u32>,
    facets: Vec<Simplex>,
}

impl LayeredComplex {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn facets(&self) -> &[Simplex] {
        &self.facets
    }

    pub fn layers(&self) -> &BTreeMap<VertexId, u32> {
        &self.layers
    }

    pub fn layer_count(&self) -> u32 {
        self.layers.values().max().map_or(0, |m| m + 1)
    }

    pub fn volume(&self) -> usize {
        self.facets.len()
    }

    pub fn vertex_count(&self) -> usize {
        self.layers.len()
    }

    /// The sub-complex of facets lying between layers `from` and `to`
    /// (inclusive), with layers renumbered from zero.
    pub fn cut(&self, from: u32, to: u32) -> LayeredComplex {
        let inside = |v: &VertexId| (from..=to).contains(&self.layers[v]);
        let facets: Vec<Simplex> = self
            .facets
            .iter()
            .filter(|f| f.vertices().iter().all(inside))
            .cloned()
            .collect();
        let mut layers = BTreeMap::new();
        for f in &facets {
            for v in f.vertices() {
                layers.insert(*v, self.layers[v] - from);
            }
        }
        LayeredComplex { dim: self.dim, layers, facets }
    }

    /// Form equal for two layered complexes exactly when an isomorphism
    /// preserving every layer index exists.
    pub fn canonical_form(&self) -> CanonicalForm {
        let ids: Vec<VertexId> = self.layers.keys().copied().collect();
        let mut h = Hypergraph::new(TAG_LAYERED | self.dim as u32, self.layers.values().copied().collect());
        for f in &self.facets {
            h.add_edge(0, f.vertices().iter().map(|v| ids.binary_search(v).expect("vertex") as u32).collect());
        }
        h.canonical().form
    }

    /// Layer-`i` boundary surface as an uncoloured (all red) complex.
    pub fn layer_surface(&self, layer: u32) -> ColouredComplex {
        let mut faces = alloc::collections::BTreeSet::new();
        for f in &self.facets {
            let part: Vec<VertexId> = f.vertices().iter().copied().filter(|v| self.layers[v] == layer).collect();
            if part.len() == self.dim {
                faces.insert(Simplex::from_sorted(part));
            }
        }
        let colours = faces
            .iter()
            .flat_map(|s| s.vertices().iter().map(|&v| (v, Colour::Red)))
            .collect();
        ColouredComplex::from_parts(self.dim - 1, colours, faces.into_iter().collect())
    }
}

/// Slices glued blue-to-red along explicit interface isomorphisms.
#[derive(Clone, Debug)]
pub struct CausalTriangulation {
    slices: Vec<CausalSlice>,
    interfaces: Vec<BTreeMap<VertexId, VertexId>>,
    glued: LayeredComplex,
}

impl CausalTriangulation {
    pub fn slices(&self) -> &[CausalSlice] {
        &self.slices
    }

    /// Map `i` sends blue boundary vertices of slice `i` to red boundary
    /// vertices of slice `i + 1` (local ids).
    pub fn interfaces(&self) -> &[BTreeMap<VertexId, VertexId>] {
        &self.interfaces
    }

    pub fn glued(&self) -> &LayeredComplex {
        &self.glued
    }

    pub fn len(&self) -> usize {
        self.slices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.slices.is_empty()
    }

    pub fn volume(&self) -> usize {
        self.glued.volume()
    }

    pub fn dim(&self) -> usize {
        self.glued.dim
    }

    pub fn sigma_in(&self) -> &ColouredComplex {
        self.slices[0].red_boundary()
    }

    pub fn sigma_out(&self) -> &ColouredComplex {
        self.slices[self.slices.len() - 1].blue_boundary()
    }

    pub fn canonical_form(&self) -> CanonicalForm {
        self.glued.canonical_form()
    }

    /// Sub-triangulation made of the slices in `range`.
    pub fn split(&self, range: Range<usize>) -> Result<CausalTriangulation, StackError> {
        let isos = self.interfaces[range.start..range.end.saturating_sub(1).max(range.start)].to_vec();
        stack_slices(self.slices[range].to_vec(), &isos)
    }
}

/// Stacks slices, identifying the blue boundary of slice `i` with the red
/// boundary of slice `i + 1` through `isos[i]`.
///
/// Global vertex ids are assigned in order: first the vertices of slice 0,
/// then the blue vertices of each later slice.
pub fn stack_slices(
    slices: Vec<CausalSlice>,
    isos: &[BTreeMap<VertexId, VertexId>],
) -> Result<CausalTriangulation, StackError> {
    if slices.is_empty() {
        return Err(StackError::Empty);
    }
    if isos.len() != slices.len() - 1 {
        return Err(StackError::IsoCount {
            expected: slices.len() - 1,
            found: isos.len(),
        });
    }
    let dim = slices[0].dim();
    for (index, s) in slices.iter().enumerate() {
        if s.dim() != dim {
            return Err(StackError::DimensionMismatch { index, expected: dim, found: s.dim() });
        }
    }
    for (index, iso) in isos.iter().enumerate() {
        let (blue, red) = (slices[index].blue_boundary(), slices[index + 1].red_boundary());
        if !is_isomorphism(blue, red, iso) {
            return Err(if isomorphism(blue, red, false).is_some() {
                StackError::BadIso { index }
            } else {
                StackError::NotIsomorphic { index }
            });
        }
    }

    let mut layers = BTreeMap::new();
    let mut facets = Vec::new();
    let mut next: VertexId = 0;
    // global id of each blue vertex of the previous slice
    let mut previous_blue: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    for (i, s) in slices.iter().enumerate() {
        let k = s.complex();
        let mut global = BTreeMap::new();
        if i > 0 {
            for (b, r) in &isos[i - 1] {
                global.insert(*r, previous_blue[b]);
            }
        }
        for v in k.vertices() {
            if let alloc::collections::btree_map::Entry::Vacant(e) = global.entry(v) {
                e.insert(next);
                let layer = if k.colour(v) == Some(Colour::Red) { i } else { i + 1 };
                layers.insert(next, layer as u32);
                next += 1;
            }
        }
        for f in k.facets() {
            let mut g: Vec<VertexId> = f.vertices().iter().map(|v| global[v]).collect();
            g.sort_unstable();
            facets.push(Simplex::from_sorted(g));
        }
        previous_blue = k
            .vertices()
            .filter(|&v| k.colour(v) == Some(Colour::Blue))
            .map(|v| (v, global[&v]))
            .collect();
    }
    facets.sort();
    Ok(CausalTriangulation {
        slices,
        interfaces: isos.to_vec(),
        glued: LayeredComplex { dim, layers, facets },
    })
}

/// Stacks slices using computed interface isomorphisms.
pub fn stack_with_found_isos(slices: Vec<CausalSlice>) -> Result<CausalTriangulation, StackError> {
    let mut isos = Vec::new();
    for (index, w) in slices.windows(2).enumerate() {
        let iso = isomorphism(w[0].blue_boundary(), w[1].red_boundary(), false)
            .ok_or(StackError::NotIsomorphic { index })?;
        isos.push(iso);
    }
    stack_slices(slices, &isos)
}

/// Two-slice triangulation from `sigma_in` to `sigma_out` through the
/// boundary of a tetrahedron, of volume `|sigma_in| + |sigma_out| + 20`.
pub fn lemma3_triangulation(
    sigma_in: &ColouredComplex,
    sigma_out: &ColouredComplex,
) -> Result<CausalTriangulation, BuildError> {
    let first = lemma3_slice(sigma_in)?;
    let second = lemma3_slice(sigma_out)?.reversed();
    Ok(stack_with_found_isos(alloc::vec![first, second]).expect("both sides are tetrahedron boundaries"))
}

/// The triangulation `T2 · T0 · T1` together with the slice ranges of its
/// three parts: `T2` ends where `T0` begins and `T1` begins where `T0` ends.
#[derive(Clone, Debug)]
pub struct GluedTriangulation {
    pub triangulation: CausalTriangulation,
    pub t2: Range<usize>,
    pub t0: Range<usize>,
    pub t1: Range<usize>,
}

impl GluedTriangulation {
    /// Recovers `T1` and `T2` from the glued complex alone, cutting at the
    /// layers where `T0` starts and ends.
    pub fn recover(&self) -> (LayeredComplex, LayeredComplex) {
        let g = self.triangulation.glued();
        let top = g.layer_count() - 1;
        let t1 = g.cut(self.t1.start as u32, top);
        let t2 = g.cut(0, self.t2.end as u32);
        (t1, t2)
    }
}

/// Glues `T1` after `T0` along its out-boundary and `T2` before `T0` along
/// its in-boundary. Interface maps are computed when not supplied; the
/// supplied pair is `(T2.out → T0.in, T0.out → T1.in)`.
pub fn glue_for_subadditivity(
    t1: &CausalTriangulation,
    t0: &CausalTriangulation,
    t2: &CausalTriangulation,
    isos: Option<(BTreeMap<VertexId, VertexId>, BTreeMap<VertexId, VertexId>)>,
) -> Result<GluedTriangulation, StackError> {
    let (n2, n0, n1) = (t2.len(), t0.len(), t1.len());
    let (iso_20, iso_01) = match isos {
        Some(pair) => pair,
        None => {
            let a = isomorphism(t2.sigma_out(), t0.sigma_in(), false)
                .ok_or(StackError::NotIsomorphic { index: n2 - 1 })?;
            let b = isomorphism(t0.sigma_out(), t1.sigma_in(), false)
                .ok_or(StackError::NotIsomorphic { index: n2 + n0 - 1 })?;
            (a, b)
        }
    };
    let mut slices = Vec::with_capacity(n2 + n0 + n1);
    slices.extend_from_slice(t2.slices());
    slices.extend_from_slice(t0.slices());
    slices.extend_from_slice(t1.slices());
    let mut maps = Vec::new();
    maps.extend_from_slice(t2.interfaces());
    maps.push(iso_20);
    maps.extend_from_slice(t0.interfaces());
    maps.push(iso_01);
    maps.extend_from_slice(t1.interfaces());
    let triangulation = stack_slices(slices, &maps)?;
    Ok(GluedTriangulation {
        triangulation,
        t2: 0..n2,
        t0: n2..n2 + n0,
        t1: n2 + n0..n2 + n0 + n1,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{prism_slice, validate_slice};
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn single_slice() {
        let s = prism_slice(&fixtures::sigma_t(), None).unwrap();
        let t = stack_slices(vec![s], &[]).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.volume(), 12);
    }

    #[test]
    fn two_prisms() {
        let s = prism_slice(&fixtures::sigma_t(), None).unwrap();
        let t = stack_with_found_isos(vec![s.clone(), s]).unwrap();
        assert_eq!(t.volume(), 24);
        assert_eq!(t.glued().vertex_count(), 12);
        assert_eq!(t.glued().layer_count(), 3);
        assert!(isomorphism(t.sigma_in(), &fixtures::sigma_t(), false).is_some());
        assert!(isomorphism(t.sigma_out(), &fixtures::sigma_t(), false).is_some());
    }

    #[test]
    fn lemma3_pair_volume() {
        let t = lemma3_triangulation(&fixtures::sigma_t(), &fixtures::sigma_t()).unwrap();
        assert_eq!(t.volume(), 4 + 4 + 20);
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn wrong_interface_map_is_rejected() {
        let s = prism_slice(&fixtures::sigma_t(), None).unwrap();
        // maps blue vertex 4+p to red p for p = 0,1,2 but collapses 3
        let bad: BTreeMap<u32, u32> = [(4, 0), (5, 1), (6, 2), (7, 2)].into_iter().collect();
        assert_eq!(
            stack_slices(vec![s.clone(), s], &[bad]).unwrap_err(),
            StackError::BadIso { index: 0 }
        );
    }

    #[test]
    fn genus_mismatch_cannot_be_glued() {
        let sphere = stack_slices(vec![prism_slice(&fixtures::sigma_t(), None).unwrap()], &[]).unwrap();
        let torus = stack_slices(vec![prism_slice(&fixtures::torus7(), None).unwrap()], &[]).unwrap();
        assert!(matches!(
            glue_for_subadditivity(&sphere, &torus, &sphere, None),
            Err(StackError::NotIsomorphic { .. })
        ));
    }

    #[test]
    fn glued_parts_are_recovered() {
        let t = lemma3_triangulation(&fixtures::sigma_t(), &fixtures::sigma_t()).unwrap();
        let g = glue_for_subadditivity(&t, &t, &t, None).unwrap();
        assert_eq!(g.triangulation.volume(), 84);
        let (t1, t2) = g.recover();
        assert_eq!(t1.canonical_form(), t.canonical_form());
        assert_eq!(t2.canonical_form(), t.canonical_form());
        let again = validate_slice(g.triangulation.slices()[0].complex(), true);
        assert!(again.is_ok());
    }
}
