//! Causal triangulations with fixed boundaries, composed from census slices.
//!
//! A triangulation is a stack of slices; every interface is glued along some
//! isomorphism, and all of them are tried (one isomorphism composed with the
//! automorphisms of the current top surface). Stacks are deduplicated by the
//! canonical form of the layered complex after every step.
//!
//! Only slices present in the census are used, so counts are exact up to the
//! census volume and lower bounds beyond it.

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use super::CensusTable;
use crate::canon::{isomorphism, CanonicalForm};
use crate::causal::{glue_for_subadditivity, stack_slices, validate_slice, CausalSlice, CausalTriangulation};
use crate::complex::{ColouredComplex, VertexId};

/// Isomorphism classes of causal triangulations per volume.
#[derive(Clone, Debug)]
pub struct FixedTable {
    pub vmax: usize,
    /// Largest slice volume available; counts up to here are exact.
    pub slice_vmax: usize,
    pub complete: bool,
    classes: BTreeMap<usize, BTreeMap<CanonicalForm, CausalTriangulation>>,
}

impl FixedTable {
    pub fn count(&self, volume: usize) -> u64 {
        self.classes.get(&volume).map_or(0, |m| m.len() as u64)
    }

    /// Counts for `1..=vmax`, zeros included.
    pub fn counts(&self) -> BTreeMap<usize, u64> {
        (1..=self.vmax).map(|v| (v, self.count(v))).collect()
    }

    /// Whether the count at `volume` is exact rather than a lower bound.
    pub fn is_exact(&self, volume: usize) -> bool {
        self.complete && volume <= self.slice_vmax && volume <= self.vmax
    }

    pub fn representatives(&self, volume: usize) -> impl Iterator<Item = &CausalTriangulation> {
        self.classes.get(&volume).into_iter().flat_map(|m| m.values())
    }

    pub fn minimal_volume(&self) -> Option<usize> {
        self.classes.iter().find(|(_, m)| !m.is_empty()).map(|(v, _)| *v)
    }
}

struct Candidate {
    slice: CausalSlice,
    red_form: CanonicalForm,
}

/// All interface maps `top → red`, up to nothing: one isomorphism composed
/// with every automorphism of `top`.
fn interface_maps(top: &ColouredComplex, red: &ColouredComplex) -> Vec<BTreeMap<VertexId, VertexId>> {
    let Some(base) = isomorphism(top, red, false) else {
        return Vec::new();
    };
    top.automorphisms(false)
        .into_iter()
        .map(|aut| aut.iter().map(|(v, w)| (*v, base[w])).collect())
        .collect()
}

/// Triangulations from `sigma_in` to `sigma_out` of volume at most `vmax`,
/// built from the slices of `census`. Boundaries are matched up to
/// isomorphism, ignoring colours.
pub fn count_fixed_boundaries(
    census: &CensusTable,
    sigma_in: &ColouredComplex,
    sigma_out: &ColouredComplex,
    vmax: usize,
) -> FixedTable {
    let candidates: Vec<Candidate> = census
        .all_representatives()
        .filter(|k| k.facets().len() <= vmax)
        .map(|k| {
            let slice = validate_slice(k, false).expect("census slices are valid");
            let red_form = slice.red_boundary().uncoloured_canonical_form();
            Candidate { slice, red_form }
        })
        .collect();
    let in_form = sigma_in.uncoloured_canonical_form();
    let out_form = sigma_out.uncoloured_canonical_form();
    let thinnest = candidates.iter().map(|c| c.slice.volume()).min().unwrap_or(0);
    // a stack is worth keeping if it ends at sigma_out or can still grow
    let alive = |t: &CausalTriangulation| {
        t.volume() + thinnest <= vmax || t.sigma_out().uncoloured_canonical_form() == out_form
    };

    // open stacks by volume; processed in increasing volume
    let mut open: BTreeMap<usize, BTreeMap<CanonicalForm, CausalTriangulation>> = BTreeMap::new();
    for c in candidates.iter().filter(|c| c.red_form == in_form) {
        let t = stack_slices(alloc::vec![c.slice.clone()], &[]).expect("single slice");
        if !alive(&t) {
            continue;
        }
        open.entry(t.volume()).or_default().entry(t.canonical_form()).or_insert(t);
    }
    let mut classes: BTreeMap<usize, BTreeMap<CanonicalForm, CausalTriangulation>> = BTreeMap::new();
    while let Some((volume, stacks)) = open.pop_first() {
        for (form, t) in stacks {
            let top = t.sigma_out().clone();
            let top_form = top.uncoloured_canonical_form();
            for c in &candidates {
                if c.red_form != top_form || volume + c.slice.volume() > vmax {
                    continue;
                }
                for iso in interface_maps(&top, c.slice.red_boundary()) {
                    let mut slices = t.slices().to_vec();
                    slices.push(c.slice.clone());
                    let mut isos = t.interfaces().to_vec();
                    isos.push(iso);
                    let next = stack_slices(slices, &isos).expect("maps are isomorphisms");
                    if !alive(&next) {
                        continue;
                    }
                    open.entry(next.volume()).or_default().entry(next.canonical_form()).or_insert(next);
                }
            }
            if top_form == out_form {
                classes.entry(volume).or_default().insert(form, t);
            }
        }
    }
    FixedTable {
        vmax,
        slice_vmax: census.vmax,
        complete: census.complete,
        classes,
    }
}

/// Outcome of the subadditivity construction for one pair of volumes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SubadditivityCheck {
    pub v1: usize,
    pub v2: usize,
    pub v0: usize,
    /// `N(V1) · N(V2)`.
    pub pairs: u64,
    /// Distinct classes among the glued triangulations `T2 · T0 · T1`.
    pub distinct: u64,
    /// Every glued triangulation gives back its `T1` and `T2` when cut.
    pub recovered: bool,
    /// Tabulated `N(V1 + V2 + V0)` when in range, and whether it is exact.
    pub tabulated: Option<(u64, bool)>,
}

impl SubadditivityCheck {
    /// The gluing is injective on classes, so `N(V1)·N(V2)` classes of volume
    /// `V1 + V2 + V0` exist; any tabulated count must be at least that.
    pub fn holds(&self) -> bool {
        self.distinct == self.pairs && self.recovered && self.tabulated.is_none_or(|(n, _)| self.pairs <= n)
    }
}

/// Glues every pair of tabulated classes of volume at most `max_volume`
/// through `t0` and checks that the results are pairwise non-isomorphic,
/// which proves `N(V1)·N(V2) ≤ N(V1 + V2 + V0)` without enumerating the
/// right side.
pub fn subadditivity_witness(
    table: &FixedTable,
    t0: &CausalTriangulation,
    max_volume: usize,
) -> Vec<SubadditivityCheck> {
    let v0 = t0.volume();
    let volumes: Vec<usize> = table
        .classes
        .iter()
        .filter(|(v, m)| **v <= max_volume && !m.is_empty())
        .map(|(v, _)| *v)
        .collect();
    let mut out = Vec::new();
    for &v1 in &volumes {
        for &v2 in &volumes {
            let mut forms = BTreeSet::new();
            let mut recovered = true;
            for t1 in table.representatives(v1) {
                for t2 in table.representatives(v2) {
                    let g = glue_for_subadditivity(t1, t0, t2, None).expect("boundaries match");
                    let (r1, r2) = g.recover();
                    recovered &= r1.canonical_form() == t1.glued().canonical_form()
                        && r2.canonical_form() == t2.glued().canonical_form();
                    forms.insert(g.triangulation.canonical_form());
                }
            }
            let total = v1 + v2 + v0;
            out.push(SubadditivityCheck {
                v1,
                v2,
                v0,
                pairs: table.count(v1) * table.count(v2),
                distinct: forms.len() as u64,
                recovered,
                tabulated: (total <= table.vmax).then(|| (table.count(total), table.is_exact(total))),
            });
        }
    }
    out
}
