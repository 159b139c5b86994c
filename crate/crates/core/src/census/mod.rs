//! Census of small three-dimensional causal slices.
//!
//! Two independent strategies are provided. The direct one glues oriented,
//! typed tetrahedra along mixed triangles; the other glues coloured polygons
//! into closed surfaces and keeps those that are midsections of a slice.
//! Both count slices up to colour-preserving isomorphism, so their tables
//! must agree.
//!
//! Each search is a rooted depth-first generation: the lowest open face is
//! always processed next and new pieces are numbered in order of creation,
//! so every rooted object is produced exactly once. Searches split into
//! independent partitions by their first decisions; merging partition tables
//! is a set union and does not depend on order.

mod beta;
mod direct;
mod fixed;
mod maps;

pub use beta::{estimate_beta, BetaError, BetaEstimate, BetaRow};
pub use direct::{enumerate_slices, DirectSearch};
pub use fixed::{count_fixed_boundaries, subadditivity_witness, FixedTable, SubadditivityCheck};
pub use maps::{enumerate_via_midsections, ColouringRow, MapSearch};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::canon::CanonicalForm;
use crate::complex::ColouredComplex;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strategy {
    Direct,
    Midsection,
}

impl Strategy {
    pub fn token(self) -> &'static str {
        match self {
            Strategy::Direct => "direct",
            Strategy::Midsection => "midsection",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CensusConfig {
    /// Largest number of tetrahedra (or midsection cells).
    pub vmax: usize,
    /// Genus of the boundary surfaces.
    pub genus: u32,
    /// Abort after this many search nodes; the table is then flagged partial.
    pub max_nodes: Option<u64>,
}

impl CensusConfig {
    pub fn new(vmax: usize, genus: u32) -> Self {
        CensusConfig { vmax, genus, max_nodes: None }
    }
}

/// Why a completed candidate was discarded.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Rejections {
    /// A piece would have two of its corners identified (pruned early).
    pub degenerate: u64,
    /// A boundary edge would become interior (pruned early).
    pub closed_boundary_edge: u64,
    /// Two tetrahedra on the same vertices.
    pub duplicate_simplex: u64,
    /// Two edges of one colour on the same pair of corners.
    pub not_simple: u64,
    pub obstruction: u64,
    pub collision: u64,
    pub validation: u64,
    /// Reconstruction succeeded but its midsection differs from the input.
    pub mismatch: u64,
    pub other_genus: u64,
}

impl Rejections {
    fn add(&mut self, o: &Rejections) {
        self.degenerate += o.degenerate;
        self.closed_boundary_edge += o.closed_boundary_edge;
        self.duplicate_simplex += o.duplicate_simplex;
        self.not_simple += o.not_simple;
        self.obstruction += o.obstruction;
        self.collision += o.collision;
        self.validation += o.validation;
        self.mismatch += o.mismatch;
        self.other_genus += o.other_genus;
    }

    /// Candidates that were complete surfaces but not midsections.
    pub fn filtered(&self) -> u64 {
        self.not_simple + self.obstruction + self.collision + self.validation + self.mismatch
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    pub nodes: u64,
    /// Completed candidates, before filtering.
    pub leaves: u64,
    pub accepted: u64,
    pub rejected: Rejections,
}

impl SearchStats {
    fn add(&mut self, o: &SearchStats) {
        self.nodes += o.nodes;
        self.leaves += o.leaves;
        self.accepted += o.accepted;
        self.rejected.add(&o.rejected);
    }
}

/// Isomorphism classes of slices per volume, with one canonically labelled
/// representative each.
#[derive(Clone, Debug)]
pub struct CensusTable {
    pub strategy: Strategy,
    pub genus: u32,
    pub vmax: usize,
    pub complete: bool,
    pub stats: SearchStats,
    classes: BTreeMap<usize, BTreeMap<CanonicalForm, ColouredComplex>>,
}

impl CensusTable {
    pub fn new(strategy: Strategy, config: &CensusConfig) -> Self {
        CensusTable {
            strategy,
            genus: config.genus,
            vmax: config.vmax,
            complete: true,
            stats: SearchStats::default(),
            classes: BTreeMap::new(),
        }
    }

    /// Records a slice; returns false if its class was already present.
    pub(crate) fn insert(&mut self, k: ColouredComplex) -> bool {
        let volume = k.facets().len();
        let form = k.canonical_form();
        let entry = self.classes.entry(volume).or_default();
        if entry.contains_key(&form) {
            return false;
        }
        let labels = k.canonical_labelling(true);
        entry.insert(form, k.relabel(|v| labels[&v]));
        true
    }

    /// Union of two tables of the same strategy and parameters.
    pub fn merge(&mut self, other: CensusTable) {
        debug_assert_eq!((self.strategy, self.genus, self.vmax), (other.strategy, other.genus, other.vmax));
        self.complete &= other.complete;
        self.stats.add(&other.stats);
        for (v, forms) in other.classes {
            let entry = self.classes.entry(v).or_default();
            for (f, k) in forms {
                entry.entry(f).or_insert(k);
            }
        }
    }

    pub fn count(&self, volume: usize) -> usize {
        self.classes.get(&volume).map_or(0, BTreeMap::len)
    }

    /// Counts for every volume `1..=vmax`, zeros included.
    pub fn counts(&self) -> BTreeMap<usize, usize> {
        (1..=self.vmax).map(|v| (v, self.count(v))).collect()
    }

    pub fn total(&self) -> usize {
        self.classes.values().map(BTreeMap::len).sum()
    }

    /// Canonically labelled representatives of volume `volume`.
    pub fn representatives(&self, volume: usize) -> impl Iterator<Item = &ColouredComplex> {
        self.classes.get(&volume).into_iter().flat_map(|m| m.values())
    }

    pub fn all_representatives(&self) -> impl Iterator<Item = &ColouredComplex> {
        self.classes.values().flat_map(|m| m.values())
    }

    pub fn forms(&self, volume: usize) -> Vec<&CanonicalForm> {
        self.classes.get(&volume).map_or_else(Vec::new, |m| m.keys().collect())
    }

    /// Same isomorphism classes at every volume, not just the same counts.
    pub fn same_classes(&self, other: &CensusTable) -> bool {
        self.vmax == other.vmax && (1..=self.vmax).all(|v| self.forms(v) == other.forms(v))
    }

    /// Smallest volume with at least one slice.
    pub fn minimal_volume(&self) -> Option<usize> {
        self.classes.iter().find(|(_, m)| !m.is_empty()).map(|(v, _)| *v)
    }
}

/// Rooted-search choice, recorded to split a search into partitions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Step {
    /// Glue the lowest open face to open face `face` of piece `piece`.
    Glue { piece: u8, face: u8 },
    /// Glue the lowest open face to a new piece of the given kind.
    New(u8),
}
