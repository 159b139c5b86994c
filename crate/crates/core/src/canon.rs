//! Canonical labelling of small coloured hypergraphs.
//!
//! Complexes, midsections and layered triangulations are all encoded as a
//! vertex-coloured hypergraph with labelled hyperedges. A canonical labelling
//! is found by colour refinement followed by individualisation and
//! backtracking: every leaf of the search tree is a discrete partition, i.e. a
//! labelling, and the lexicographically least relabelled encoding over all
//! leaves is the canonical form. Refinement only ever uses data invariant
//! under relabelling, so two hypergraphs receive equal forms exactly when
//! they are isomorphic.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::colour::Colour;
use crate::complex::{ColouredComplex, VertexId};

/// Byte string identifying an isomorphism class.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalForm(Vec<u8>);

impl CanonicalForm {
    pub(crate) fn from_words(words: &[u32]) -> Self {
        let mut bytes = Vec::with_capacity(words.len() * 4);
        for w in words {
            bytes.extend_from_slice(&w.to_be_bytes());
        }
        CanonicalForm(bytes)
    }

    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    /// 64-bit FNV-1a digest, handy for short reports.
    pub fn digest(&self) -> u64 {
        let mut h: u64 = 0xcbf2_9ce4_8422_2325;
        for &b in &self.0 {
            h ^= b as u64;
            h = h.wrapping_mul(0x0000_0100_0000_01b3);
        }
        h
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({:016x}, {} bytes)", self.digest(), self.0.len())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.0 {
            write!(f, "{b:02x}")?;
        }
        Ok(())
    }
}

/// Vertex-coloured hypergraph on vertices `0..n`. Hyperedges are treated as
/// multisets of vertices carrying a label.
#[derive(Clone, Debug, Default)]
pub struct Hypergraph {
    tag: u32,
    colours: Vec<u32>,
    edges: Vec<(u32, Vec<u32>)>,
    incidence: Vec<Vec<usize>>,
}

/// Result of a canonical labelling: the form and, for every vertex, its
/// position in the canonical order.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub form: CanonicalForm,
    pub labelling: Vec<u32>,
}

impl Hypergraph {
    /// `tag` separates unrelated structures that happen to encode alike.
    pub fn new(tag: u32, colours: Vec<u32>) -> Self {
        let n = colours.len();
        Hypergraph {
            tag,
            colours,
            edges: Vec::new(),
            incidence: alloc::vec![Vec::new(); n],
        }
    }

    pub fn add_edge(&mut self, label: u32, mut vertices: Vec<u32>) {
        vertices.sort_unstable();
        let id = self.edges.len();
        for (i, &v) in vertices.iter().enumerate() {
            if i == 0 || vertices[i - 1] != v {
                self.incidence[v as usize].push(id);
            }
        }
        self.edges.push((label, vertices));
    }

    pub fn vertex_count(&self) -> usize {
        self.colours.len()
    }

    fn initial_cells(&self) -> Vec<u32> {
        let mut order: Vec<u32> = self.colours.clone();
        order.sort_unstable();
        order.dedup();
        self.colours
            .iter()
            .map(|c| order.binary_search(c).expect("present") as u32)
            .collect()
    }

    /// Splits cells by the multiset of (edge label, cells of co-members)
    /// until stable. Cell numbers stay ordered, so refinement is invariant.
    fn refine(&self, cells: &mut [u32]) {
        let n = cells.len();
        let mut count = distinct(cells);
        let mut keyed: Vec<(u32, Vec<u64>, usize)> = Vec::with_capacity(n);
        loop {
            if count == n {
                return;
            }
            let edge_sig: Vec<u64> = self
                .edges
                .iter()
                .map(|(label, vs)| {
                    let mut cs: Vec<u32> = vs.iter().map(|&v| cells[v as usize]).collect();
                    cs.sort_unstable();
                    let mut h = mix(0x9e37_79b9_7f4a_7c15, *label as u64);
                    for c in cs {
                        h = mix(h, c as u64);
                    }
                    h
                })
                .collect();
            keyed.clear();
            for v in 0..n {
                let mut sig: Vec<u64> = self.incidence[v].iter().map(|&e| edge_sig[e]).collect();
                sig.sort_unstable();
                keyed.push((cells[v], sig, v));
            }
            keyed.sort_unstable();
            let mut next = 0u32;
            for i in 0..n {
                if i > 0 && (keyed[i].0 != keyed[i - 1].0 || keyed[i].1 != keyed[i - 1].1) {
                    next += 1;
                }
                cells[keyed[i].2] = next;
            }
            let new_count = next as usize + 1;
            if new_count == count {
                return;
            }
            count = new_count;
        }
    }

    fn encode(&self, labelling: &[u32]) -> Vec<u32> {
        let n = self.colours.len();
        let mut inverse = alloc::vec![0usize; n];
        for (v, &l) in labelling.iter().enumerate() {
            inverse[l as usize] = v;
        }
        let mut edges: Vec<Vec<u32>> = self
            .edges
            .iter()
            .map(|(label, vs)| {
                let mut row = Vec::with_capacity(vs.len() + 1);
                row.push(*label);
                let mut ls: Vec<u32> = vs.iter().map(|&v| labelling[v as usize]).collect();
                ls.sort_unstable();
                row.extend(ls);
                row
            })
            .collect();
        edges.sort_unstable();
        let mut out = Vec::with_capacity(3 + n + edges.len() * 5);
        out.push(self.tag);
        out.push(n as u32);
        out.extend(inverse.iter().map(|&v| self.colours[v]));
        out.push(edges.len() as u32);
        for e in edges {
            out.push(e.len() as u32);
            out.extend(e);
        }
        out
    }

    /// Canonical form and labelling.
    pub fn canonical(&self) -> Canonical {
        let mut search = Search {
            graph: self,
            best: None,
            automorphisms: Vec::new(),
            collect_all: false,
        };
        let mut cells = self.initial_cells();
        search.run(&mut cells, 0);
        let (words, labelling) = search.best.expect("at least one leaf");
        Canonical {
            form: CanonicalForm::from_words(&words),
            labelling,
        }
    }

    /// Every automorphism as a vertex permutation (`perm[v]` is the image of
    /// `v`), identity first.
    pub fn automorphisms(&self) -> Vec<Vec<u32>> {
        let mut search = Search {
            graph: self,
            best: None,
            automorphisms: Vec::new(),
            collect_all: true,
        };
        let mut cells = self.initial_cells();
        search.run(&mut cells, 0);
        let (_, best_lab) = search.best.expect("at least one leaf");
        let n = best_lab.len();
        let mut inv_best = alloc::vec![0u32; n];
        for (v, &l) in best_lab.iter().enumerate() {
            inv_best[l as usize] = v as u32;
        }
        let mut out: Vec<Vec<u32>> = search
            .automorphisms
            .iter()
            .map(|lab| lab.iter().map(|&l| inv_best[l as usize]).collect())
            .collect();
        out.sort();
        out.dedup();
        out
    }
}

struct Search<'a> {
    graph: &'a Hypergraph,
    best: Option<(Vec<u32>, Vec<u32>)>,
    // labellings whose encoding equals the current best
    automorphisms: Vec<Vec<u32>>,
    collect_all: bool,
}

impl Search<'_> {
    fn run(&mut self, cells: &mut Vec<u32>, depth: usize) {
        self.graph.refine(cells);
        let n = cells.len();
        if distinct(cells) == n {
            let words = self.graph.encode(cells);
            match &self.best {
                Some((b, _)) if words > *b => {}
                Some((b, _)) if words == *b => self.automorphisms.push(cells.clone()),
                _ => {
                    self.best = Some((words, cells.clone()));
                    self.automorphisms.clear();
                    self.automorphisms.push(cells.clone());
                }
            }
            return;
        }
        let target = first_nonsingleton(cells);
        let members: Vec<usize> = (0..n).filter(|&v| cells[v] == target).collect();
        let mut explored: Vec<usize> = Vec::new();
        for &v in &members {
            if depth == 0 && !self.collect_all && self.equivalent_to_explored(v, &explored) {
                continue;
            }
            let mut child: Vec<u32> = cells
                .iter()
                .enumerate()
                .map(|(u, &c)| {
                    if c > target || (c == target && u != v) {
                        c + 1
                    } else {
                        c
                    }
                })
                .collect();
            self.run(&mut child, depth + 1);
            explored.push(v);
        }
    }

    /// Root-level orbit pruning: `v` is skipped when a known automorphism maps
    /// an explored vertex onto it.
    fn equivalent_to_explored(&self, v: usize, explored: &[usize]) -> bool {
        if explored.is_empty() || self.automorphisms.len() < 2 {
            return false;
        }
        let best = &self.best.as_ref().expect("leaf seen").1;
        let n = best.len();
        let mut inv_best = alloc::vec![0usize; n];
        for (u, &l) in best.iter().enumerate() {
            inv_best[l as usize] = u;
        }
        // orbit of v under the group generated by the stored automorphisms
        let gens: Vec<Vec<usize>> = self
            .automorphisms
            .iter()
            .map(|lab| lab.iter().map(|&l| inv_best[l as usize]).collect())
            .collect();
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![v];
        seen[v] = true;
        while let Some(u) = stack.pop() {
            if explored.contains(&u) {
                return true;
            }
            for g in &gens {
                let w = g[u];
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        false
    }
}

fn distinct(cells: &[u32]) -> usize {
    cells.iter().copied().max().map_or(0, |m| m as usize + 1)
}

fn first_nonsingleton(cells: &[u32]) -> u32 {
    let k = distinct(cells);
    let mut size = alloc::vec![0usize; k];
    for &c in cells {
        size[c as usize] += 1;
    }
    size.iter().position(|&s| s > 1).expect("non-discrete partition") as u32
}

fn mix(h: u64, x: u64) -> u64 {
    let mut z = h ^ x.wrapping_add(0x9e37_79b9_7f4a_7c15).wrapping_add(h << 6).wrapping_add(h >> 2);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

const TAG_COMPLEX: u32 = 0x434d_0000;

impl ColouredComplex {
    /// Hypergraph view: vertices in ascending id order, one hyperedge per
    /// facet. With `respect_colours` false every vertex gets the same colour.
    pub(crate) fn hypergraph(&self, respect_colours: bool) -> (Hypergraph, Vec<VertexId>) {
        let ids: Vec<VertexId> = self.vertices().collect();
        let colours = ids
            .iter()
            .map(|&v| {
                if respect_colours {
                    self.colour(v).map_or(0, Colour::index)
                } else {
                    0
                }
            })
            .collect();
        let mut h = Hypergraph::new(TAG_COMPLEX | self.dim() as u32 | if respect_colours { 0x100 } else { 0 }, colours);
        for f in self.facets() {
            h.add_edge(0, f.vertices().iter().map(|v| ids.binary_search(v).expect("vertex") as u32).collect());
        }
        (h, ids)
    }

    /// Form that is equal for two complexes exactly when a colour-preserving
    /// combinatorial isomorphism exists between them.
    pub fn canonical_form(&self) -> CanonicalForm {
        self.hypergraph(true).0.canonical().form
    }

    /// Form of the underlying uncoloured complex.
    pub fn uncoloured_canonical_form(&self) -> CanonicalForm {
        self.hypergraph(false).0.canonical().form
    }

    /// Vertex id → canonical position.
    pub fn canonical_labelling(&self, respect_colours: bool) -> BTreeMap<VertexId, u32> {
        let (h, ids) = self.hypergraph(respect_colours);
        let c = h.canonical();
        ids.into_iter().zip(c.labelling).collect()
    }

    /// All (optionally colour-preserving) automorphisms as vertex maps.
    pub fn automorphisms(&self, respect_colours: bool) -> Vec<BTreeMap<VertexId, VertexId>> {
        let (h, ids) = self.hypergraph(respect_colours);
        h.automorphisms()
            .into_iter()
            .map(|perm| {
                ids.iter()
                    .zip(perm.iter())
                    .map(|(&v, &w)| (v, ids[w as usize]))
                    .collect()
            })
            .collect()
    }
}

/// A combinatorial isomorphism `a → b`, if one exists.
pub fn isomorphism(a: &ColouredComplex, b: &ColouredComplex, respect_colours: bool) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.dim() != b.dim() || a.vertex_count() != b.vertex_count() || a.facets().len() != b.facets().len() {
        return None;
    }
    let (ha, ida) = a.hypergraph(respect_colours);
    let (hb, idb) = b.hypergraph(respect_colours);
    let ca = ha.canonical();
    let cb = hb.canonical();
    if ca.form != cb.form {
        return None;
    }
    let mut by_label = alloc::vec![0 as VertexId; idb.len()];
    for (i, &l) in cb.labelling.iter().enumerate() {
        by_label[l as usize] = idb[i];
    }
    Some(
        ida.iter()
            .zip(ca.labelling.iter())
            .map(|(&v, &l)| (v, by_label[l as usize]))
            .collect(),
    )
}

/// Whether `map` is a bijection `a.vertices → b.vertices` carrying facets
/// onto facets (colours ignored).
pub fn is_isomorphism(a: &ColouredComplex, b: &ColouredComplex, map: &BTreeMap<VertexId, VertexId>) -> bool {
    if a.vertex_count() != b.vertex_count() || a.facets().len() != b.facets().len() || a.dim() != b.dim() {
        return false;
    }
    if !a.vertices().all(|v| map.get(&v).is_some_and(|w| b.has_vertex(*w))) {
        return false;
    }
    let mut images: Vec<VertexId> = map.values().copied().collect();
    images.sort_unstable();
    images.dedup();
    if images.len() != a.vertex_count() {
        return false;
    }
    let target: alloc::collections::BTreeSet<&crate::complex::Simplex> = b.facets().iter().collect();
    a.facets().iter().all(|f| {
        let img = crate::complex::Simplex::new(f.vertices().iter().map(|v| map[v]).collect()).expect("injective");
        target.contains(&img)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn relabelling_preserves_form() {
        let t = fixtures::torus7();
        let moved = t.relabel(|v| (v * 3 + 5) % 7 + 100);
        assert_eq!(t.canonical_form(), moved.canonical_form());
    }

    #[test]
    fn colour_sensitive() {
        let a = ColouredComplex::build(
            3,
            [(0, Colour::Red), (1, Colour::Red), (2, Colour::Red), (3, Colour::Blue)],
            [vec![0, 1, 2, 3]],
        )
        .unwrap();
        let b = a.recolour(|v| if v == 0 { Colour::Red } else { Colour::Blue });
        assert_ne!(a.canonical_form(), b.canonical_form());
        assert_eq!(a.uncoloured_canonical_form(), b.uncoloured_canonical_form());
    }

    #[test]
    fn tetrahedron_boundary_has_24_automorphisms() {
        assert_eq!(fixtures::sigma_t().automorphisms(false).len(), 24);
        assert_eq!(fixtures::torus7().automorphisms(false).len(), 42);
    }

    #[test]
    fn isomorphism_found_between_relabelled_copies() {
        let a = fixtures::octahedron();
        let b = a.relabel(|v| 10 - v);
        let iso = isomorphism(&a, &b, true).unwrap();
        assert!(is_isomorphism(&a, &b, &iso));
        assert!(isomorphism(&a, &fixtures::sigma_t(), false).is_none());
    }
}
