//! Inverse of the midsection map.
//!
//! Corners joined by a blue path come from mixed edges with the same red
//! endpoint, and corners joined by a red path from mixed edges with the same
//! blue endpoint. Classes under blue paths therefore become red vertices and
//! classes under red paths become blue vertices; each cell yields the simplex
//! spanned by the classes of its corners. The same rule serves both
//! dimensions and all seven cell kinds.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::canon::CanonicalForm;
use crate::causal::{validate_slice, CausalSlice, SliceError};
use crate::colour::Colour;
use crate::complex::{ColouredComplex, ComplexError, Simplex, VertexId};
use crate::midsection::{midsection, CornerId, MidsectionComplex};
use crate::unionfind::UnionFind;

/// Class labels of every corner: `r[v]` under blue paths, `b[v]` under red
/// paths.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPairing {
    pub r: Vec<u32>,
    pub b: Vec<u32>,
    pub red_count: u32,
    pub blue_count: u32,
}

impl VertexPairing {
    pub fn of(s: &MidsectionComplex) -> VertexPairing {
        let n = s.corner_count() as usize;
        let (mut by_blue, mut by_red) = (UnionFind::new(n), UnionFind::new(n));
        for cell in s.cells() {
            for (a, b, c) in cell.edges() {
                match c {
                    Colour::Blue => by_blue.union(a as usize, b as usize),
                    Colour::Red => by_red.union(a as usize, b as usize),
                };
            }
        }
        let (r, red_count) = by_blue.classes();
        let (b, blue_count) = by_red.classes();
        VertexPairing {
            r: r.into_iter().map(|x| x as u32).collect(),
            b: b.into_iter().map(|x| x as u32).collect(),
            red_count: red_count as u32,
            blue_count: blue_count as u32,
        }
    }

    /// Two distinct corners with equal `(r, b)`, if any.
    pub fn obstruction(&self) -> Option<(CornerId, CornerId)> {
        let mut seen: BTreeMap<(u32, u32), CornerId> = BTreeMap::new();
        for v in 0..self.r.len() {
            if let Some(&w) = seen.get(&(self.r[v], self.b[v])) {
                return Some((w, v as CornerId));
            }
            seen.insert((self.r[v], self.b[v]), v as CornerId);
        }
        None
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum ReconstructError {
    #[error("ObstructionError: corners {0} and {1} are joined by red and blue paths")]
    Obstruction(CornerId, CornerId),
    #[error("CollisionError: cell {cell} yields a simplex of the wrong type")]
    DegenerateCell { cell: usize },
    #[error("CollisionError: two cells yield the simplex {0}")]
    Collision(Simplex),
    #[error("ValidationError: {0}")]
    Validation(#[from] SliceError),
}

/// Builds the slice whose midsection is `s`, or explains why none exists.
/// Red vertices are numbered `0..R` by blue-path class, blue vertices
/// `R..R+B` by red-path class.
pub fn reconstruct(s: &MidsectionComplex) -> Result<CausalSlice, ReconstructError> {
    let pairing = VertexPairing::of(s);
    if let Some((v, w)) = pairing.obstruction() {
        return Err(ReconstructError::Obstruction(v, w));
    }
    let red = pairing.red_count;
    let mut facets = Vec::with_capacity(s.cells().len());
    for (i, cell) in s.cells().iter().enumerate() {
        let mut v: Vec<VertexId> = cell
            .corners()
            .iter()
            .flat_map(|&c| [pairing.r[c as usize], red + pairing.b[c as usize]])
            .collect();
        v.sort_unstable();
        v.dedup();
        let t = cell.kind().simplex_type();
        let reds = v.iter().filter(|&&x| x < red).count();
        if reds != t.red || v.len() != t.red + t.blue {
            return Err(ReconstructError::DegenerateCell { cell: i });
        }
        facets.push(v);
    }
    let colours = (0..red + pairing.blue_count).map(|v| (v, if v < red { Colour::Red } else { Colour::Blue }));
    let k = match ColouredComplex::build(s.dim() + 1, colours, facets) {
        Ok(k) => k,
        Err(ComplexError::DuplicateSimplex(simplex)) => return Err(ReconstructError::Collision(simplex)),
        Err(e) => unreachable!("emitted simplices are well formed: {e}"),
    };
    Ok(validate_slice(&k, false)?)
}

/// Canonical forms of a slice and of the reconstruction of its midsection.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub original: CanonicalForm,
    pub reconstructed: CanonicalForm,
}

impl Certificate {
    pub fn equal(&self) -> bool {
        self.original == self.reconstructed
    }
}

pub fn roundtrip_certify(slice: &CausalSlice) -> Result<Certificate, ReconstructError> {
    let back = reconstruct(&midsection(slice))?;
    Ok(Certificate {
        original: slice.complex().canonical_form(),
        reconstructed: back.complex().canonical_form(),
    })
}

/// Whether `s` is the midsection of its own reconstruction, up to
/// isomorphism.
pub fn is_midsection(s: &MidsectionComplex) -> bool {
    reconstruct(s).is_ok_and(|k| midsection(&k).canonical_form() == s.canonical_form())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{lemma3_slice, prism_slice};
    use crate::fixtures;

    #[test]
    fn fixtures_round_trip() {
        for slice in [
            prism_slice(&fixtures::sigma_t(), None).unwrap(),
            prism_slice(&fixtures::torus7(), None).unwrap(),
            lemma3_slice(&fixtures::sigma_t()).unwrap(),
            prism_slice(&fixtures::boundary_4simplex(), None).unwrap(),
        ] {
            assert!(roundtrip_certify(&slice).unwrap().equal());
        }
    }

    #[test]
    fn fig4_is_obstructed() {
        let err = reconstruct(&fixtures::fig4()).unwrap_err();
        assert_eq!(err, ReconstructError::Obstruction(0, 1));
    }

    #[test]
    fn midsection_of_reconstruction_matches() {
        let s = midsection(&lemma3_slice(&fixtures::stellar_sphere(&[1, 4])).unwrap());
        assert!(is_midsection(&s));
    }
}
