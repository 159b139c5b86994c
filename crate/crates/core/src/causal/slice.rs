use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec::Vec;
use core::fmt;

use thiserror::Error;

use crate::colour::Colour;
use crate::complex::{ColouredComplex, Simplex};
use crate::manifold::{check_manifold, check_manifold_3d, Violation};
use crate::surface::{classify_surface, SurfaceError};

/// `(k, D+1-k)`: `red` vertices and `blue` vertices of a `D`-simplex.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimplexType {
    pub red: usize,
    pub blue: usize,
}

impl SimplexType {
    pub fn dim(&self) -> usize {
        self.red + self.blue - 1
    }

    /// Number of corners of the midsection cell: one per mixed edge.
    pub fn corner_count(&self) -> usize {
        self.red * self.blue
    }
}

impl fmt::Display for SimplexType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.red, self.blue)
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SliceError {
    #[error("slices must have dimension 3 or 4, got {0}")]
    WrongDimension(usize),
    #[error("{colour} mono-coloured top simplex {simplex}")]
    MonoColouredFacet { simplex: Simplex, colour: Colour },
    #[error("not a manifold: {0}")]
    Manifold(Violation),
    #[error("not orientable")]
    NonOrientable,
    #[error("boundary has {0} components, expected 2")]
    BoundaryComponents(usize),
    #[error("boundary components are not one all-red and one all-blue")]
    BoundaryColouring,
    #[error("{colour} simplex {simplex} is not in the {colour} boundary component")]
    MonoSimplexOffBoundary { simplex: Simplex, colour: Colour },
    #[error("{colour} boundary component is not a closed surface: {source}")]
    BoundarySurface { colour: Colour, source: SurfaceError },
    #[error("boundary genera differ: red {red}, blue {blue}")]
    GenusMismatch { red: u32, blue: u32 },
    #[error("boundary components have genus {0}, expected 2-spheres")]
    NotSpheres(u32),
    #[error("{colour} boundary component is not a closed 3-manifold: {violation}")]
    BoundaryManifold { colour: Colour, violation: Violation },
}

/// Classifies a top simplex from the colours of its vertices.
pub fn classify_simplex(colours: &[Colour]) -> Result<SimplexType, SliceError> {
    let red = colours.iter().filter(|&&c| c == Colour::Red).count();
    let blue = colours.len() - red;
    if red == 0 || blue == 0 {
        let colour = if red == 0 { Colour::Blue } else { Colour::Red };
        return Err(SliceError::MonoColouredFacet {
            simplex: Simplex::from_sorted(Vec::new()),
            colour,
        });
    }
    Ok(SimplexType { red, blue })
}

/// A validated (possibly generalized) causal slice.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CausalSlice {
    complex: ColouredComplex,
    red_boundary: ColouredComplex,
    blue_boundary: ColouredComplex,
    generalized: bool,
    genus: Option<u32>,
}

impl CausalSlice {
    pub fn complex(&self) -> &ColouredComplex {
        &self.complex
    }

    pub fn red_boundary(&self) -> &ColouredComplex {
        &self.red_boundary
    }

    pub fn blue_boundary(&self) -> &ColouredComplex {
        &self.blue_boundary
    }

    pub fn boundary(&self, colour: Colour) -> &ColouredComplex {
        match colour {
            Colour::Red => &self.red_boundary,
            Colour::Blue => &self.blue_boundary,
        }
    }

    /// True unless both boundary components were certified as spheres.
    pub fn generalized(&self) -> bool {
        self.generalized
    }

    /// Genus of the boundary surfaces (dimension 3 only).
    pub fn genus(&self) -> Option<u32> {
        self.genus
    }

    pub fn dim(&self) -> usize {
        self.complex.dim()
    }

    /// Number of top simplices.
    pub fn volume(&self) -> usize {
        self.complex.facets().len()
    }

    pub fn simplex_type(&self, s: &Simplex) -> SimplexType {
        let red = s
            .vertices()
            .iter()
            .filter(|&&v| self.complex.colour(v) == Some(Colour::Red))
            .count();
        SimplexType { red, blue: s.len() - red }
    }

    /// The same slice with colours exchanged, so that its blue boundary
    /// becomes red and vice versa. Every slice condition is symmetric in the
    /// two colours, so the result is again a slice.
    pub fn reversed(&self) -> CausalSlice {
        let k = &self.complex;
        let flip = |c: &ColouredComplex| c.recolour(|v| c.colour(v).expect("declared").other());
        CausalSlice {
            complex: k.recolour(|v| k.colour(v).expect("declared").other()),
            red_boundary: flip(&self.blue_boundary),
            blue_boundary: flip(&self.red_boundary),
            generalized: self.generalized,
            genus: self.genus,
        }
    }

    /// Top simplices per type, ordered by red count.
    pub fn type_counts(&self) -> BTreeMap<SimplexType, usize> {
        let mut out = BTreeMap::new();
        for f in self.complex.facets() {
            *out.entry(self.simplex_type(f)).or_insert(0) += 1;
        }
        out
    }
}

/// Checks every causal-slice condition. For `D = 3` with
/// `require_sphere_boundaries` the cylinder condition is certified as a
/// manifold with two 2-sphere boundary components; otherwise the slice is
/// accepted as a generalized slice whose boundary genera agree.
pub fn validate_slice(k: &ColouredComplex, require_sphere_boundaries: bool) -> Result<CausalSlice, SliceError> {
    let dim = k.dim();
    if dim != 3 && dim != 4 {
        return Err(SliceError::WrongDimension(dim));
    }
    for f in k.facets() {
        let colours: Vec<Colour> = f.vertices().iter().map(|&v| k.colour(v).expect("declared")).collect();
        if let Err(SliceError::MonoColouredFacet { colour, .. }) = classify_simplex(&colours) {
            return Err(SliceError::MonoColouredFacet { simplex: f.clone(), colour });
        }
    }
    if let Some(v) = check_manifold(k).failure {
        return Err(SliceError::Manifold(v));
    }
    if dim == 3 && k.coherent_orientation().is_none() {
        return Err(SliceError::NonOrientable);
    }
    let parts = k.boundary().components();
    if parts.len() != 2 {
        return Err(SliceError::BoundaryComponents(parts.len()));
    }
    let mono = |c: &ColouredComplex| -> Option<Colour> {
        let mut cs = c.colours().values();
        let first = *cs.next()?;
        cs.all(|&x| x == first).then_some(first)
    };
    let (red_boundary, blue_boundary) = match (mono(&parts[0]), mono(&parts[1])) {
        (Some(Colour::Red), Some(Colour::Blue)) => (parts[0].clone(), parts[1].clone()),
        (Some(Colour::Blue), Some(Colour::Red)) => (parts[1].clone(), parts[0].clone()),
        _ => return Err(SliceError::BoundaryColouring),
    };
    check_mono_simplices(k, &red_boundary, &blue_boundary)?;

    if dim == 4 {
        for (colour, b) in [(Colour::Red, &red_boundary), (Colour::Blue, &blue_boundary)] {
            let report = check_manifold_3d(b);
            if let Some(violation) = report.failure {
                return Err(SliceError::BoundaryManifold { colour, violation });
            }
        }
        return Ok(CausalSlice {
            complex: k.clone(),
            red_boundary,
            blue_boundary,
            generalized: false,
            genus: None,
        });
    }

    let red = classify_surface(&red_boundary)
        .map_err(|source| SliceError::BoundarySurface { colour: Colour::Red, source })?;
    let blue = classify_surface(&blue_boundary)
        .map_err(|source| SliceError::BoundarySurface { colour: Colour::Blue, source })?;
    if red.genus != blue.genus {
        return Err(SliceError::GenusMismatch { red: red.genus, blue: blue.genus });
    }
    if require_sphere_boundaries && red.genus != 0 {
        return Err(SliceError::NotSpheres(red.genus));
    }
    Ok(CausalSlice {
        complex: k.clone(),
        red_boundary,
        blue_boundary,
        generalized: red.genus != 0,
        genus: Some(red.genus),
    })
}

fn check_mono_simplices(
    k: &ColouredComplex,
    red_boundary: &ColouredComplex,
    blue_boundary: &ColouredComplex,
) -> Result<(), SliceError> {
    let mut seen: BTreeSet<Simplex> = BTreeSet::new();
    for f in k.facets() {
        for colour in [Colour::Red, Colour::Blue] {
            let part: Vec<u32> = f
                .vertices()
                .iter()
                .copied()
                .filter(|&v| k.colour(v) == Some(colour))
                .collect();
            let part = Simplex::from_sorted(part);
            // every mono-coloured face of f is a subset of `part`
            if part.is_empty() || !seen.insert(part.clone()) {
                continue;
            }
            let target = if colour == Colour::Red { red_boundary } else { blue_boundary };
            for size in 1..=part.len() {
                for s in part.subsets(size) {
                    if !target.contains_simplex(&s) {
                        return Err(SliceError::MonoSimplexOffBoundary { simplex: s, colour });
                    }
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn classify_examples() {
        use Colour::{Blue as B, Red as R};
        assert_eq!(classify_simplex(&[R, R, R, B]).unwrap(), SimplexType { red: 3, blue: 1 });
        assert_eq!(classify_simplex(&[R, R, B, B]).unwrap(), SimplexType { red: 2, blue: 2 });
        assert!(matches!(
            classify_simplex(&[B, B, B, B]),
            Err(SliceError::MonoColouredFacet { colour: Colour::Blue, .. })
        ));
    }

    #[test]
    fn lone_mixed_tetrahedron_has_one_boundary_component() {
        let k = ColouredComplex::build(
            3,
            [(0, Colour::Red), (1, Colour::Red), (2, Colour::Blue), (3, Colour::Blue)],
            [vec![0, 1, 2, 3]],
        )
        .unwrap();
        assert_eq!(validate_slice(&k, true), Err(SliceError::BoundaryComponents(1)));
    }

    #[test]
    fn mono_coloured_facet_is_rejected_first() {
        let k = ColouredComplex::from_facets(3, vec![vec![0, 1, 2, 3]], |_| Colour::Blue).unwrap();
        assert!(matches!(validate_slice(&k, true), Err(SliceError::MonoColouredFacet { .. })));
    }

    #[test]
    fn wrong_dimension() {
        let k = crate::fixtures::sigma_t();
        assert_eq!(validate_slice(&k, true), Err(SliceError::WrongDimension(2)));
    }
}
