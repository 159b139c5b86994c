use alloc::collections::{BTreeMap, BTreeSet};
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::slice::{validate_slice, CausalSlice, SliceError};
use crate::colour::Colour;
use crate::complex::{ColouredComplex, VertexId};
use crate::manifold::is_closed_orientable;
use crate::surface::{classify_surface, SurfaceError};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum BuildError {
    #[error("base is not a closed, connected, orientable manifold")]
    NotClosedManifold,
    #[error("vertex order is not a permutation of the base vertices")]
    BadOrder,
    #[error("base is not a 2-sphere: {0}")]
    NotSphere(SurfaceError),
    #[error("base is a surface of genus {0}, not a 2-sphere")]
    PositiveGenus(u32),
    #[error("no vertex of degree 3; the degree 4/5 variant is not implemented")]
    NoDegreeThreeVertex,
    #[error("constructed complex is not a slice: {0}")]
    Slice(#[from] SliceError),
}

/// Staircase triangulation of `base × [0,1]`.
///
/// Vertex `v` at position `p` of `order` (ascending ids when `None`) becomes
/// red vertex `p` and blue vertex `n + p`. A base simplex `v0 < … < v_{D-1}`
/// (in that order) yields the `D` simplices `{v0..v_i, v_i'..v_{D-1}'}`.
pub fn prism_slice(base: &ColouredComplex, order: Option<&[VertexId]>) -> Result<CausalSlice, BuildError> {
    if base.is_empty() || !base.is_connected() || !is_closed_orientable(base) {
        return Err(BuildError::NotClosedManifold);
    }
    let ids: Vec<VertexId> = match order {
        Some(o) => {
            let given: BTreeSet<VertexId> = o.iter().copied().collect();
            if given.len() != o.len() || !given.iter().copied().eq(base.vertices()) {
                return Err(BuildError::BadOrder);
            }
            o.to_vec()
        }
        None => base.vertices().collect(),
    };
    let pos: BTreeMap<VertexId, u32> = ids.iter().enumerate().map(|(p, &v)| (v, p as u32)).collect();
    let n = ids.len() as u32;
    let mut facets = Vec::new();
    for f in base.facets() {
        let mut p: Vec<u32> = f.vertices().iter().map(|v| pos[v]).collect();
        p.sort_unstable();
        for i in 0..p.len() {
            let mut s: Vec<u32> = p[..=i].to_vec();
            s.extend(p[i..].iter().map(|&x| x + n));
            facets.push(s);
        }
    }
    let colours = (0..2 * n).map(|v| (v, if v < n { Colour::Red } else { Colour::Blue }));
    let k = ColouredComplex::build(base.dim() + 1, colours, facets).expect("staircase is well formed");
    Ok(validate_slice(&k, false)?)
}

/// Slice with red boundary `sigma` and blue boundary the boundary of a
/// tetrahedron: the cone over `sigma` with the star of a degree-3 vertex
/// removed and thirteen tetrahedra added. Uses the least degree-3 vertex.
///
/// Writing `0` for that vertex, `1 < 2 < 3` for its neighbours and `a` for the
/// cone apex, the new blue vertices `a, b, c, d` get ids `m+1..=m+4` where
/// `m` is the largest id of `sigma`.
pub fn lemma3_slice(sigma: &ColouredComplex) -> Result<CausalSlice, BuildError> {
    let class = classify_surface(sigma).map_err(BuildError::NotSphere)?;
    if class.genus != 0 {
        return Err(BuildError::PositiveGenus(class.genus));
    }
    let v0 = sigma
        .vertices()
        .find(|&v| sigma.neighbours(v).len() == 3)
        .ok_or(BuildError::NoDegreeThreeVertex)?;
    let nb: Vec<VertexId> = sigma.neighbours(v0).into_iter().collect();
    let (v1, v2, v3) = (nb[0], nb[1], nb[2]);
    let m = sigma.vertices().max().expect("nonempty");
    let (a, b, c, d) = (m + 1, m + 2, m + 3, m + 4);

    let mut facets: Vec<Vec<VertexId>> = sigma
        .facets()
        .iter()
        .filter(|t| !t.contains(v0))
        .map(|t| {
            let mut s = t.vertices().to_vec();
            s.push(a);
            s
        })
        .collect();
    facets.extend([
        // (3,1): fill the hole in sigma
        vec![b, v0, v2, v3],
        vec![c, v0, v1, v3],
        vec![d, v0, v1, v2],
        // (1,3): attach to the tetrahedron boundary
        vec![a, c, d, v1],
        vec![a, b, d, v2],
        vec![a, b, c, v3],
        vec![b, c, d, v0],
        // (2,2)
        vec![c, d, v0, v1],
        vec![b, d, v0, v2],
        vec![b, c, v0, v3],
        vec![a, c, v1, v3],
        vec![a, d, v1, v2],
        vec![a, b, v2, v3],
    ]);
    let colours = sigma
        .vertices()
        .map(|v| (v, Colour::Red))
        .chain([a, b, c, d].into_iter().map(|v| (v, Colour::Blue)));
    let k = ColouredComplex::build(3, colours, facets).expect("construction is well formed");
    Ok(validate_slice(&k, true)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphism;
    use crate::causal::SimplexType;
    use crate::fixtures;

    fn counts(s: &CausalSlice) -> Vec<usize> {
        s.type_counts().values().copied().collect()
    }

    #[test]
    fn prism_over_sigma_t() {
        let s = prism_slice(&fixtures::sigma_t(), None).unwrap();
        assert_eq!(s.volume(), 12);
        assert_eq!(counts(&s), vec![4, 4, 4]);
        assert!(!s.generalized());
        assert_eq!(s.genus(), Some(0));
        assert_eq!(s.red_boundary().facets().len(), 4);
        assert_eq!(s.blue_boundary().facets().len(), 4);
        assert!(isomorphism(s.red_boundary(), &fixtures::sigma_t(), false).is_some());
        assert!(isomorphism(s.blue_boundary(), &fixtures::sigma_t(), false).is_some());
    }

    #[test]
    fn prism_over_torus_is_generalized() {
        let s = prism_slice(&fixtures::torus7(), None).unwrap();
        assert_eq!(s.volume(), 42);
        assert!(s.generalized());
        assert_eq!(s.genus(), Some(1));
    }

    #[test]
    fn prism_over_boundary_of_four_simplex() {
        let s = prism_slice(&fixtures::boundary_4simplex(), None).unwrap();
        assert_eq!(s.volume(), 20);
        let t = s.type_counts();
        for red in 1..=4 {
            assert_eq!(t[&SimplexType { red, blue: 5 - red }], 5);
        }
        assert_eq!(s.genus(), None);
    }

    #[test]
    fn prism_respects_custom_order() {
        let base = fixtures::octahedron();
        let s = prism_slice(&base, Some(&[5, 3, 1, 0, 2, 4])).unwrap();
        assert_eq!(s.volume(), 24);
        assert_eq!(prism_slice(&base, Some(&[0, 1])), Err(BuildError::BadOrder));
    }

    #[test]
    fn prism_rejects_open_base() {
        let disc = ColouredComplex::from_facets(2, vec![vec![0, 1, 2]], |_| Colour::Red).unwrap();
        assert_eq!(prism_slice(&disc, None), Err(BuildError::NotClosedManifold));
    }

    #[test]
    fn lemma3_over_sigma_t() {
        let s = lemma3_slice(&fixtures::sigma_t()).unwrap();
        assert_eq!(s.volume(), 14);
        assert_eq!(counts(&s), vec![4, 6, 4]);
        assert!(isomorphism(s.blue_boundary(), &fixtures::sigma_t(), false).is_some());
    }

    #[test]
    fn lemma3_needs_degree_three() {
        assert_eq!(lemma3_slice(&fixtures::octahedron()), Err(BuildError::NoDegreeThreeVertex));
        assert!(matches!(lemma3_slice(&fixtures::torus7()), Err(BuildError::PositiveGenus(1))));
    }
}
