//! Built-in complexes shared by tests, documentation and the CLI.
//!
//! Surfaces are returned with every vertex coloured red; callers that need a
//! different colouring recolour them.

use alloc::vec;
use alloc::vec::Vec;

use crate::colour::Colour;
use crate::complex::{ColouredComplex, Simplex, VertexId};
use crate::midsection::{Cell, CellKind, MidsectionComplex};

fn all_red(dim: usize, facets: Vec<Vec<VertexId>>) -> ColouredComplex {
    ColouredComplex::from_facets(dim, facets, |_| Colour::Red).expect("fixture is well formed")
}

/// Boundary of a tetrahedron on vertices `0..4`.
pub fn sigma_t() -> ColouredComplex {
    let facets = Simplex::from_sorted(vec![0, 1, 2, 3])
        .subsets(3)
        .into_iter()
        .map(Simplex::into_vec)
        .collect();
    all_red(2, facets)
}

/// Boundary of the octahedron; antipodal pairs are `{0,1}`, `{2,3}`, `{4,5}`.
/// Every vertex has degree 4.
pub fn octahedron() -> ColouredComplex {
    let mut facets = Vec::new();
    for a in [0, 1] {
        for b in [2, 3] {
            for c in [4, 5] {
                facets.push(vec![a, b, c]);
            }
        }
    }
    all_red(2, facets)
}

/// Möbius' 7-vertex torus: triangles `{i, i+1, i+3}` and `{i, i+2, i+3}` mod 7.
pub fn torus7() -> ColouredComplex {
    let mut facets = Vec::new();
    for i in 0..7u32 {
        facets.push(vec![i, (i + 1) % 7, (i + 3) % 7]);
        facets.push(vec![i, (i + 2) % 7, (i + 3) % 7]);
    }
    all_red(2, facets)
}

/// Boundary of the 4-simplex on vertices `0..5`, a triangulated 3-sphere.
pub fn boundary_4simplex() -> ColouredComplex {
    let facets = Simplex::from_sorted(vec![0, 1, 2, 3, 4])
        .subsets(4)
        .into_iter()
        .map(Simplex::into_vec)
        .collect();
    all_red(3, facets)
}

/// Replaces triangle `index` (in facet order) of a surface by the cone from a
/// new vertex, which then has degree 3.
pub fn stellar_subdivide(surface: &ColouredComplex, index: usize) -> ColouredComplex {
    let facets = surface.facets();
    let target = &facets[index % facets.len()];
    let fresh = surface.vertices().max().map_or(0, |m| m + 1);
    let mut out: Vec<Vec<VertexId>> = facets
        .iter()
        .filter(|f| *f != target)
        .map(|f| f.vertices().to_vec())
        .collect();
    for edge in target.faces() {
        let mut t = edge.into_vec();
        t.push(fresh);
        out.push(t);
    }
    all_red(2, out)
}

/// Sphere obtained from `sigma_t` by successive stellar subdivisions.
pub fn stellar_sphere(choices: &[usize]) -> ColouredComplex {
    choices
        .iter()
        .fold(sigma_t(), |s, &c| stellar_subdivide(&s, c))
}

/// A coloured cell complex homeomorphic to `S^2` that is not a midsection.
///
/// It is the double of a disc whose boundary consists of one red and one
/// blue edge, both joining corners `A = 0` and `B = 1`. The disc is a red
/// triangle `(A, B, C)`, a blue triangle `(A, B, E)` and two quadrangles
/// `(A, C, M, E)` and `(C, B, E, M)`; the second copy uses `C', E', M'`.
/// Corners `A` and `B` are joined by a red edge and by a blue edge.
pub fn fig4() -> MidsectionComplex {
    const A: u32 = 0;
    const B: u32 = 1;
    let mut cells = Vec::new();
    for (c, e, m) in [(2, 3, 4), (5, 6, 7)] {
        cells.push(Cell::new(CellKind::RedTriangle, vec![A, B, c]));
        cells.push(Cell::new(CellKind::BlueTriangle, vec![A, B, e]));
        // cyclic order starting with a red edge
        cells.push(Cell::new(CellKind::Quadrangle, vec![A, c, m, e]));
        cells.push(Cell::new(CellKind::Quadrangle, vec![c, B, e, m]));
    }
    MidsectionComplex::from_cells(2, 8, cells).expect("fixture is well formed")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_sizes() {
        assert_eq!(sigma_t().f_vector(), vec![4, 6, 4]);
        assert_eq!(octahedron().f_vector(), vec![6, 12, 8]);
        assert_eq!(torus7().f_vector(), vec![7, 21, 14]);
        assert_eq!(boundary_4simplex().f_vector(), vec![5, 10, 10, 5]);
    }

    #[test]
    fn octahedron_has_no_degree_three_vertex() {
        let o = octahedron();
        assert!(o.vertices().all(|v| o.neighbours(v).len() == 4));
    }

    #[test]
    fn stellar_spheres_grow_by_two_triangles() {
        let s = stellar_sphere(&[0, 3, 7, 1]);
        assert_eq!(s.facets().len(), 4 + 2 * 4);
        assert!(crate::surface::is_sphere(&s));
    }
}
