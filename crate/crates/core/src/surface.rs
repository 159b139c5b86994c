//! Recognition of closed orientable surfaces by link conditions.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use thiserror::Error;

use crate::complex::{ColouredComplex, Simplex, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceClass {
    pub genus: u32,
    pub closed: bool,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("expected a 2-dimensional complex, got dimension {0}")]
    WrongDimension(usize),
    #[error("empty complex is not a surface")]
    Empty,
    #[error("not a closed surface: edge {edge} lies in {count} triangles")]
    EdgeNotClosed { edge: Simplex, count: usize },
    #[error("not a closed surface: link of vertex {0} is not a single cycle")]
    SingularVertex(VertexId),
    #[error("surface has {0} connected components")]
    Disconnected(usize),
    #[error("surface is not orientable")]
    NonOrientable,
}

/// Classifies a connected closed surface, returning its genus from
/// `χ = 2 - 2g`. Orientability is established by propagating a coherent
/// orientation, never inferred from `χ`.
pub fn classify_surface(k: &ColouredComplex) -> Result<SurfaceClass, SurfaceError> {
    if k.dim() != 2 {
        return Err(SurfaceError::WrongDimension(k.dim()));
    }
    if k.is_empty() {
        return Err(SurfaceError::Empty);
    }
    for (edge, inc) in k.ridge_incidence() {
        if inc.len() != 2 {
            return Err(SurfaceError::EdgeNotClosed { edge, count: inc.len() });
        }
    }
    for v in k.vertices() {
        if !is_cycle(&k.link(&Simplex::from_sorted(alloc::vec![v]))) {
            return Err(SurfaceError::SingularVertex(v));
        }
    }
    let parts = k.components().len();
    if parts != 1 {
        return Err(SurfaceError::Disconnected(parts));
    }
    if k.coherent_orientation().is_none() {
        return Err(SurfaceError::NonOrientable);
    }
    let chi = k.euler_characteristic();
    debug_assert!(chi <= 2 && chi % 2 == 0);
    Ok(SurfaceClass {
        genus: ((2 - chi) / 2) as u32,
        closed: true,
    })
}

/// Degrees of the vertices of a 1-dimensional complex.
fn degrees(graph: &ColouredComplex) -> BTreeMap<VertexId, usize> {
    let mut deg = BTreeMap::new();
    for e in graph.facets() {
        for &v in e.vertices() {
            *deg.entry(v).or_insert(0) += 1;
        }
    }
    deg
}

/// A connected 1-complex in which every vertex has degree 2.
pub fn is_cycle(graph: &ColouredComplex) -> bool {
    graph.dim() == 1
        && !graph.is_empty()
        && degrees(graph).values().all(|&d| d == 2)
        && graph.is_connected()
}

/// A connected 1-complex with two vertices of degree 1 and the rest of degree 2.
pub fn is_path(graph: &ColouredComplex) -> bool {
    if graph.dim() != 1 || graph.is_empty() {
        return false;
    }
    let deg = degrees(graph);
    let ends = deg.values().filter(|&&d| d == 1).count();
    ends == 2 && deg.values().all(|&d| d <= 2) && graph.is_connected()
}

/// A 2-complex that is a disc: connected, every edge in one or two
/// triangles, boundary edges forming a single cycle, vertex links paths or
/// cycles, and `χ = 1`.
pub fn is_disc(k: &ColouredComplex) -> bool {
    if k.dim() != 2 || k.is_empty() || !k.is_connected() {
        return false;
    }
    let mut boundary: Vec<Simplex> = Vec::new();
    for (edge, inc) in k.ridge_incidence() {
        match inc.len() {
            1 => boundary.push(edge),
            2 => {}
            _ => return false,
        }
    }
    if boundary.is_empty() {
        return false;
    }
    let rim = k.subcomplex(1, boundary);
    if !is_cycle(&rim) {
        return false;
    }
    for v in k.vertices() {
        let l = k.link(&Simplex::from_sorted(alloc::vec![v]));
        if !(is_cycle(&l) || is_path(&l)) {
            return false;
        }
    }
    k.euler_characteristic() == 1
}

/// A closed connected surface with `χ = 2`, i.e. a 2-sphere.
pub fn is_sphere(k: &ColouredComplex) -> bool {
    matches!(classify_surface(k), Ok(SurfaceClass { genus: 0, .. }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colour::Colour;
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn tetrahedron_boundary_is_sphere() {
        let c = classify_surface(&fixtures::sigma_t()).unwrap();
        assert_eq!(c, SurfaceClass { genus: 0, closed: true });
    }

    #[test]
    fn seven_vertex_torus_has_genus_one() {
        let t = fixtures::torus7();
        assert_eq!(t.euler_characteristic(), 0);
        assert_eq!(classify_surface(&t).unwrap().genus, 1);
    }

    #[test]
    fn octahedron_is_sphere() {
        assert!(is_sphere(&fixtures::octahedron()));
    }

    #[test]
    fn projective_plane_is_rejected() {
        // six-vertex real projective plane
        let tris = vec![
            vec![0, 1, 2],
            vec![0, 2, 3],
            vec![0, 3, 4],
            vec![0, 4, 5],
            vec![0, 5, 1],
            vec![1, 2, 4],
            vec![2, 3, 5],
            vec![3, 4, 1],
            vec![4, 5, 2],
            vec![5, 1, 3],
        ];
        let k = ColouredComplex::from_facets(2, tris, |_| Colour::Red).unwrap();
        assert_eq!(k.euler_characteristic(), 1);
        assert_eq!(classify_surface(&k), Err(SurfaceError::NonOrientable));
    }

    #[test]
    fn single_triangle_is_a_disc_not_closed() {
        let k = ColouredComplex::from_facets(2, vec![vec![0, 1, 2]], |_| Colour::Red).unwrap();
        assert!(is_disc(&k));
        assert!(matches!(classify_surface(&k), Err(SurfaceError::EdgeNotClosed { count: 1, .. })));
    }

    #[test]
    fn two_disjoint_spheres_are_disconnected() {
        let a = fixtures::sigma_t();
        let b = a.relabel(|v| v + 10);
        let facets = a.facets().iter().chain(b.facets()).map(|s| s.vertices().to_vec()).collect();
        let k = ColouredComplex::from_facets(2, facets, |_| Colour::Red).unwrap();
        assert_eq!(classify_surface(&k), Err(SurfaceError::Disconnected(2)));
    }
}
