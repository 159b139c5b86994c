//! Combinatorial manifold checks for 3- and 4-dimensional complexes.
//!
//! In dimension 3 the checks are complete: triangles in at most two
//! tetrahedra, connectivity, edge links that are cycles or paths, and vertex
//! links that are 2-spheres (interior) or discs (boundary).
//!
//! In dimension 4 only necessary conditions are tested: pseudomanifold,
//! connectivity, orientability, connected vertex links with the Euler
//! characteristic of `S^3` (interior) or a 3-ball (boundary). Recognising the
//! 3-sphere is not attempted.

use alloc::collections::BTreeSet;
use core::fmt;

use crate::complex::{ColouredComplex, Simplex, VertexId};
use crate::surface::{is_cycle, is_disc, is_path, is_sphere};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    WrongDimension { expected: usize, found: usize },
    Empty,
    /// A codimension-one face in more than two facets.
    Overfull { face: Simplex, count: usize },
    Disconnected { components: usize },
    EdgeLink { edge: Simplex },
    VertexLink { vertex: VertexId },
    NonOrientable,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::WrongDimension { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
            Violation::Empty => f.write_str("empty complex"),
            Violation::Overfull { face, count } => write!(f, "face {face} lies in {count} facets"),
            Violation::Disconnected { components } => write!(f, "complex has {components} components"),
            Violation::EdgeLink { edge } => write!(f, "link of edge {edge} is neither a cycle nor a path"),
            Violation::VertexLink { vertex } => write!(f, "link of vertex {vertex} is not a sphere or ball"),
            Violation::NonOrientable => f.write_str("complex is not orientable"),
        }
    }
}

/// Outcome of a manifold check; `failure` holds the first violation found.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManifoldReport {
    pub failure: Option<Violation>,
}

impl ManifoldReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    fn fail(v: Violation) -> Self {
        ManifoldReport { failure: Some(v) }
    }

    fn pass() -> Self {
        ManifoldReport { failure: None }
    }
}

fn boundary_vertices(k: &ColouredComplex) -> BTreeSet<VertexId> {
    k.boundary().vertices().collect()
}

fn pseudomanifold(k: &ColouredComplex) -> Option<Violation> {
    k.ridge_incidence()
        .into_iter()
        .find(|(_, inc)| inc.len() > 2)
        .map(|(face, inc)| Violation::Overfull { face, count: inc.len() })
}

/// Checks that a 3-complex is a combinatorial 3-manifold, possibly with
/// boundary.
pub fn check_manifold_3d(k: &ColouredComplex) -> ManifoldReport {
    if k.dim() != 3 {
        return ManifoldReport::fail(Violation::WrongDimension { expected: 3, found: k.dim() });
    }
    if k.is_empty() {
        return ManifoldReport::fail(Violation::Empty);
    }
    if let Some(v) = pseudomanifold(k) {
        return ManifoldReport::fail(v);
    }
    let parts = k.components().len();
    if parts != 1 {
        return ManifoldReport::fail(Violation::Disconnected { components: parts });
    }
    for edge in k.simplices(1) {
        let l = k.link(&edge);
        if !(is_cycle(&l) || is_path(&l)) {
            return ManifoldReport::fail(Violation::EdgeLink { edge });
        }
    }
    let on_boundary = boundary_vertices(k);
    for v in k.vertices() {
        let l = k.link(&Simplex::from_sorted(alloc::vec![v]));
        let ok = if on_boundary.contains(&v) { is_disc(&l) } else { is_sphere(&l) };
        if !ok {
            return ManifoldReport::fail(Violation::VertexLink { vertex: v });
        }
    }
    ManifoldReport::pass()
}

/// Necessary manifold conditions for a 4-complex.
pub fn check_manifold_4d(k: &ColouredComplex) -> ManifoldReport {
    if k.dim() != 4 {
        return ManifoldReport::fail(Violation::WrongDimension { expected: 4, found: k.dim() });
    }
    if k.is_empty() {
        return ManifoldReport::fail(Violation::Empty);
    }
    if let Some(v) = pseudomanifold(k) {
        return ManifoldReport::fail(v);
    }
    let parts = k.components().len();
    if parts != 1 {
        return ManifoldReport::fail(Violation::Disconnected { components: parts });
    }
    if k.coherent_orientation().is_none() {
        return ManifoldReport::fail(Violation::NonOrientable);
    }
    let on_boundary = boundary_vertices(k);
    for v in k.vertices() {
        let l = k.link(&Simplex::from_sorted(alloc::vec![v]));
        let want = if on_boundary.contains(&v) { 1 } else { 0 };
        if !l.is_connected() || pseudomanifold(&l).is_some() || l.euler_characteristic() != want {
            return ManifoldReport::fail(Violation::VertexLink { vertex: v });
        }
    }
    ManifoldReport::pass()
}

/// Dimension-dispatching check used by slice validation.
pub fn check_manifold(k: &ColouredComplex) -> ManifoldReport {
    match k.dim() {
        3 => check_manifold_3d(k),
        4 => check_manifold_4d(k),
        d => ManifoldReport::fail(Violation::WrongDimension { expected: 3, found: d }),
    }
}

/// A closed (empty-boundary) orientable manifold in dimension 2 or 3, as
/// required of the base of a prism.
pub fn is_closed_orientable(k: &ColouredComplex) -> bool {
    match k.dim() {
        2 => crate::surface::classify_surface(k).is_ok(),
        3 => check_manifold_3d(k).passed() && k.boundary().is_empty() && k.coherent_orientation().is_some(),
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::colour::Colour;
    use crate::fixtures;
    use alloc::vec;

    #[test]
    fn single_tetrahedron_is_a_ball() {
        let k = ColouredComplex::from_facets(3, vec![vec![0, 1, 2, 3]], |_| Colour::Red).unwrap();
        assert!(check_manifold_3d(&k).passed());
    }

    #[test]
    fn pinched_edge_fails_at_that_edge() {
        let k = ColouredComplex::from_facets(3, vec![vec![0, 1, 2, 3], vec![0, 1, 4, 5]], |_| Colour::Red).unwrap();
        let r = check_manifold_3d(&k);
        assert_eq!(
            r.failure,
            Some(Violation::EdgeLink {
                edge: Simplex::new(vec![0, 1]).unwrap()
            })
        );
    }

    #[test]
    fn boundary_of_four_simplex_is_closed_three_manifold() {
        let k = fixtures::boundary_4simplex();
        assert!(check_manifold_3d(&k).passed());
        assert!(is_closed_orientable(&k));
    }

    #[test]
    fn triangle_in_three_tetrahedra_is_overfull() {
        let k = ColouredComplex::from_facets(
            3,
            vec![vec![0, 1, 2, 3], vec![0, 1, 2, 4], vec![0, 1, 2, 5]],
            |_| Colour::Red,
        )
        .unwrap();
        assert!(matches!(check_manifold_3d(&k).failure, Some(Violation::Overfull { count: 3, .. })));
    }

    #[test]
    fn single_four_simplex_passes_4d_checks() {
        let k = ColouredComplex::from_facets(4, vec![vec![0, 1, 2, 3, 4]], |_| Colour::Red).unwrap();
        assert!(check_manifold_4d(&k).passed());
    }
}
