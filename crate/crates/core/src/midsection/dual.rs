//! Dual graphs of 2-dimensional midsections and the Euler identity.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use thiserror::Error;

use super::{edge_key, midsection, CellKind, EdgeKey, MidsectionComplex};
use crate::causal::CausalSlice;
use crate::colour::Colour;
use crate::unionfind::UnionFind;

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum DualError {
    #[error("dual graphs need a 2-dimensional midsection, got dimension {0}")]
    WrongDimension(usize),
    #[error("edge {0:?} lies in {1} cells, expected 2")]
    NotClosed(EdgeKey, usize),
    #[error("cells cannot be oriented coherently")]
    NonOrientable,
    #[error("counting identity failed: {0}")]
    Count(&'static str),
}

/// `G_colour`: one node per quadrangle or `colour` triangle, one arc per
/// `colour` edge, embedded in the midsection surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualGraph {
    pub colour: Colour,
    pub vertices: usize,
    pub edges: usize,
    /// Faces of the embedding, traced with the rotation system.
    pub faces: usize,
    /// Classes of corners joined by paths of the other colour; these are
    /// the complementary discs and should match `faces`.
    pub corner_classes: usize,
    pub triangles: usize,
    pub quadrangles: usize,
    pub degrees: Vec<usize>,
    pub connected: bool,
}

impl DualGraph {
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices as i64 - self.edges as i64 + self.faces as i64
    }

    pub fn degrees_ok(&self) -> bool {
        self.degrees.iter().all(|&d| d == 2 || d == 3)
    }
}

/// Coherent orientation signs of the cells of a closed 2-dimensional
/// midsection, relative to their stored boundary cycles.
fn orient(s: &MidsectionComplex, incidence: &BTreeMap<EdgeKey, Vec<usize>>) -> Result<Vec<i8>, DualError> {
    // direction of each edge in each cell's stored cycle: +1 if low -> high
    let mut dir: BTreeMap<(usize, EdgeKey), i8> = BTreeMap::new();
    for (i, c) in s.cells().iter().enumerate() {
        let cyc = c.boundary_cycle();
        let m = cyc.len();
        for (p, (_, _, col)) in c.edges().enumerate() {
            let (a, b) = (cyc[p], cyc[(p + 1) % m]);
            dir.insert((i, edge_key(a, b, col)), if a < b { 1 } else { -1 });
        }
    }
    let mut adj: Vec<Vec<(usize, i8)>> = vec![Vec::new(); s.cells().len()];
    for (key, cells) in incidence {
        let (x, y) = (cells[0], cells[1]);
        // s_y = -s_x * d_x * d_y
        let rel = -dir[&(x, *key)] * dir[&(y, *key)];
        adj[x].push((y, rel));
        adj[y].push((x, rel));
    }
    let mut sign = vec![0i8; s.cells().len()];
    for start in 0..sign.len() {
        if sign[start] != 0 {
            continue;
        }
        sign[start] = 1;
        let mut stack = vec![start];
        while let Some(x) = stack.pop() {
            for &(y, rel) in &adj[x] {
                let want = sign[x] * rel;
                if sign[y] == 0 {
                    sign[y] = want;
                    stack.push(y);
                } else if sign[y] != want {
                    return Err(DualError::NonOrientable);
                }
            }
        }
    }
    Ok(sign)
}

/// Builds `G_colour` of a closed 2-dimensional midsection and checks
/// `2E = 3·#triangles + 2·#quadrangles` and `V = #triangles + #quadrangles`.
pub fn dual_graph(s: &MidsectionComplex, colour: Colour) -> Result<DualGraph, DualError> {
    if s.dim() != 2 {
        return Err(DualError::WrongDimension(s.dim()));
    }
    let incidence = s.edges();
    for (key, cells) in &incidence {
        if cells.len() != 2 {
            return Err(DualError::NotClosed(*key, cells.len()));
        }
    }
    let sign = orient(s, &incidence)?;
    let tri_kind = if colour == Colour::Red { CellKind::RedTriangle } else { CellKind::BlueTriangle };

    let nodes: Vec<usize> = (0..s.cells().len())
        .filter(|&i| matches!(s.cells()[i].kind(), k if k == tri_kind || k == CellKind::Quadrangle))
        .collect();
    let node_of: BTreeMap<usize, usize> = nodes.iter().enumerate().map(|(n, &c)| (c, n)).collect();

    // darts: (cell, position of a `colour` edge in its cycle)
    let mut darts: Vec<(usize, usize)> = Vec::new();
    let mut dart_id: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut by_key: BTreeMap<EdgeKey, Vec<usize>> = BTreeMap::new();
    for &c in &nodes {
        let cell = &s.cells()[c];
        let cyc = cell.boundary_cycle();
        for (p, (_, _, col)) in cell.edges().enumerate() {
            if col == colour {
                let d = darts.len();
                dart_id.insert((c, p), d);
                darts.push((c, p));
                by_key
                    .entry(edge_key(cyc[p], cyc[(p + 1) % cyc.len()], col))
                    .or_default()
                    .push(d);
            }
        }
    }
    let mut alpha = vec![0usize; darts.len()];
    let mut uf = UnionFind::new(nodes.len());
    for ds in by_key.values() {
        debug_assert_eq!(ds.len(), 2);
        alpha[ds[0]] = ds[1];
        alpha[ds[1]] = ds[0];
        uf.union(node_of[&darts[ds[0]].0], node_of[&darts[ds[1]].0]);
    }
    let sigma: Vec<usize> = darts
        .iter()
        .map(|&(c, p)| {
            let cell = &s.cells()[c];
            let m = cell.corners().len();
            let cols: Vec<Colour> = cell.edges().map(|e| e.2).collect();
            let step = if sign[c] > 0 { 1 } else { m - 1 };
            let mut q = (p + step) % m;
            while cols[q] != colour {
                q = (q + step) % m;
            }
            dart_id[&(c, q)]
        })
        .collect();

    let mut seen = vec![false; darts.len()];
    let mut faces = 0;
    for start in 0..darts.len() {
        if seen[start] {
            continue;
        }
        faces += 1;
        let mut d = start;
        while !seen[d] {
            seen[d] = true;
            d = sigma[alpha[d]];
        }
    }

    let mut corners = UnionFind::new(s.corner_count() as usize);
    for (a, b, col) in incidence.keys() {
        if *col != colour {
            corners.union(*a as usize, *b as usize);
        }
    }
    let corner_classes = corners.classes().1;

    let mut degrees = vec![0usize; nodes.len()];
    for &(c, _) in &darts {
        degrees[node_of[&c]] += 1;
    }
    let triangles = s.count(tri_kind);
    let quadrangles = s.count(CellKind::Quadrangle);
    let edges = by_key.len();
    if 2 * edges != 3 * triangles + 2 * quadrangles {
        return Err(DualError::Count("2E = 3T + 2Q"));
    }
    if nodes.len() != triangles + quadrangles {
        return Err(DualError::Count("V = T + Q"));
    }
    let connected = uf.classes().1 <= 1;
    Ok(DualGraph {
        colour,
        vertices: nodes.len(),
        edges,
        faces,
        corner_classes,
        triangles,
        quadrangles,
        degrees,
        connected,
    })
}

/// Euler characteristics of the midsection (two ways) and of both boundary
/// components of a 3-dimensional slice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EulerReport {
    pub dual_red: i64,
    pub dual_blue: i64,
    pub direct: i64,
    pub red_boundary: i64,
    pub blue_boundary: i64,
}

impl EulerReport {
    pub fn holds(&self) -> bool {
        let v = self.red_boundary;
        self.dual_red == v && self.dual_blue == v && self.direct == v && self.blue_boundary == v
    }
}

pub fn euler_identity_check(slice: &CausalSlice) -> Result<EulerReport, DualError> {
    let s = midsection(slice);
    let red = dual_graph(&s, Colour::Red)?;
    let blue = dual_graph(&s, Colour::Blue)?;
    Ok(EulerReport {
        dual_red: red.euler_characteristic(),
        dual_blue: blue.euler_characteristic(),
        direct: s.triangulated_euler_characteristic(),
        red_boundary: slice.red_boundary().euler_characteristic(),
        blue_boundary: slice.blue_boundary().euler_characteristic(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::causal::{lemma3_slice, prism_slice};
    use crate::fixtures;

    #[test]
    fn prism_over_sigma_t_red_graph() {
        let s = midsection(&prism_slice(&fixtures::sigma_t(), None).unwrap());
        let g = dual_graph(&s, Colour::Red).unwrap();
        assert_eq!((g.vertices, g.edges, g.faces), (8, 10, 4));
        assert_eq!(g.corner_classes, 4);
        assert!(g.connected && g.degrees_ok());
    }

    #[test]
    fn euler_reports() {
        let cases = [
            (prism_slice(&fixtures::sigma_t(), None).unwrap(), 2),
            (prism_slice(&fixtures::torus7(), None).unwrap(), 0),
            (lemma3_slice(&fixtures::sigma_t()).unwrap(), 2),
        ];
        for (slice, chi) in cases {
            let r = euler_identity_check(&slice).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.direct, chi);
        }
    }

    #[test]
    fn fig4_is_a_sphere() {
        let s = fixtures::fig4();
        assert_eq!(s.triangulated_euler_characteristic(), 2);
        let g = dual_graph(&s, Colour::Red).unwrap();
        assert_eq!(g.euler_characteristic(), 2);
    }
}
