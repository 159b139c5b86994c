//! Combinatorial machinery for causal triangulations.
//!
//! The crate models finite abstract simplicial complexes whose vertices are
//! coloured red or blue, validates causal slices (coloured manifolds with a
//! red and a blue boundary component), computes their midsections as coloured
//! cell complexes and inverts that map. On top of this sits a small-volume
//! census of three-dimensional slices with two independent enumeration
//! strategies.
//!
//! Everything here is pure and allocation-only; file formats and the command
//! line front end live in the companion `causal-cli` crate.

#![no_std]
#![warn(rust_2018_idioms, unused_qualifications)]

extern crate alloc;

pub mod canon;
pub mod causal;
pub mod census;
pub mod colour;
pub mod complex;
pub mod fixtures;
pub mod manifold;
pub mod midsection;
pub mod reconstruct;
pub mod surface;

mod unionfind;

pub use canon::CanonicalForm;
pub use causal::{CausalSlice, CausalTriangulation, SimplexType, SliceError};
pub use colour::{Colour, EdgeColour};
pub use complex::{ColouredComplex, ComplexError, Simplex, VertexId};
pub use midsection::{CellKind, MidsectionComplex};
