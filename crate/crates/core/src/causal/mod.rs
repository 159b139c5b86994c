//! Causal slices and causal triangulations.
//!
//! A causal slice is a coloured `D`-manifold whose boundary has exactly two
//! components, one red and one blue, such that every mono-coloured simplex
//! lies in the boundary component of its colour. Stacking slices blue-to-red
//! along isomorphic boundaries gives a causal triangulation.

mod build;
mod slice;
mod stack;

pub use build::{lemma3_slice, prism_slice, BuildError};
pub use slice::{classify_simplex, validate_slice, CausalSlice, SimplexType, SliceError};
pub use stack::{
    glue_for_subadditivity, lemma3_triangulation, stack_slices, stack_with_found_isos, CausalTriangulation,
    GluedTriangulation, LayeredComplex, StackError,
};
