//! Rigidity analysis of planar pinned bar-joint frameworks.
//!
//! The crate covers combinatorial counts ([`counts`]), the numerical rigidity
//! matrix ([`numeric`]), Assur recognition and decomposition ([`assur`]),
//! reciprocal diagrams ([`reciprocal`]), synthesis of singular realizations
//! ([`singular`]) and linkage operations ([`mechanism`]).

pub mod assur;
pub mod cli;
pub mod counts;
pub mod error;
pub mod io;
pub mod mechanism;
pub mod model;
pub mod numeric;
pub mod reciprocal;
pub mod render;
pub mod singular;

pub use error::{Error, Result};
pub use model::{
    contract_pins, fixtures, induced_pinned_subgraph, pt, rot90, Configuration, Edge, Framework, Graph,
    PinnedGraph, Point, VertexId,
};
