//! Orientations, divisors and contraction functors on vertex-weighted
//! multigraphs, with the posets they form over a fixed graph and over all
//! stable graphs of a given genus.

pub mod atlas;
pub mod bitset;
pub mod contraction;
pub mod divisor;
pub mod error;
pub mod functor;
pub mod graph;
pub mod orientation;
pub mod poset;
pub mod spaces;
pub mod verify;

pub use bitset::{EdgeSet, VertexSet};
pub use contraction::{Contraction, EdgeImage};
pub use divisor::Divisor;
pub use error::{Error, Result};
pub use graph::Graph;
pub use orientation::{CyclicMode, EdgeState, Orientation, RootedMode};
pub use poset::FinitePoset;
