//! Exact partition functions Z_M(G) of graph homomorphisms on planar multigraphs.
//!
//! The numeric core is generic over [`Scalar`]; the crate-level aliases fix the
//! exact rational instance used by classification, lattices and interpolation.

pub mod charpoly;
pub mod dichotomy;
pub mod error;
pub mod gadgets;
pub mod interpolation;
pub mod lattice;
pub mod multigraph;
pub mod numtheory;
pub mod partition;
pub mod planar_ising;
pub mod planarity;
pub mod scalar;
pub mod structure;
pub mod symmatrix;

pub use error::{Error, Result};
pub use multigraph::{EdgeEnd, Multigraph, RotationSystem};
pub use scalar::{Rational, Scalar};
pub use symmatrix::{RatMatrix, SymMatrix};

pub type F64Matrix = SymMatrix<f64>;
