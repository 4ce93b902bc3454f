//! Polynomial-time evaluation for the tractable cases on planar graphs.

mod even;
mod fisher;
mod kasteleyn;
mod pfaffian;
mod tractable;

pub use even::{even_subgraph_poly_brute, EvenSubgraphPoly, EVEN_SUBGRAPH_EDGE_CAP};
pub use fisher::{fisher_graph, ising_fkt};
pub use kasteleyn::{count_pm_brute, count_pm_planar, kasteleyn_orientation};
pub use pfaffian::{pfaffian, pfaffian_sparse, SkewMatrix, SparseSkew};
pub use tractable::eval_tractable;
