//! Spatial search by continuous-time quantum walk on the complete bipartite
//! graph, with the walk effected by either the graph Laplacian or the
//! adjacency matrix.

// `!(x > 0.0)` rejects NaN on purpose; index loops mirror the matrix recurrences.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod experiments;
pub mod graph;
pub mod operator;
pub mod quadrature;
pub mod analytics;
pub mod checks;
pub mod reduced;
pub mod spectral;

pub use error::{Error, Result};
pub use graph::{BipartiteInstance, MarkedSet, VertexClass};
pub use operator::{BasisTag, HermitianOperator};
pub use reduced::{ReducedBasis, ReducedState, WalkKind};
pub use spectral::{EigenSystem, EvolutionSeries, Propagator, Targets};
