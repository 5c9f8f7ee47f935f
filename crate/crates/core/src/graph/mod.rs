//! Weighted graphs `(X, b, m)`: the data model shared by every other module.
//!
//! Graphs are exposed through the [`Graph`] trait, a deterministic neighbor
//! oracle that may describe an infinite, locally finite graph. Finite graphs,
//! the built-in infinite families and Cartesian products all implement it.

mod families;
mod finite;
mod ops;
mod product;
mod sequence;
mod validate;
mod vertex;

use std::sync::Arc;

pub use families::{BirthDeath, Cycle, Lattice, Line, Periodic, PeriodicLine, RegularTree};
pub use finite::{FiniteGraph, FiniteGraphBuilder};
pub use ops::{
    apply_laplacian, ball, ball_truncation, exhaustion_domain, graph_distance, sphere_profile,
    weighted_degree, Ball, DirichletDomain, SphereProfile,
};
pub(crate) use ops::sphere_profile_in;
pub use product::{Product, ProductWeights};
pub use sequence::Sequence;
pub use validate::{validate_graph, ValidationReport, Violation};
pub use vertex::{ParseVertexError, VertexId};

use crate::expr::EvalError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("{what}: {source}")]
    Expr {
        what: String,
        #[source]
        source: EvalError,
    },
    #[error("{what} must be positive, got {value}")]
    NonPositive { what: String, value: f64 },
    #[error("{what} is only tabulated for r <= {max}")]
    OutOfRange { what: String, max: i64 },
    #[error("sphere of radius {radius} is empty")]
    EmptySphere { radius: usize },
    #[error("{target} unreachable within radius {radius} of {source_vertex}")]
    Unreachable {
        source_vertex: VertexId,
        target: VertexId,
        radius: usize,
    },
    #[error("function value missing at {0}")]
    MissingValue(VertexId),
    #[error("invalid graph: {0}")]
    Invalid(String),
}

/// A locally finite weighted graph given by a neighbor function.
///
/// Implementations must be pure: the same vertex always yields the same
/// measure and neighbor list, and `b(x, y) = b(y, x)` for valid graphs.
pub trait Graph: Send + Sync {
    /// Base vertex used as the default center of exhaustions.
    fn root(&self) -> VertexId;

    /// Number of integer coordinates in every vertex label.
    fn arity(&self) -> usize;

    fn contains(&self, x: &VertexId) -> bool;

    /// Vertex measure `m(x)`.
    fn measure(&self, x: &VertexId) -> Result<f64, GraphError>;

    /// Pairs `(y, b(x, y))` with `b(x, y) > 0`.
    fn neighbors(&self, x: &VertexId) -> Result<Vec<(VertexId, f64)>, GraphError>;

    /// All vertices in canonical order when the graph is finite.
    fn finite_vertices(&self) -> Option<Vec<VertexId>> {
        None
    }

    /// Short human-readable name, used in reports.
    fn describe(&self) -> String;
}

/// Shared handle to an immutable graph.
pub type GraphOracle = Arc<dyn Graph>;

pub(crate) fn check_vertex(g: &dyn Graph, x: &VertexId) -> Result<(), GraphError> {
    if g.contains(x) {
        Ok(())
    } else {
        Err(GraphError::UnknownVertex(x.clone()))
    }
}
