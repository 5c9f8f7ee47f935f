//! Heat kernels, heat mass, bottom of the spectrum, Green's function and
//! capacity, all computed along exhaustions by Dirichlet domains.
//!
//! On a domain the Dirichlet Laplacian is symmetrized by `sqrt(m)` and
//! either diagonalized (small interiors) or handled by Krylov methods. The
//! minimal objects of an infinite graph are then approached monotonically by
//! growing the truncation radius; every result carries the whole sequence
//! and a tri-state verdict, never a claim about the limit.

mod estimate;
mod exhaustion;
mod kernel;
pub mod linalg;
mod potential;

pub use estimate::{Direction, MonotoneEstimate, RadiusSchedule, Verdict, MONOTONE_SLACK};
pub use exhaustion::{
    heat_kernel, heat_mass, lambda0, HeatKernelValue, MassReport, MassVerdict,
};
pub use kernel::{
    dirichlet_heat_kernel, semigroup_residual, DirichletKernel, DirichletOperator, DENSE_LIMIT,
};
pub use potential::{
    capacity, energy, green, green_on_domain, uniform_transience_probe, CapacityReport, UtProbe,
    UtVerdict,
};

use crate::graph::{GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HeatError {
    #[error("time must be finite and nonnegative, got {0}")]
    NegativeTime(f64),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{vertex} is not interior to the ball of radius {radius}")]
    OutsideBall { vertex: VertexId, radius: usize },
    #[error("interior of {interior} vertices exceeds the dense limit {limit}")]
    TooLarge { interior: usize, limit: usize },
    #[error("linear solve failed: {0}")]
    Solver(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}
