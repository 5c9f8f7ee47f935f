//! Curvature on weighted graphs: the birth-death closed form of the
//! Ollivier-Ricci curvature, the Γ-calculus with the Bakry-Émery bound, and
//! constructors for chains with prescribed curvature that fail the Feller
//! property.

mod bakry_emery;
mod construct;
mod ollivier;

pub use bakry_emery::{bakry_emery_bound, gamma, gamma_forms, BakryEmery, GammaForms};
pub use construct::{
    build_exact_kappa, build_feller_counterexample, CurvatureProfile, ExactKappa, ExactKappaRow,
    FellerCounterexample,
};
pub use ollivier::{ollivier_bd, path_w, PathW};

use crate::feller::FellerError;
use crate::graph::{GraphError, VertexId};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CurvatureError {
    #[error("radius must be at least {min}, got {got}")]
    Radius { min: usize, got: usize },
    #[error("function not defined on the ball of radius {needed} around {center}")]
    InsufficientSupport { center: VertexId, needed: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Feller(#[from] FellerError),
}
