//! Intrinsic metrics, jump size, the Davies-type off-diagonal kernel bound
//! and the measure-decay Feller criterion.

mod davies;
mod intrinsic;

pub use davies::{
    davies_bound_residual, davies_table, feller2_check, zeta, DaviesTable, Feller2Row, Feller2Table,
};
pub use intrinsic::{
    degree_metric, jump_size, properness_profile, verify_intrinsic, IntrinsicMetric, MetricBall,
};

use crate::graph::GraphError;
use crate::heat::HeatError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum MetricError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Heat(#[from] HeatError),
}
