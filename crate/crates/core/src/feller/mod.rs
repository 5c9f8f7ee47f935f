//! Feller property criteria: inner-degree series tests, the radial
//! certificate functions `v` and `w`, the birth-death non-Feller test and a
//! numerical probe of uniform kernel decay.

mod certificate;
mod probe;
mod series;

pub use certificate::{
    certificate_v, comparison_w, verify_certificate_v, CertificateCheck, CertificateV, ComparisonW,
    VANISH_THRESHOLD,
};
pub use probe::{uniform_feller_probe, ProbeRow, UniformFellerTable};
pub use series::{
    birth_death_nonfeller, series_inner_degree, series_nonfeller, BirthDeathReport,
    NonFellerVerdict, SeriesReport, SeriesVerdict,
};

use crate::graph::GraphError;
use crate::heat::HeatError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FellerError {
    #[error("eigenvalue parameter must be negative, got {0}")]
    NonNegativeLambda(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Heat(#[from] HeatError),
}
