//! Regular coverings of weighted graphs: constructors with arithmetic fibers
//! and deck transformations, structural validation, and numerical probes
//! comparing heat kernels, heat mass and the bottom of the spectrum on base
//! and cover.

mod converse;
mod map;
mod probes;

pub use converse::{converse_counterexample_report, ConverseOptions, ConverseReport};
pub use map::{
    cyclic_cover, cyclic_cover_weighted, line_over_cycle, line_over_cycle_weighted, product_cover,
    validate_covering, CoverFactor, CoverReport, CoverViolation, CoveringMap, DeckShift, Projection,
    Sheets,
};
pub use probes::{
    diag_sheet_check, fiber_sum, fiber_sum_residual, lambda0_compare, mass_deficit_compare, FiberSum,
    LambdaComparison, MassComparison, SheetCheck,
};

use crate::feller::FellerError;
use crate::graph::GraphError;
use crate::heat::HeatError;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoverError {
    #[error("invalid covering: {0}")]
    Invalid(String),
    #[error("the covering has infinitely many sheets")]
    InfiniteSheets,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Heat(#[from] HeatError),
    #[error(transparent)]
    Feller(#[from] FellerError),
}
