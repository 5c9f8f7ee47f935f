//! Heat kernels on weighted graphs.
//!
//! Minimal heat kernels and Green's functions via Dirichlet exhaustion,
//! stochastic completeness, Feller and uniform transience probes, curvature
//! calculators for birth-death chains and verification tools for regular
//! graph coverings.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod expr;
pub mod graph;
pub mod numeric;
pub mod heat;
pub mod feller;
pub mod metric;
pub mod curvature;
pub mod covering;
pub mod cli;
