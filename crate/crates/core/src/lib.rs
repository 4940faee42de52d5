//! Waiting times for an individual with `m` mutations in a Moran population.
//!
//! The crate has four layers:
//!
//! - [`model`]: parameters, scaling constants and regime diagnostics.
//! - [`sim`]: exact event-driven simulation of the Moran mutation model and
//!   the auxiliary processes used to analyse it (two-type absorption chain,
//!   single-founder Moran model, multi-type branching, branching with
//!   immigration), plus a deterministic replicate runner.
//! - [`analytic`]: closed forms, series and recursions for the limit laws.
//! - [`stats`]: ECDF, Kolmogorov–Smirnov and moment summaries used to compare
//!   the two.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Frozen high-precision reference values keep all their digits.
#![cfg_attr(test, allow(clippy::excessive_precision))]

pub mod analytic;
pub mod error;
pub mod model;
pub mod sim;
pub mod stats;

pub use error::{Error, Result};
