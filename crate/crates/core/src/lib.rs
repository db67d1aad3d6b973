//! Weight-vector sampling for weighted sum scalarisation of multi-objective
//! linear problems, scalarised solves over discrete and polyhedral feasible
//! sets, and nondominated-front maintenance with adaptive weight refinement.

// `!(x > 0.0)` is used deliberately so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod diagnostics;
pub mod domain;
pub mod error;
pub mod pareto;
pub mod samplers;
pub mod scalarise;

pub use domain::{
    grid, midpoint, normalise, pair_intervals, IntervalPairing, ObjectivePoint, SamplerConfig,
    Subinterval, WeightVector,
};
pub use error::{Error, Result};
pub use samplers::{Strategy, WeightBatch};
