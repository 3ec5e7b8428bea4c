// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod distance;
pub mod error;
pub mod exec;
pub mod features;
pub mod function;
pub mod generators;
pub mod graph;
pub mod plot;
pub mod reference;
pub mod rng;

pub use error::{Error, Result};
