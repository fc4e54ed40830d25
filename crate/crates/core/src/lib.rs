//! Hölder-Zygmund regularity estimation on a periodic grid.

// `!(x > 0.0)` is used on purpose so NaN inputs are rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod casestudies;
pub mod colombeau;
pub mod error;
pub mod exec;
pub mod grid;
pub mod kernels;
pub mod quad;
pub mod signals;
pub mod transforms;

pub use error::{Error, Result};
