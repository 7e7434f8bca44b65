// `!(a < b)` is used on purpose so that NaN inputs are rejected, and index
// loops mirror the matrix notation of the recurrences.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod elliptic;
pub mod error;
pub mod frobenius;
pub mod jet;
pub mod poly;
pub mod spectral;
pub mod susy;

pub use error::{Error, Result};
