//! Numerical laboratory for trace functions over finite fields.

pub mod arith;
pub mod calibration;
mod error;
pub mod phase;
pub mod report;
pub mod satotate;
pub mod suites;
pub mod sums;
pub mod thresholds;
pub mod tracefn;
pub mod transforms;

pub use error::{Error, Result};
