//! Atomic-force nanomechanical qubit toolkit.

// `!(x > 0.0)` style guards are used to reject NaN along with bad values
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cantilever;
pub mod commands;
pub mod config;
pub mod cqad;
pub mod design;
pub mod error;
pub mod explorer;
pub mod oracle;
pub mod potential;
pub mod report;
pub mod roots;
pub mod spectrum;
pub mod units;
pub mod validate;

pub use error::{Error, Result};
