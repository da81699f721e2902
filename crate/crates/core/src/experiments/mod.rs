//! The special initial data and the headline experiments.

mod data;
mod report;
mod runs;

pub use data::*;
pub use report::{Check, Report, Summary};
pub use runs::*;
