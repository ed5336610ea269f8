//! Scenario files in, certification reports out.

pub mod galleries;
pub mod runner;
pub mod scenario;

pub use runner::{run, Report, RunOptions};
pub use scenario::{parse, Scenario};
