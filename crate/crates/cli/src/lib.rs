//! Command line front end and experiment harness for `ddpc`.

pub mod audit;
pub mod commands;
pub mod experiment;
pub mod plan;
