//! CLI front end for the quantum grassmannian library: the expression
//! parser, the named-check verification harness, deterministic reports, and
//! the JSON wire forms used by scripts and CI.

pub mod checks;
pub mod parser;
pub mod report;
pub mod rng;
pub mod wire;
