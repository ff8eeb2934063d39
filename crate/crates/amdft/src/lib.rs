//! Std-side tooling around `amdft-core`: plan documents, signal files, a
//! primality cache, block-parallel execution, reports and the CLI.

pub mod cache;
pub mod cli;
pub mod document;
pub mod parallel;
pub mod report;
pub mod signal;
