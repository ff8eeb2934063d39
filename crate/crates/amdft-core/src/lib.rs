//! Nested Rader-Winograd DFT modules, polynomial-product engines, an
//! operation counter and a prime-family atlas. `no_std` with `alloc`.
#![no_std]
extern crate alloc;

pub mod atlas;
pub mod engine;
pub mod error;
pub mod mappings;
pub mod modules;
pub mod ntheory;
pub mod opcount;
pub mod linop;
pub mod planner;
pub mod poly;
pub mod polyprod;

pub use error::{Error, Result};
