//! Polynomial-product engines.

mod bilinear;
mod block;
mod ptransform;

pub use bilinear::*;
pub use block::*;
pub use ptransform::*;
