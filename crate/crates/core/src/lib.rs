//! Exact geometry, symbolic dynamics and K-theory computations for the
//! hyperbolic Penrose tiling and its coloured variants.

pub mod algebraic;
pub mod dyadic;
pub mod error;
pub mod hull;
pub mod hypgeo;
pub mod kinv;
pub mod linalg;
pub mod numeric;
pub mod subshift;

pub use error::{Error, Result};
pub use numeric::DyadicRational;
