//! Slope gap distribution of saddle connections on the regular 2n-gon,
//! computed through its staircase model.

pub mod error;
pub mod geometry;
pub mod polygon;
pub mod section;

pub use error::{Error, Result};
pub mod quadrature;
pub mod distribution;
pub mod nondiff;
pub mod enumerate;
pub mod verify;
pub mod cli;
