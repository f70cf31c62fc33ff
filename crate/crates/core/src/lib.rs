//! Fractional calculus of variations on uniform 1-D grids.

pub mod cli;
pub mod density;
pub mod error;
pub mod fracops;
pub mod gridfield;
pub mod specfun;
pub mod variation;

pub use error::{Error, Result};
