//! Exact computations for Jacobi matrices on one-ended trees.

#![allow(clippy::needless_range_loop)]

pub mod classical;
pub mod constructions;
pub mod corpus;
pub mod error;
pub mod exactmath;
pub mod par;
pub mod solutions;
pub mod spectra;
pub mod tree;
pub mod treepoly;

pub use error::{Error, Result};
