//! Determinantal formulae for the discriminant `D_n` of binary forms of
//! degree `n`.
//!
//! The crate builds the classical Sylvester and Bézout matrices, the
//! open-swallowtail presentation matrix assembled from a generalized
//! Sylvester matrix, a lifting of the universal derivation and one row of
//! the Bézout matrix, and checks all of them against a resultant-based
//! discriminant. Specializing the matrices at a concrete polynomial and
//! taking exact ranks classifies its repeated roots.
//!
//! All arithmetic is exact over the rationals.

#![allow(clippy::needless_range_loop)]

pub mod analysis;
pub mod cech;
pub mod cli;
pub mod error;
pub mod exact;
pub mod formulas;
pub mod swallowtail;
pub mod verify;

pub use error::{Error, Result};
