//! Exact arithmetic: rationals, sparse polynomials, labeled matrices.

pub mod degree;
pub mod label;
pub mod matrix;
pub mod poly;
pub mod rational;

pub use degree::{tri_degree, tri_degree_check, TriDegree};
pub use label::{Label, LaurentMono};
pub use matrix::{PolyMatrix, QMatrix};
pub use poly::{Monomial, MultiPoly, Var};
pub use rational::Rational;
