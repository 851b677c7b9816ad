//! Numerical engine for checking Hermite-Hadamard and Ostrowski-type
//! inequalities in local fractional calculus on fractal sets of dimension
//! `alpha in (0, 1]`.

// NaN must fail every domain check, so negated comparisons are intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alpha_num;
pub mod convexity;
pub mod error;
pub mod fracpoly;
pub mod harness;
pub mod ineq;
pub mod quad;

pub use error::{Error, Result};
