//! Exact analysis of polyhedral DC functions.
//!
//! A polyhedral DC function is a difference of two max-of-affine functions,
//!
//! ```text
//! h(d) = max_i [a_i + <v_i, d>] - max_j [b_j + <w_j, d>].
//! ```
//!
//! This crate builds the codifferential and coexhauster representations of
//! such a function, decides boundedness (below/above) and the sign conditions
//! `h >= 0` / `h <= 0` through two independent geometric routes, and produces
//! machine-checkable certificates for every verdict. All arithmetic is exact
//! rational; there is no floating point anywhere in the crate.
//!
//! The `parallel` feature (on by default) runs the independent per-element
//! subproblems and the lattice oracle on a rayon pool; without it everything
//! runs sequentially with identical results.

pub mod approx;
pub mod audit;
pub mod conditions;
pub mod dcfunc;
mod error;
pub mod geometry;
pub mod oracle;
mod par;
pub mod rational;
pub mod sample;

pub use error::Error;
pub use rational::Rational;
