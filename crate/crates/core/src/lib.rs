//! Exact computations with real-entry cluster patterns: mutation of exchange,
//! C- and G-matrices, skew-symmetrizers, quasi-integer certificates, pattern
//! enumeration up to permutation, G-fans, exchange graphs and rank-2 theory.

// Scalars hash by value; the refinement cache inside a number field is
// never read by Hash or Eq.
#![allow(clippy::mutable_key_type)]

pub mod catalog;
pub mod explore;
pub mod geometry;
pub mod matrix;
pub mod mutation;
pub mod quasiint;
pub mod rank2;
pub mod scalar;
pub mod skewsym;

pub use matrix::{Matrix, Permutation};
pub use mutation::{ExchangeMatrix, Node};
pub use scalar::Scalar;
