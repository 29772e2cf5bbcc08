//! Exact computer algebra for quadratic monomial path algebras.
//!
//! A quadratic monomial algebra is a path algebra of a finite quiver modulo
//! an ideal generated by length-two paths. This crate represents such
//! algebras together with their quadratic duals, graded modules over them
//! (degree-wise, over the rationals), complexes of shifted projectives and
//! injectives, the linearization functors between the two sides, minimal
//! (co)resolution engines, and exact rational generating functions for
//! dimensions and Betti numbers. Everything is computed in exact arithmetic
//! and all outputs are byte-deterministic.

pub mod algebra;
pub mod cli;
pub mod closedform;
pub mod complex;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod functors;
pub mod matrix;
pub mod module;
pub mod resolve;
pub mod series;
pub mod suite;

pub use algebra::{MonomialAlgebra, PathWord, Quiver};
pub use error::Error;

/// Exact scalar used throughout: arbitrary-precision rationals.
pub type Scalar = num_rational::BigRational;

/// Natural numbers for path counts and dimensions that may exceed machine size.
pub type Count = num_bigint::BigUint;
