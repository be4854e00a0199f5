//! Exact-arithmetic preprojective algebras of modulated graphs.
//!
//! This crate constructs modulated graphs (vertex division algebras connected
//! by bimodules with nondegenerate bilinear forms), builds the associated
//! preprojective algebra as a graded quotient of the tensor algebra, and
//! computes with finite-dimensional nilpotent representations: Hom and Ext^1
//! spaces, socles and heads, and generic extensions.  On top of that it
//! enumerates the crystal graph obtained from the four generic operators
//! (extension by a simple on either side, generic socle quotient, generic
//! head submodule), checks the combinatorial crystal axioms, and verifies
//! node counts against an independent Kostant-partition counting oracle.
//!
//! All arithmetic is exact: base scalars are arbitrary-precision rationals or
//! elements of a prime field, and vertex fields are simple extensions given
//! by an irreducible minimal polynomial.

// The linear-algebra kernels index several parallel matrices per iteration;
// explicit indices read better there than zipped iterator chains.
#![allow(clippy::needless_range_loop)]

pub mod algebra;
pub mod crystal;
pub mod error;
pub mod field;
pub mod matrix;
pub mod modgraph;
pub mod oracle;
pub mod preset;
pub mod rep;
pub mod scalar;
pub mod tensor;

pub mod acceptance;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
