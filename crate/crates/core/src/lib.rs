//! Computational experiments around Liouville-type lower bounds and
//! small-value sets of integer polynomials at algebraic points.

pub mod arith;
pub mod counting;
pub mod error;
pub mod lattice;
pub mod liouville;
pub mod measure;
pub mod poly;
pub mod satype;

pub use error::{Error, Result};
