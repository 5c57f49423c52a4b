//! Integer lattices: reduction, small values at a point, vanishing polynomials.

pub mod dirichlet;
pub mod lll;
pub mod siegel;

pub use dirichlet::{dirichlet_small_value, DirichletOptions, SmallSectionWitness, TargetCoord};
pub use lll::{hermite_normal_form, integer_left_kernel, lll_reduce, IntegerLattice};
pub use siegel::{siegel_from_coords, siegel_select, siegel_vanishing_polynomial, SiegelReport};
