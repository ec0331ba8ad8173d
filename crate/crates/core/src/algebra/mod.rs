//! Exact arithmetic: scalars, polynomials, matrices and linear solvers.

pub mod linsolve;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod scalar;
pub mod template;

pub use linsolve::{field_solve, ScalarMatrix, Solution};
pub use matrix::Matrix;
pub use parse::{parse_poly, parse_scalar};
pub use poly::{Monomial, Polynomial, Ring, RingMap, RingRef};
pub use scalar::{Field, Scalar};
pub use template::{bounded_poly_solve, solution_space, LinearTemplate, SolutionSpace, Term};
