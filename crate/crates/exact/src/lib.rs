//! Exact arithmetic for five-dimensional coordinate computations.
//!
//! Scalars live in Q(√2, √3); functions are quotients of sparse polynomials
//! in x1..x5 over that field.

pub mod alg;
pub mod error;
pub mod field;
pub mod linalg;
pub mod parse;
pub mod poly;
pub mod rat;
pub mod ratfn;

pub use alg::AlgScalar;
pub use error::ExactError;
pub use field::Field;
pub use parse::{parse_expr, parse_expr_with, JET_NAMES};
pub use poly::{Mono, Poly, DEFAULT_NAMES, NVARS};
pub use rat::Rat;
pub use ratfn::RatFn;
