//! Exact arithmetic: rationals, Gaussian rationals, integer polynomials in the
//! formal parameters `x_ij`, and fractions with factored box denominators.

mod boxfrac;
mod eval;
mod mono;
mod poly;
mod ring;
pub mod text;

pub use boxfrac::{BoxFactor, BoxFraction};
pub use eval::{evaluate, gauss, gauss_int, pow, rat, Assignment, EvalMode, GaussRat, Rat};
pub use mono::{Label, Mono, ParamVar};
pub use poly::Poly;
pub use ring::Ring;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("not exactly divisible")]
    NotDivisible,
    #[error("no value assigned to {0}")]
    MissingVariable(ParamVar),
    #[error("invalid assignment: {0}")]
    InvalidAssignment(String),
    #[error("parse error: {0}")]
    Parse(String),
}
