//! Exact arithmetic: rational scalars, sparse Laurent-in-`t` polynomials,
//! rational expressions with factored denominators, and exact linear solving.

mod linalg;
mod monomial;
mod poly;
mod rational;
mod scalar;
mod var;

use thiserror::Error;

pub use linalg::{solve_affine, AffineSolution, Inconsistent, SparseRow};
pub use monomial::Monomial;
pub use poly::{c, leading_positive, v, Assignment, Polynomial};
pub use rational::{denominator_leading_positive, frac, Bindings, RationalExpr};
pub use scalar::{format_scalar, int, parse_scalar, ratio, rational_gcd, to_f64, Scalar};
pub use var::{Var, MAX_ANSATZ, NVARS};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("negative exponent {exp} is only supported on monomials")]
    UnsupportedPower { exp: i32 },
    #[error("denominator is identically zero")]
    ZeroDenominator,
    #[error("pole at point: `{0}` vanishes")]
    PoleAtPoint(String),
    #[error("variable `{0}` is not bound")]
    Unbound(String),
    #[error("divisor is not linear in `{var}` with a nonzero scalar coefficient")]
    NotLinear { var: String },
    #[error("negative exponent on `{0}`; only t may carry negative powers")]
    NegativeExponent(String),
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
}
