//! Exact and arbitrary-precision arithmetic plus the polynomial and linear
//! algebra kernels shared by the solvers.

mod bigdecimal;
mod bipoly;
mod extended;
mod linalg;
mod number;
mod poly;
pub mod rational;
mod roots;
mod scalar;

pub use bigdecimal::{bits_for_digits, BigDecimal, DEFAULT_DIGITS};
pub use bipoly::BiPoly;
pub use extended::ExtendedScalar;
pub use linalg::{exact_nullspace, Matrix};
pub use number::Number;
pub use poly::{poly_diff, poly_mul, UniPoly, Var};
pub use rational::{format_rational, parse_rational, Rational};
pub use roots::{all_real_roots, real_roots, root_bound, RealRoot, RootIsolation};
pub use scalar::{OrderedScalar, Scalar};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    #[error("cannot parse number {0:?}")]
    Parse(String),
    #[error("polynomials in {0} and {1} cannot be combined")]
    VariableMismatch(Var, Var),
    #[error("division by zero")]
    DivisionByZero,
    #[error("division is not exact in this coefficient ring")]
    InexactDivision,
    #[error("operation undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("requested {requested} digits but coefficients carry only {available}")]
    PrecisionExhausted { requested: u32, available: u32 },
    #[error("empty interval [{0}, {1}]")]
    EmptyInterval(String, String),
}
