//! Exact coefficient fields (the rationals and rational functions of `z`)
//! and homogeneous multivariate polynomials over them.

mod field;
mod monomial;
mod multipoly;
mod ratfunc;
pub(crate) mod upoly;

pub use field::{rational, Field, Rational};
pub use monomial::{binomial, monomial_basis, ExponentVector, MonomialBasis};
pub use multipoly::{normalize_degrees, MultiPoly, NormalizedTargets};
pub use ratfunc::RationalFunction;
pub use upoly::UniPoly;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("coefficient has a pole at z = {0}")]
    PoleAtPoint(Rational),
    #[error("polynomial is not homogeneous")]
    InhomogeneousInput,
    #[error("polynomials live in rings with different numbers of variables ({0} vs {1})")]
    ArityMismatch(usize, usize),
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
}
