//! Numerical value distribution for entire curves: characteristic and
//! counting functions, zero localization, defects, and the main-inequality
//! sweep over a radius grid.

mod counting;
mod curve;
mod expr;
mod quad;
mod sweep;
mod zeros;

pub use counting::{counting_n, jensen_check, jensen_residual, log_mean};
pub use curve::{characteristic_t, Composed, EntireCurve, NumericTarget};
pub use expr::{EntireExpr, Holomorphic, MAGNITUDE_GUARD};
pub use quad::{circle_mean, integrate, CircleMean, MAX_SAMPLES, MIN_SAMPLES};
pub use sweep::{
    defect_estimate, linear_grid, smt_margin, tf_bound_diagnostic, DefectTrace, FmtCap, LowerBoundFit, SweepConfig,
    SweepReport, TfBoundRow,
};
pub use zeros::{circle_winding, locate_zeros, Zero, ZeroList, SNAP_TOL};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NumError {
    #[error("value exceeds the floating-point guard near z = {re} + {im}i")]
    Overflow { re: f64, im: f64 },
    #[error("winding number is not close to an integer near z = {re} + {im}i")]
    WindingAmbiguous { re: f64, im: f64 },
    #[error("found zeros of total multiplicity {found}, but the circle winding number is {winding}")]
    WindingMismatch { found: i64, winding: i64 },
    #[error("adaptive quadrature did not converge")]
    QuadratureFailed,
    #[error("function vanishes at the origin")]
    ZeroAtOrigin,
    #[error("function is identically zero on the probe points")]
    IdenticallyZero,
    #[error("target coefficients must be polynomials in z for numerical evaluation")]
    NonPolynomialCoefficient,
    #[error("curve leaves the variety: residual {0:e}")]
    NotOnVariety(f64),
    #[error("{0}")]
    InvalidInput(String),
}
