//! Graded pieces of homogeneous ideals, Hilbert functions, and
//! admissibility of target systems with ideal-membership certificates.

mod admissible;
mod ideal;

pub use admissible::{
    admissibility_check, certificate_stability, combinations, default_s_max, nullstellensatz_certificate, AdmissibilityOptions,
    AdmissibilityReport, CertTerm, GeneratorRef, NullstellensatzCertificate, SubsetResult, SubsetVerdict,
};
pub use ideal::{
    hilbert_function, hilbert_record, ideal_graded_piece, quotient_dim, specialize_space, variety_invariants,
    HilbertRecord, HomogeneousIdeal, VarietyInvariants,
};

use thiserror::Error;

use crate::algebra::AlgebraError;
use crate::linear::LinearError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeomError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Linear(#[from] LinearError),
    #[error("polynomial is not homogeneous")]
    InhomogeneousInput,
    #[error("targets do not share a common degree; normalize degrees first")]
    DegreeMismatch,
    #[error("Hilbert function did not stabilize up to degree {kmax}")]
    NotStabilized { kmax: u32 },
    #[error("ideal defines the empty variety")]
    EmptyVariety,
    #[error("need at least {needed} targets, got {got}")]
    TooFewTargets { needed: usize, got: usize },
}
