//! The `L_N^I` filtration of degree-`N` forms by products of targets, its
//! multiplicities `m_N^I`, and the bookkeeping built on top of them.

mod product;
mod scan;
mod table;

pub use product::{product_decomposition, tau0_of, weighted_sums, PFactor, ProductDecomposition, WeightedSums};
pub use scan::{stabilization_scan, StabilizationReport};
pub use table::{constant_targets, filtration_basis, filtration_space, FiltrationCell, FiltrationTable};

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::algebra::{binomial, MultiPoly};
use crate::algebra::Field;
use crate::gradedgeom::GeomError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FiltrationError {
    #[error(transparent)]
    Geom(#[from] GeomError),
    #[error("targets do not share a common degree")]
    DegreeMismatch,
    #[error("at least one target is required")]
    NoTargets,
    #[error("tuple {index} needs degree {needed} but N = {n}")]
    OutsideTau { index: TupleIndex, needed: u32, n: u32 },
    #[error("filtration basis has rank {rank}, expected {expected}")]
    BasisDefect { rank: usize, expected: usize },
    #[error("filtration constants did not stabilize up to degree {kmax}")]
    NotStabilized { kmax: u32 },
}

impl From<crate::linear::LinearError> for FiltrationError {
    fn from(e: crate::linear::LinearError) -> Self {
        FiltrationError::Geom(e.into())
    }
}

/// Exponent tuple `I = (i_1, ..., i_n)`; `Ord` is lexicographic with `i_1`
/// most significant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct TupleIndex(pub Vec<u32>);

impl TupleIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        TupleIndex(entries)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn norm(&self) -> u32 {
        self.0.iter().sum()
    }

    /// Componentwise `self <= other`.
    pub fn dominated_by(&self, other: &Self) -> bool {
        self.0.len() == other.0.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }
}

impl fmt::Display for TupleIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// All `n`-tuples with `d * ||I|| <= N`, ascending.
pub fn tau(n_deg: u32, d: u32, n: usize) -> Vec<TupleIndex> {
    fn rec(prefix: &mut Vec<u32>, left: u32, n: usize, out: &mut Vec<TupleIndex>) {
        if prefix.len() == n {
            out.push(TupleIndex(prefix.clone()));
            return;
        }
        for i in 0..=left {
            prefix.push(i);
            rec(prefix, left - i, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), n_deg / d, n, &mut out);
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TupleSets {
    pub tau: Vec<TupleIndex>,
    pub tau0: Vec<TupleIndex>,
}

/// `tau_N` and the interior set `tau_N^0 = {I : N - d||I|| >= n0, every i_k >= kappa}`.
pub fn tuple_sets(n_deg: u32, d: u32, n: usize, n0: u32, kappa: u32) -> TupleSets {
    let tau = tau(n_deg, d, n);
    let tau0 = tau.iter().filter(|i| in_tau0(i, n_deg, d, n0, kappa)).cloned().collect();
    TupleSets { tau, tau0 }
}

pub(crate) fn in_tau0(i: &TupleIndex, n_deg: u32, d: u32, n0: u32, kappa: u32) -> bool {
    n_deg >= d * i.norm() + n0 && i.0.iter().all(|&x| x >= kappa)
}

/// `#tau_N = binom(N/d + n, n)`.
pub fn tau_count(n_deg: u32, d: u32, n: usize) -> u64 {
    binomial((n_deg / d) as u64 + n as u64, n as u64)
}

/// Common degree of the targets.
pub(crate) fn common_degree<F: Field>(qs: &[MultiPoly<F>]) -> Result<u32, FiltrationError> {
    let mut d = None;
    for q in qs {
        let e = q.degree().ok_or(GeomError::InhomogeneousInput)?;
        if e == 0 {
            return Err(GeomError::InhomogeneousInput.into());
        }
        match d {
            None => d = Some(e),
            Some(d0) if d0 != e => return Err(FiltrationError::DegreeMismatch),
            _ => {}
        }
    }
    d.ok_or(FiltrationError::NoTargets)
}
