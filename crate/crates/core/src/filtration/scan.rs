use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{Field, MultiPoly};
use crate::exec::Execution;
use crate::gradedgeom::{quotient_dim, HomogeneousIdeal};

use super::{common_degree, tau, table::filtration_space, FiltrationError, TupleIndex};

/// Empirical filtration constants.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StabilizationReport {
    /// Onset of the constant tail of `h(k) = dim forms_k / (I(V), Q_1..Q_n)_k`.
    pub n0: u32,
    /// Value of that tail.
    pub c: usize,
    /// `max(c, h(0), ..., h(n0))`, which bounds every `m_N^I`.
    pub c_prime: usize,
    /// Smallest stabilized `m^I` over the scanned box.
    pub m_min: usize,
    pub i0: TupleIndex,
    /// Largest entry of `i0`; the componentwise threshold for `tau_N^0`.
    pub kappa: u32,
    pub quotient: Vec<usize>,
    /// `m^I` for every box tuple whose `m_N^I` settled within the window.
    pub m_stable: BTreeMap<TupleIndex, usize>,
    /// Box tuples whose `m_N^I` kept moving.
    pub unsettled: Vec<TupleIndex>,
}

/// Detects `n0`, `c`, `c'` from the quotient Hilbert function up to `kmax`
/// (the tail must be constant on at least `window` degrees), then scans
/// `m_N^I` for `||I|| <= 2n + n0/d` over `window` values of `N` starting at
/// `N = d||I|| + n0`.
pub fn stabilization_scan<F: Field>(
    ideal: &HomogeneousIdeal,
    qs: &[MultiPoly<F>],
    kmax: u32,
    window: usize,
    exec: Execution,
) -> Result<StabilizationReport, FiltrationError> {
    let d = common_degree(qs)?;
    let window = window.max(2);
    let ks: Vec<u32> = (0..=kmax).collect();
    let quotient = exec.try_map(&ks, |&k| quotient_dim(ideal, qs, k))?;
    let last = *quotient.last().expect("kmax >= 0");
    let mut start = quotient.len() - 1;
    while start > 0 && quotient[start - 1] == last {
        start -= 1;
    }
    if quotient.len() - start < window {
        return Err(FiltrationError::NotStabilized { kmax });
    }
    let n0 = start as u32;
    let c = last;
    let c_prime = quotient[..=start].iter().copied().max().unwrap_or(c).max(c);

    let n = qs.len();
    let box_norm = 2 * n as u32 + n0 / d;
    let tuples = tau(d * box_norm, d, n);
    let scans = exec.try_map(&tuples, |i| {
        let base = d * i.norm() + n0;
        (0..window as u32)
            .map(|t| filtration_space(ideal, qs, base + t, i).map(|cell| cell.m))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let mut m_stable = BTreeMap::new();
    let mut unsettled = Vec::new();
    for (i, ms) in tuples.into_iter().zip(scans) {
        if ms.iter().all(|&x| x == ms[0]) {
            m_stable.insert(i, ms[0]);
        } else {
            unsettled.push(i);
        }
    }
    let m_min = *m_stable.values().min().ok_or(FiltrationError::NotStabilized { kmax })?;
    let i0 = m_stable
        .iter()
        .filter(|(_, &v)| v == m_min)
        .map(|(i, _)| i)
        .min_by_key(|i| (i.0.iter().copied().max().unwrap_or(0), (*i).clone()))
        .expect("minimum attained")
        .clone();
    let kappa = i0.0.iter().copied().max().unwrap_or(0);
    Ok(StabilizationReport { n0, c, c_prime, m_min, i0, kappa, quotient, m_stable, unsettled })
}
