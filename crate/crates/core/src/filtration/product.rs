use serde::Serialize;

use crate::algebra::{binomial, ExponentVector, Field, MultiPoly};

use super::{filtration_basis, in_tau0, FiltrationError, FiltrationTable, TupleIndex};

/// Exact weighted sums `S_s = sum_{tau_N} m_N^I i_s` and their restriction
/// `S_s^0` to `tau_N^0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WeightedSums {
    pub s: Vec<u64>,
    pub s0: Vec<u64>,
    /// `sum_{tau_N^0} ||I||`.
    pub tau0_norm_sum: u64,
    pub tau0_size: usize,
    /// `S_1^0 = ... = S_n^0`.
    pub symmetric: bool,
    /// `S_s >= S_s^0` for every `s`.
    pub dominates: bool,
    /// `n * S_s^0 = deg V * d^n * sum_{tau_N^0} ||I||` for every `s`.
    pub closed_form: bool,
    /// `deg V * d^n * binom(N/d + n, n + 1)`.
    pub leading: u64,
    /// `deg V * N^(n+1) / (d * (n+1)!)`.
    pub asymptotic: f64,
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|x| x as f64).product()
}

pub fn weighted_sums<F: Field>(table: &FiltrationTable<F>, deg_v: u64, n0: u32, kappa: u32) -> WeightedSums {
    let n = table.n;
    let mut s = vec![0u64; n];
    let mut s0 = vec![0u64; n];
    let mut tau0_norm_sum = 0;
    let mut tau0_size = 0;
    for (i, c) in &table.cells {
        let inner = in_tau0(i, table.n_deg, table.d, n0, kappa);
        if inner {
            tau0_norm_sum += i.norm() as u64;
            tau0_size += 1;
        }
        for (k, &ik) in i.0.iter().enumerate() {
            s[k] += c.m as u64 * ik as u64;
            if inner {
                s0[k] += c.m as u64 * ik as u64;
            }
        }
    }
    let dn = deg_v * (table.d as u64).pow(n as u32);
    let symmetric = s0.windows(2).all(|w| w[0] == w[1]);
    let dominates = s.iter().zip(&s0).all(|(a, b)| a >= b);
    let closed_form = s0.iter().all(|&x| n as u64 * x == dn * tau0_norm_sum);
    let leading = dn * binomial((table.n_deg / table.d) as u64 + n as u64, n as u64 + 1);
    let asymptotic = deg_v as f64 * (table.n_deg as f64).powi(n as i32 + 1) / (table.d as f64 * factorial(n + 1));
    WeightedSums { s, s0, tau0_norm_sum, tau0_size, symmetric, dominates, closed_form, leading, asymptotic }
}

/// Factor of `P`, kept symbolic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PFactor {
    /// Product of all coset representatives, which are monomials.
    Gammas(ExponentVector),
    /// `Q_s^k`, with `s` counted from 0.
    TargetPower { s: usize, k: u64 },
}

/// `prod_{I,l} Q^I gamma_{Il} = (Q_1...Q_n)^e * P`.
#[derive(Clone, Debug, PartialEq)]
pub struct ProductDecomposition {
    pub n_deg: u32,
    /// `E_s = sum_I m_N^I i_s`.
    pub exponents: Vec<u64>,
    pub e: u64,
    pub p_factors: Vec<PFactor>,
    pub degree_p: u64,
    /// `sum deg gamma_{Il}`.
    pub gamma_degree: u64,
    pub factor_count: usize,
    /// `N * H_V(N)`.
    pub total_degree: u64,
    /// `d * sum E_s + sum deg gamma = N * H_V(N)` and `d n e + deg P = N H_V(N)`.
    pub bookkeeping_ok: bool,
    /// `e / (deg V * N^(n+1) / (d (n+1)!))`.
    pub ratio: f64,
}

impl ProductDecomposition {
    /// Expands `(Q_1...Q_n)^e * P` for small instances.
    pub fn expand<F: Field>(&self, targets: &[MultiPoly<F>]) -> MultiPoly<F> {
        let nv = targets[0].nvars();
        let all = targets.iter().fold(MultiPoly::one(nv), |acc, q| acc.mul(q)).pow(self.e as u32);
        self.p_factors.iter().fold(all, |acc, f| match f {
            PFactor::Gammas(g) => acc.shift(g),
            PFactor::TargetPower { s, k } => acc.mul(&targets[*s].pow(*k as u32)),
        })
    }
}

pub fn product_decomposition<F: Field>(
    table: &FiltrationTable<F>,
    deg_v: u64,
) -> Result<ProductDecomposition, FiltrationError> {
    let h = filtration_basis(table)?.len() as u64;
    let n = table.n;
    let mut exponents = vec![0u64; n];
    let mut gammas = ExponentVector::zero(table.m + 1);
    let mut factor_count = 0;
    for (i, c) in &table.cells {
        for (k, &ik) in i.0.iter().enumerate() {
            exponents[k] += c.m as u64 * ik as u64;
        }
        for g in &c.reps {
            let (mono, _) = g.terms().next().expect("representatives are monomials");
            gammas = gammas.add(mono);
            factor_count += 1;
        }
    }
    let e = exponents.iter().copied().min().unwrap_or(0);
    let d = table.d as u64;
    let gamma_degree = gammas.total() as u64;
    let mut p_factors = vec![PFactor::Gammas(gammas)];
    for (s, &es) in exponents.iter().enumerate() {
        if es > e {
            p_factors.push(PFactor::TargetPower { s, k: es - e });
        }
    }
    let degree_p = gamma_degree + d * exponents.iter().map(|es| es - e).sum::<u64>();
    let total_degree = table.n_deg as u64 * h;
    let bookkeeping_ok = d * exponents.iter().sum::<u64>() + gamma_degree == total_degree
        && d * n as u64 * e + degree_p == total_degree;
    let lead = deg_v as f64 * (table.n_deg as f64).powi(n as i32 + 1) / (d as f64 * factorial(n + 1));
    Ok(ProductDecomposition {
        n_deg: table.n_deg,
        exponents,
        e,
        p_factors,
        degree_p,
        gamma_degree,
        factor_count,
        total_degree,
        bookkeeping_ok,
        ratio: e as f64 / lead,
    })
}

/// Sorted list of the tuples in `tau_N^0` for a table.
pub fn tau0_of<F: Field>(table: &FiltrationTable<F>, n0: u32, kappa: u32) -> Vec<TupleIndex> {
    table.cells.keys().filter(|i| in_tau0(i, table.n_deg, table.d, n0, kappa)).cloned().collect()
}
