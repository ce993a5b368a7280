use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;

/// Exponent vector `(i_0, ..., i_M)` of a monomial `x_0^{i_0} ... x_M^{i_M}`.
///
/// Ordered graded-lexicographically with `x_0 > x_1 > ... > x_M`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ExponentVector {
    exps: Vec<u32>,
    total: u32,
}

impl ExponentVector {
    pub fn new(exps: Vec<u32>) -> Self {
        let total = exps.iter().sum();
        ExponentVector { exps, total }
    }

    pub fn zero(nvars: usize) -> Self {
        Self::new(vec![0; nvars])
    }

    /// The exponent vector of the single variable `x_i`, raised to `power`.
    pub fn unit(nvars: usize, i: usize, power: u32) -> Self {
        let mut e = vec![0; nvars];
        e[i] = power;
        Self::new(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.exps
    }

    pub fn total(&self) -> u32 {
        self.total
    }

    pub fn nvars(&self) -> usize {
        self.exps.len()
    }

    pub fn add(&self, other: &Self) -> Self {
        debug_assert_eq!(self.exps.len(), other.exps.len());
        ExponentVector {
            exps: self.exps.iter().zip(&other.exps).map(|(a, b)| a + b).collect(),
            total: self.total + other.total,
        }
    }

    pub fn scale(&self, k: u32) -> Self {
        ExponentVector { exps: self.exps.iter().map(|a| a * k).collect(), total: self.total * k }
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total.cmp(&other.total).then_with(|| self.exps.cmp(&other.exps))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ExponentVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.exps.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{i}")?;
            } else {
                write!(f, "x{i}^{e}")?;
            }
        }
        if first {
            write!(f, "1")?;
        }
        Ok(())
    }
}

/// All exponent vectors in `M + 1` variables of total degree `k`, in
/// descending graded-lex order. There are `binom(k + M, M)` of them.
pub fn monomial_basis(m: usize, k: u32) -> Vec<ExponentVector> {
    let nvars = m + 1;
    let mut out = Vec::new();
    let mut cur = vec![0u32; nvars];
    fill(&mut cur, 0, k, &mut out);
    out
}

fn fill(cur: &mut Vec<u32>, pos: usize, remaining: u32, out: &mut Vec<ExponentVector>) {
    if pos + 1 == cur.len() {
        cur[pos] = remaining;
        out.push(ExponentVector::new(cur.clone()));
        return;
    }
    for e in (0..=remaining).rev() {
        cur[pos] = e;
        fill(cur, pos + 1, remaining - e, out);
    }
    cur[pos] = 0;
}

/// Column layout for degree-`k` forms: the monomial basis plus a reverse index.
#[derive(Clone, Debug)]
pub struct MonomialBasis {
    m: usize,
    degree: u32,
    monos: Vec<ExponentVector>,
    index: HashMap<ExponentVector, usize>,
}

impl MonomialBasis {
    pub fn new(m: usize, degree: u32) -> Self {
        let monos = monomial_basis(m, degree);
        let index = monos.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        MonomialBasis { m, degree, monos, index }
    }

    pub fn len(&self) -> usize {
        self.monos.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monos.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn monomials(&self) -> &[ExponentVector] {
        &self.monos
    }

    pub fn get(&self, i: usize) -> &ExponentVector {
        &self.monos[i]
    }

    pub fn index_of(&self, e: &ExponentVector) -> Option<usize> {
        self.index.get(e).copied()
    }
}

/// `binom(n, k)` in `u64`; panics on overflow, which desk-scale inputs never reach.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i).expect("binomial overflow") / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binary_quadratics() {
        let b = monomial_basis(1, 2);
        let exps: Vec<_> = b.iter().map(|e| e.exps().to_vec()).collect();
        assert_eq!(exps, vec![vec![2, 0], vec![1, 1], vec![0, 2]]);
    }

    #[test]
    fn ternary_counts() {
        assert_eq!(monomial_basis(2, 2).len(), 6);
        let c = monomial_basis(2, 0);
        assert_eq!(c.len(), 1);
        assert_eq!(c[0].exps(), &[0, 0, 0]);
    }

    #[test]
    fn counts_match_binomial() {
        for m in 0..=4usize {
            for k in 0..=20u32 {
                let b = monomial_basis(m, k);
                assert_eq!(b.len() as u64, binomial(k as u64 + m as u64, m as u64));
                assert!(b.windows(2).all(|w| w[0] > w[1]), "strictly descending");
            }
        }
    }

    #[test]
    fn display() {
        assert_eq!(ExponentVector::new(vec![2, 0, 1]).to_string(), "x0^2*x2");
        assert_eq!(ExponentVector::zero(3).to_string(), "1");
    }
}
