use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{binomial, Field, MonomialBasis, MultiPoly, Rational, RationalFunction};
use crate::exec::Execution;
use crate::linear::GradedSubspace;

use super::GeomError;

/// Homogeneous ideal of `Q[x_0..x_M]` given by generators with rational
/// coefficients. Zero generators are dropped on construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomogeneousIdeal {
    m: usize,
    generators: Vec<MultiPoly<Rational>>,
}

impl HomogeneousIdeal {
    pub fn new(m: usize, generators: Vec<MultiPoly<Rational>>) -> Result<Self, GeomError> {
        let mut gens = Vec::with_capacity(generators.len());
        for g in generators {
            if g.nvars() != m + 1 {
                return Err(crate::algebra::AlgebraError::ArityMismatch(m + 1, g.nvars()).into());
            }
            if g.is_zero() {
                continue;
            }
            if g.degree().is_none() {
                return Err(GeomError::InhomogeneousInput);
            }
            gens.push(g);
        }
        Ok(HomogeneousIdeal { m, generators: gens })
    }

    /// The zero ideal: all of projective `M`-space.
    pub fn zero(m: usize) -> Self {
        HomogeneousIdeal { m, generators: Vec::new() }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn nvars(&self) -> usize {
        self.m + 1
    }

    pub fn generators(&self) -> &[MultiPoly<Rational>] {
        &self.generators
    }

    pub fn max_generator_degree(&self) -> u32 {
        self.generators.iter().filter_map(MultiPoly::degree).max().unwrap_or(0)
    }
}

/// Rows `g * x^mono` for every generator `g` of degree `e <= k` and every
/// monomial of degree `k - e`, in degree-`k` coordinates.
pub(crate) fn macaulay_rows<F: Field>(polys: &[MultiPoly<F>], m: usize, k: u32) -> Result<Vec<Vec<F>>, GeomError> {
    let target = MonomialBasis::new(m, k);
    let mut rows = Vec::new();
    for g in polys {
        if g.is_zero() {
            continue;
        }
        let e = g.degree().ok_or(GeomError::InhomogeneousInput)?;
        if e > k {
            continue;
        }
        for mono in MonomialBasis::new(m, k - e).monomials() {
            rows.push(g.shift(mono).to_vector(&target).expect("degree matches"));
        }
    }
    Ok(rows)
}

/// Degree-`k` piece of the ideal generated by `J` together with `extra`
/// (Macaulay matrix, echelonized).
pub fn ideal_graded_piece<F: Field>(
    ideal: &HomogeneousIdeal,
    extra: &[MultiPoly<F>],
    k: u32,
) -> Result<GradedSubspace<F>, GeomError> {
    let mut polys: Vec<MultiPoly<F>> = ideal.generators.iter().map(MultiPoly::lift).collect();
    for p in extra {
        if p.nvars() != ideal.nvars() {
            return Err(crate::algebra::AlgebraError::ArityMismatch(ideal.nvars(), p.nvars()).into());
        }
        if !p.is_homogeneous() {
            return Err(GeomError::InhomogeneousInput);
        }
        polys.push(p.clone());
    }
    let rows = macaulay_rows(&polys, ideal.m, k)?;
    Ok(GradedSubspace::from_spanning(ideal.m, k, rows))
}

/// `dim` of degree-`k` forms modulo `(J, extra)_k`.
pub fn quotient_dim<F: Field>(ideal: &HomogeneousIdeal, extra: &[MultiPoly<F>], k: u32) -> Result<usize, GeomError> {
    Ok(ideal_graded_piece(ideal, extra, k)?.codim())
}

/// `H(k) = binom(k + M, M) - dim J_k`.
pub fn hilbert_function(ideal: &HomogeneousIdeal, k: u32) -> usize {
    let piece = ideal_graded_piece::<Rational>(ideal, &[], k).expect("generators checked on construction");
    let total = binomial(k as u64 + ideal.m as u64, ideal.m as u64) as usize;
    total - piece.dim()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertRecord {
    pub values: BTreeMap<u32, usize>,
    pub deg_v: Option<u64>,
    pub dim_v: Option<usize>,
    pub stable_from: Option<u32>,
}

/// Hilbert values for `k = 0..=kmax`.
pub fn hilbert_record(ideal: &HomogeneousIdeal, kmax: u32, exec: Execution) -> HilbertRecord {
    let ks: Vec<u32> = (0..=kmax).collect();
    let vals = exec.map(&ks, |&k| hilbert_function(ideal, k));
    HilbertRecord { values: ks.into_iter().zip(vals).collect(), deg_v: None, dim_v: None, stable_from: None }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VarietyInvariants {
    pub n: usize,
    pub deg_v: u64,
    pub record: HilbertRecord,
}

/// Reads dimension and degree off the eventual Hilbert polynomial: `n` is the
/// order of the last nonzero finite difference, which then equals `deg V`.
///
/// The tail counts as stable when the `(n+1)`-st differences vanish on at
/// least `M + 2` trailing degrees.
pub fn variety_invariants(ideal: &HomogeneousIdeal, kmax: u32, exec: Execution) -> Result<VarietyInvariants, GeomError> {
    let mut record = hilbert_record(ideal, kmax, exec);
    let values: Vec<i64> = record.values.values().map(|&v| v as i64).collect();
    let window = ideal.m + 2;
    // diffs[j] = j-th forward difference sequence; diffs[j][i] belongs to degree i + j.
    let mut diffs = vec![values.clone()];
    for j in 0..=ideal.m + 1 {
        let next: Vec<i64> = diffs[j].windows(2).map(|w| w[1] - w[0]).collect();
        diffs.push(next);
    }
    let tail_zero = |seq: &[i64]| seq.len() >= window && seq[seq.len() - window..].iter().all(|&x| x == 0);
    if tail_zero(&diffs[0]) {
        return Err(GeomError::EmptyVariety);
    }
    for n in 0..=ideal.m {
        if !tail_zero(&diffs[n + 1]) {
            continue;
        }
        let lead = *diffs[n].last().unwrap();
        if lead <= 0 {
            break;
        }
        // first degree from which the n-th difference is constant
        let seq = &diffs[n];
        let mut start = seq.len() - 1;
        while start > 0 && seq[start - 1] == lead {
            start -= 1;
        }
        record.deg_v = Some(lead as u64);
        record.dim_v = Some(n);
        record.stable_from = Some((start + n) as u32);
        return Ok(VarietyInvariants { n, deg_v: lead as u64, record });
    }
    Err(GeomError::NotStabilized { kmax })
}

/// `W(a)`: the subspace with `z` set to `a`.
pub fn specialize_space(
    w: &GradedSubspace<RationalFunction>,
    a: &Rational,
) -> Result<GradedSubspace<Rational>, GeomError> {
    Ok(w.specialize(a)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rational, ExponentVector, UniPoly};
    use crate::linear::ExactMatrix;
    use rand::{Rng, SeedableRng};

    type Q = Rational;

    fn mono(e: &[u32]) -> MultiPoly<Q> {
        MultiPoly::monomial(ExponentVector::new(e.to_vec()), Q::one())
    }

    pub(crate) fn conic() -> HomogeneousIdeal {
        HomogeneousIdeal::new(2, vec![mono(&[1, 0, 1]).sub(&mono(&[0, 2, 0]))]).unwrap()
    }

    fn twisted_cubic() -> HomogeneousIdeal {
        let g1 = mono(&[1, 0, 1, 0]).sub(&mono(&[0, 2, 0, 0]));
        let g2 = mono(&[0, 1, 0, 1]).sub(&mono(&[0, 0, 2, 0]));
        let g3 = mono(&[1, 0, 0, 1]).sub(&mono(&[0, 1, 1, 0]));
        HomogeneousIdeal::new(3, vec![g1, g2, g3]).unwrap()
    }

    /// Independent oracle: rank of the raw (un-echelonized) Macaulay matrix.
    fn macaulay_rank_oracle(ideal: &HomogeneousIdeal, k: u32) -> usize {
        let rows = macaulay_rows(ideal.generators(), ideal.m(), k).unwrap();
        let cols = MonomialBasis::new(ideal.m(), k).len();
        if rows.is_empty() {
            return 0;
        }
        ExactMatrix::from_rows(cols, rows).transpose().rank()
    }

    #[test]
    fn graded_piece_examples() {
        let j = conic();
        assert_eq!(ideal_graded_piece::<Q>(&j, &[], 2).unwrap().dim(), 1);
        assert_eq!(ideal_graded_piece::<Q>(&j, &[], 3).unwrap().dim(), 3);
        let p1 = HomogeneousIdeal::zero(1);
        let piece = ideal_graded_piece(&p1, &[mono(&[1, 0])], 2).unwrap();
        assert_eq!(piece.dim(), 2);
        assert!(piece.contains_poly(&mono(&[2, 0])) && piece.contains_poly(&mono(&[1, 1])));
        let bad = mono(&[1, 0]).add(&mono(&[0, 2]));
        assert_eq!(ideal_graded_piece(&p1, &[bad], 2).unwrap_err(), GeomError::InhomogeneousInput);
    }

    #[test]
    fn hilbert_examples() {
        assert_eq!(hilbert_function(&HomogeneousIdeal::zero(2), 4), 15);
        let j = conic();
        for n in 1..=8 {
            let closed = (n + 1) * (n + 2) / 2 - n * (n - 1) / 2;
            assert_eq!(hilbert_function(&j, n as u32), closed);
            assert_eq!(hilbert_function(&j, n as u32), 2 * n + 1);
            let oracle = MonomialBasis::new(2, n as u32).len() - macaulay_rank_oracle(&j, n as u32);
            assert_eq!(oracle, 2 * n + 1);
        }
        let irrelevant = HomogeneousIdeal::new(2, (0..3).map(|i| MultiPoly::var(3, i)).collect()).unwrap();
        for k in 1..5 {
            assert_eq!(hilbert_function(&irrelevant, k), 0);
        }
    }

    #[test]
    fn invariants_examples() {
        let inv = variety_invariants(&conic(), 10, Execution::Sequential).unwrap();
        assert_eq!((inv.n, inv.deg_v), (1, 2));
        let p1 = variety_invariants(&HomogeneousIdeal::zero(1), 8, Execution::Sequential).unwrap();
        assert_eq!((p1.n, p1.deg_v), (1, 1));
        let tc = twisted_cubic();
        for n in 1..=6u32 {
            let oracle = MonomialBasis::new(3, n).len() - macaulay_rank_oracle(&tc, n);
            assert_eq!(oracle, 3 * n as usize + 1);
        }
        let inv = variety_invariants(&tc, 8, Execution::Sequential).unwrap();
        assert_eq!((inv.n, inv.deg_v), (1, 3));
        let irrelevant = HomogeneousIdeal::new(2, (0..3).map(|i| MultiPoly::var(3, i)).collect()).unwrap();
        assert_eq!(variety_invariants(&irrelevant, 8, Execution::Sequential).unwrap_err(), GeomError::EmptyVariety);
        assert!(matches!(variety_invariants(&conic(), 2, Execution::Sequential), Err(GeomError::NotStabilized { .. })));
    }

    #[test]
    fn hilbert_decreases_with_generators() {
        let j = conic();
        let bigger = HomogeneousIdeal::new(2, vec![j.generators()[0].clone(), mono(&[0, 0, 3])]).unwrap();
        for k in 0..8 {
            assert!(hilbert_function(&bigger, k) <= hilbert_function(&j, k));
        }
    }

    fn zpoly(coef: RationalFunction, e: &[u32]) -> MultiPoly<RationalFunction> {
        MultiPoly::monomial(ExponentVector::new(e.to_vec()), coef)
    }

    #[test]
    fn specialization_examples() {
        let z = RationalFunction::z();
        let one = RationalFunction::one();
        let w = GradedSubspace::from_polys(1, 1, &[zpoly(z.clone(), &[1, 0]).add(&zpoly(one.clone(), &[0, 1]))]).unwrap();
        let at0 = specialize_space(&w, &rational(0, 1)).unwrap();
        assert_eq!(at0.dim(), 1);
        assert!(at0.contains_poly(&mono(&[0, 1])));

        let w2 = GradedSubspace::from_polys(1, 1, &[zpoly(one.clone(), &[1, 0]), zpoly(z.clone(), &[1, 0])]).unwrap();
        assert_eq!(w2.dim(), 1);
        assert_eq!(specialize_space(&w2, &rational(5, 1)).unwrap().dim(), 1);

        // the echelon row x0 + 1/(z-2) x1 is rescaled before evaluation
        let pole = RationalFunction::canonicalize(UniPoly::one(), UniPoly::from_ints(&[-2, 1])).unwrap();
        let w3 = GradedSubspace::from_polys(1, 1, &[zpoly(pole, &[0, 1]).add(&zpoly(one, &[1, 0]))]).unwrap();
        let at2 = specialize_space(&w3, &rational(2, 1)).unwrap();
        assert_eq!(at2.dim(), 1);
        assert!(at2.contains_poly(&mono(&[0, 1])));
    }

    #[test]
    fn field_extension_keeps_ideal_dimension() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for j in [conic(), twisted_cubic()] {
            for n in 0..=10u32 {
                if j.m() == 3 && n > 7 {
                    continue;
                }
                let over_q = ideal_graded_piece::<Q>(&j, &[], n).unwrap().dim();
                let over_qz = ideal_graded_piece::<RationalFunction>(&j, &[], n).unwrap();
                assert_eq!(over_qz.dim(), over_q);
                let a = rational(rng.gen_range(-997..=997), 1);
                assert_eq!(specialize_space(&over_qz, &a).unwrap().dim(), over_q);
            }
        }
    }

    /// Dimension survives specialization at nearly all points; drops happen at
    /// the finitely many zeros of a maximal minor.
    #[test]
    fn specialization_generic_dimension() {
        let one = RationalFunction::one();
        // span{(z-2) x0^2 + x1^2, (z-2) x0 x1 + x1^2}: dimension drops exactly at z = 2
        let zm2 = RationalFunction::polynomial(UniPoly::from_ints(&[-2, 1]));
        let w = GradedSubspace::from_polys(
            1,
            2,
            &[
                zpoly(zm2.clone(), &[2, 0]).add(&zpoly(one.clone(), &[0, 2])),
                zpoly(zm2, &[1, 1]).add(&zpoly(one, &[0, 2])),
            ],
        )
        .unwrap();
        assert_eq!(w.dim(), 2);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let mut kept = 0;
        for _ in 0..10 {
            let a: i64 = rng.gen_range(-997..=997);
            let d = specialize_space(&w, &rational(a, 1)).unwrap().dim();
            if d == 2 {
                kept += 1;
            } else {
                assert_eq!(a, 2);
            }
        }
        assert!(kept >= 9);
        assert_eq!(specialize_space(&w, &rational(2, 1)).unwrap().dim(), 1);
    }
}
