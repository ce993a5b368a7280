use crate::algebra::{binomial, AlgebraError, Field, MonomialBasis, MultiPoly, Rational, RationalFunction, UniPoly};

use super::matrix::{kernel, row_reduce, ExactMatrix};
use super::LinearError;

/// Subspace of the degree-`k` forms in `M + 1` variables, held as a
/// full-rank reduced row-echelon basis in monomial coordinates.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GradedSubspace<F: Field> {
    m: usize,
    degree: u32,
    ambient: usize,
    rows: Vec<Vec<F>>,
    pivots: Vec<usize>,
}

impl<F: Field> GradedSubspace<F> {
    pub fn zero(m: usize, degree: u32) -> Self {
        GradedSubspace { m, degree, ambient: ambient_dim(m, degree), rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn whole(m: usize, degree: u32) -> Self {
        let n = ambient_dim(m, degree);
        let id = ExactMatrix::<F>::identity(n);
        GradedSubspace { m, degree, ambient: n, rows: id.into_rows(), pivots: (0..n).collect() }
    }

    /// Echelonizes an arbitrary spanning set.
    pub fn from_spanning(m: usize, degree: u32, rows: Vec<Vec<F>>) -> Self {
        let ambient = ambient_dim(m, degree);
        if rows.is_empty() {
            return Self::zero(m, degree);
        }
        let red = row_reduce(&ExactMatrix::from_rows(ambient, rows));
        let mut rows = red.rref.into_rows();
        rows.truncate(red.rank);
        GradedSubspace { m, degree, ambient, rows, pivots: red.pivots }
    }

    /// Span of homogeneous polynomials of the subspace degree; `None` when one
    /// of them has another degree.
    pub fn from_polys(m: usize, degree: u32, polys: &[MultiPoly<F>]) -> Option<Self> {
        let basis = MonomialBasis::new(m, degree);
        let rows = polys.iter().map(|p| p.to_vector(&basis)).collect::<Option<Vec<_>>>()?;
        Some(Self::from_spanning(m, degree, rows))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    /// Dimension of the quotient of all degree-`k` forms by this subspace.
    pub fn codim(&self) -> usize {
        self.ambient - self.rows.len()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn basis_rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn basis_matrix(&self) -> ExactMatrix<F> {
        ExactMatrix::from_rows(self.ambient, self.rows.clone())
    }

    pub fn basis_polys(&self) -> Vec<MultiPoly<F>> {
        let basis = MonomialBasis::new(self.m, self.degree);
        self.rows.iter().map(|r| MultiPoly::from_vector(&basis, r)).collect()
    }

    /// Columns that carry no pivot. Their unit vectors complete the basis to
    /// the whole space, so they represent the quotient.
    pub fn non_pivot_columns(&self) -> Vec<usize> {
        let mut is_pivot = vec![false; self.ambient];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        (0..self.ambient).filter(|&j| !is_pivot[j]).collect()
    }

    fn check_len(&self, v: &[F]) -> Result<(), LinearError> {
        if v.len() != self.ambient {
            return Err(LinearError::DimensionMismatch { expected: self.ambient, got: v.len() });
        }
        Ok(())
    }

    /// Remainder of `v` after clearing every pivot coordinate.
    pub fn normal_form(&self, v: &[F]) -> Vec<F> {
        let mut out = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if out[p].is_zero() {
                continue;
            }
            let c = out[p].clone();
            for (o, r) in out.iter_mut().zip(row).skip(p) {
                o.sub_mul_assign(&c, r);
            }
        }
        out
    }

    /// Tests `v` against the row space. On success returns the exact
    /// coordinates of `v` in the echelon basis.
    pub fn membership(&self, v: &[F]) -> Result<Option<Vec<F>>, LinearError> {
        self.check_len(v)?;
        let coords: Vec<F> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        if self.normal_form(v).iter().all(Field::is_zero) {
            Ok(Some(coords))
        } else {
            Ok(None)
        }
    }

    pub fn contains(&self, v: &[F]) -> bool {
        matches!(self.membership(v), Ok(Some(_)))
    }

    pub fn contains_poly(&self, p: &MultiPoly<F>) -> bool {
        let basis = MonomialBasis::new(self.m, self.degree);
        p.to_vector(&basis).is_some_and(|v| self.contains(&v))
    }

    /// Adds one vector to the span, keeping the basis reduced. Returns whether
    /// the dimension grew.
    pub fn insert(&mut self, v: &[F]) -> Result<bool, LinearError> {
        self.check_len(v)?;
        let mut r = self.normal_form(v);
        let Some(p) = r.iter().position(|x| !x.is_zero()) else {
            return Ok(false);
        };
        let inv = r[p].inv().expect("nonzero");
        if !inv.is_one() {
            for x in r[p..].iter_mut() {
                if !x.is_zero() {
                    *x = x.mul(&inv);
                }
            }
        }
        let support: Vec<usize> = (p..self.ambient).filter(|&j| !r[j].is_zero()).collect();
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let c = row[p].clone();
            for &j in &support {
                row[j].sub_mul_assign(&c, &r[j]);
            }
        }
        let pos = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(pos, p);
        self.rows.insert(pos, r);
        Ok(true)
    }

    pub fn sum(&self, other: &Self) -> Self {
        assert_eq!((self.m, self.degree), (other.m, other.degree));
        let mut out = self.clone();
        for r in &other.rows {
            out.insert(r).expect("same ambient");
        }
        out
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.rows.iter().all(|r| other.contains(r))
    }
}

impl GradedSubspace<RationalFunction> {
    /// Evaluates the basis at `z = a` and re-echelonizes over the rationals.
    ///
    /// Each basis row is first scaled to a primitive vector over `Q[z]`, so
    /// no poles remain and the dimension can only drop at the finitely many
    /// points where a maximal minor vanishes.
    pub fn specialize(&self, a: &Rational) -> Result<GradedSubspace<Rational>, AlgebraError> {
        let rows = self
            .rows
            .iter()
            .map(|r| primitive_row(r).iter().map(|c| c.eval(a)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        Ok(GradedSubspace::from_spanning(self.m, self.degree, rows))
    }
}

/// `row` times the lcm of its denominators, divided by the gcd of the
/// resulting numerators.
fn primitive_row(row: &[RationalFunction]) -> Vec<RationalFunction> {
    let mut lcm = UniPoly::one();
    for c in row.iter().filter(|c| !c.is_zero()) {
        let d = c.denominator();
        let g = lcm.gcd(d);
        lcm = lcm.mul(&d.div_rem(&g).expect("gcd is nonzero").0);
    }
    let scaled: Vec<UniPoly> = row
        .iter()
        .map(|c| {
            let (q, _) = lcm.div_rem(c.denominator()).expect("denominator is nonzero");
            c.numerator().mul(&q)
        })
        .collect();
    let content = scaled.iter().filter(|p| !p.is_zero()).fold(UniPoly::zero(), |g, p| g.gcd(p));
    if content.is_zero() {
        return row.to_vec();
    }
    scaled
        .into_iter()
        .map(|p| RationalFunction::polynomial(p.div_rem(&content).expect("content is nonzero").0))
        .collect()
}

pub(crate) fn ambient_dim(m: usize, degree: u32) -> usize {
    binomial(degree as u64 + m as u64, m as u64) as usize
}

/// `{gamma : map(gamma) in target}` for a linear map from degree-`source_degree`
/// forms into the ambient space of `target`.
///
/// Computed as the kernel of `gamma -> normal form of map(gamma)` modulo the
/// target's echelon basis.
pub fn preimage_of_subspace<F: Field>(
    map: &ExactMatrix<F>,
    target: &GradedSubspace<F>,
    source_degree: u32,
) -> Result<GradedSubspace<F>, LinearError> {
    let src = ambient_dim(target.m, source_degree);
    if map.rows() != target.ambient {
        return Err(LinearError::DimensionMismatch { expected: target.ambient, got: map.rows() });
    }
    if map.cols() != src {
        return Err(LinearError::DimensionMismatch { expected: src, got: map.cols() });
    }
    let reduced_cols: Vec<Vec<F>> = (0..src).map(|j| target.normal_form(&map.column(j))).collect();
    let reduced = ExactMatrix::from_columns(target.ambient, reduced_cols);
    Ok(GradedSubspace::from_spanning(target.m, source_degree, kernel(&reduced)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ExponentVector, MultiPoly};
    use proptest::prelude::*;

    type Q = Rational;

    fn xv(e: &[u32]) -> MultiPoly<Q> {
        MultiPoly::monomial(ExponentVector::new(e.to_vec()), Q::from_int(1))
    }

    /// Matrix of multiplication by `p` from degree `k` into degree `k + deg p`.
    fn mult_map(p: &MultiPoly<Q>, m: usize, k: u32) -> ExactMatrix<Q> {
        let src = MonomialBasis::new(m, k);
        let dst = MonomialBasis::new(m, k + p.degree().unwrap());
        let cols = src.monomials().iter().map(|e| p.shift(e).to_vector(&dst).unwrap()).collect();
        ExactMatrix::from_columns(dst.len(), cols)
    }

    /// Independent route: project the kernel of the stacked system [L | -U^T].
    fn preimage_by_stacking(map: &ExactMatrix<Q>, target: &GradedSubspace<Q>, k: u32) -> GradedSubspace<Q> {
        let src = map.cols();
        let mut cols: Vec<Vec<Q>> = (0..src).map(|j| map.column(j)).collect();
        for r in target.basis_rows() {
            cols.push(r.iter().map(|x| x.neg()).collect());
        }
        let stacked = ExactMatrix::from_columns(map.rows(), cols);
        let ker = kernel(&stacked);
        GradedSubspace::from_spanning(target.m(), k, ker.into_iter().map(|v| v[..src].to_vec()).collect())
    }

    #[test]
    fn membership_of_basis_row() {
        let s = GradedSubspace::from_spanning(1, 1, vec![vec![Q::from_int(2), Q::from_int(4)]]);
        let first = s.basis_rows()[0].clone();
        assert_eq!(s.membership(&first).unwrap(), Some(vec![Q::from_int(1)]));
        assert_eq!(s.membership(&[Q::from_int(2), Q::from_int(-1)]).unwrap(), None);
        assert!(matches!(s.membership(&[Q::from_int(1)]), Err(LinearError::DimensionMismatch { .. })));
    }

    #[test]
    fn square_in_conic_plus_x0x2() {
        // degree-2 forms in x0..x2; x1^2 = x0x2 - (x0x2 - x1^2)
        let conic = xv(&[1, 0, 1]).sub(&xv(&[0, 2, 0]));
        let s = GradedSubspace::from_polys(2, 2, &[conic, xv(&[1, 0, 1])]).unwrap();
        let target = xv(&[0, 2, 0]).to_vector(&MonomialBasis::new(2, 2)).unwrap();
        let coords = s.membership(&target).unwrap().expect("member");
        let rebuilt: Vec<Q> = (0..6)
            .map(|j| coords.iter().zip(s.basis_rows()).fold(Q::zero(), |acc, (c, r)| acc.add(&c.mul(&r[j]))))
            .collect();
        assert_eq!(rebuilt, target);
    }

    #[test]
    fn preimage_trivial_cases() {
        let id = ExactMatrix::<Q>::identity(3);
        let whole = GradedSubspace::<Q>::whole(2, 1);
        assert_eq!(preimage_of_subspace(&id, &whole, 1).unwrap().dim(), 3);
        let zero = GradedSubspace::<Q>::zero(2, 1);
        assert_eq!(preimage_of_subspace(&id, &zero, 1).unwrap().dim(), 0);
        assert!(preimage_of_subspace(&id, &GradedSubspace::<Q>::zero(2, 2), 1).is_err());
    }

    #[test]
    fn preimage_of_x0_multiplication() {
        // x0 * (degree-2 binary forms) landing in span{x0^2 x1, x0 x1^2}
        let l = mult_map(&xv(&[1, 0]), 1, 2);
        let u = GradedSubspace::from_polys(1, 3, &[xv(&[2, 1]), xv(&[1, 2])]).unwrap();
        let pre = preimage_of_subspace(&l, &u, 2).unwrap();
        let expected = GradedSubspace::from_polys(1, 2, &[xv(&[1, 1]), xv(&[0, 2])]).unwrap();
        assert_eq!(pre, expected);
    }

    #[test]
    fn insert_keeps_rref() {
        let mut s = GradedSubspace::<Q>::zero(1, 2);
        assert!(s.insert(&[Q::from_int(0), Q::from_int(1), Q::from_int(1)]).unwrap());
        assert!(s.insert(&[Q::from_int(1), Q::from_int(1), Q::from_int(0)]).unwrap());
        assert!(!s.insert(&[Q::from_int(1), Q::from_int(2), Q::from_int(1)]).unwrap());
        let direct = GradedSubspace::from_spanning(
            1,
            2,
            vec![vec![Q::from_int(0), Q::from_int(1), Q::from_int(1)], vec![Q::from_int(1), Q::from_int(1), Q::from_int(0)]],
        );
        assert_eq!(s, direct);
    }

    fn arb_small_case() -> impl Strategy<Value = (MultiPoly<Q>, Vec<Vec<i64>>)> {
        // binary forms: multiplier of degree 1, source degree <= 4 => dims <= 5 and 6
        (prop::collection::vec(-2i64..=2, 2), prop::collection::vec(prop::collection::vec(-2i64..=2, 6), 0..5))
            .prop_filter("nonzero multiplier", |(c, _)| c.iter().any(|&x| x != 0))
            .prop_map(|(c, rows)| {
                let p = xv(&[1, 0]).scale(&Q::from_int(c[0])).add(&xv(&[0, 1]).scale(&Q::from_int(c[1])));
                (p, rows)
            })
    }

    proptest! {
        #[test]
        fn preimage_matches_membership(case in arb_small_case()) {
            let (p, rows) = case;
            let k = 4;
            let l = mult_map(&p, 1, k);
            let u = GradedSubspace::from_spanning(1, k + 1, rows.into_iter().map(|r| r.into_iter().map(Q::from_int).collect()).collect());
            let pre = preimage_of_subspace(&l, &u, k).unwrap();
            prop_assert_eq!(&pre, &preimage_by_stacking(&l, &u, k));
            // every basis vector of the source: gamma in pre <=> L gamma in U
            for j in 0..l.cols() {
                let mut g = vec![Q::zero(); l.cols()];
                g[j] = Q::one();
                prop_assert_eq!(pre.contains(&g), u.contains(&l.mul_vec(&g)));
            }
            for r in pre.basis_rows() {
                prop_assert!(u.contains(&l.mul_vec(r)));
            }
        }

        #[test]
        fn membership_certificate_reproduces(rows in prop::collection::vec(prop::collection::vec(-3i64..=3, 4), 1..4), coef in prop::collection::vec(-3i64..=3, 4)) {
            let rows: Vec<Vec<Q>> = rows.into_iter().map(|r| r.into_iter().map(Q::from_int).collect()).collect();
            let s = GradedSubspace::from_spanning(3, 1, rows.clone());
            let v: Vec<Q> = (0..4).map(|j| rows.iter().zip(&coef).fold(Q::zero(), |a, (r, &c)| a.add(&r[j].mul(&Q::from_int(c))))).collect();
            let coords = s.membership(&v).unwrap().expect("in span by construction");
            let rebuilt: Vec<Q> = (0..4).map(|j| coords.iter().zip(s.basis_rows()).fold(Q::zero(), |a, (c, r)| a.add(&c.mul(&r[j])))).collect();
            prop_assert_eq!(rebuilt, v);
        }
    }
}
