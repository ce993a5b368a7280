use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use num_traits::Signed;

use super::field::{Field, Rational};
use super::monomial::{ExponentVector, MonomialBasis};
use super::ratfunc::RationalFunction;
use super::AlgebraError;

/// Polynomial in `x_0, ..., x_M` over an exact field. Zero coefficients are
/// never stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly<F: Field> {
    nvars: usize,
    terms: BTreeMap<ExponentVector, F>,
}

impl<F: Field> MultiPoly<F> {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: F) -> Self {
        Self::monomial(ExponentVector::zero(nvars), c)
    }

    pub fn one(nvars: usize) -> Self {
        Self::constant(nvars, F::one())
    }

    pub fn monomial(e: ExponentVector, c: F) -> Self {
        let nvars = e.nvars();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(e, c);
        }
        MultiPoly { nvars, terms }
    }

    /// The variable `x_i`.
    pub fn var(nvars: usize, i: usize) -> Self {
        Self::monomial(ExponentVector::unit(nvars, i, 1), F::one())
    }

    pub fn from_terms(nvars: usize, terms: impl IntoIterator<Item = (ExponentVector, F)>) -> Self {
        let mut p = Self::zero(nvars);
        for (e, c) in terms {
            assert_eq!(e.nvars(), nvars, "exponent arity");
            p.add_term(e, &c);
        }
        p
    }

    fn add_term(&mut self, e: ExponentVector, c: &F) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(existing) => {
                *existing = existing.add(c);
                if existing.is_zero() {
                    self.terms.remove(&e);
                }
            }
            None => {
                self.terms.insert(e, c.clone());
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in descending graded-lex order.
    pub fn terms(&self) -> impl Iterator<Item = (&ExponentVector, &F)> {
        self.terms.iter().rev()
    }

    pub fn coeff(&self, e: &ExponentVector) -> Option<&F> {
        self.terms.get(e)
    }

    /// Common total degree of all terms; `None` for zero or inhomogeneous input.
    pub fn degree(&self) -> Option<u32> {
        let mut it = self.terms.keys();
        let first = it.next()?.total();
        it.all(|e| e.total() == first).then_some(first)
    }

    /// Zero counts as homogeneous of every degree.
    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn is_homogeneous_of(&self, k: u32) -> bool {
        self.is_zero() || self.degree() == Some(k)
    }

    fn check_arity(&self, other: &Self) {
        assert_eq!(self.nvars, other.nvars, "polynomials in different rings");
    }

    pub fn add(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c);
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero(self.nvars);
        }
        self.map_coeffs(|a| a.mul(c))
    }

    /// Product with the monomial `x^e`.
    pub fn shift(&self, e: &ExponentVector) -> Self {
        MultiPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(k, c)| (k.add(e), c.clone())).collect(),
        }
    }

    /// Exact product. Degrees add when both factors are homogeneous.
    ///
    /// Panics when the two polynomials live in different rings; use
    /// [`MultiPoly::checked_mul`] on untrusted input.
    pub fn mul(&self, other: &Self) -> Self {
        self.check_arity(other);
        let mut out = Self::zero(self.nvars);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                out.add_term(ea.add(eb), &ca.mul(cb));
            }
        }
        out
    }

    pub fn checked_mul(&self, other: &Self) -> Result<Self, AlgebraError> {
        if self.nvars != other.nvars {
            return Err(AlgebraError::ArityMismatch(self.nvars, other.nvars));
        }
        Ok(self.mul(other))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.nvars);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            k >>= 1;
            if k > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn map_coeffs<G: Field>(&self, mut f: impl FnMut(&F) -> G) -> MultiPoly<G> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &f(c));
        }
        out
    }

    pub fn try_map_coeffs<G: Field, E>(
        &self,
        mut f: impl FnMut(&F) -> Result<G, E>,
    ) -> Result<MultiPoly<G>, E> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &f(c)?);
        }
        Ok(out)
    }

    /// Substitutes `images[i]` for `x_i`.
    pub fn substitute(&self, images: &[MultiPoly<F>]) -> MultiPoly<F> {
        assert_eq!(images.len(), self.nvars);
        let target = images.first().map_or(self.nvars, |p| p.nvars);
        let mut out = MultiPoly::zero(target);
        for (e, c) in &self.terms {
            let mut term = MultiPoly::constant(target, c.clone());
            for (img, &k) in images.iter().zip(e.exps()) {
                if k > 0 {
                    term = term.mul(&img.pow(k));
                }
            }
            out = out.add(&term);
        }
        out
    }

    /// Coordinates in the given monomial basis; `None` unless the polynomial
    /// is homogeneous of the basis degree (zero always fits).
    pub fn to_vector(&self, basis: &MonomialBasis) -> Option<Vec<F>> {
        let mut v = vec![F::zero(); basis.len()];
        for (e, c) in &self.terms {
            v[basis.index_of(e)?] = c.clone();
        }
        Some(v)
    }

    pub fn from_vector(basis: &MonomialBasis, v: &[F]) -> Self {
        assert_eq!(v.len(), basis.len());
        let nvars = basis.m() + 1;
        let terms = v
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| (basis.get(i).clone(), c.clone()))
            .collect();
        MultiPoly { nvars, terms }
    }

    /// Lifts a polynomial with rational coefficients into this field.
    pub fn lift(p: &MultiPoly<Rational>) -> Self {
        p.map_coeffs(F::from_rational)
    }

    /// Converts to rational coefficients when every coefficient is a constant.
    pub fn to_rational(&self) -> Option<MultiPoly<Rational>> {
        let mut out = MultiPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), &c.as_rational()?);
        }
        Some(out)
    }
}

impl MultiPoly<RationalFunction> {
    /// Evaluates every coefficient at `z = a`; terms evaluating to zero drop out.
    pub fn specialize(&self, a: &Rational) -> Result<MultiPoly<Rational>, AlgebraError> {
        self.try_map_coeffs(|c| c.eval(a))
    }

    /// True when every coefficient is a polynomial in `z`.
    pub fn has_polynomial_coefficients(&self) -> bool {
        self.terms.values().all(RationalFunction::is_polynomial)
    }

    pub fn coefficient_denominators(&self) -> impl Iterator<Item = &super::UniPoly> {
        self.terms.values().map(RationalFunction::denominator)
    }
}

impl<F: Field> fmt::Display for MultiPoly<F> {
    /// Prints in the problem-file grammar, leading term first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms() {
            let constant_mono = e.total() == 0;
            match c.as_rational() {
                Some(q) => {
                    let neg = q.is_negative();
                    let mag = q.abs();
                    if first {
                        if neg {
                            write!(f, "-")?;
                        }
                    } else {
                        write!(f, "{}", if neg { " - " } else { " + " })?;
                    }
                    if constant_mono {
                        write!(f, "{mag}")?;
                    } else if num_traits::One::is_one(&mag) {
                        write!(f, "{e}")?;
                    } else {
                        write!(f, "{mag}*{e}")?;
                    }
                }
                None => {
                    if !first {
                        write!(f, " + ")?;
                    }
                    if constant_mono {
                        write!(f, "{{{c}}}")?;
                    } else {
                        write!(f, "{{{c}}}*{e}")?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

/// Targets raised to a common degree `d = lcm(d_j)`.
#[derive(Clone, Debug)]
pub struct NormalizedTargets<F: Field> {
    pub degree: u32,
    pub original_degrees: Vec<u32>,
    pub polys: Vec<MultiPoly<F>>,
}

/// Replaces each `Q_j` of degree `d_j` by `Q_j^{d / d_j}` with `d` the lcm of
/// all degrees.
pub fn normalize_degrees<F: Field>(qs: &[MultiPoly<F>]) -> Result<NormalizedTargets<F>, AlgebraError> {
    let mut degrees = Vec::with_capacity(qs.len());
    for q in qs {
        match q.degree() {
            Some(d) if d >= 1 => degrees.push(d),
            _ => return Err(AlgebraError::InhomogeneousInput),
        }
    }
    let d = degrees.iter().fold(1u32, |acc, &x| acc.lcm(&x));
    let polys = qs
        .iter()
        .zip(&degrees)
        .map(|(q, &dj)| if dj == d { q.clone() } else { q.pow(d / dj) })
        .collect();
    Ok(NormalizedTargets { degree: d, original_degrees: degrees, polys })
}
