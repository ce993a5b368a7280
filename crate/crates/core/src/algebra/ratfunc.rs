use std::fmt;


use super::field::{Field, Rational};
use super::upoly::UniPoly;
use super::AlgebraError;

/// Element of the rational function field `Q(z)`.
///
/// Stored as a coprime pair with monic denominator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct RationalFunction {
    num: UniPoly,
    den: UniPoly,
}

impl RationalFunction {
    /// Reduces `num/den` to canonical form.
    pub fn canonicalize(num: UniPoly, den: UniPoly) -> Result<Self, AlgebraError> {
        if den.is_zero() {
            return Err(AlgebraError::ZeroDenominator);
        }
        if num.is_zero() {
            return Ok(Self::polynomial(UniPoly::zero()));
        }
        if den.is_constant() {
            let c = den.coeffs()[0].recip();
            return Ok(RationalFunction { num: num.scale(&c), den: UniPoly::one() });
        }
        let g = num.gcd(&den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_rem(&g).unwrap().0, den.div_rem(&g).unwrap().0)
        };
        let lead = den.leading().unwrap().clone();
        if !lead.is_one() {
            let inv = lead.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        Ok(RationalFunction { num, den })
    }

    pub fn polynomial(p: UniPoly) -> Self {
        RationalFunction { num: p, den: UniPoly::one() }
    }

    pub fn constant(c: Rational) -> Self {
        Self::polynomial(UniPoly::constant(c))
    }

    /// The field element `z`.
    pub fn z() -> Self {
        Self::polynomial(UniPoly::z())
    }

    pub fn numerator(&self) -> &UniPoly {
        &self.num
    }

    pub fn denominator(&self) -> &UniPoly {
        &self.den
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    /// Returns the rational value when the element does not depend on `z`.
    pub fn as_constant(&self) -> Option<Rational> {
        (self.num.is_constant() && self.den.is_one()).then(|| self.num.constant_term())
    }

    /// Evaluates at `z = a`.
    pub fn eval(&self, a: &Rational) -> Result<Rational, AlgebraError> {
        let d = self.den.eval(a);
        if d.is_zero() {
            return Err(AlgebraError::PoleAtPoint(a.clone()));
        }
        Ok(self.num.eval(a) / d)
    }

    pub fn pow(&self, e: u32) -> Self {
        RationalFunction { num: self.num.pow(e), den: self.den.pow(e) }
    }
}

impl Field for RationalFunction {
    fn zero() -> Self {
        Self::polynomial(UniPoly::zero())
    }
    fn one() -> Self {
        Self::polynomial(UniPoly::one())
    }
    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
    fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }
    fn from_rational(q: &Rational) -> Self {
        Self::constant(q.clone())
    }
    fn as_rational(&self) -> Option<Rational> {
        self.as_constant()
    }

    fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            let num = self.num.add(&other.num);
            if self.den.is_one() {
                return Self::polynomial(num);
            }
            return Self::canonicalize(num, self.den.clone()).unwrap();
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        Self::canonicalize(num, self.den.mul(&other.den)).unwrap()
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return Self::polynomial(self.num.mul(&other.num));
        }
        if let Some(c) = other.as_constant() {
            return RationalFunction { num: self.num.scale(&c), den: self.den.clone() };
        }
        if let Some(c) = self.as_constant() {
            return RationalFunction { num: other.num.scale(&c), den: other.den.clone() };
        }
        Self::canonicalize(self.num.mul(&other.num), self.den.mul(&other.den)).unwrap()
    }

    fn neg(&self) -> Self {
        RationalFunction { num: self.num.neg(), den: self.den.clone() }
    }

    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(Self::canonicalize(self.den.clone(), self.num.clone()).unwrap())
    }
}

impl From<Rational> for RationalFunction {
    fn from(c: Rational) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for RationalFunction {
    /// Prints as it is written inside a `{...}` coefficient literal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Default for RationalFunction {
    fn default() -> Self {
        <Self as Field>::zero()
    }
}
