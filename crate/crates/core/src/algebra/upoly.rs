use std::fmt;

use num_traits::{One, Signed, Zero};

use super::field::Rational;

/// Dense univariate polynomial in `z` over the rationals, lowest degree first.
/// The coefficient vector never ends in a zero; the zero polynomial is empty.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// The polynomial `z`.
    pub fn z() -> Self {
        Self::new(vec![Rational::zero(), Rational::one()])
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coeffs.last()
    }

    pub fn constant_term(&self) -> Rational {
        self.coeffs.first().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i);
            let b = other.coeffs.get(i);
            out.push(match (a, b) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => unreachable!(),
            });
        }
        Self::new(out)
    }

    pub fn neg(&self) -> Self {
        UniPoly { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::new(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, divisor: &Self) -> Option<(Self, Self)> {
        let dd = divisor.degree()?;
        let lead_inv = divisor.leading()?.recip();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return Some((Self::zero(), self.clone()));
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] * &lead_inv;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= &c * dc;
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        Some((Self::new(quot), Self::new(rem)))
    }

    /// Scales to leading coefficient one (zero stays zero).
    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(l) if !l.is_one() => self.scale(&l.recip()),
            _ => self.clone(),
        }
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * at + c;
        }
        acc
    }

    pub fn eval_f64(&self, at: num_complex::Complex64) -> num_complex::Complex64 {
        let mut acc = num_complex::Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * at + rational_to_f64(c);
        }
        acc
    }
}

pub(crate) fn rational_to_f64(q: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    q.to_f64().unwrap_or(f64::NAN)
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            first = false;
            let body = match i {
                0 => None,
                1 => Some("z".to_string()),
                k => Some(format!("z^{k}")),
            };
            match body {
                None => write!(f, "{mag}")?,
                Some(b) if mag.is_one() => write!(f, "{b}")?,
                Some(b) => write!(f, "{mag}*{b}")?,
            }
        }
        Ok(())
    }
}

impl From<Rational> for UniPoly {
    fn from(c: Rational) -> Self {
        UniPoly::constant(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn divides_exactly() {
        // (z^2 - 1) / (z - 1) = z + 1
        let p = UniPoly::from_ints(&[-1, 0, 1]);
        let q = UniPoly::from_ints(&[-1, 1]);
        let (quot, rem) = p.div_rem(&q).unwrap();
        assert_eq!(quot, UniPoly::from_ints(&[1, 1]));
        assert!(rem.is_zero());
    }

    #[test]
    fn gcd_is_monic() {
        let a = UniPoly::from_ints(&[-2, 0, 2]); // 2(z^2-1)
        let b = UniPoly::from_ints(&[2, 2]); // 2(z+1)
        assert_eq!(a.gcd(&b), UniPoly::from_ints(&[1, 1]));
        assert_eq!(UniPoly::zero().gcd(&b), UniPoly::from_ints(&[1, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(UniPoly::from_ints(&[1, 0, -3]).to_string(), "-3*z^2 + 1");
        assert_eq!(UniPoly::z().to_string(), "z");
    }
}
