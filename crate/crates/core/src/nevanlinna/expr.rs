use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::NumError;

/// Largest magnitude any intermediate value may reach.
pub const MAGNITUDE_GUARD: f64 = 1e300;

/// Entire functions built from rational constants, `z`, ring operations and `exp`.
#[derive(Clone, Debug, PartialEq)]
pub enum EntireExpr {
    Const(f64),
    Z,
    Add(Arc<EntireExpr>, Arc<EntireExpr>),
    Mul(Arc<EntireExpr>, Arc<EntireExpr>),
    Neg(Arc<EntireExpr>),
    Pow(Arc<EntireExpr>, u32),
    Exp(Arc<EntireExpr>),
}

/// Something that can be evaluated together with its derivative.
pub trait Holomorphic: Sync {
    fn eval_d(&self, z: Complex64) -> Result<(Complex64, Complex64), NumError>;

    fn eval(&self, z: Complex64) -> Result<Complex64, NumError> {
        self.eval_d(z).map(|(v, _)| v)
    }
}

fn guard(v: Complex64, z: Complex64) -> Result<Complex64, NumError> {
    if v.re.is_finite() && v.im.is_finite() && v.norm() <= MAGNITUDE_GUARD {
        Ok(v)
    } else {
        Err(NumError::Overflow { re: z.re, im: z.im })
    }
}

impl EntireExpr {
    pub fn constant(c: f64) -> Self {
        EntireExpr::Const(c)
    }

    pub fn z() -> Self {
        EntireExpr::Z
    }

    pub fn exp(e: EntireExpr) -> Self {
        EntireExpr::Exp(Arc::new(e))
    }

    pub fn pow(e: EntireExpr, k: u32) -> Self {
        EntireExpr::Pow(Arc::new(e), k)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn add(a: EntireExpr, b: EntireExpr) -> Self {
        EntireExpr::Add(Arc::new(a), Arc::new(b))
    }

    pub fn sub(a: EntireExpr, b: EntireExpr) -> Self {
        EntireExpr::add(a, EntireExpr::Neg(Arc::new(b)))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn mul(a: EntireExpr, b: EntireExpr) -> Self {
        EntireExpr::Mul(Arc::new(a), Arc::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(a: EntireExpr) -> Self {
        EntireExpr::Neg(Arc::new(a))
    }

    /// Symbolic derivative in `z`.
    pub fn derivative(&self) -> EntireExpr {
        use EntireExpr::*;
        match self {
            Const(_) => Const(0.0),
            Z => Const(1.0),
            Add(a, b) => EntireExpr::add(a.derivative(), b.derivative()),
            Mul(a, b) => EntireExpr::add(
                EntireExpr::mul(a.derivative(), (**b).clone()),
                EntireExpr::mul((**a).clone(), b.derivative()),
            ),
            Neg(a) => EntireExpr::neg(a.derivative()),
            Pow(_, 0) => Const(0.0),
            Pow(a, k) => EntireExpr::mul(
                EntireExpr::mul(Const(*k as f64), EntireExpr::pow((**a).clone(), k - 1)),
                a.derivative(),
            ),
            Exp(a) => EntireExpr::mul(self.clone(), a.derivative()),
        }
    }

    /// Value and derivative in one pass (forward mode over the tree).
    pub fn eval_and_diff(&self, z: Complex64) -> Result<(Complex64, Complex64), NumError> {
        use EntireExpr::*;
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let (v, dv) = match self {
            Const(c) => (Complex64::new(*c, 0.0), zero),
            Z => (z, one),
            Add(a, b) => {
                let (x, dx) = a.eval_and_diff(z)?;
                let (y, dy) = b.eval_and_diff(z)?;
                (x + y, dx + dy)
            }
            Mul(a, b) => {
                let (x, dx) = a.eval_and_diff(z)?;
                let (y, dy) = b.eval_and_diff(z)?;
                (x * y, dx * y + x * dy)
            }
            Neg(a) => {
                let (x, dx) = a.eval_and_diff(z)?;
                (-x, -dx)
            }
            Pow(_, 0) => (one, zero),
            Pow(a, k) => {
                let (x, dx) = a.eval_and_diff(z)?;
                let p = x.powu(k - 1);
                (p * x, p * dx * (*k as f64))
            }
            Exp(a) => {
                let (x, dx) = a.eval_and_diff(z)?;
                if x.re > MAGNITUDE_GUARD.ln() {
                    return Err(NumError::Overflow { re: z.re, im: z.im });
                }
                let e = x.exp();
                (e, e * dx)
            }
        };
        Ok((guard(v, z)?, guard(dv, z)?))
    }

    pub fn value(&self, z: Complex64) -> Result<Complex64, NumError> {
        self.eval_and_diff(z).map(|(v, _)| v)
    }

    pub fn is_const(&self) -> bool {
        use EntireExpr::*;
        match self {
            Const(_) => true,
            Z => false,
            Add(a, b) | Mul(a, b) => a.is_const() && b.is_const(),
            Neg(a) | Pow(a, _) | Exp(a) => a.is_const(),
        }
    }
}

impl Holomorphic for EntireExpr {
    fn eval_d(&self, z: Complex64) -> Result<(Complex64, Complex64), NumError> {
        self.eval_and_diff(z)
    }
}

impl fmt::Display for EntireExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use EntireExpr::*;
        match self {
            Const(c) => write!(f, "{c}"),
            Z => write!(f, "z"),
            Add(a, b) => write!(f, "({a} + {b})"),
            Mul(a, b) => write!(f, "({a} * {b})"),
            Neg(a) => write!(f, "(-{a})"),
            Pow(a, k) => write!(f, "({a})^{k}"),
            Exp(a) => write!(f, "exp({a})"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn eval_examples() {
        let e = EntireExpr::exp(EntireExpr::z());
        assert_eq!(e.eval_and_diff(c(0.0, 0.0)).unwrap(), (c(1.0, 0.0), c(1.0, 0.0)));
        let ze = EntireExpr::mul(EntireExpr::z(), e.clone());
        let (v, d) = ze.eval_and_diff(c(0.0, 0.0)).unwrap();
        assert_eq!((v, d), (c(0.0, 0.0), c(1.0, 0.0)));
        let e2 = EntireExpr::exp(EntireExpr::mul(EntireExpr::constant(2.0), EntireExpr::z()));
        let (v, d) = e2.eval_and_diff(c(1.0, 0.0)).unwrap();
        let ee = std::f64::consts::E * std::f64::consts::E;
        assert!(close(v, c(ee, 0.0), 1e-14) && close(d, c(2.0 * ee, 0.0), 1e-14));
    }

    #[test]
    fn overflow_guard() {
        let e = EntireExpr::exp(EntireExpr::z());
        assert!(matches!(e.value(c(800.0, 0.0)), Err(NumError::Overflow { .. })));
        assert!(e.value(c(-800.0, 0.0)).is_ok());
        let p = EntireExpr::pow(e, 3);
        assert!(matches!(p.value(c(300.0, 0.0)), Err(NumError::Overflow { .. })));
    }

    fn sample_expr() -> EntireExpr {
        // z^3 exp(z^2 - 1) + 2 exp(-z) * (z + 0.5)
        let z = EntireExpr::z;
        EntireExpr::add(
            EntireExpr::mul(
                EntireExpr::pow(z(), 3),
                EntireExpr::exp(EntireExpr::sub(EntireExpr::pow(z(), 2), EntireExpr::constant(1.0))),
            ),
            EntireExpr::mul(
                EntireExpr::mul(EntireExpr::constant(2.0), EntireExpr::exp(EntireExpr::neg(z()))),
                EntireExpr::add(z(), EntireExpr::constant(0.5)),
            ),
        )
    }

    proptest! {
        #[test]
        fn forward_mode_matches_symbolic_and_difference(re in -2.0f64..2.0, im in -2.0f64..2.0) {
            let e = sample_expr();
            let z0 = c(re, im);
            let (_, d) = e.eval_and_diff(z0).unwrap();
            let sym = e.derivative().value(z0).unwrap();
            prop_assert!(close(d, sym, 1e-12));
            let h = 1e-5;
            let fd = (e.value(z0 + h).unwrap() - e.value(z0 - h).unwrap()) / (2.0 * h);
            prop_assert!(close(d, fd, 1e-6));
        }
    }
}
