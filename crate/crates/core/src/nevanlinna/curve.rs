use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::algebra::{upoly::rational_to_f64, MultiPoly, Rational, RationalFunction};

use super::expr::{EntireExpr, Holomorphic};
use super::quad::{circle_mean, CircleMean};
use super::NumError;

/// `f = (f_0 : ... : f_M)` with entire components.
#[derive(Clone, Debug, PartialEq)]
pub struct EntireCurve {
    pub components: Vec<EntireExpr>,
    pub residual_tol: f64,
}

impl EntireCurve {
    pub fn new(components: Vec<EntireExpr>) -> Result<Self, NumError> {
        if components.is_empty() {
            return Err(NumError::InvalidInput("curve needs at least one component".into()));
        }
        let c = EntireCurve { components, residual_tol: 1e-9 };
        let probes = [Complex64::new(0.3, 0.1), Complex64::new(-0.7, 1.3), Complex64::new(1.1, -0.4)];
        let all_zero = probes
            .iter()
            .all(|&z| c.components.iter().all(|f| f.value(z).map(|v| v.norm() == 0.0).unwrap_or(false)));
        if all_zero {
            return Err(NumError::IdenticallyZero);
        }
        Ok(c)
    }

    pub fn nvars(&self) -> usize {
        self.components.len()
    }

    pub fn values(&self, z: Complex64) -> Result<Vec<Complex64>, NumError> {
        self.components.iter().map(|f| f.value(z)).collect()
    }

    pub fn values_d(&self, z: Complex64) -> Result<(Vec<Complex64>, Vec<Complex64>), NumError> {
        let mut v = Vec::with_capacity(self.nvars());
        let mut d = Vec::with_capacity(self.nvars());
        for f in &self.components {
            let (a, b) = f.eval_and_diff(z)?;
            v.push(a);
            d.push(b);
        }
        Ok((v, d))
    }

    /// `log ||f(z)||` with the max norm.
    pub fn log_norm(&self, z: Complex64) -> Result<f64, NumError> {
        let m = self.values(z)?.iter().map(|v| v.norm()).fold(0.0, f64::max);
        Ok(m.ln())
    }

    /// `max |P(f(z))| / ||f(z)||^{deg P}` over probe points on a few circles.
    pub fn variety_residual(&self, generators: &[MultiPoly<Rational>], r_max: f64) -> Result<f64, NumError> {
        let mut worst: f64 = 0.0;
        let polys: Vec<NumericTarget> = generators
            .iter()
            .map(|g| NumericTarget::new(&MultiPoly::<RationalFunction>::lift(g)))
            .collect::<Result<_, _>>()?;
        for &rho in &[0.5, 0.5 * r_max.max(1.0), r_max.max(1.0)] {
            for k in 0..64 {
                let z = Complex64::from_polar(rho, TAU * (k as f64 + 0.37) / 64.0);
                let (v, d) = self.values_d(z)?;
                let norm = v.iter().map(|x| x.norm()).fold(0.0, f64::max);
                for p in &polys {
                    let (val, _) = p.eval_d(z, &v, &d);
                    worst = worst.max(val.norm() / norm.powi(p.degree as i32));
                }
            }
        }
        Ok(worst)
    }
}

/// `T_f(r) = (1/2pi) int log ||f(r e^{i theta})|| d theta`.
pub fn characteristic_t(f: &EntireCurve, r: f64, max_samples: usize) -> Result<CircleMean, NumError> {
    if !(r > 0.0) {
        return Err(NumError::InvalidInput("radius must be positive".into()));
    }
    circle_mean(|t| f.log_norm(Complex64::from_polar(r, t)), max_samples)
}

/// A homogeneous target with coefficients polynomial in `z`, in floating point.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericTarget {
    pub degree: u32,
    terms: Vec<(Vec<u32>, Vec<f64>)>,
    nvars: usize,
}

fn horner_d(c: &[f64], z: Complex64) -> (Complex64, Complex64) {
    let mut v = Complex64::new(0.0, 0.0);
    let mut d = Complex64::new(0.0, 0.0);
    for &a in c.iter().rev() {
        d = d * z + v;
        v = v * z + a;
    }
    (v, d)
}

impl NumericTarget {
    pub fn new(q: &MultiPoly<RationalFunction>) -> Result<Self, NumError> {
        let degree = q.degree().ok_or(NumError::InvalidInput("target must be homogeneous and nonzero".into()))?;
        let mut terms = Vec::new();
        for (e, c) in q.terms() {
            if !c.is_polynomial() {
                return Err(NumError::NonPolynomialCoefficient);
            }
            terms.push((e.exps().to_vec(), c.numerator().coeffs().iter().map(rational_to_f64).collect()));
        }
        Ok(NumericTarget { degree, terms, nvars: q.nvars() })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    /// `sum_I |a_I(z)|`, so that `|Q(z)(x)| <= coeff_norm(z) * max|x_i|^d`.
    pub fn coeff_norm(&self, z: Complex64) -> f64 {
        self.terms.iter().map(|(_, c)| horner_d(c, z).0.norm()).sum()
    }

    /// `Q(z)(x)` and `d/dz [Q(z)(f(z))]` given `x = f(z)` and `f'(z)`.
    pub fn eval_d(&self, z: Complex64, x: &[Complex64], dx: &[Complex64]) -> (Complex64, Complex64) {
        let mut val = Complex64::new(0.0, 0.0);
        let mut der = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let (cv, cd) = horner_d(c, z);
            let mut mono = Complex64::new(1.0, 0.0);
            let mut dmono = Complex64::new(0.0, 0.0);
            for (i, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                let p = x[i].powu(k - 1);
                let xv = p * x[i];
                dmono = dmono * xv + mono * p * dx[i] * k as f64;
                mono *= xv;
            }
            val += cv * mono;
            der += cd * mono + cv * dmono;
        }
        (val, der)
    }
}

/// `g(z) = Q(z)(f(z))`.
#[derive(Clone, Copy, Debug)]
pub struct Composed<'a> {
    pub target: &'a NumericTarget,
    pub curve: &'a EntireCurve,
}

impl Holomorphic for Composed<'_> {
    fn eval_d(&self, z: Complex64) -> Result<(Complex64, Complex64), NumError> {
        let (v, d) = self.curve.values_d(z)?;
        let (g, dg) = self.target.eval_d(z, &v, &d);
        if !(g.norm() <= super::expr::MAGNITUDE_GUARD && dg.norm() <= super::expr::MAGNITUDE_GUARD) {
            return Err(NumError::Overflow { re: z.re, im: z.im });
        }
        Ok((g, dg))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{ExponentVector, Field, UniPoly};
    use crate::nevanlinna::quad::MAX_SAMPLES;
    use std::f64::consts::PI;

    fn exp_k(k: f64) -> EntireExpr {
        EntireExpr::exp(EntireExpr::mul(EntireExpr::constant(k), EntireExpr::z()))
    }

    fn one_exp() -> EntireCurve {
        EntireCurve::new(vec![EntireExpr::constant(1.0), exp_k(1.0)]).unwrap()
    }

    #[test]
    fn characteristic_examples() {
        let f = one_exp();
        for r in [5.0, 10.0, 20.0] {
            let t = characteristic_t(&f, r, MAX_SAMPLES).unwrap().value;
            assert!((t - r / PI).abs() < 1e-6 * r / PI, "r={r} T={t}");
        }
        let lin = EntireCurve::new(vec![EntireExpr::constant(1.0), EntireExpr::z()]).unwrap();
        let t = characteristic_t(&lin, 100.0, MAX_SAMPLES).unwrap().value;
        assert!((t - 100f64.ln()).abs() < 1e-3);
        let c = EntireCurve::new(vec![EntireExpr::constant(3.0), EntireExpr::constant(3.0)]).unwrap();
        assert!((characteristic_t(&c, 7.0, MAX_SAMPLES).unwrap().value - 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn characteristic_is_monotone() {
        let f = EntireCurve::new(vec![EntireExpr::constant(1.0), exp_k(1.0), exp_k(2.0)]).unwrap();
        let mut prev = f64::NEG_INFINITY;
        for k in 0..12 {
            let r = 2.0 + 2.5 * k as f64;
            let t = characteristic_t(&f, r, MAX_SAMPLES).unwrap().value;
            assert!(t >= prev - 1e-7);
            assert!((t - 2.0 * r / PI).abs() < 1e-6 * r);
            prev = t;
        }
    }

    #[test]
    fn identically_zero_curve_rejected() {
        let z = EntireCurve::new(vec![EntireExpr::constant(0.0), EntireExpr::sub(EntireExpr::z(), EntireExpr::z())]);
        assert_eq!(z.unwrap_err(), NumError::IdenticallyZero);
    }

    #[test]
    fn composed_target_derivative() {
        let f = EntireCurve::new(vec![EntireExpr::constant(1.0), exp_k(1.0), exp_k(2.0)]).unwrap();
        let zc = RationalFunction::polynomial(UniPoly::from_ints(&[1, 2]));
        let q = MultiPoly::from_terms(
            3,
            vec![
                (ExponentVector::new(vec![0, 0, 2]), RationalFunction::one()),
                (ExponentVector::new(vec![0, 1, 1]), zc),
                (ExponentVector::new(vec![2, 0, 0]), RationalFunction::from_int(-2)),
            ],
        );
        let t = NumericTarget::new(&q).unwrap();
        let g = Composed { target: &t, curve: &f };
        let z0 = Complex64::new(0.3, -0.8);
        let (v, d) = g.eval_d(z0).unwrap();
        let e = |k: f64| (z0 * k).exp();
        let expect = e(4.0) + (z0 * 2.0 + 1.0) * e(3.0) - 2.0;
        assert!((v - expect).norm() < 1e-12);
        let h = 1e-6;
        let fd = (g.eval(z0 + h).unwrap() - g.eval(z0 - h).unwrap()) / (2.0 * h);
        assert!((d - fd).norm() < 1e-6);
    }

    #[test]
    fn rational_coefficients_rejected() {
        let c = RationalFunction::canonicalize(UniPoly::one(), UniPoly::from_ints(&[1, 1])).unwrap();
        let q = MultiPoly::monomial(ExponentVector::new(vec![1, 0]), c);
        assert_eq!(NumericTarget::new(&q).unwrap_err(), NumError::NonPolynomialCoefficient);
    }

    #[test]
    fn curve_on_conic() {
        let f = EntireCurve::new(vec![EntireExpr::constant(1.0), exp_k(1.0), exp_k(2.0)]).unwrap();
        let x = |e: [u32; 3]| MultiPoly::monomial(ExponentVector::new(e.to_vec()), Rational::one());
        let conic = x([1, 0, 1]).sub(&x([0, 2, 0]));
        assert!(f.variety_residual(&[conic.clone()], 30.0).unwrap() < 1e-12);
        let off = EntireCurve::new(vec![EntireExpr::constant(1.0), exp_k(1.0), exp_k(3.0)]).unwrap();
        assert!(off.variety_residual(&[conic], 30.0).unwrap() > 1e-3);
    }
}
