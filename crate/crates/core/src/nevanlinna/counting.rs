use num_complex::Complex64;

use super::expr::Holomorphic;
use super::quad::circle_mean;
use super::zeros::{locate_zeros, Zero, ZeroList};
use super::NumError;

/// `N(r) = sum m_k log(r / max(|z_k|, 1))` over zeros with `|z_k| < r`, the
/// closed form of `int_1^r n(t)/t dt`.
pub fn counting_n(zeros: &ZeroList, r: f64) -> f64 {
    zeros.within(r).map(|z| z.multiplicity as f64 * (r / z.modulus().max(1.0)).ln()).sum()
}

/// `(1/2pi) int log|g(r e^{it})| dt`.
///
/// Zeros from `deflate` are divided out first and their circle means
/// `log max(r, |z_k|)` added back exactly, which keeps the integrand smooth
/// when zeros sit close to the circle.
pub fn log_mean<G: Holomorphic>(g: &G, r: f64, deflate: &[Zero], max_samples: usize) -> Result<f64, NumError> {
    let exact: f64 = deflate.iter().map(|z| z.multiplicity as f64 * r.max(z.modulus()).ln()).sum();
    let m = circle_mean(
        |t| {
            let w = Complex64::from_polar(r, t);
            let mut v = g.eval(w)?.norm().ln();
            for z in deflate {
                v -= z.multiplicity as f64 * (w - z.location()).norm().ln();
            }
            Ok(v)
        },
        max_samples,
    )?;
    Ok(m.value + exact)
}

/// Jensen residual `|mean log|g| - log|g(0)| - sum m_k log(r/|z_k|)|` for a
/// zero list known to be complete on a disk of radius at least `r`.
pub fn jensen_residual<G: Holomorphic>(
    g: &G,
    r: f64,
    zeros: &ZeroList,
    max_samples: usize,
) -> Result<f64, NumError> {
    let g0 = g.eval(Complex64::new(0.0, 0.0))?.norm();
    if g0 == 0.0 {
        return Err(NumError::ZeroAtOrigin);
    }
    let mean = log_mean(g, r, &zeros.zeros, max_samples)?;
    let sum: f64 = zeros.within(r).map(|z| z.multiplicity as f64 * (r / z.modulus()).ln()).sum();
    Ok((mean - g0.ln() - sum).abs())
}

/// Jensen's formula as a cross-check between the zero finder and quadrature.
pub fn jensen_check<G: Holomorphic>(g: &G, r: f64, max_samples: usize) -> Result<f64, NumError> {
    let g0 = g.eval(Complex64::new(0.0, 0.0))?.norm();
    if g0 == 0.0 {
        return Err(NumError::ZeroAtOrigin);
    }
    let zeros = locate_zeros(g, r * 1.05 + 0.5, 1e-10)?;
    jensen_residual(g, r, &zeros, max_samples)
}
