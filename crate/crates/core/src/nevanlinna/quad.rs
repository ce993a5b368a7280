#![allow(clippy::excessive_precision)]

use std::f64::consts::TAU;

use num_complex::Complex64;

use super::NumError;

pub const MIN_SAMPLES: usize = 512;
pub const MAX_SAMPLES: usize = 65536;
pub const REL_TOL: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CircleMean {
    pub value: f64,
    pub samples: usize,
    pub converged: bool,
}

/// `(1/2pi) int_0^{2pi} h(theta) dtheta` by the periodic trapezoid rule,
/// doubling from `MIN_SAMPLES` until the relative change drops below
/// `REL_TOL` or `max_samples` is reached. Earlier samples are reused.
pub fn circle_mean(h: impl Fn(f64) -> Result<f64, NumError>, max_samples: usize) -> Result<CircleMean, NumError> {
    let max = max_samples.max(MIN_SAMPLES);
    let mut n = MIN_SAMPLES;
    let mut sum = 0.0;
    for k in 0..n {
        sum += h(TAU * k as f64 / n as f64)?;
    }
    let mut value = sum / n as f64;
    while n < max {
        let mut odd = 0.0;
        for k in 0..n {
            odd += h(TAU * (2 * k + 1) as f64 / (2 * n) as f64)?;
        }
        sum += odd;
        n *= 2;
        let next = sum / n as f64;
        let change = (next - value).abs();
        value = next;
        if change <= REL_TOL * value.abs().max(1e-300) || change < 1e-15 {
            return Ok(CircleMean { value, samples: n, converged: true });
        }
    }
    Ok(CircleMean { value, samples: n, converged: false })
}

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1], as tabulated.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

fn gk15<F>(f: &F, a: f64, b: f64) -> Result<(Complex64, f64), NumError>
where
    F: Fn(f64) -> Result<Complex64, NumError>,
{
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x)? + f(c + x)?;
        kron += s * WGK[j];
        if j % 2 == 1 {
            gauss += s * WG[j / 2];
        }
    }
    Ok((kron * h, ((kron - gauss) * h).norm()))
}

/// Adaptive Gauss-Kronrod integral of a complex integrand over `[a, b]`.
/// Fails with `QuadratureFailed` when the error target is not met within
/// the subdivision budget.
pub fn integrate<F>(f: &F, a: f64, b: f64, abs_tol: f64, max_depth: u32) -> Result<Complex64, NumError>
where
    F: Fn(f64) -> Result<Complex64, NumError>,
{
    fn rec<F>(f: &F, a: f64, b: f64, whole: Complex64, err: f64, tol: f64, depth: u32) -> Result<Complex64, NumError>
    where
        F: Fn(f64) -> Result<Complex64, NumError>,
    {
        if err <= tol {
            return Ok(whole);
        }
        if depth == 0 || (b - a).abs() < 1e-15 * (1.0 + a.abs()) {
            return Err(NumError::QuadratureFailed);
        }
        let m = 0.5 * (a + b);
        let (l, el) = gk15(f, a, m)?;
        let (r, er) = gk15(f, m, b)?;
        Ok(rec(f, a, m, l, el, 0.5 * tol, depth - 1)? + rec(f, m, b, r, er, 0.5 * tol, depth - 1)?)
    }
    let (whole, err) = gk15(f, a, b)?;
    rec(f, a, b, whole, err, abs_tol, max_depth)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn trapezoid_on_kinked_integrand() {
        let r = 10.0;
        let m = circle_mean(|t| Ok((r * t.cos()).max(0.0)), MAX_SAMPLES).unwrap();
        assert!((m.value - r / PI).abs() < 1e-6 * r / PI);
    }

    #[test]
    fn trapezoid_smooth_converges_early() {
        let m = circle_mean(|t| Ok((t.cos()).exp()), MAX_SAMPLES).unwrap();
        // I_0(1)
        assert!((m.value - 1.266_065_877_752_008_4).abs() < 1e-13);
        assert!(m.converged && m.samples <= 1024);
    }

    #[test]
    fn gauss_kronrod_polynomial_and_peak() {
        let v = integrate(&|x: f64| Ok(Complex64::new(x.powi(5), x)), 0.0, 2.0, 1e-12, 30).unwrap();
        assert!((v - Complex64::new(64.0 / 6.0, 2.0)).norm() < 1e-12);
        // 1/(x^2 + eps^2) peak
        let eps = 1e-4;
        let v = integrate(&|x: f64| Ok(Complex64::new(1.0 / (x * x + eps * eps), 0.0)), -1.0, 1.0, 1e-8, 60).unwrap();
        let exact = 2.0 * (1.0 / eps).atan() / eps;
        assert!((v.re - exact).abs() < 1e-8 * exact.max(1.0) + 1e-6);
    }
}
