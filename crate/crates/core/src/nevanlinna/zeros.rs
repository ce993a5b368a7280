use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use super::expr::Holomorphic;
use super::quad::integrate;
use super::NumError;

/// Distance below which a winding integral must snap to an integer.
pub const SNAP_TOL: f64 = 0.25;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Zero {
    pub re: f64,
    pub im: f64,
    pub multiplicity: u32,
}

impl Zero {
    pub fn location(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.location().norm()
    }
}

/// Zeros in the open disk `|z| < radius`, with multiplicity.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZeroList {
    pub radius: f64,
    pub zeros: Vec<Zero>,
    /// Winding number of `g` around the circle `|z| = radius`.
    pub winding: u32,
}

impl ZeroList {
    pub fn total(&self) -> u32 {
        self.zeros.iter().map(|z| z.multiplicity).sum()
    }

    /// Zeros strictly inside a smaller radius.
    pub fn within(&self, r: f64) -> impl Iterator<Item = &Zero> {
        self.zeros.iter().filter(move |z| z.modulus() < r)
    }
}

#[derive(Clone, Copy, Debug)]
struct Rect {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Rect {
    fn width(&self) -> f64 {
        (self.x1 - self.x0).max(self.y1 - self.y0)
    }

    fn center(&self) -> Complex64 {
        Complex64::new(0.5 * (self.x0 + self.x1), 0.5 * (self.y0 + self.y1))
    }

    fn contains(&self, z: Complex64) -> bool {
        z.re >= self.x0 && z.re <= self.x1 && z.im >= self.y0 && z.im <= self.y1
    }

    fn around(z: Complex64, half: f64) -> Rect {
        Rect { x0: z.re - half, x1: z.re + half, y0: z.im - half, y1: z.im + half }
    }

    fn split(&self, fx: f64, fy: f64) -> [Rect; 4] {
        let xm = self.x0 + fx * (self.x1 - self.x0);
        let ym = self.y0 + fy * (self.y1 - self.y0);
        [
            Rect { x0: self.x0, x1: xm, y0: self.y0, y1: ym },
            Rect { x0: xm, x1: self.x1, y0: self.y0, y1: ym },
            Rect { x0: self.x0, x1: xm, y0: ym, y1: self.y1 },
            Rect { x0: xm, x1: self.x1, y0: ym, y1: self.y1 },
        ]
    }
}

/// Off-center split fractions, tried in turn when a split lands too close to a zero.
const SPLITS: [(f64, f64); 6] =
    [(0.5123, 0.4871), (0.4617, 0.5389), (0.5741, 0.4263), (0.4139, 0.5927), (0.6311, 0.3687), (0.3573, 0.6449)];

struct Finder<'a, G: Holomorphic> {
    g: &'a G,
    tol: f64,
}

impl<G: Holomorphic> Finder<'_, G> {
    fn log_derivative(&self, z: Complex64) -> Result<Complex64, NumError> {
        let (v, d) = self.g.eval_d(z)?;
        if v.norm() == 0.0 {
            return Err(NumError::WindingAmbiguous { re: z.re, im: z.im });
        }
        Ok(d / v)
    }

    fn segment(&self, a: Complex64, b: Complex64) -> Result<Complex64, NumError> {
        let dz = b - a;
        let f = |t: f64| Ok(self.log_derivative(a + dz * t)? * dz);
        integrate(&f, 0.0, 1.0, 1e-5, 40).map_err(|e| match e {
            NumError::QuadratureFailed => NumError::WindingAmbiguous { re: a.re, im: a.im },
            other => other,
        })
    }

    fn snap(w: Complex64, at: Complex64) -> Result<i64, NumError> {
        let n = w.re.round();
        if (w.re - n).abs() > SNAP_TOL || w.im.abs() > SNAP_TOL {
            return Err(NumError::WindingAmbiguous { re: at.re, im: at.im });
        }
        Ok(n as i64)
    }

    fn winding(&self, r: &Rect) -> Result<i64, NumError> {
        let c = [
            Complex64::new(r.x0, r.y0),
            Complex64::new(r.x1, r.y0),
            Complex64::new(r.x1, r.y1),
            Complex64::new(r.x0, r.y1),
        ];
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..4 {
            total += self.segment(c[k], c[(k + 1) % 4])?;
        }
        Self::snap(total / Complex64::new(0.0, TAU), r.center())
    }

    /// Newton (scaled by the expected multiplicity) from the box center.
    fn newton(&self, r: &Rect, mult: i64) -> Option<Complex64> {
        let mut z = r.center();
        let scale = mult as f64;
        for _ in 0..60 {
            let (v, d) = self.g.eval_d(z).ok()?;
            if d.norm() == 0.0 {
                return None;
            }
            let step = v / d * scale;
            z -= step;
            if !r.contains(z) {
                return None;
            }
            if step.norm() <= 1e-3 * self.tol.max(1e-15) + 4.0 * f64::EPSILON * z.norm() {
                return Some(z);
            }
        }
        None
    }

    fn refine(&self, r: Rect, w: i64, out: &mut Vec<Zero>, depth: u32) -> Result<(), NumError> {
        if w == 0 {
            return Ok(());
        }
        if w < 0 {
            return Err(NumError::WindingAmbiguous { re: r.center().re, im: r.center().im });
        }
        if r.width() <= self.tol {
            let c = r.center();
            out.push(Zero { re: c.re, im: c.im, multiplicity: w as u32 });
            return Ok(());
        }
        if let Some(z) = self.newton(&r, w) {
            let tiny = Rect::around(z, 0.5 * self.tol);
            if self.winding(&tiny).ok() == Some(w) {
                out.push(Zero { re: z.re, im: z.im, multiplicity: w as u32 });
                return Ok(());
            }
        }
        if depth == 0 {
            return Err(NumError::WindingAmbiguous { re: r.center().re, im: r.center().im });
        }
        let mut last = None;
        for &(fx, fy) in &SPLITS {
            let kids = r.split(fx, fy);
            let ws: Result<Vec<i64>, _> = kids.iter().map(|k| self.winding(k)).collect();
            match ws {
                Ok(ws) if ws.iter().sum::<i64>() == w => {
                    for (k, kw) in kids.into_iter().zip(ws) {
                        self.refine(k, kw, out, depth - 1)?;
                    }
                    return Ok(());
                }
                Ok(_) => last = Some(NumError::WindingAmbiguous { re: r.center().re, im: r.center().im }),
                Err(e) => last = Some(e),
            }
        }
        Err(last.expect("at least one split tried"))
    }
}

/// Winding number of `g` around `|z| = radius`.
pub fn circle_winding<G: Holomorphic>(g: &G, radius: f64) -> Result<i64, NumError> {
    let pieces = 32;
    let f = |t: f64| {
        let e = Complex64::from_polar(1.0, t);
        let z = e * radius;
        let (v, d) = g.eval_d(z)?;
        if v.norm() == 0.0 {
            return Err(NumError::WindingAmbiguous { re: z.re, im: z.im });
        }
        Ok(d / v * Complex64::new(0.0, radius) * e)
    };
    let mut total = Complex64::new(0.0, 0.0);
    for k in 0..pieces {
        let a = TAU * k as f64 / pieces as f64;
        let b = TAU * (k + 1) as f64 / pieces as f64;
        total += integrate(&f, a, b, 1e-6, 40).map_err(|e| match e {
            NumError::QuadratureFailed => NumError::WindingAmbiguous { re: radius * a.cos(), im: radius * a.sin() },
            other => other,
        })?;
    }
    Finder::<G>::snap(total / Complex64::new(0.0, TAU), Complex64::new(radius, 0.0))
}

/// All zeros of `g` in `|z| < radius`, located to within `tol`.
///
/// The bounding box of the disk (shifted by an irrational-looking offset so
/// that lattice-aligned zeros stay off its edges) is subdivided at
/// off-center points; boxes of winding zero are dropped, boxes of winding
/// one are polished by Newton and certified by a tiny box, and the rest are
/// split further. The found multiplicities must add up to the winding
/// number around the circle.
pub fn locate_zeros<G: Holomorphic>(g: &G, radius: f64, tol: f64) -> Result<ZeroList, NumError> {
    if !(radius > 0.0) || !(tol > 0.0) {
        return Err(NumError::InvalidInput("radius and tolerance must be positive".into()));
    }
    let finder = Finder { g, tol };
    let outer = circle_winding(g, radius)?;
    let half = radius * (1.0 + 0.0371 / PI);
    let off = Complex64::new(radius * 0.00731, radius * 0.00419);
    let mut found = Vec::new();
    let mut last = None;
    for &grow in &[1.0, 1.013, 1.029] {
        let r0 = Rect::around(off, half * grow);
        found.clear();
        let res = finder.winding(&r0).and_then(|w| finder.refine(r0, w, &mut found, 64));
        match res {
            Ok(()) => {
                last = None;
                break;
            }
            Err(e) => last = Some(e),
        }
    }
    if let Some(e) = last {
        return Err(e);
    }
    let zeros: Vec<Zero> = found.into_iter().filter(|z| z.modulus() < radius).collect();
    let total: i64 = zeros.iter().map(|z| z.multiplicity as i64).sum();
    if total != outer {
        return Err(NumError::WindingMismatch { found: total, winding: outer });
    }
    let mut zeros = zeros;
    zeros.sort_by(|a, b| a.modulus().total_cmp(&b.modulus()).then(a.im.total_cmp(&b.im)));
    Ok(ZeroList { radius, zeros, winding: outer as u32 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nevanlinna::EntireExpr;

    fn exp_minus(c: f64) -> EntireExpr {
        EntireExpr::sub(EntireExpr::exp(EntireExpr::z()), EntireExpr::constant(c))
    }

    #[test]
    fn zeros_of_exp_minus_one() {
        let zl = locate_zeros(&exp_minus(1.0), 10.0, 1e-10).unwrap();
        assert_eq!(zl.zeros.len(), 3);
        assert_eq!(zl.total(), 3);
        let mut ims: Vec<f64> = zl.zeros.iter().map(|z| z.im / TAU).collect();
        ims.sort_by(f64::total_cmp);
        for (got, k) in ims.iter().zip([-1.0, 0.0, 1.0]) {
            assert!((got - k).abs() * TAU < 1e-9);
        }
        assert!(zl.zeros.iter().all(|z| z.re.abs() < 1e-9 && z.multiplicity == 1));
    }

    #[test]
    fn double_zero_and_no_zero() {
        let z2 = EntireExpr::pow(EntireExpr::z(), 2);
        let zl = locate_zeros(&z2, 1.5, 1e-10).unwrap();
        assert_eq!(zl.zeros.len(), 1);
        assert_eq!(zl.zeros[0].multiplicity, 2);
        assert!(zl.zeros[0].modulus() < 1e-8);
        let e = EntireExpr::exp(EntireExpr::z());
        assert!(locate_zeros(&e, 5.0, 1e-10).unwrap().zeros.is_empty());
    }

    #[test]
    fn clustered_and_polynomial_zeros() {
        // (z - 1)(z - 1.001)(z + 2i)
        let z = EntireExpr::z;
        let p = EntireExpr::mul(
            EntireExpr::mul(
                EntireExpr::sub(z(), EntireExpr::constant(1.0)),
                EntireExpr::sub(z(), EntireExpr::constant(1.001)),
            ),
            EntireExpr::add(EntireExpr::pow(z(), 2), EntireExpr::constant(4.0)),
        );
        let zl = locate_zeros(&p, 3.0, 1e-10).unwrap();
        assert_eq!(zl.total(), 4);
        let mut reals: Vec<f64> = zl.zeros.iter().filter(|w| w.im.abs() < 1e-6).map(|w| w.re).collect();
        reals.sort_by(f64::total_cmp);
        assert_eq!(reals.len(), 2);
        assert!((reals[0] - 1.0).abs() < 1e-9 && (reals[1] - 1.001).abs() < 1e-9);
    }

    #[test]
    fn conservation_on_exponential_sums() {
        // e^{4z} + z e^{3z} - 2 has many zeros; total must equal circle winding
        let z = EntireExpr::z;
        let e = |k: f64| EntireExpr::exp(EntireExpr::mul(EntireExpr::constant(k), z()));
        let g = EntireExpr::sub(EntireExpr::add(e(4.0), EntireExpr::mul(z(), e(3.0))), EntireExpr::constant(2.0));
        for r in [3.0, 7.5, 12.0] {
            let zl = locate_zeros(&g, r, 1e-9).unwrap();
            assert_eq!(zl.total() as i64, circle_winding(&g, r).unwrap());
            for w in &zl.zeros {
                assert!(g.value(w.location()).unwrap().norm() < 1e-6 * (1.0 + (4.0 * w.re).exp()));
            }
        }
    }
}
