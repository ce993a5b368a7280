use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{MultiPoly, RationalFunction};
use crate::exec::Execution;
use crate::gradedgeom::HomogeneousIdeal;

use super::counting::{counting_n, jensen_residual};
use super::curve::{characteristic_t, Composed, EntireCurve, NumericTarget};
use super::expr::Holomorphic;
use super::zeros::{locate_zeros, ZeroList};
use super::NumError;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub epsilon: f64,
    pub radii: Vec<f64>,
    pub max_samples: usize,
    pub zero_tol: f64,
    /// Violations below this radius are reported separately.
    pub burn_in: f64,
    /// Angular samples for the lower-bound diagnostic.
    pub diag_samples: usize,
    pub exec: Execution,
}

/// `steps` equally spaced radii from `a` to `b`.
pub fn linear_grid(a: f64, b: f64, steps: usize) -> Vec<f64> {
    if steps <= 1 {
        return vec![a];
    }
    (0..steps).map(|k| a + (b - a) * k as f64 / (steps - 1) as f64).collect()
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            epsilon: 0.5,
            radii: linear_grid(5.0, 30.0, 26),
            max_samples: super::quad::MAX_SAMPLES,
            zero_tol: 1e-9,
            burn_in: 5.0,
            diag_samples: 4096,
            exec: Execution::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DefectTrace {
    /// `1 - N(r)/(d T(r))` per radius.
    pub trace: Vec<f64>,
    /// Minimum over the top quartile of the grid.
    pub defect: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FmtCap {
    /// `N(r_min) - d T(r_min)`.
    pub c: f64,
    /// `max_r (N(r) - d T(r)) - c`.
    pub max_excess: f64,
    /// `min_r (d T(r) + C(r) - N(r))` with the explicit
    /// `C(r) = mean log sum_I |a_I| - log |c|`, `c` the leading Taylor
    /// coefficient of `Q(f)` at 0; `None` when `Q(f)` vanishes to order two there.
    pub slack: Option<f64>,
    pub holds: bool,
}

/// Lower bound `diag(r) >= -(c1 + c2 log r)` fitted on the first half of the
/// grid and checked on the second.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LowerBoundFit {
    pub c1: f64,
    pub c2: f64,
    pub fit_radii: usize,
    /// Worst `-(c1 + c2 log r) - diag(r)` on the held-out radii; `<= 0` means the bound held.
    pub held_out_worst: f64,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepReport {
    pub q: usize,
    pub n: usize,
    pub epsilon: f64,
    pub degrees: Vec<u32>,
    pub radii: Vec<f64>,
    pub tf: Vec<f64>,
    /// `nf[k][j] = N_f(r_k, Q_j)`.
    pub nf: Vec<Vec<f64>>,
    pub margins: Vec<f64>,
    pub lower_diag: Vec<f64>,
    pub lower_fit: Option<LowerBoundFit>,
    pub defects: Vec<DefectTrace>,
    pub defect_sum: f64,
    pub fmt_caps: Vec<FmtCap>,
    /// Largest Jensen residual over all `(Q_j, r)` pairs.
    pub jensen_max: f64,
    pub zero_counts: Vec<usize>,
    pub violations: Vec<f64>,
    pub burn_in_violations: Vec<f64>,
    pub variety_residual: Option<f64>,
    pub warnings: Vec<String>,
}

impl SweepReport {
    /// `r,Tf,Nf_1..Nf_q,margin,lower_diag`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("r,Tf");
        for j in 1..=self.q {
            out.push_str(&format!(",Nf_{j}"));
        }
        out.push_str(",margin,lower_diag\n");
        for (k, r) in self.radii.iter().enumerate() {
            out.push_str(&format!("{r},{}", self.tf[k]));
            for v in &self.nf[k] {
                out.push_str(&format!(",{v}"));
            }
            out.push_str(&format!(",{},{}\n", self.margins[k], self.lower_diag[k]));
        }
        out
    }
}

fn top_quartile(values: &[f64]) -> f64 {
    let start = values.len() - values.len().div_ceil(4);
    values[start..].iter().copied().fold(f64::INFINITY, f64::min)
}

/// `delta = min over the top grid quartile of 1 - N(r)/(d T(r))`.
pub fn defect_estimate(
    curve: &EntireCurve,
    target: &MultiPoly<RationalFunction>,
    radii: &[f64],
    max_samples: usize,
) -> Result<DefectTrace, NumError> {
    let t = NumericTarget::new(target)?;
    let g = Composed { target: &t, curve };
    check_not_identically_zero(&g, curve, t.degree)?;
    let r_max = radii.iter().copied().fold(0.0, f64::max);
    let zeros = locate_zeros(&g, r_max * 1.05 + 0.5, 1e-9)?;
    let trace = radii
        .iter()
        .map(|&r| {
            let tf = characteristic_t(curve, r, max_samples)?.value;
            Ok(1.0 - counting_n(&zeros, r) / (t.degree as f64 * tf))
        })
        .collect::<Result<Vec<_>, NumError>>()?;
    if trace.is_empty() {
        return Err(NumError::InvalidInput("empty radius grid".into()));
    }
    Ok(DefectTrace { defect: top_quartile(&trace), trace })
}

fn check_not_identically_zero(g: &Composed, curve: &EntireCurve, degree: u32) -> Result<(), NumError> {
    let mut tiny = true;
    for k in 0..16 {
        let z = Complex64::from_polar(0.5 + 0.25 * k as f64, 0.61 * k as f64 + 0.2);
        let v = g.eval(z)?.norm();
        let norm = curve.values(z)?.iter().map(|x| x.norm()).fold(0.0, f64::max);
        if v > 1e-12 * norm.powi(degree as i32) {
            tiny = false;
            break;
        }
    }
    if tiny {
        Err(NumError::IdenticallyZero)
    } else {
        Ok(())
    }
}

fn fit_lower_bound(radii: &[f64], diag: &[f64]) -> Option<LowerBoundFit> {
    let half = radii.len() / 2;
    if half < 2 || radii.len() - half < 1 {
        return None;
    }
    let xs: Vec<f64> = radii[..half].iter().map(|r| r.ln()).collect();
    let ys: Vec<f64> = diag[..half].iter().map(|d| -d).collect();
    let mx = xs.iter().sum::<f64>() / half as f64;
    let my = ys.iter().sum::<f64>() / half as f64;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let c2 = if sxx > 0.0 { (sxy / sxx).max(0.0) } else { 0.0 };
    let c1 = xs.iter().zip(&ys).map(|(x, y)| y - c2 * x).fold(f64::NEG_INFINITY, f64::max);
    let held_out_worst = radii[half..]
        .iter()
        .zip(&diag[half..])
        .map(|(r, d)| -(c1 + c2 * r.ln()) - d)
        .fold(f64::NEG_INFINITY, f64::max);
    Some(LowerBoundFit { c1, c2, fit_radii: half, held_out_worst, holds: held_out_worst <= 0.0 })
}

/// `min over (n+1)-subsets S and sampled theta of max_{j in S} log(|Q_j(f)|^{d/d_j} / ||f||^d)`.
fn lower_diag(
    curve: &EntireCurve,
    targets: &[NumericTarget],
    subsets: &[Vec<usize>],
    d: u32,
    r: f64,
    samples: usize,
) -> Result<f64, NumError> {
    let mut worst = f64::INFINITY;
    for k in 0..samples {
        let z = Complex64::from_polar(r, TAU * (k as f64 + 0.5) / samples as f64);
        let (v, dv) = curve.values_d(z)?;
        let log_norm = v.iter().map(|x| x.norm()).fold(0.0, f64::max).ln();
        let logs: Vec<f64> = targets
            .iter()
            .map(|t| (d as f64 / t.degree as f64) * t.eval_d(z, &v, &dv).0.norm().ln() - d as f64 * log_norm)
            .collect();
        for s in subsets {
            let m = s.iter().map(|&j| logs[j]).fold(f64::NEG_INFINITY, f64::max);
            worst = worst.min(m);
        }
    }
    Ok(worst)
}

fn lcm(a: u32, b: u32) -> u32 {
    a / num_integer::gcd(a, b) * b
}

/// Sweeps `(q - n - 1 - eps) T_f(r) <= sum_j N_f(r, Q_j) / d_j` over the grid.
///
/// Zeros of every `Q_j(f)` are located once on a disk slightly larger than
/// the largest radius and reused for all radii; each `(Q_j, r)` pair is
/// cross-checked against Jensen's formula.
pub fn smt_margin(
    ideal: Option<&HomogeneousIdeal>,
    targets: &[MultiPoly<RationalFunction>],
    n: usize,
    curve: &EntireCurve,
    cfg: &SweepConfig,
) -> Result<SweepReport, NumError> {
    if cfg.radii.is_empty() {
        return Err(NumError::InvalidInput("empty radius grid".into()));
    }
    let q = targets.len();
    let nts: Vec<NumericTarget> = targets.iter().map(NumericTarget::new).collect::<Result<_, _>>()?;
    if let Some(t) = nts.iter().find(|t| t.nvars() != curve.nvars()) {
        return Err(NumError::InvalidInput(format!(
            "target has {} variables, curve has {} components",
            t.nvars(),
            curve.nvars()
        )));
    }
    let r_max = cfg.radii.iter().copied().fold(0.0, f64::max);
    let mut warnings = Vec::new();
    let variety_residual = match ideal {
        Some(j) if !j.generators().is_empty() => {
            let res = curve.variety_residual(j.generators(), r_max)?;
            if res > curve.residual_tol {
                return Err(NumError::NotOnVariety(res));
            }
            Some(res)
        }
        _ => None,
    };
    let degrees: Vec<u32> = nts.iter().map(|t| t.degree).collect();
    let d = degrees.iter().copied().fold(1, lcm);
    let composed: Vec<Composed> = nts.iter().map(|t| Composed { target: t, curve }).collect();
    for g in &composed {
        check_not_identically_zero(g, curve, g.target.degree)?;
    }
    let big = r_max * 1.05 + 0.5;
    let zero_lists: Vec<ZeroList> = cfg.exec.try_map(&composed, |g| locate_zeros(g, big, cfg.zero_tol))?;
    let origin_ok: Vec<bool> =
        composed.iter().map(|g| g.eval(Complex64::new(0.0, 0.0)).map(|v| v.norm() > 0.0)).collect::<Result<_, _>>()?;
    // log of the leading Taylor coefficient at 0, for zeros of order at most one there
    let g0: Vec<Option<f64>> = composed
        .iter()
        .zip(&zero_lists)
        .zip(&origin_ok)
        .map(|((g, zl), &ok)| {
            let (v, dv) = g.eval_d(Complex64::new(0.0, 0.0))?;
            let at_origin: u32 = zl.zeros.iter().filter(|z| z.modulus() < 1e-6).map(|z| z.multiplicity).sum();
            Ok(match (ok, at_origin) {
                (true, _) => Some(v.norm().ln()),
                (false, 1) if dv.norm() > 0.0 => Some(dv.norm().ln()),
                _ => None,
            })
        })
        .collect::<Result<_, NumError>>()?;
    for (j, ok) in origin_ok.iter().enumerate() {
        if !ok {
            warnings.push(format!("Q_{} (f) vanishes at 0; Jensen check skipped for it", j + 1));
        }
    }
    let subsets = crate::gradedgeom::combinations(q, (n + 1).min(q));
    struct Row {
        tf: f64,
        nf: Vec<f64>,
        jensen: f64,
        diag: f64,
        coeff_means: Vec<f64>,
    }
    let rows: Vec<Row> = cfg.exec.try_map(&cfg.radii, |&r| {
        let tf = characteristic_t(curve, r, cfg.max_samples)?.value;
        let nf: Vec<f64> = zero_lists.iter().map(|z| counting_n(z, r)).collect();
        let mut jensen: f64 = 0.0;
        for (j, g) in composed.iter().enumerate() {
            if origin_ok[j] {
                jensen = jensen.max(jensen_residual(g, r, &zero_lists[j], cfg.max_samples)?);
            }
        }
        let diag = lower_diag(curve, &nts, &subsets, d, r, cfg.diag_samples)?;
        let coeff_means = nts
            .iter()
            .map(|t| {
                super::quad::circle_mean(|a| Ok(t.coeff_norm(Complex64::from_polar(r, a)).ln()), cfg.max_samples)
                    .map(|m| m.value)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok::<_, NumError>(Row { tf, nf, jensen, diag, coeff_means })
    })?;
    let factor = q as f64 - n as f64 - 1.0 - cfg.epsilon;
    let tf: Vec<f64> = rows.iter().map(|r| r.tf).collect();
    let nf: Vec<Vec<f64>> = rows.iter().map(|r| r.nf.clone()).collect();
    let margins: Vec<f64> = rows
        .iter()
        .map(|r| r.nf.iter().zip(&degrees).map(|(v, &dj)| v / dj as f64).sum::<f64>() - factor * r.tf)
        .collect();
    let lower_diag: Vec<f64> = rows.iter().map(|r| r.diag).collect();
    let jensen_max = rows.iter().map(|r| r.jensen).fold(0.0, f64::max);
    let mut violations = Vec::new();
    let mut burn_in_violations = Vec::new();
    for (r, m) in cfg.radii.iter().zip(&margins) {
        if *m < 0.0 {
            if *r >= cfg.burn_in {
                violations.push(*r);
            } else {
                burn_in_violations.push(*r);
            }
        }
    }
    let defects: Vec<DefectTrace> = (0..q)
        .map(|j| {
            let trace: Vec<f64> = (0..cfg.radii.len()).map(|k| 1.0 - nf[k][j] / (degrees[j] as f64 * tf[k])).collect();
            DefectTrace { defect: top_quartile(&trace), trace }
        })
        .collect();
    let defect_sum = defects.iter().map(|t| t.defect).sum();
    let first = cfg
        .radii
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .map(|(k, _)| k)
        .expect("nonempty grid");
    let fmt_caps = (0..q)
        .map(|j| {
            let gap = |k: usize| nf[k][j] - degrees[j] as f64 * tf[k];
            let c = gap(first);
            let max_excess = (0..cfg.radii.len()).map(|k| gap(k) - c).fold(f64::NEG_INFINITY, f64::max);
            let slack = g0[j].map(|log_g0| {
                (0..cfg.radii.len())
                    .map(|k| rows[k].coeff_means[j] - log_g0 - gap(k))
                    .fold(f64::INFINITY, f64::min)
            });
            // quadrature noise allowance
            let holds = slack.is_some_and(|s| s >= -1e-6);
            FmtCap { c, max_excess, slack, holds }
        })
        .collect();
    let mut radii_sorted: Vec<(f64, f64)> = cfg.radii.iter().copied().zip(lower_diag.iter().copied()).collect();
    radii_sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
    let (rs, ds): (Vec<f64>, Vec<f64>) = radii_sorted.into_iter().unzip();
    let lower_fit = fit_lower_bound(&rs, &ds);
    if !violations.is_empty() {
        warnings.push(format!("main inequality fails at {} radii beyond r = {}", violations.len(), cfg.burn_in));
    }
    Ok(SweepReport {
        q,
        n,
        epsilon: cfg.epsilon,
        degrees,
        radii: cfg.radii.clone(),
        tf,
        nf,
        margins,
        lower_diag,
        lower_fit,
        defects,
        defect_sum,
        fmt_caps,
        jensen_max,
        zero_counts: zero_lists.iter().map(|z| z.zeros.len()).collect(),
        violations,
        burn_in_violations,
        variety_residual,
        warnings,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TfBoundRow {
    pub r: f64,
    pub t_big: f64,
    pub n_tf: f64,
}

/// `T_F(r)` for `F = (phi_1(f) : ... : phi_H(f))` next to `N T_f(r)`, with
/// raw (unreduced) components.
pub fn tf_bound_diagnostic(
    curve: &EntireCurve,
    basis: &[MultiPoly<RationalFunction>],
    n_deg: u32,
    radii: &[f64],
    max_samples: usize,
) -> Result<Vec<TfBoundRow>, NumError> {
    let phis: Vec<NumericTarget> = basis.iter().map(NumericTarget::new).collect::<Result<_, _>>()?;
    radii
        .iter()
        .map(|&r| {
            let tb = super::quad::circle_mean(
                |t| {
                    let z = Complex64::from_polar(r, t);
                    let (v, dv) = curve.values_d(z)?;
                    Ok(phis.iter().map(|p| p.eval_d(z, &v, &dv).0.norm()).fold(0.0, f64::max).ln())
                },
                max_samples,
            )?;
            let tf = characteristic_t(curve, r, max_samples)?.value;
            Ok(TfBoundRow { r, t_big: tb.value, n_tf: n_deg as f64 * tf })
        })
        .collect()
}
