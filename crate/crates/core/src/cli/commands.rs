use std::str::FromStr;

use serde_json::{json, Value};

use crate::algebra::{normalize_degrees, Field, MultiPoly, Rational, RationalFunction};
use crate::exec::Execution;
use crate::filtration::{
    constant_targets, filtration_basis, product_decomposition, stabilization_scan, tau0_of, weighted_sums,
    FiltrationTable, StabilizationReport, TupleIndex,
};
use crate::gradedgeom::{
    admissibility_check, hilbert_function, hilbert_record, variety_invariants, AdmissibilityOptions,
    AdmissibilityReport, GeomError, HomogeneousIdeal, SubsetVerdict,
};
use crate::nevanlinna::{
    characteristic_t, counting_n, defect_estimate, jensen_residual, linear_grid, locate_zeros, smt_margin, Composed,
    EntireCurve, NumericTarget, SweepConfig,
};

use super::parse::{render_problem, ProblemSpec};
use super::report::RunReport;
use super::{CliError, Flags};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Hilbert,
    Admissible,
    Filtration,
    Basis,
    Product,
    Tf,
    Zeros,
    Smt,
    Defects,
}

impl FromStr for Command {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self, CliError> {
        Ok(match s {
            "hilbert" => Command::Hilbert,
            "admissible" => Command::Admissible,
            "filtration" => Command::Filtration,
            "basis" => Command::Basis,
            "product" => Command::Product,
            "tf" => Command::Tf,
            "zeros" => Command::Zeros,
            "smt" => Command::Smt,
            "defects" => Command::Defects,
            other => return Err(CliError::UnknownCommand(other.to_string())),
        })
    }
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Hilbert => "hilbert",
            Command::Admissible => "admissible",
            Command::Filtration => "filtration",
            Command::Basis => "basis",
            Command::Product => "product",
            Command::Tf => "tf",
            Command::Zeros => "zeros",
            Command::Smt => "smt",
            Command::Defects => "defects",
        }
    }
}

/// Flag values merged with the problem's `[options]` and built-in defaults.
#[derive(Clone)]
struct Settings {
    n_deg: Option<u32>,
    epsilon: f64,
    radii: Vec<f64>,
    seed: u64,
    kmax: u32,
    window: usize,
    samples: usize,
    trials: usize,
    target: usize,
    subset: Option<Vec<usize>>,
    exec: Execution,
}

fn pick<T: FromStr + Clone>(flag: &Option<T>, spec: &ProblemSpec, key: &str) -> Result<Option<T>, CliError> {
    if let Some(v) = flag {
        return Ok(Some(v.clone()));
    }
    match spec.options.get(key) {
        Some(raw) => raw
            .parse()
            .map(Some)
            .map_err(|_| CliError::Precondition(format!("option {key} = {raw} has the wrong type"))),
        None => Ok(None),
    }
}

fn parse_subset(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|t| t.trim().parse().map_err(|_| CliError::Precondition(format!("bad subset entry '{t}'"))))
        .collect()
}

impl Settings {
    fn new(spec: &ProblemSpec, f: &Flags) -> Result<Self, CliError> {
        let r_min = pick(&f.r_min, spec, "r_min")?.unwrap_or(5.0);
        let r_max = pick(&f.r_max, spec, "r_max")?.unwrap_or(30.0);
        let r_steps = pick(&f.r_steps, spec, "r_steps")?.unwrap_or(26);
        if !(r_min > 0.0 && r_max >= r_min && r_steps >= 1) {
            return Err(CliError::Precondition(format!("bad radius grid [{r_min}, {r_max}] x {r_steps}")));
        }
        let subset = match pick(&f.subset, spec, "subset")? {
            Some(s) => Some(parse_subset(&s)?),
            None => None,
        };
        Ok(Settings {
            n_deg: pick(&f.n_deg, spec, "N")?,
            epsilon: pick(&f.epsilon, spec, "epsilon")?.unwrap_or(0.5),
            radii: linear_grid(r_min, r_max, r_steps),
            seed: pick(&f.seed, spec, "seed")?.unwrap_or(0),
            kmax: pick(&f.kmax, spec, "kmax")?.unwrap_or(10),
            window: pick(&f.window, spec, "window")?.unwrap_or(3),
            samples: pick(&f.samples, spec, "samples")?.unwrap_or(crate::nevanlinna::MAX_SAMPLES),
            trials: pick(&f.trials, spec, "trials")?.unwrap_or(5),
            target: pick(&f.target, spec, "target")?.unwrap_or(1),
            subset,
            exec: if f.sequential { Execution::Sequential } else { Execution::default() },
        })
    }

    fn sweep(&self) -> SweepConfig {
        SweepConfig {
            epsilon: self.epsilon,
            radii: self.radii.clone(),
            max_samples: self.samples,
            exec: self.exec,
            ..SweepConfig::default()
        }
    }
}

fn ideal_of(spec: &ProblemSpec) -> Result<HomogeneousIdeal, CliError> {
    Ok(HomogeneousIdeal::new(spec.m, spec.variety.clone())?)
}

/// `(n, deg V)`, cross-checked against a declared `n`.
fn resolve_dimension(spec: &ProblemSpec, ideal: &HomogeneousIdeal, s: &Settings) -> Result<(usize, u64), CliError> {
    let inv = variety_invariants(ideal, s.kmax.max(spec.m as u32 + 4), s.exec)?;
    if let Some(n) = spec.n {
        if n != inv.n {
            return Err(CliError::Precondition(format!("declared n = {n} but the Hilbert polynomial has degree {}", inv.n)));
        }
    }
    Ok((inv.n, inv.deg_v))
}

pub fn run_command(cmd: &str, spec: &ProblemSpec, flags: &Flags) -> Result<RunReport, CliError> {
    let command: Command = cmd.parse()?;
    let s = Settings::new(spec, flags)?;
    let mut report = RunReport::new(command.name(), render_problem(spec));
    match command {
        Command::Hilbert => hilbert(spec, &s, &mut report)?,
        Command::Admissible => {
            let ideal = ideal_of(spec)?;
            let (n, _) = resolve_dimension(spec, &ideal, &s)?;
            let adm = admissibility(&ideal, spec, n, &s)?;
            write_admissibility(&adm, &mut report);
        }
        Command::Filtration | Command::Basis | Command::Product => algebraic(command, spec, &s, &mut report)?,
        Command::Tf => tf(spec, &s, &mut report)?,
        Command::Zeros => zeros(spec, &s, &mut report)?,
        Command::Smt => smt(spec, &s, &mut report)?,
        Command::Defects => defects(spec, &s, &mut report)?,
    }
    Ok(report)
}

fn hilbert(spec: &ProblemSpec, s: &Settings, report: &mut RunReport) -> Result<(), CliError> {
    let ideal = ideal_of(spec)?;
    let (values, invariants) = match variety_invariants(&ideal, s.kmax, s.exec) {
        Ok(inv) => (inv.record.values.clone(), Some(inv)),
        Err(e @ GeomError::NotStabilized { .. }) => {
            report.warnings.push(e.to_string());
            (hilbert_record(&ideal, s.kmax, s.exec).values, None)
        }
        Err(e) => return Err(e.into()),
    };
    let mut csv = String::from("k,H\n");
    for (k, h) in &values {
        csv.push_str(&format!("{k},{h}\n"));
    }
    let listed: Vec<String> = values.iter().map(|(k, h)| format!("H({k}) = {h}")).collect();
    report.summary.push(listed.join(", "));
    if let Some(inv) = &invariants {
        report.summary.push(format!("n = {}, deg V = {}", inv.n, inv.deg_v));
        if let Some(n) = spec.n {
            if n != inv.n {
                report.warnings.push(format!("declared n = {n} disagrees with computed n = {}", inv.n));
            }
        }
    }
    report.results = json!({
        "values": values,
        "n": invariants.as_ref().map(|i| i.n),
        "deg_v": invariants.as_ref().map(|i| i.deg_v),
        "stable_from": invariants.as_ref().and_then(|i| i.record.stable_from),
    });
    report.csv = Some(csv);
    Ok(())
}

fn admissibility(
    ideal: &HomogeneousIdeal,
    spec: &ProblemSpec,
    n: usize,
    s: &Settings,
) -> Result<AdmissibilityReport, CliError> {
    let targets = normalize_degrees(&spec.targets())?.polys;
    let opts = AdmissibilityOptions { trials: s.trials, s_max: None, seed: s.seed, exec: s.exec };
    Ok(admissibility_check(ideal, &targets, n, &opts)?)
}

fn write_admissibility(adm: &AdmissibilityReport, report: &mut RunReport) {
    let mut csv = String::from("subset;verdict;witness;s\n");
    let mut rows = Vec::new();
    for r in &adm.subsets {
        let subset = r.subset.iter().map(|j| (j + 1).to_string()).collect::<Vec<_>>().join(",");
        let (verdict, witness, cert) = match &r.verdict {
            SubsetVerdict::Admissible { witness, certificate } => {
                ("ADMISSIBLE", Some(witness.to_string()), Some(certificate))
            }
            SubsetVerdict::NotAdmissibleEvidence { witness, .. } => {
                ("NOT_ADMISSIBLE_EVIDENCE", Some(witness.to_string()), None)
            }
            SubsetVerdict::Inconclusive { witness, .. } => ("INCONCLUSIVE", witness.as_ref().map(|w| w.to_string()), None),
        };
        let s_cert = cert.map(|c| c.s);
        csv.push_str(&format!(
            "{{{subset}}};{verdict};{};{}\n",
            witness.clone().unwrap_or_default(),
            s_cert.map(|x| x.to_string()).unwrap_or_default()
        ));
        report.summary.push(format!("{{{subset}}}: {verdict}"));
        let extra = match &r.verdict {
            SubsetVerdict::NotAdmissibleEvidence { hilbert_value, degrees, .. } => {
                json!({"hilbert_value": hilbert_value, "degrees": [degrees.0, degrees.1], "heuristic": true})
            }
            SubsetVerdict::Inconclusive { quotient_dims, .. } => json!({"quotient_dims": quotient_dims}),
            SubsetVerdict::Admissible { certificate, .. } => json!({
                "terms": certificate.coords.iter().map(|c| c.len()).sum::<usize>(),
            }),
        };
        rows.push(json!({
            "subset": r.subset.iter().map(|j| j + 1).collect::<Vec<_>>(),
            "verdict": verdict,
            "witness": witness,
            "s": s_cert,
            "witnesses_tried": r.witnesses_tried,
            "detail": extra,
        }));
    }
    report.warnings.extend(adm.warnings.iter().cloned());
    report.results = json!({
        "n": adm.n,
        "d": adm.d,
        "s_max": adm.s_max,
        "all_admissible": adm.all_admissible(),
        "subsets": rows,
    });
    report.csv = Some(csv);
}

/// Targets for the filtration commands: `--subset` (1-based) or the first `n`.
fn chosen_targets(spec: &ProblemSpec, n: usize, s: &Settings) -> Result<Vec<MultiPoly<RationalFunction>>, CliError> {
    let all = spec.targets();
    let idx: Vec<usize> = match &s.subset {
        Some(v) => v.iter().map(|&j| j.wrapping_sub(1)).collect(),
        None => (0..n.min(all.len())).collect(),
    };
    if idx.len() != n {
        return Err(CliError::Precondition(format!("need exactly n = {n} targets, got {}", idx.len())));
    }
    idx.iter()
        .map(|&j| all.get(j).cloned().ok_or_else(|| CliError::Precondition(format!("no target {}", j.wrapping_add(1)))))
        .collect()
}

fn algebraic(command: Command, spec: &ProblemSpec, s: &Settings, report: &mut RunReport) -> Result<(), CliError> {
    let ideal = ideal_of(spec)?;
    let (n, deg_v) = resolve_dimension(spec, &ideal, s)?;
    let n_deg = s.n_deg.ok_or_else(|| CliError::Precondition("N is required (--N or [options] N)".into()))?;
    let qs = normalize_degrees(&chosen_targets(spec, n, s)?)?.polys;
    let job = Job { command, ideal: &ideal, n_deg, deg_v, s };
    match constant_targets(&qs) {
        Some(qq) => job.run::<Rational>(&qq, report, None),
        None => {
            // extra check over Q(z): specialized cell dimensions match at random points
            let check = |table: &FiltrationTable<RationalFunction>, report: &mut RunReport| {
                specialization_check(table, s, report)
            };
            job.run::<RationalFunction>(&qs, report, Some(&check))
        }
    }
}

type Extra<'a, F> = Option<&'a dyn Fn(&FiltrationTable<F>, &mut RunReport) -> Result<Value, CliError>>;

struct Job<'a> {
    command: Command,
    ideal: &'a HomogeneousIdeal,
    n_deg: u32,
    deg_v: u64,
    s: &'a Settings,
}

impl Job<'_> {
    fn scan<F: Field>(&self, qs: &[MultiPoly<F>], report: &mut RunReport) -> Option<StabilizationReport> {
        match stabilization_scan(self.ideal, qs, self.s.kmax, self.s.window, self.s.exec) {
            Ok(r) => {
                if !r.unsettled.is_empty() {
                    report.warnings.push(format!(
                        "{} box tuples did not settle within the window (heuristic scan)",
                        r.unsettled.len()
                    ));
                }
                Some(r)
            }
            Err(e) => {
                report.warnings.push(format!("stabilization scan failed: {e}; tau_N^0 left empty"));
                None
            }
        }
    }

    fn run<F: Field>(&self, qs: &[MultiPoly<F>], report: &mut RunReport, extra: Extra<'_, F>) -> Result<(), CliError> {
        let table = FiltrationTable::build(self.ideal, qs, self.n_deg, self.s.exec)?;
        let scan = self.scan(qs, report);
        let tau0: Vec<TupleIndex> = scan.as_ref().map(|r| tau0_of(&table, r.n0, r.kappa)).unwrap_or_default();
        let h = hilbert_function(self.ideal, self.n_deg);
        let total = table.total_multiplicity();
        let scan_json = scan.as_ref().map(|r| {
            json!({"n0": r.n0, "c": r.c, "c_prime": r.c_prime, "m_min": r.m_min, "i0": r.i0.to_string(), "kappa": r.kappa})
        });
        let extra_json = match extra {
            Some(f) => f(&table, report)?,
            None => Value::Null,
        };
        match self.command {
            Command::Filtration => {
                let cells: Vec<Value> = table
                    .cells
                    .values()
                    .map(|c| {
                        json!({
                            "index": c.index.to_string(),
                            "norm": c.index.norm(),
                            "m": c.m,
                            "in_tau0": tau0.contains(&c.index),
                            "reps": c.reps.iter().map(|g| g.to_string()).collect::<Vec<_>>(),
                        })
                    })
                    .collect();
                report.summary.push(format!("N = {}: {} cells, sum m = {total}, H_V(N) = {h}", self.n_deg, cells.len()));
                report.results = json!({
                    "N": self.n_deg, "d": table.d, "n": table.n, "cells": cells,
                    "total_multiplicity": total, "hilbert": h, "identity_holds": total == h,
                    "scan": scan_json, "specialization": extra_json,
                });
                report.csv = Some(table.to_csv(&tau0));
            }
            Command::Basis => {
                let basis = filtration_basis(&table)?;
                report.summary.push(format!("basis rank {} = H_V(N) = {h}", basis.len()));
                let mut csv = String::from("I;gamma;element\n");
                for c in table.cells.values() {
                    for g in &c.reps {
                        csv.push_str(&format!("{};{};{}\n", c.index, g, table.target_product(&c.index).mul(g)));
                    }
                }
                report.results = json!({
                    "N": self.n_deg, "rank": basis.len(), "hilbert": h, "is_basis": basis.len() == h,
                    "specialization": extra_json,
                });
                report.csv = Some(csv);
            }
            Command::Product => {
                let pd = product_decomposition(&table, self.deg_v)?;
                let (n0, kappa) = scan.as_ref().map(|r| (r.n0, r.kappa)).unwrap_or((0, 0));
                let ws = weighted_sums(&table, self.deg_v, n0, kappa);
                if scan.is_none() {
                    report.warnings.push("weighted sums use n0 = 0, kappa = 0".into());
                }
                report.summary.push(format!(
                    "e = {}, deg P = {}, bookkeeping {}, ratio {:.4}",
                    pd.e,
                    pd.degree_p,
                    if pd.bookkeeping_ok { "ok" } else { "FAILED" },
                    pd.ratio
                ));
                let mut csv = String::from("s;E_s;S_s;S0_s\n");
                for k in 0..table.n {
                    csv.push_str(&format!("{};{};{};{}\n", k + 1, pd.exponents[k], ws.s[k], ws.s0[k]));
                }
                report.results = json!({
                    "N": self.n_deg, "exponents": pd.exponents, "e": pd.e, "degree_p": pd.degree_p,
                    "gamma_degree": pd.gamma_degree, "factor_count": pd.factor_count,
                    "total_degree": pd.total_degree, "bookkeeping_ok": pd.bookkeeping_ok, "ratio": pd.ratio,
                    "weighted_sums": ws, "scan": scan_json,
                });
                report.csv = Some(csv);
            }
            _ => unreachable!("non-algebraic command"),
        }
        Ok(())
    }
}

fn specialization_check(
    table: &FiltrationTable<RationalFunction>,
    s: &Settings,
    report: &mut RunReport,
) -> Result<Value, CliError> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(s.seed);
    let generic: std::collections::BTreeMap<_, _> =
        table.cells.iter().map(|(i, c)| (i.clone(), c.space.dim())).collect();
    let mut points = Vec::new();
    let mut agree = 0;
    for _ in 0..s.trials {
        let a = crate::algebra::rational(rng.gen_range(-997..=997), 1);
        match table.specialize_dims(&a) {
            Ok(dims) => {
                if dims == generic {
                    agree += 1;
                } else {
                    report.warnings.push(format!("cell dimensions change at z = {a}"));
                }
            }
            Err(e) => report.warnings.push(format!("specialization at z = {a} failed: {e}")),
        }
        points.push(a.to_string());
    }
    Ok(json!({"points": points, "agree": agree}))
}

fn curve_of(spec: &ProblemSpec) -> Result<EntireCurve, CliError> {
    if spec.curve.is_empty() {
        return Err(CliError::Precondition("the problem has no [curve] section".into()));
    }
    Ok(EntireCurve::new(spec.curve.clone())?)
}

fn tf(spec: &ProblemSpec, s: &Settings, report: &mut RunReport) -> Result<(), CliError> {
    let curve = curve_of(spec)?;
    let rows = s.exec.try_map(&s.radii, |&r| characteristic_t(&curve, r, s.samples).map(|m| (r, m)))?;
    let mut csv = String::from("r,Tf\n");
    let mut out = Vec::new();
    for (r, m) in &rows {
        csv.push_str(&format!("{r},{}\n", m.value));
        if !m.converged {
            report.warnings.push(format!("T_f({r}) did not converge in {} samples", m.samples));
        }
        out.push(json!({"r": r, "tf": m.value, "samples": m.samples, "converged": m.converged}));
    }
    report.summary.push(format!("{} radii", rows.len()));
    report.results = json!({ "rows": out });
    report.csv = Some(csv);
    Ok(())
}

fn numeric_target(spec: &ProblemSpec, s: &Settings) -> Result<NumericTarget, CliError> {
    let q = spec
        .hypersurfaces
        .get(s.target.wrapping_sub(1))
        .ok_or_else(|| CliError::Precondition(format!("no target {} (targets are 1-based)", s.target)))?;
    Ok(NumericTarget::new(&q.poly)?)
}

fn zeros(spec: &ProblemSpec, s: &Settings, report: &mut RunReport) -> Result<(), CliError> {
    let curve = curve_of(spec)?;
    let t = numeric_target(spec, s)?;
    let g = Composed { target: &t, curve: &curve };
    let r = *s.radii.last().expect("grid is nonempty");
    let list = locate_zeros(&g, r, 1e-9)?;
    let nr = counting_n(&list, r);
    let jensen = match jensen_residual(&g, r, &list, s.samples) {
        Ok(v) => Some(v),
        Err(e) => {
            report.warnings.push(format!("Jensen check skipped: {e}"));
            None
        }
    };
    let mut csv = String::from("re,im,multiplicity\n");
    for z in &list.zeros {
        csv.push_str(&format!("{},{},{}\n", z.re, z.im, z.multiplicity));
    }
    report.summary.push(format!("{} zeros in |z| < {r}, N(r) = {nr}", list.total()));
    report.results = json!({"radius": r, "zeros": list.zeros, "winding": list.winding, "counting_n": nr, "jensen_residual": jensen});
    report.csv = Some(csv);
    Ok(())
}

fn smt(spec: &ProblemSpec, s: &Settings, report: &mut RunReport) -> Result<(), CliError> {
    let curve = curve_of(spec)?;
    let ideal = ideal_of(spec)?;
    let (n, _) = resolve_dimension(spec, &ideal, s)?;
    let adm = admissibility(&ideal, spec, n, s)?;
    report.warnings.extend(adm.warnings.iter().cloned());
    if adm.subsets.iter().any(|r| matches!(r.verdict, SubsetVerdict::NotAdmissibleEvidence { .. })) {
        return Err(CliError::Precondition(format!(
            "targets are not in general position on V: {}",
            adm.warnings.join("; ")
        )));
    }
    let sweep = smt_margin(Some(&ideal), &spec.targets(), n, &curve, &s.sweep())?;
    report.warnings.extend(sweep.warnings.iter().cloned());
    report.summary.push(format!(
        "q = {}, n = {n}, eps = {}: min margin {:.6}, violations {}, defect sum {:.4}, Jensen max {:.2e}",
        sweep.q,
        sweep.epsilon,
        sweep.margins.iter().copied().fold(f64::INFINITY, f64::min),
        sweep.violations.len(),
        sweep.defect_sum,
        sweep.jensen_max
    ));
    report.csv = Some(sweep.to_csv());
    report.results = serde_json::to_value(&sweep).map_err(|e| CliError::Io(e.to_string()))?;
    Ok(())
}

fn defects(spec: &ProblemSpec, s: &Settings, report: &mut RunReport) -> Result<(), CliError> {
    let curve = curve_of(spec)?;
    let traces = s.exec.try_map(&spec.hypersurfaces, |h| defect_estimate(&curve, &h.poly, &s.radii, s.samples))?;
    let mut csv = String::from("j,defect\n");
    let mut sum = 0.0;
    for (j, t) in traces.iter().enumerate() {
        csv.push_str(&format!("{},{}\n", j + 1, t.defect));
        sum += t.defect.max(0.0);
    }
    report.summary.push(format!("defect sum {sum:.4}"));
    report.results = json!({"defects": traces, "defect_sum": sum});
    report.csv = Some(csv);
    Ok(())
}
