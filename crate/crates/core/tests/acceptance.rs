//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::Zero;

use nevlab::algebra::{monomial_basis, Field, MultiPoly, Rational, RationalFunction};
use nevlab::cli::{parse_poly, parse_problem, ProblemSpec};
use nevlab::exec::Execution;
use nevlab::filtration::{
    filtration_basis, product_decomposition, stabilization_scan, tau0_of, weighted_sums, FiltrationTable,
    StabilizationReport,
};
use nevlab::gradedgeom::{
    admissibility_check, certificate_stability, combinations, hilbert_function, variety_invariants,
    AdmissibilityOptions, HomogeneousIdeal, SubsetVerdict,
};
use nevlab::nevanlinna::{characteristic_t, counting_n, locate_zeros, smt_margin, EntireCurve, EntireExpr, SweepConfig};

struct Outcome {
    ok: bool,
    detail: String,
}

fn check(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome { ok, detail: detail.into() }
}

fn problem(name: &str) -> ProblemSpec {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../problems").join(name);
    parse_problem(&std::fs::read_to_string(&path).expect("problem file")).expect("problem parses")
}

fn ideal_of(spec: &ProblemSpec) -> HomogeneousIdeal {
    HomogeneousIdeal::new(spec.m, spec.variety.clone()).unwrap()
}

fn conic() -> HomogeneousIdeal {
    ideal_of(&problem("conic_filtration.txt"))
}

fn p1() -> HomogeneousIdeal {
    HomogeneousIdeal::zero(1)
}

fn x0(nvars: usize) -> MultiPoly<Rational> {
    MultiPoly::var(nvars, 0)
}

fn scan(ideal: &HomogeneousIdeal, qs: &[MultiPoly<Rational>]) -> StabilizationReport {
    stabilization_scan(ideal, qs, 12, 3, Execution::default()).unwrap()
}

/// Rank of integer rows by fraction-free elimination, kept apart from the
/// library's own linear algebra.
fn integer_rank(mut rows: Vec<Vec<BigInt>>) -> usize {
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(rank, p);
        let pivot = rows[rank].clone();
        for row in rows.iter_mut().skip(rank + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in 0..cols {
                row[k] = &row[k] * &pivot[c] - &f * &pivot[k];
            }
        }
        rank += 1;
    }
    rank
}

/// `H(k)` for the conic from the rank of the shifted generator, monomial by monomial.
fn macaulay_hilbert(k: u32) -> usize {
    let target = monomial_basis(2, k);
    if k < 2 {
        return target.len();
    }
    let g = [([1u32, 0, 1], 1i64), ([0, 2, 0], -1)];
    let rows: Vec<Vec<BigInt>> = monomial_basis(2, k - 2)
        .iter()
        .map(|e| {
            let mut row = vec![BigInt::zero(); target.len()];
            for (mono, c) in &g {
                let shifted: Vec<u32> = e.exps().iter().zip(mono).map(|(a, b)| a + b).collect();
                let idx = target.iter().position(|t| t.exps() == shifted.as_slice()).unwrap();
                row[idx] += BigInt::from(*c);
            }
            row
        })
        .collect();
    target.len() - integer_rank(rows)
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let ideal = conic();
    let mut bad = Vec::new();
    for n in 1..=10u32 {
        let h = hilbert_function(&ideal, n);
        if h != 2 * n as usize + 1 || macaulay_hilbert(n) != h {
            bad.push(n);
        }
    }
    let inv = variety_invariants(&ideal, 10, Execution::default()).unwrap();
    let elapsed = start.elapsed();
    check(
        bad.is_empty() && inv.n == 1 && inv.deg_v == 2 && elapsed < Duration::from_secs(5),
        format!("H = 2N+1 on 1..10 (mismatches {bad:?}), (n, degV) = ({}, {}), {elapsed:.2?}", inv.n, inv.deg_v),
    )
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let mut bad = Vec::new();
    for n in 1..=10 {
        let t = FiltrationTable::build(&p1(), &[x0(2)], n, Execution::default()).unwrap();
        if t.total_multiplicity() != hilbert_function(&p1(), n) {
            bad.push(format!("P1 N={n}"));
        }
    }
    let q = vec![x0(3).pow(2)];
    for n in [8, 12, 16] {
        let t = FiltrationTable::build(&conic(), &q, n, Execution::default()).unwrap();
        if t.total_multiplicity() != hilbert_function(&conic(), n) {
            bad.push(format!("conic N={n}"));
        }
    }
    let elapsed = start.elapsed();
    check(bad.is_empty() && elapsed < Duration::from_secs(120), format!("failures {bad:?}, {elapsed:.2?}"))
}

fn criterion_3() -> Outcome {
    let q = vec![x0(3).pow(2)];
    let st = scan(&conic(), &q);
    let mut notes = Vec::new();
    let mut ok = true;
    for n in [12, 16] {
        let t = FiltrationTable::build(&conic(), &q, n, Execution::default()).unwrap();
        let tau0 = tau0_of(&t, st.n0, st.kappa);
        ok &= !tau0.is_empty() && tau0.iter().all(|i| t.cells[i].m == 4);
        notes.push(format!("N={n}: |tau0| = {}", tau0.len()));
    }
    let st1 = scan(&p1(), &[x0(2)]);
    for n in [5, 10] {
        let t = FiltrationTable::build(&p1(), &[x0(2)], n, Execution::default()).unwrap();
        let tau0 = tau0_of(&t, st1.n0, st1.kappa);
        ok &= tau0.len() == t.cells.len() && t.cells.values().all(|c| c.m == 1);
    }
    check(ok, format!("conic m = 4 on tau0 ({}), P1 m = 1 on every cell", notes.join(", ")))
}

fn criterion_4() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let cases: [(HomogeneousIdeal, MultiPoly<Rational>, u32); 2] = [(p1(), x0(2), 10), (conic(), x0(3).pow(2), 12)];
    for (ideal, q, n) in &cases {
        let t = FiltrationTable::build(ideal, std::slice::from_ref(q), *n, Execution::default()).unwrap();
        let rank = filtration_basis(&t).map(|b| b.len()).unwrap_or(0);
        let h = hilbert_function(ideal, *n);
        ok &= rank == h;
        notes.push(format!("rank {rank} = H {h}"));
    }
    // a moving target over Q(z), specialized at 5 random points
    let moving = parse_poly("{z}*x0^2 + x1*x2", 2).unwrap();
    let t = FiltrationTable::<RationalFunction>::build(&conic(), &[moving], 8, Execution::default()).unwrap();
    let generic: std::collections::BTreeMap<_, _> = t.cells.iter().map(|(i, c)| (i.clone(), c.space.dim())).collect();
    let basis_ok = filtration_basis(&t).map(|b| b.len()).unwrap_or(0) == hilbert_function(&conic(), 8);
    let mut agree = 0;
    for a in [-613i64, -28, 5, 97, 842] {
        if t.specialize_dims(&Rational::from_int(a)).is_ok_and(|d| d == generic) {
            agree += 1;
        }
    }
    ok &= basis_ok && agree == 5;
    check(ok, format!("{}, moving conic basis {basis_ok}, specialization {agree}/5", notes.join(", ")))
}

fn criterion_5() -> Outcome {
    let mut ok = true;
    for n in 1..=10u32 {
        let t = FiltrationTable::build(&p1(), &[x0(2)], n, Execution::default()).unwrap();
        let ws = weighted_sums(&t, 1, 0, 0);
        ok &= ws.s[0] == (n * (n + 1) / 2) as u64 && ws.dominates && ws.closed_form;
    }
    let q = vec![x0(3).pow(2)];
    let st = scan(&conic(), &q);
    let mut sums = Vec::new();
    for n in [8, 12, 16] {
        let t = FiltrationTable::build(&conic(), &q, n, Execution::default()).unwrap();
        let ws = weighted_sums(&t, 2, st.n0, st.kappa);
        ok &= ws.dominates && ws.closed_form;
        sums.push(format!("S_1({n}) = {} >= S_1^0 = {}", ws.s[0], ws.s0[0]));
    }
    check(ok, format!("P1 S_1 = N(N+1)/2 for N <= 10; conic {}", sums.join(", ")))
}

fn criterion_6() -> Outcome {
    let q = vec![x0(3).pow(2)];
    let mut ok = true;
    let mut ratios = Vec::new();
    for n in [8u32, 12, 16] {
        let t = FiltrationTable::build(&conic(), &q, n, Execution::default()).unwrap();
        let pd = product_decomposition(&t, 2).unwrap();
        let h = hilbert_function(&conic(), n) as u64;
        let identity = t.d as u64 * pd.exponents.iter().sum::<u64>() + pd.gamma_degree == n as u64 * h;
        ok &= identity && pd.bookkeeping_ok && (0.5..=1.2).contains(&pd.ratio);
        ratios.push(format!("{:.4}", pd.ratio));
    }
    check(ok, format!("degree bookkeeping exact, e-ratios {}", ratios.join(", ")))
}

fn criterion_7() -> Outcome {
    let spec = problem("conic_moving.txt");
    let ideal = ideal_of(&spec);
    let targets = spec.targets();
    let mut counts = Vec::new();
    for pair in combinations(targets.len(), 2) {
        let sub: Vec<_> = pair.iter().map(|&j| targets[j].clone()).collect();
        let (found, _) = certificate_stability(&ideal, &sub, 5, 8, 7 + pair[0] as u64 * 10 + pair[1] as u64).unwrap();
        counts.push(found);
    }
    let certified = counts.iter().all(|&c| c == 5);
    let degenerate = problem("degenerate_pair.txt");
    let rep = admissibility_check(
        &ideal_of(&degenerate),
        &degenerate.targets(),
        1,
        &AdmissibilityOptions { seed: 7, ..Default::default() },
    )
    .unwrap();
    let flagged = matches!(rep.subsets[0].verdict, SubsetVerdict::NotAdmissibleEvidence { .. })
        && rep.warnings.iter().any(|w| w.contains("not certified"));
    check(
        certified && flagged,
        format!("conic pairs certified at {counts:?} of 5 witnesses (s <= 8); degenerate pair flagged {flagged}"),
    )
}

fn criterion_8_and_9() -> (Outcome, Outcome) {
    let start = Instant::now();
    let line = EntireCurve::new(vec![EntireExpr::constant(1.0), EntireExpr::exp(EntireExpr::z())]).unwrap();
    let mut worst_t: f64 = 0.0;
    for r in [5.0, 10.0, 20.0] {
        let t = characteristic_t(&line, r, 65536).unwrap().value;
        worst_t = worst_t.max((t - r / std::f64::consts::PI).abs() / (r / std::f64::consts::PI));
    }
    let g = EntireExpr::sub(EntireExpr::exp(EntireExpr::z()), EntireExpr::constant(1.0));
    let zl = locate_zeros(&g, 10.0, 1e-9).unwrap();
    let tau = std::f64::consts::TAU;
    let zeros_ok = zl.zeros.len() == 3
        && zl.zeros.iter().all(|z| {
            let k = (z.im / tau).round();
            z.multiplicity == 1 && k.abs() <= 1.0 && Complex64::new(z.re, z.im - k * tau).norm() < 1e-9
        });
    let nr = counting_n(&zl, 10.0);
    let numerics_time = start.elapsed();

    let spec = problem("conic_moving.txt");
    let curve = EntireCurve::new(spec.curve.clone()).unwrap();
    let sweep_start = Instant::now();
    let rep = smt_margin(Some(&ideal_of(&spec)), &spec.targets(), 1, &curve, &SweepConfig::default()).unwrap();
    let sweep_time = sweep_start.elapsed();

    let c8 = check(
        worst_t < 1e-6
            && zeros_ok
            && (nr - 3.23201).abs() < 1e-5
            && (nr - (10f64.ln() + 2.0 * (10.0 / tau).ln())).abs() < 1e-6
            && rep.jensen_max < 1e-5
            && numerics_time + sweep_time < Duration::from_secs(60),
        format!(
            "T rel err {worst_t:.1e}, zeros ok {zeros_ok}, N(10) = {nr:.6}, Jensen max {:.1e}, {:.2?}",
            rep.jensen_max,
            numerics_time + sweep_time
        ),
    );
    let min_margin = rep.margins.iter().copied().fold(f64::INFINITY, f64::min);
    let c9 = check(
        rep.radii.len() == 26
            && rep.margins.iter().all(|&m| m >= 0.0)
            && rep.defect_sum <= 2.1
            && rep.fmt_caps.iter().all(|c| c.holds)
            && sweep_time < Duration::from_secs(600),
        format!(
            "min margin {min_margin:.4} over 26 radii, defect sum {:.4}, FMT cap slack {:?}, {sweep_time:.2?}",
            rep.defect_sum,
            rep.fmt_caps.iter().map(|c| c.slack.map(|s| (s * 1e3).round() / 1e3)).collect::<Vec<_>>()
        ),
    );
    (c8, c9)
}

fn main() {
    // keep `cargo test -- --list` and filters from running the full suite
    if std::env::args().any(|a| a == "--list") {
        println!("acceptance: test");
        return;
    }
    let (c8, c9) = criterion_8_and_9();
    let outcomes = [
        criterion_1(),
        criterion_2(),
        criterion_3(),
        criterion_4(),
        criterion_5(),
        criterion_6(),
        criterion_7(),
        c8,
        c9,
    ];
    let mut failed = 0;
    for (k, o) in outcomes.iter().enumerate() {
        println!("criterion {}: {} ({})", k + 1, if o.ok { "PASS" } else { "FAIL" }, o.detail);
        failed += usize::from(!o.ok);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
