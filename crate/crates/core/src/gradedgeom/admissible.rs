use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    rational, ExponentVector, Field, MonomialBasis, MultiPoly, Rational, RationalFunction,
};
use crate::exec::Execution;
use crate::linear::{solve_row_combination, ExactMatrix, GradedSubspace};

use super::{GeomError, HomogeneousIdeal};

/// Witness points are integers drawn uniformly from `[-WITNESS_BOUND, WITNESS_BOUND]`.
pub const WITNESS_BOUND: i64 = 997;

/// Which polynomial a certificate term multiplies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GeneratorRef {
    /// Generator of the ideal of the variety.
    Ideal(usize),
    /// Position in the target list handed to the certificate search.
    Target(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertTerm {
    pub generator: GeneratorRef,
    pub multiplier: ExponentVector,
    pub coeff: Rational,
}

/// `x_i^s = sum coeff * multiplier * generator` for every `i`; `coords[i]`
/// lists the terms for `x_i^s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NullstellensatzCertificate {
    pub s: u32,
    pub coords: Vec<Vec<CertTerm>>,
}

impl NullstellensatzCertificate {
    /// Re-expands every combination exactly and compares with `x_i^s`.
    pub fn verify(&self, ideal: &HomogeneousIdeal, targets: &[MultiPoly<Rational>]) -> bool {
        let nv = ideal.nvars();
        if self.coords.len() != nv {
            return false;
        }
        self.coords.iter().enumerate().all(|(i, terms)| {
            let mut acc = MultiPoly::zero(nv);
            for t in terms {
                let g = match t.generator {
                    GeneratorRef::Ideal(j) => ideal.generators().get(j),
                    GeneratorRef::Target(j) => targets.get(j),
                };
                let Some(g) = g else { return false };
                if t.multiplier.nvars() != nv {
                    return false;
                }
                acc = acc.add(&g.shift(&t.multiplier).scale(&t.coeff));
            }
            acc == MultiPoly::monomial(ExponentVector::unit(nv, i, self.s), Rational::one())
        })
    }
}

struct Search {
    certificate: Option<NullstellensatzCertificate>,
    /// `quotient[k - 1]` is `dim` of degree-`k` forms modulo `(J, targets)_k`.
    quotient: Vec<usize>,
}

fn labelled_rows(
    ideal: &HomogeneousIdeal,
    targets: &[MultiPoly<Rational>],
    k: u32,
) -> (Vec<(GeneratorRef, ExponentVector)>, Vec<Vec<Rational>>) {
    let basis = MonomialBasis::new(ideal.m(), k);
    let gens = ideal
        .generators()
        .iter()
        .enumerate()
        .map(|(j, g)| (GeneratorRef::Ideal(j), g))
        .chain(targets.iter().enumerate().map(|(j, g)| (GeneratorRef::Target(j), g)));
    let mut labels = Vec::new();
    let mut rows = Vec::new();
    for (r, g) in gens {
        let Some(e) = g.degree() else { continue };
        if e > k {
            continue;
        }
        for mono in MonomialBasis::new(ideal.m(), k - e).monomials() {
            labels.push((r, mono.clone()));
            rows.push(g.shift(mono).to_vector(&basis).expect("degree matches"));
        }
    }
    (labels, rows)
}

fn search(ideal: &HomogeneousIdeal, targets: &[MultiPoly<Rational>], s_max: u32, min_degrees: u32) -> Search {
    let nv = ideal.nvars();
    let mut quotient = Vec::new();
    let mut certificate = None;
    for s in 1..=s_max.max(min_degrees) {
        let (labels, rows) = labelled_rows(ideal, targets, s);
        let basis = MonomialBasis::new(ideal.m(), s);
        let space = GradedSubspace::from_spanning(ideal.m(), s, rows.clone());
        quotient.push(space.codim());
        if certificate.is_some() || s > s_max {
            continue;
        }
        let powers: Vec<Vec<Rational>> = (0..nv)
            .map(|i| {
                MultiPoly::monomial(ExponentVector::unit(nv, i, s), Rational::one())
                    .to_vector(&basis)
                    .expect("degree matches")
            })
            .collect();
        if !powers.iter().all(|p| space.contains(p)) {
            continue;
        }
        let matrix = ExactMatrix::from_rows(basis.len(), rows);
        let coords = powers
            .iter()
            .map(|p| {
                let c = solve_row_combination(&matrix, p).expect("membership already established");
                c.into_iter()
                    .zip(&labels)
                    .filter(|(c, _)| !c.is_zero())
                    .map(|(coeff, (generator, multiplier))| CertTerm {
                        generator: *generator,
                        multiplier: multiplier.clone(),
                        coeff,
                    })
                    .collect()
            })
            .collect();
        certificate = Some(NullstellensatzCertificate { s, coords });
        if min_degrees <= s {
            break;
        }
    }
    Search { certificate, quotient }
}

/// Smallest `s <= s_max` with `x_i^s` in `(J, targets)_s` for every `i`,
/// together with exact membership coordinates; `None` if there is none.
pub fn nullstellensatz_certificate(
    ideal: &HomogeneousIdeal,
    targets: &[MultiPoly<Rational>],
    s_max: u32,
) -> Result<Option<NullstellensatzCertificate>, GeomError> {
    for t in targets {
        if t.nvars() != ideal.nvars() {
            return Err(crate::algebra::AlgebraError::ArityMismatch(ideal.nvars(), t.nvars()).into());
        }
        if !t.is_homogeneous() {
            return Err(GeomError::InhomogeneousInput);
        }
    }
    Ok(search(ideal, targets, s_max.max(1), 0).certificate)
}

/// `d * (n + 1)` plus the largest generator degree of `J`.
pub fn default_s_max(ideal: &HomogeneousIdeal, d: u32, n: usize) -> u32 {
    d * (n as u32 + 1) + ideal.max_generator_degree()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityOptions {
    pub trials: usize,
    /// `None` selects [`default_s_max`].
    pub s_max: Option<u32>,
    pub seed: u64,
    pub exec: Execution,
}

impl Default for AdmissibilityOptions {
    fn default() -> Self {
        AdmissibilityOptions { trials: 5, s_max: None, seed: 0, exec: Execution::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SubsetVerdict {
    /// Certified: at `witness` the specialized targets have no common zero on V.
    Admissible { witness: Rational, certificate: NullstellensatzCertificate },
    /// Heuristic: the specialized quotient kept the same positive Hilbert
    /// value over the last `M + 2` degrees searched.
    NotAdmissibleEvidence { witness: Rational, hilbert_value: usize, degrees: (u32, u32) },
    /// No certificate up to `s_max` and no stable tail either.
    Inconclusive { witness: Option<Rational>, quotient_dims: Vec<usize> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetResult {
    /// Indices into the full target list; certificate `Target(j)` refers to `subset[j]`.
    pub subset: Vec<usize>,
    pub verdict: SubsetVerdict,
    pub witnesses_tried: usize,
}

impl SubsetResult {
    pub fn is_admissible(&self) -> bool {
        matches!(self.verdict, SubsetVerdict::Admissible { .. })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibilityReport {
    pub n: usize,
    pub d: u32,
    pub s_max: u32,
    pub subsets: Vec<SubsetResult>,
    pub warnings: Vec<String>,
}

impl AdmissibilityReport {
    pub fn all_admissible(&self) -> bool {
        self.subsets.iter().all(SubsetResult::is_admissible)
    }
}

/// All `k`-element subsets of `0..q` in lexicographic order.
pub fn combinations(q: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k > q {
        return out;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        out.push(idx.clone());
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + q - k) else { return out };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Draws witnesses until every target specializes without a pole.
fn draw_witness<R: Rng>(
    targets: &[&MultiPoly<RationalFunction>],
    rng: &mut R,
) -> Option<(Rational, Vec<MultiPoly<Rational>>)> {
    for _ in 0..64 {
        let a = rational(rng.gen_range(-WITNESS_BOUND..=WITNESS_BOUND), 1);
        if let Ok(spec) = targets.iter().map(|t| t.specialize(&a)).collect::<Result<Vec<_>, _>>() {
            return Some((a, spec));
        }
    }
    None
}

fn subset_rng(seed: u64, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

fn check_degrees(targets: &[MultiPoly<RationalFunction>], nvars: usize) -> Result<u32, GeomError> {
    let mut d = None;
    for t in targets {
        if t.nvars() != nvars {
            return Err(crate::algebra::AlgebraError::ArityMismatch(nvars, t.nvars()).into());
        }
        let e = t.degree().ok_or(GeomError::InhomogeneousInput)?;
        match d {
            None => d = Some(e),
            Some(d0) if d0 != e => return Err(GeomError::DegreeMismatch),
            _ => {}
        }
    }
    d.ok_or(GeomError::TooFewTargets { needed: 1, got: 0 })
}

fn check_subset(
    ideal: &HomogeneousIdeal,
    targets: &[MultiPoly<RationalFunction>],
    subset: &[usize],
    s_max: u32,
    trials: usize,
    rng: &mut ChaCha8Rng,
) -> SubsetResult {
    let chosen: Vec<&MultiPoly<RationalFunction>> = subset.iter().map(|&j| &targets[j]).collect();
    let window = ideal.m() as u32 + 2;
    let mut last: Option<(Rational, Vec<usize>)> = None;
    let mut tried = 0;
    for _ in 0..trials.max(1) {
        let Some((a, spec)) = draw_witness(&chosen, rng) else { break };
        tried += 1;
        let found = search(ideal, &spec, s_max, window);
        if let Some(certificate) = found.certificate {
            return SubsetResult {
                subset: subset.to_vec(),
                verdict: SubsetVerdict::Admissible { witness: a, certificate },
                witnesses_tried: tried,
            };
        }
        last = Some((a, found.quotient));
    }
    let verdict = match last {
        Some((a, dims)) => {
            let top = dims.len() as u32;
            let lo = top - window + 1;
            let tail = &dims[(lo - 1) as usize..];
            if tail[0] > 0 && tail.iter().all(|&h| h == tail[0]) {
                SubsetVerdict::NotAdmissibleEvidence { witness: a, hilbert_value: tail[0], degrees: (lo, top) }
            } else {
                SubsetVerdict::Inconclusive { witness: Some(a), quotient_dims: dims }
            }
        }
        None => SubsetVerdict::Inconclusive { witness: None, quotient_dims: Vec::new() },
    };
    SubsetResult { subset: subset.to_vec(), verdict, witnesses_tried: tried }
}

/// Checks every `(n+1)`-subset of `targets` for a common zero on V at random
/// witness parameters. Positive verdicts carry certificates; negative ones are
/// labelled heuristic and also reported in `warnings`.
pub fn admissibility_check(
    ideal: &HomogeneousIdeal,
    targets: &[MultiPoly<RationalFunction>],
    n: usize,
    opts: &AdmissibilityOptions,
) -> Result<AdmissibilityReport, GeomError> {
    if targets.len() < n + 1 {
        return Err(GeomError::TooFewTargets { needed: n + 1, got: targets.len() });
    }
    let d = check_degrees(targets, ideal.nvars())?;
    let s_max = opts.s_max.unwrap_or_else(|| default_s_max(ideal, d, n)).max(1);
    let subsets = combinations(targets.len(), n + 1);
    let indexed: Vec<(usize, Vec<usize>)> = subsets.into_iter().enumerate().collect();
    let results = opts.exec.map(&indexed, |(i, subset)| {
        let mut rng = subset_rng(opts.seed, *i);
        check_subset(ideal, targets, subset, s_max, opts.trials, &mut rng)
    });
    let mut warnings = Vec::new();
    for r in &results {
        let named: Vec<String> = r.subset.iter().map(|j| format!("Q{}", j + 1)).collect();
        let named = named.join(", ");
        match &r.verdict {
            SubsetVerdict::Admissible { .. } => {}
            SubsetVerdict::NotAdmissibleEvidence { hilbert_value, degrees, .. } => warnings.push(format!(
                "targets {{{named}}}: heuristic non-admissibility evidence (not certified): quotient Hilbert value {} \
                 constant on degrees {}..={}",
                hilbert_value, degrees.0, degrees.1
            )),
            SubsetVerdict::Inconclusive { .. } => {
                warnings.push(format!("targets {{{named}}}: inconclusive, no certificate with s <= {s_max}"))
            }
        }
    }
    Ok(AdmissibilityReport { n, d, s_max, subsets: results, warnings })
}

/// Tries `k` fresh witnesses on one subset and returns how many of them
/// produce a certificate with `s <= s_max`, with the witnesses used.
pub fn certificate_stability(
    ideal: &HomogeneousIdeal,
    targets: &[MultiPoly<RationalFunction>],
    k: usize,
    s_max: u32,
    seed: u64,
) -> Result<(usize, Vec<Rational>), GeomError> {
    check_degrees(targets, ideal.nvars())?;
    let refs: Vec<&MultiPoly<RationalFunction>> = targets.iter().collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ok = 0;
    let mut used = Vec::new();
    for _ in 0..k {
        let Some((a, spec)) = draw_witness(&refs, &mut rng) else { break };
        if let Some(c) = nullstellensatz_certificate(ideal, &spec, s_max)? {
            debug_assert!(c.verify(ideal, &spec));
            ok += 1;
        }
        used.push(a);
    }
    Ok((ok, used))
}
