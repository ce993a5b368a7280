use std::collections::{BTreeMap, HashMap};

use crate::algebra::{Field, MonomialBasis, MultiPoly, Rational, RationalFunction};
use crate::exec::Execution;
use crate::gradedgeom::{ideal_graded_piece, HomogeneousIdeal};
use crate::linear::{preimage_of_subspace, ExactMatrix, GradedSubspace};

use super::{common_degree, tau, FiltrationError, TupleIndex};

/// One `L_N^I` with its multiplicity and coset representatives.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationCell<F: Field> {
    pub index: TupleIndex,
    pub n_deg: u32,
    /// Degree `N - d||I||` of the forms `gamma`.
    pub degree: u32,
    pub space: GradedSubspace<F>,
    pub m: usize,
    /// Standard monomials of `space`'s echelon form: a basis of the quotient.
    pub reps: Vec<MultiPoly<F>>,
}

impl<F: Field> FiltrationCell<F> {
    fn from_space(index: TupleIndex, n_deg: u32, space: GradedSubspace<F>) -> Self {
        let basis = MonomialBasis::new(space.m(), space.degree());
        let reps: Vec<MultiPoly<F>> = space
            .non_pivot_columns()
            .into_iter()
            .map(|c| MultiPoly::monomial(basis.get(c).clone(), F::one()))
            .collect();
        FiltrationCell { index, n_deg, degree: space.degree(), m: reps.len(), space, reps }
    }
}

/// Cached powers `Q_s^i` and products `Q^E`.
struct Powers<F: Field> {
    qs: Vec<MultiPoly<F>>,
    pows: Vec<Vec<MultiPoly<F>>>,
}

impl<F: Field> Powers<F> {
    fn new(qs: &[MultiPoly<F>], top: u32) -> Self {
        let pows = qs
            .iter()
            .map(|q| {
                let mut v = vec![MultiPoly::one(q.nvars())];
                for i in 0..top as usize {
                    let next = v[i].mul(q);
                    v.push(next);
                }
                v
            })
            .collect();
        Powers { qs: qs.to_vec(), pows }
    }

    fn product(&self, e: &TupleIndex) -> MultiPoly<F> {
        let nv = self.qs[0].nvars();
        e.0.iter().enumerate().fold(MultiPoly::one(nv), |acc, (s, &k)| acc.mul(&self.pows[s][k as usize]))
    }
}

/// Matrix of `gamma -> p * gamma` from degree `k` forms into degree `k + deg p`.
fn multiplication_matrix<F: Field>(p: &MultiPoly<F>, m: usize, k: u32) -> ExactMatrix<F> {
    let src = MonomialBasis::new(m, k);
    let dst = MonomialBasis::new(m, k + p.degree().unwrap_or(0));
    let cols = src.monomials().iter().map(|e| p.shift(e).to_vector(&dst).expect("homogeneous")).collect();
    ExactMatrix::from_columns(dst.len(), cols)
}

fn check_inputs<F: Field>(ideal: &HomogeneousIdeal, qs: &[MultiPoly<F>]) -> Result<u32, FiltrationError> {
    for q in qs {
        if q.nvars() != ideal.nvars() {
            return Err(crate::gradedgeom::GeomError::from(crate::algebra::AlgebraError::ArityMismatch(
                ideal.nvars(),
                q.nvars(),
            ))
            .into());
        }
    }
    common_degree(qs)
}

/// Adds `Q^E * (all degree N - d||E|| forms)` to `u`.
fn absorb<F: Field>(u: &mut GradedSubspace<F>, qe: &MultiPoly<F>, m: usize, n_deg: u32) -> Result<(), FiltrationError> {
    let basis = MonomialBasis::new(m, n_deg);
    let k = n_deg - qe.degree().expect("nonzero product");
    for mono in MonomialBasis::new(m, k).monomials() {
        if u.dim() == u.ambient_dim() {
            break;
        }
        u.insert(&qe.shift(mono).to_vector(&basis).expect("degree matches"))?;
    }
    Ok(())
}

/// `L_N^I = {gamma : Q^I gamma in I(V)_N + sum_{E > I, E in tau_N} Q^E * forms}`.
pub fn filtration_space<F: Field>(
    ideal: &HomogeneousIdeal,
    qs: &[MultiPoly<F>],
    n_deg: u32,
    index: &TupleIndex,
) -> Result<FiltrationCell<F>, FiltrationError> {
    let d = check_inputs(ideal, qs)?;
    if index.len() != qs.len() {
        return Err(FiltrationError::NoTargets);
    }
    let needed = d * index.norm();
    if needed > n_deg {
        return Err(FiltrationError::OutsideTau { index: index.clone(), needed, n: n_deg });
    }
    let m = ideal.m();
    let powers = Powers::new(qs, n_deg / d);
    let mut u = ideal_graded_piece::<F>(ideal, &[], n_deg)?;
    for e in tau(n_deg, d, qs.len()).iter().filter(|e| *e > index) {
        absorb(&mut u, &powers.product(e), m, n_deg)?;
    }
    let qi = powers.product(index);
    let map = multiplication_matrix(&qi, m, n_deg - needed);
    let space = preimage_of_subspace(&map, &u, n_deg - needed)?;
    Ok(FiltrationCell::from_space(index.clone(), n_deg, space))
}

/// All cells `L_N^I`, `I in tau_N`, for one `N`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationTable<F: Field> {
    pub n_deg: u32,
    pub d: u32,
    pub n: usize,
    pub m: usize,
    pub cells: BTreeMap<TupleIndex, FiltrationCell<F>>,
    /// `dim I(V)_N`.
    pub ideal_dim: usize,
    targets: Vec<MultiPoly<F>>,
    ideal: HomogeneousIdeal,
}

impl<F: Field> FiltrationTable<F> {
    /// Builds the sums `U_I` once, walking `tau_N` downward, then takes the
    /// preimages cell by cell.
    pub fn build(
        ideal: &HomogeneousIdeal,
        qs: &[MultiPoly<F>],
        n_deg: u32,
        exec: Execution,
    ) -> Result<Self, FiltrationError> {
        let d = check_inputs(ideal, qs)?;
        let m = ideal.m();
        let powers = Powers::new(qs, n_deg / d);
        let taus = tau(n_deg, d, qs.len());
        let ivn = ideal_graded_piece::<F>(ideal, &[], n_deg)?;
        let ideal_dim = ivn.dim();
        let mut u = ivn;
        let mut jobs: Vec<(TupleIndex, GradedSubspace<F>)> = Vec::with_capacity(taus.len());
        for i in taus.iter().rev() {
            jobs.push((i.clone(), u.clone()));
            absorb(&mut u, &powers.product(i), m, n_deg)?;
        }
        let cells = exec.try_map(&jobs, |(i, ui)| {
            let k = n_deg - d * i.norm();
            let map = multiplication_matrix(&powers.product(i), m, k);
            let space = preimage_of_subspace(&map, ui, k)?;
            Ok::<_, FiltrationError>(FiltrationCell::from_space(i.clone(), n_deg, space))
        })?;
        Ok(FiltrationTable {
            n_deg,
            d,
            n: qs.len(),
            m,
            cells: cells.into_iter().map(|c| (c.index.clone(), c)).collect(),
            ideal_dim,
            targets: qs.to_vec(),
            ideal: ideal.clone(),
        })
    }

    pub fn targets(&self) -> &[MultiPoly<F>] {
        &self.targets
    }

    pub fn ideal(&self) -> &HomogeneousIdeal {
        &self.ideal
    }

    pub fn tau(&self) -> impl Iterator<Item = &TupleIndex> {
        self.cells.keys()
    }

    pub fn multiplicities(&self) -> BTreeMap<TupleIndex, usize> {
        self.cells.iter().map(|(i, c)| (i.clone(), c.m)).collect()
    }

    pub fn total_multiplicity(&self) -> usize {
        self.cells.values().map(|c| c.m).sum()
    }

    /// `Q^I`.
    pub fn target_product(&self, index: &TupleIndex) -> MultiPoly<F> {
        let nv = self.m + 1;
        index.0.iter().enumerate().fold(MultiPoly::one(nv), |acc, (s, &k)| acc.mul(&self.targets[s].pow(k)))
    }

    /// One row per cell: `I;normI;m;inTau0`.
    pub fn to_csv(&self, tau0: &[TupleIndex]) -> String {
        let mut out = String::from("I;normI;m;inTau0\n");
        for (i, c) in &self.cells {
            out.push_str(&format!("{};{};{};{}\n", i, i.norm(), c.m, tau0.contains(i)));
        }
        out
    }
}

/// The polynomials `Q^I * gamma_{I l}`, checked to be independent modulo
/// `I(V)_N` and to number `H_V(N)`.
pub fn filtration_basis<F: Field>(table: &FiltrationTable<F>) -> Result<Vec<MultiPoly<F>>, FiltrationError> {
    let basis = MonomialBasis::new(table.m, table.n_deg);
    let mut span = ideal_graded_piece::<F>(&table.ideal, &[], table.n_deg)?;
    let mut products: HashMap<&TupleIndex, MultiPoly<F>> = HashMap::new();
    let mut out = Vec::new();
    let mut rank = 0;
    for (i, cell) in &table.cells {
        let qi = products.entry(i).or_insert_with(|| table.target_product(i));
        for g in &cell.reps {
            let p = qi.mul(g);
            if span.insert(&p.to_vector(&basis).expect("degree N"))? {
                rank += 1;
            }
            out.push(p);
        }
    }
    let expected = basis.len() - table.ideal_dim;
    if rank != out.len() || rank != expected {
        return Err(FiltrationError::BasisDefect { rank, expected });
    }
    Ok(out)
}

/// The targets over `Q` when none of their coefficients involves `z`.
///
/// Ranks of rational matrices do not change over `Q(z)`, so every filtration
/// quantity computed from these equals the one over `Q(z)`.
pub fn constant_targets(qs: &[MultiPoly<RationalFunction>]) -> Option<Vec<MultiPoly<Rational>>> {
    qs.iter().map(MultiPoly::to_rational).collect()
}

impl FiltrationTable<RationalFunction> {
    /// Cellwise specialization `L_N^I(a)`; dimensions are compared by callers.
    pub fn specialize_dims(&self, a: &Rational) -> Result<BTreeMap<TupleIndex, usize>, FiltrationError> {
        self.cells
            .iter()
            .map(|(i, c)| Ok((i.clone(), c.space.specialize(a).map_err(crate::gradedgeom::GeomError::from)?.dim())))
            .collect()
    }
}
