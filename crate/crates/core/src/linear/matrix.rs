use rand::Rng;

use crate::algebra::{Field, Rational, RationalFunction};

/// Dense `rows x cols` matrix of exact field elements, stored by rows.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExactMatrix<F: Field> {
    rows: usize,
    cols: usize,
    data: Vec<Vec<F>>,
}

impl<F: Field> ExactMatrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix { rows, cols, data: vec![vec![F::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = F::one();
        }
        m
    }

    /// Builds from row vectors; every row must have `cols` entries.
    pub fn from_rows(cols: usize, data: Vec<Vec<F>>) -> Self {
        assert!(data.iter().all(|r| r.len() == cols), "ragged rows");
        ExactMatrix { rows: data.len(), cols, data }
    }

    pub fn from_columns(rows: usize, columns: Vec<Vec<F>>) -> Self {
        let cols = columns.len();
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.into_iter().enumerate() {
            assert_eq!(c.len(), rows, "ragged columns");
            for (i, v) in c.into_iter().enumerate() {
                m.data[i][j] = v;
            }
        }
        m
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        Self::from_rows(cols, rows.iter().map(|r| r.iter().map(|&v| F::from_int(v)).collect()).collect())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &F {
        &self.data[i][j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F) {
        self.data[i][j] = v;
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i]
    }

    pub fn row_vecs(&self) -> &[Vec<F>] {
        &self.data
    }

    pub fn into_rows(self) -> Vec<Vec<F>> {
        self.data
    }

    pub fn column(&self, j: usize) -> Vec<F> {
        self.data.iter().map(|r| r[j].clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for (i, row) in self.data.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.data[j][i] = v.clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(v.len(), self.cols);
        self.data
            .iter()
            .map(|row| {
                let mut acc = F::zero();
                for (a, b) in row.iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = acc.add(&a.mul(b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn map<G: Field>(&self, mut f: impl FnMut(&F) -> G) -> ExactMatrix<G> {
        ExactMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|r| r.iter().map(&mut f).collect()).collect(),
        }
    }

    pub fn try_map<G: Field, E>(&self, mut f: impl FnMut(&F) -> Result<G, E>) -> Result<ExactMatrix<G>, E> {
        let mut data = Vec::with_capacity(self.rows);
        for r in &self.data {
            data.push(r.iter().map(&mut f).collect::<Result<Vec<_>, E>>()?);
        }
        Ok(ExactMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn rank(&self) -> usize {
        row_reduce(self).rank
    }
}

/// Result of Gauss-Jordan elimination.
#[derive(Clone, Debug)]
pub struct RowReduction<F: Field> {
    pub rank: usize,
    /// Reduced row-echelon form, same shape as the input.
    pub rref: ExactMatrix<F>,
    /// Pivot column of each of the first `rank` rows, strictly increasing.
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination with exact arithmetic. The pivot in each column is
/// the first nonzero entry at or below the current row.
pub fn row_reduce<F: Field>(m: &ExactMatrix<F>) -> RowReduction<F> {
    let mut a = m.data.clone();
    let (rows, cols) = (m.rows, m.cols);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].inv().expect("nonzero pivot");
        if !inv.is_one() {
            for v in a[r][c..].iter_mut() {
                if !v.is_zero() {
                    *v = v.mul(&inv);
                }
            }
        }
        let support: Vec<usize> = (c..cols).filter(|&j| !a[r][j].is_zero()).collect();
        let pivot_row = std::mem::take(&mut a[r]);
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row.is_empty() || row[c].is_zero() {
                continue;
            }
            let factor = row[c].clone();
            for &j in &support {
                row[j].sub_mul_assign(&factor, &pivot_row[j]);
            }
        }
        a[r] = pivot_row;
        pivots.push(c);
        r += 1;
    }
    RowReduction { rank: r, rref: ExactMatrix { rows, cols, data: a }, pivots }
}

/// Basis of the null space `{v : m v = 0}`, one vector per free column.
pub fn kernel<F: Field>(m: &ExactMatrix<F>) -> Vec<Vec<F>> {
    let red = row_reduce(m);
    kernel_from_rref(&red, m.cols)
}

pub(crate) fn kernel_from_rref<F: Field>(red: &RowReduction<F>, cols: usize) -> Vec<Vec<F>> {
    let mut is_pivot = vec![false; cols];
    for &p in &red.pivots {
        is_pivot[p] = true;
    }
    let mut out = Vec::with_capacity(cols - red.rank);
    for free in (0..cols).filter(|&j| !is_pivot[j]) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (i, &p) in red.pivots.iter().enumerate() {
            let e = red.rref.get(i, free);
            if !e.is_zero() {
                v[p] = e.neg();
            }
        }
        out.push(v);
    }
    out
}

/// Expresses `target` as a combination `sum c_i * rows[i]` of the given rows,
/// or `None` when it lies outside their span.
pub fn solve_row_combination<F: Field>(rows: &ExactMatrix<F>, target: &[F]) -> Option<Vec<F>> {
    assert_eq!(target.len(), rows.cols);
    let (r, c) = (rows.rows, rows.cols);
    // [A | I]: the right block records which input rows built each echelon row.
    let aug: Vec<Vec<F>> = rows
        .data
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut v = row.clone();
            v.extend((0..r).map(|j| if i == j { F::one() } else { F::zero() }));
            v
        })
        .collect();
    let red = row_reduce(&ExactMatrix::from_rows(c + r, aug));
    let mut residual = target.to_vec();
    let mut coeffs = vec![F::zero(); r];
    for (i, &p) in red.pivots.iter().enumerate() {
        if p >= c {
            break;
        }
        let t = residual[p].clone();
        if t.is_zero() {
            continue;
        }
        let row = red.rref.row(i);
        for j in 0..c {
            residual[j].sub_mul_assign(&t, &row[j]);
        }
        for j in 0..r {
            coeffs[j] = coeffs[j].add(&t.mul(&row[c + j]));
        }
    }
    residual.iter().all(Field::is_zero).then_some(coeffs)
}

/// Rank over `Q(z)` with a specialization screen: the rank at a random rational
/// point never exceeds the generic rank, so a full-rank specialization settles
/// the question; anything else falls back to exact elimination.
pub fn rank_screened<R: Rng>(m: &ExactMatrix<RationalFunction>, rng: &mut R) -> usize {
    let full = m.rows.min(m.cols);
    if full == 0 {
        return 0;
    }
    for _ in 0..4 {
        let a = Rational::from_integer(rng.gen_range(-997i64..=997).into());
        if let Ok(spec) = m.try_map(|e| e.eval(&a)) {
            if row_reduce(&spec).rank == full {
                return full;
            }
            break;
        }
    }
    row_reduce(m).rank
}
