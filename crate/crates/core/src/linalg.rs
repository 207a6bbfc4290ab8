//! Exact linear algebra over a [`Field`].
//!
//! Both the dense and the sparse routes produce the reduced row-echelon form,
//! which is unique, so their kernel bases agree exactly. Kernel vectors are
//! normalized with one free variable set to 1 and the others to 0, free
//! variables taken in column order.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::scalar::{Field, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            data: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    pub fn from_rows(field: Field, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut data = Vec::with_capacity(rows.len() * cols);
        let nrows = rows.len();
        for row in rows {
            if row.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: row.len(),
                });
            }
            if row.iter().any(|v| v.field() != field) {
                return Err(Error::FieldMismatch);
            }
            data.extend(row);
        }
        Ok(Matrix {
            field,
            rows: nrows,
            cols,
            data,
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(field: Field, rows: usize, columns: &[Vec<Scalar>]) -> Result<Self> {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            if col.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    found: col.len(),
                });
            }
            for (i, v) in col.iter().enumerate() {
                m.set(i, j, v.clone());
            }
        }
        Ok(m)
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn mul(&self, other: &Matrix) -> Result<Matrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.field, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j) + &(a * b);
                        out.set(i, j, v);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Result<Vec<Scalar>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                let mut acc = self.field.zero();
                for (a, b) in self.row(i).iter().zip(v) {
                    if !a.is_zero() && !b.is_zero() {
                        acc = &acc + &(a * b);
                    }
                }
                acc
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Matrix, op: impl Fn(&Scalar, &Scalar) -> Scalar) -> Result<Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                found: other.rows * other.cols,
            });
        }
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        Ok(Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| op(a, b)).collect(),
        })
    }

    pub fn rank(&self) -> usize {
        rref(self).1.len()
    }
}

/// Reduced row-echelon form by exact Gauss-Jordan elimination, together with
/// the pivot columns.
pub fn rref(a: &Matrix) -> (Matrix, Vec<usize>) {
    let mut m = a.clone();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
            continue;
        };
        if p != r {
            for j in 0..m.cols {
                m.data.swap(p * m.cols + j, r * m.cols + j);
            }
        }
        let inv = m.get(r, c).inv().expect("pivot is nonzero");
        for j in c..m.cols {
            let v = m.get(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r {
                continue;
            }
            let factor = m.get(i, c).clone();
            if factor.is_zero() {
                continue;
            }
            for j in c..m.cols {
                let pv = m.get(r, j);
                if !pv.is_zero() {
                    let v = m.get(i, j) - &(&factor * pv);
                    m.set(i, j, v);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    (m, pivots)
}

/// Basis of `{v : A v = 0}`.
pub fn kernel_basis(a: &Matrix) -> Vec<Vec<Scalar>> {
    let (r, pivots) = rref(a);
    let field = a.field;
    let mut is_pivot = vec![false; a.cols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    (0..a.cols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![field.zero(); a.cols];
            v[free] = field.one();
            for (row, &p) in pivots.iter().enumerate() {
                v[p] = -r.get(row, free);
            }
            v
        })
        .collect()
}

/// One solution of `A v = b`, or `None` when the system is inconsistent.
/// Free variables are set to zero.
pub fn solve(a: &Matrix, b: &[Scalar]) -> Result<Option<Vec<Scalar>>> {
    if b.len() != a.rows {
        return Err(Error::DimensionMismatch {
            expected: a.rows,
            found: b.len(),
        });
    }
    let mut aug = Matrix::zeros(a.field, a.rows, a.cols + 1);
    for i in 0..a.rows {
        for j in 0..a.cols {
            aug.set(i, j, a.get(i, j).clone());
        }
        aug.set(i, a.cols, b[i].clone());
    }
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&a.cols) {
        return Ok(None);
    }
    let mut x = vec![a.field.zero(); a.cols];
    for (row, &p) in pivots.iter().enumerate() {
        x[p] = r.get(row, a.cols).clone();
    }
    Ok(Some(x))
}

/// Rank of a list of vectors.
pub fn span_rank(field: Field, len: usize, vectors: &[Vec<Scalar>]) -> usize {
    let mut red = RowReducer::new(field, len);
    for v in vectors {
        red.push_dense(v);
    }
    red.rank()
}

/// True iff `v` lies in the span of `vectors`.
pub fn in_span(field: Field, len: usize, vectors: &[Vec<Scalar>], v: &[Scalar]) -> bool {
    let mut red = RowReducer::new(field, len);
    for w in vectors {
        red.push_dense(w);
    }
    let before = red.rank();
    red.push_dense(v);
    red.rank() == before
}

type SparseRow = Vec<(usize, Scalar)>;

/// Incremental row reduction for large sparse systems. Rows are kept in
/// echelon form with unit leading coefficients; [`RowReducer::kernel_basis`]
/// finishes the back substitution.
#[derive(Clone, Debug)]
pub struct RowReducer {
    field: Field,
    cols: usize,
    pivot_rows: BTreeMap<usize, SparseRow>,
}

impl RowReducer {
    pub fn new(field: Field, cols: usize) -> Self {
        RowReducer {
            field,
            cols,
            pivot_rows: BTreeMap::new(),
        }
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rank(&self) -> usize {
        self.pivot_rows.len()
    }

    pub fn push_dense(&mut self, row: &[Scalar]) {
        assert_eq!(row.len(), self.cols);
        let sparse = row
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect();
        self.push_sorted(sparse);
    }

    /// Adds the equation `Σ coeff · x_col = 0`. Repeated columns are summed.
    pub fn push<I: IntoIterator<Item = (usize, Scalar)>>(&mut self, entries: I) {
        let mut acc: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (c, v) in entries {
            assert!(c < self.cols, "column {c} out of range");
            if v.is_zero() {
                continue;
            }
            match acc.get_mut(&c) {
                Some(cur) => *cur = &*cur + &v,
                None => {
                    acc.insert(c, v);
                }
            }
        }
        self.push_sorted(acc.into_iter().filter(|(_, v)| !v.is_zero()).collect());
    }

    fn push_sorted(&mut self, mut row: SparseRow) {
        loop {
            let Some((lead, coeff)) = row.first().cloned() else {
                return;
            };
            match self.pivot_rows.get(&lead) {
                Some(pivot) => row = axpy(&row, &-&coeff, pivot),
                None => {
                    let inv = coeff.inv().expect("leading coefficient is nonzero");
                    for (_, v) in row.iter_mut() {
                        *v = &*v * &inv;
                    }
                    self.pivot_rows.insert(lead, row);
                    return;
                }
            }
        }
    }

    /// Pivot rows of the reduced row-echelon form, keyed by pivot column.
    fn reduced(&self) -> BTreeMap<usize, SparseRow> {
        let mut done: BTreeMap<usize, SparseRow> = BTreeMap::new();
        for (&lead, row) in self.pivot_rows.iter().rev() {
            let mut row = row.clone();
            loop {
                let target = row
                    .iter()
                    .skip(1)
                    .find(|(c, _)| done.contains_key(c))
                    .cloned();
                match target {
                    Some((c, v)) => row = axpy(&row, &-&v, &done[&c]),
                    None => break,
                }
            }
            done.insert(lead, row);
        }
        done
    }

    pub fn kernel_basis(&self) -> Vec<Vec<Scalar>> {
        let reduced = self.reduced();
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !reduced.contains_key(c)) {
            let mut v = vec![self.field.zero(); self.cols];
            v[free] = self.field.one();
            for (&p, row) in &reduced {
                if let Ok(i) = row.binary_search_by_key(&free, |(c, _)| *c) {
                    v[p] = -&row[i].1;
                }
            }
            basis.push(v);
        }
        basis
    }
}

/// `row + factor * other` on sorted sparse rows, dropping zeros.
fn axpy(row: &[(usize, Scalar)], factor: &Scalar, other: &[(usize, Scalar)]) -> SparseRow {
    let mut out = Vec::with_capacity(row.len() + other.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < other.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = other.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i].clone());
            i += 1;
        } else if cj < ci {
            out.push((cj, factor * &other[j].1));
            j += 1;
        } else {
            let v = &row[i].1 + &(factor * &other[j].1);
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Field::Rationals.from_i64(v)
    }

    fn qm(rows: &[&[i64]]) -> Matrix {
        Matrix::from_rows(
            Field::Rationals,
            rows.iter().map(|r| r.iter().map(|&v| q(v)).collect()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn rref_examples() {
        let id = Matrix::identity(Field::Rationals, 2);
        assert_eq!(rref(&id), (id.clone(), vec![0, 1]));
        let z = Matrix::zeros(Field::Rationals, 2, 3);
        assert_eq!(rref(&z), (z.clone(), vec![]));
        assert_eq!(rref(&qm(&[&[1, 2], &[2, 4]])), (qm(&[&[1, 2], &[0, 0]]), vec![0]));
    }

    #[test]
    fn kernel_examples() {
        assert!(kernel_basis(&Matrix::identity(Field::Rationals, 3)).is_empty());
        assert_eq!(kernel_basis(&Matrix::zeros(Field::Rationals, 2, 3)).len(), 3);
        assert_eq!(kernel_basis(&qm(&[&[1, 1]])), vec![vec![q(-1), q(1)]]);
    }

    #[test]
    fn solve_examples() {
        let id = Matrix::identity(Field::Rationals, 2);
        assert_eq!(solve(&id, &[q(3), q(-4)]).unwrap(), Some(vec![q(3), q(-4)]));
        assert_eq!(solve(&qm(&[&[1], &[1]]), &[q(1), q(2)]).unwrap(), None);
        assert_eq!(
            solve(&qm(&[&[2]]), &[q(1)]).unwrap(),
            Some(vec![Field::Rationals.parse("1/2").unwrap()])
        );
        assert!(matches!(solve(&id, &[q(1)]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn prime_field_elimination() {
        let f3 = Field::prime(3).unwrap();
        let m = Matrix::from_rows(f3, vec![vec![f3.from_i64(1), f3.from_i64(2)], vec![f3.from_i64(2), f3.from_i64(1)]])
            .unwrap();
        // second row is twice the first mod 3
        assert_eq!(m.rank(), 1);
        assert_eq!(kernel_basis(&m), vec![vec![f3.from_i64(1), f3.from_i64(1)]]);
    }

    #[test]
    fn sparse_matches_dense() {
        let m = qm(&[&[0, 1, 2, 0, 3], &[1, 0, 0, 1, 0], &[1, 1, 2, 1, 3], &[0, 0, 0, 0, 0], &[2, -1, 0, 0, 1]]);
        let mut red = RowReducer::new(Field::Rationals, 5);
        for i in 0..m.rows() {
            red.push(m.row(i).iter().cloned().enumerate());
        }
        assert_eq!(red.rank(), m.rank());
        assert_eq!(red.kernel_basis(), kernel_basis(&m));
    }
}
