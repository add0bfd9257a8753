//! Dense exact linear algebra over a single [`FieldSpec`].
//!
//! Gauss-Jordan elimination with the first nonzero entry (in row order) of
//! each column as pivot. Pivot choice is fixed so kernel bases, complements
//! and everything derived from them are reproducible.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{FieldElement, FieldSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    field: FieldSpec,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: Matrix,
    pub pivots: Vec<usize>,
}

impl Rref {
    pub fn rank(&self) -> usize {
        self.pivots.len()
    }
}

impl Matrix {
    pub fn new(field: FieldSpec, rows: usize, cols: usize, entries: Vec<FieldElement>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        for e in &entries {
            field.check(e)?;
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            entries,
        })
    }

    pub fn zeros(field: FieldSpec, rows: usize, cols: usize) -> Self {
        Matrix {
            field,
            rows,
            cols,
            entries: vec![field.zero(); rows * cols],
        }
    }

    pub fn identity(field: FieldSpec, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from row vectors; `cols` is only used when `rows` is empty.
    pub fn from_rows(field: FieldSpec, cols: usize, rows: Vec<Vec<FieldElement>>) -> Result<Self> {
        let cols = rows.first().map_or(cols, Vec::len);
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * cols);
        for r in rows {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    found: r.len(),
                });
            }
            entries.extend(r);
        }
        Self::new(field, n, cols, entries)
    }

    pub fn from_columns(field: FieldSpec, rows: usize, columns: &[Vec<FieldElement>]) -> Result<Self> {
        Ok(Self::from_rows(field, rows, columns.to_vec())?.transpose())
    }

    pub fn from_i64(field: FieldSpec, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, data).expect("ragged integer matrix")
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &FieldElement {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: FieldElement) {
        assert_eq!(v.spec(), self.field);
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[FieldElement] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn row_vecs(&self) -> Vec<Vec<FieldElement>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<FieldElement>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(FieldElement::is_zero)
    }

    pub fn transpose(&self) -> Matrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        Matrix {
            field: self.field,
            rows: self.cols,
            cols: self.rows,
            entries,
        }
    }

    pub fn mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.rows,
            });
        }
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        let idx = i * out.cols + j;
                        out.entries[idx] = &out.entries[idx] + &(a * b);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[FieldElement]) -> Result<Vec<FieldElement>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: v.len(),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(self.field.zero(), |acc, (a, b)| &acc + &(a * b))
            })
            .collect())
    }

    pub fn scale(&self, c: &FieldElement) -> Matrix {
        Matrix {
            field: self.field,
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    /// Multiplies row `i` by `scales[i]`.
    pub fn scale_rows(&self, scales: &[FieldElement]) -> Result<Matrix> {
        if scales.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: scales.len(),
            });
        }
        let mut out = self.clone();
        for (i, s) in scales.iter().enumerate() {
            for j in 0..self.cols {
                let idx = i * self.cols + j;
                out.entries[idx] = &out.entries[idx] * s;
            }
        }
        Ok(out)
    }

    /// `[self | rhs]`.
    pub fn hstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.rows != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: rhs.rows,
            });
        }
        let rows = (0..self.rows)
            .map(|i| self.row(i).iter().chain(rhs.row(i)).cloned().collect())
            .collect();
        Matrix::from_rows(self.field, self.cols + rhs.cols, rows)
    }

    /// `self` on top of `rhs`.
    pub fn vstack(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                found: rhs.cols,
            });
        }
        let mut entries = self.entries.clone();
        entries.extend(rhs.entries.iter().cloned());
        Ok(Matrix {
            field: self.field,
            rows: self.rows + rhs.rows,
            cols: self.cols,
            entries,
        })
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let rows = idx.iter().map(|&i| self.row(i).to_vec()).collect();
        Matrix::from_rows(self.field, self.cols, rows).expect("row selection")
    }

    pub fn select_columns(&self, idx: &[usize]) -> Matrix {
        let rows = (0..self.rows)
            .map(|i| idx.iter().map(|&j| self.get(i, j).clone()).collect())
            .collect();
        Matrix::from_rows(self.field, idx.len(), rows).expect("column selection")
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m.get(r, c).inv().expect("nonzero pivot");
            for j in c..m.cols {
                let idx = r * m.cols + j;
                m.entries[idx] = &m.entries[idx] * &inv;
            }
            for i in 0..m.rows {
                if i == r || m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c).clone();
                for j in c..m.cols {
                    let sub = &factor * m.get(r, j);
                    if !sub.is_zero() {
                        let idx = i * m.cols + j;
                        m.entries[idx] = &m.entries[idx] - &sub;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref { matrix: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.entries.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank()
    }

    /// Null space `{x : self * x = 0}`. Basis vector `k` sets the `k`-th free
    /// variable to 1, the other free variables to 0, and back-substitutes.
    pub fn kernel(&self) -> Subspace {
        let rref = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !rref.pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut v = vec![self.field.zero(); self.cols];
            v[f] = self.field.one();
            for (row, &pc) in rref.pivots.iter().enumerate() {
                v[pc] = -rref.matrix.get(row, f);
            }
            basis.push(v);
        }
        Subspace::from_independent_columns(self.field, self.cols, &basis)
    }

    /// Column space.
    pub fn image(&self) -> Subspace {
        let rref = self.rref();
        let cols = self.select_columns(&rref.pivots);
        Subspace {
            ambient_dim: self.rows,
            basis: cols,
        }
    }

    /// Some `x` with `self * x = b` (free variables set to zero), or `None`.
    pub fn solve(&self, b: &[FieldElement]) -> Result<Option<Vec<FieldElement>>> {
        if b.len() != self.rows {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: b.len(),
            });
        }
        let bm = Matrix::from_rows(self.field, 1, b.iter().map(|x| vec![x.clone()]).collect())?;
        let aug = self.hstack(&bm)?;
        let rref = aug.rref();
        if rref.pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = vec![self.field.zero(); self.cols];
        for (row, &pc) in rref.pivots.iter().enumerate() {
            x[pc] = rref.matrix.get(row, self.cols).clone();
        }
        Ok(Some(x))
    }

    /// Determinant of a square matrix.
    pub fn determinant(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows,
                found: self.cols,
            });
        }
        let mut m = self.clone();
        let mut det = self.field.one();
        for c in 0..m.cols {
            let Some(p) = (c..m.rows).find(|&i| !m.get(i, c).is_zero()) else {
                return Ok(self.field.zero());
            };
            if p != c {
                m.swap_rows(p, c);
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = &det * &pivot;
            let inv = pivot.inv()?;
            for i in c + 1..m.rows {
                if m.get(i, c).is_zero() {
                    continue;
                }
                let factor = m.get(i, c) * &inv;
                for j in c..m.cols {
                    let idx = i * m.cols + j;
                    let sub = &factor * m.get(c, j);
                    m.entries[idx] = &m.entries[idx] - &sub;
                }
            }
        }
        Ok(det)
    }

    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: self.cols,
            });
        }
        let aug = self.hstack(&Matrix::identity(self.field, n))?;
        let rref = aug.rref();
        if rref.pivots.len() < n || rref.pivots[n - 1] != n - 1 {
            return Err(Error::DivisionByZero);
        }
        Ok(rref.matrix.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// A linear subspace of `k^n`, stored as an `n x dim` matrix of independent columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn zero(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::zeros(field, ambient_dim, 0),
        }
    }

    pub fn full(field: FieldSpec, ambient_dim: usize) -> Self {
        Subspace {
            ambient_dim,
            basis: Matrix::identity(field, ambient_dim),
        }
    }

    /// Span of arbitrary vectors; dependent ones are dropped.
    pub fn span(field: FieldSpec, ambient_dim: usize, vectors: &[Vec<FieldElement>]) -> Result<Self> {
        if vectors.is_empty() {
            return Ok(Self::zero(field, ambient_dim));
        }
        let m = Matrix::from_columns(field, ambient_dim, vectors)?;
        if m.rows() != ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: ambient_dim,
                found: m.rows(),
            });
        }
        Ok(m.image())
    }

    fn from_independent_columns(field: FieldSpec, ambient_dim: usize, cols: &[Vec<FieldElement>]) -> Self {
        if cols.is_empty() {
            return Self::zero(field, ambient_dim);
        }
        Subspace {
            ambient_dim,
            basis: Matrix::from_columns(field, ambient_dim, cols).expect("basis columns"),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// `ambient_dim x dim`, columns are the basis vectors.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<Vec<FieldElement>> {
        self.basis.columns()
    }

    pub fn contains(&self, v: &[FieldElement]) -> Result<bool> {
        if self.dim() == 0 {
            return Ok(v.iter().all(FieldElement::is_zero));
        }
        Ok(self.basis.solve(v)?.is_some())
    }

    pub fn contains_subspace(&self, other: &Subspace) -> Result<bool> {
        for v in other.basis_vectors() {
            if !self.contains(&v)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn same_as(&self, other: &Subspace) -> Result<bool> {
        Ok(self.dim() == other.dim() && self.contains_subspace(other)?)
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace> {
        if self.ambient_dim != other.ambient_dim {
            return Err(Error::DimensionMismatch {
                expected: self.ambient_dim,
                found: other.ambient_dim,
            });
        }
        Ok(self.basis.hstack(&other.basis)?.image())
    }

    /// Standard basis vectors `e_i` for the non-pivot columns of `rref(basis^T)`.
    pub fn complement(&self) -> Subspace {
        let field = self.field();
        let pivots = if self.dim() == 0 {
            Vec::new()
        } else {
            self.basis.transpose().rref().pivots
        };
        let cols: Vec<Vec<FieldElement>> = (0..self.ambient_dim)
            .filter(|i| !pivots.contains(i))
            .map(|i| {
                let mut e = vec![field.zero(); self.ambient_dim];
                e[i] = field.one();
                e
            })
            .collect();
        Subspace::from_independent_columns(field, self.ambient_dim, &cols)
    }
}

/// `true` iff `u` and `v` are nonzero and proportional.
pub fn proportional(u: &[FieldElement], v: &[FieldElement]) -> bool {
    if u.len() != v.len() || u.iter().all(FieldElement::is_zero) || v.iter().all(FieldElement::is_zero) {
        return false;
    }
    for i in 0..u.len() {
        for j in i + 1..u.len() {
            if &u[i] * &v[j] != &u[j] * &v[i] {
                return false;
            }
        }
    }
    true
}

/// Scales a nonzero vector so its first nonzero entry is 1.
pub fn normalize(v: &[FieldElement]) -> Vec<FieldElement> {
    match v.iter().find(|x| !x.is_zero()) {
        Some(lead) => {
            let inv = lead.inv().expect("nonzero");
            v.iter().map(|x| x * &inv).collect()
        }
        None => v.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> FieldSpec {
        FieldSpec::rational()
    }

    #[test]
    fn rref_of_rank_one() {
        let m = Matrix::from_i64(q(), &[&[2, 4], &[1, 2]]);
        let r = m.rref();
        assert_eq!(r.rank(), 1);
        assert_eq!(r.pivots, vec![0]);
        assert_eq!(r.matrix, Matrix::from_i64(q(), &[&[1, 2], &[0, 0]]));
    }

    #[test]
    fn identity_is_its_own_rref() {
        let id = Matrix::identity(q(), 3);
        let r = id.rref();
        assert_eq!(r.matrix, id);
        assert_eq!(r.rank(), 3);
        assert_eq!(id.kernel().dim(), 0);
    }

    #[test]
    fn kernel_over_f5_is_annihilated() {
        let f5 = FieldSpec::prime(5).unwrap();
        let m = Matrix::from_i64(f5, &[&[1, 1, 1]]);
        let k = m.kernel();
        assert_eq!(k.dim(), 2);
        assert!(m.mul(k.basis()).unwrap().is_zero());
    }

    #[test]
    fn solve_conventions() {
        let id = Matrix::identity(q(), 2);
        let b = vec![q().from_i64(3), q().from_i64(4)];
        assert_eq!(id.solve(&b).unwrap().unwrap(), b);
        let m = Matrix::from_i64(q(), &[&[1, 1]]);
        assert_eq!(
            m.solve(&[q().from_i64(2)]).unwrap().unwrap(),
            vec![q().from_i64(2), q().zero()]
        );
        let inconsistent = Matrix::from_i64(q(), &[&[1, 1], &[1, 1]]);
        assert_eq!(inconsistent.solve(&[q().from_i64(1), q().from_i64(2)]).unwrap(), None);
        assert!(matches!(id.solve(&b[..1]), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn complement_uses_standard_vectors() {
        let e0 = Subspace::span(q(), 3, &[vec![q().one(), q().zero(), q().zero()]]).unwrap();
        let c = e0.complement();
        assert_eq!(c.basis(), &Matrix::from_i64(q(), &[&[0, 0], &[1, 0], &[0, 1]]));

        let u = Subspace::span(q(), 3, &[vec![q().one(), q().one(), q().zero()]]).unwrap();
        let w = u.complement();
        assert_eq!(w.basis(), &Matrix::from_i64(q(), &[&[0, 0], &[1, 0], &[0, 1]]));
        assert_eq!(u.basis().hstack(w.basis()).unwrap().rank(), 3);

        let zero = Subspace::zero(q(), 3);
        assert_eq!(zero.complement(), Subspace::full(q(), 3));
    }

    #[test]
    fn image_of_zero_matrix() {
        assert_eq!(Matrix::zeros(q(), 3, 2).image().dim(), 0);
    }

    #[test]
    fn determinant_and_inverse() {
        let m = Matrix::from_i64(q(), &[&[2, 1], &[7, 4]]);
        assert_eq!(m.determinant().unwrap(), q().one());
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv).unwrap(), Matrix::identity(q(), 2));
        let sing = Matrix::from_i64(q(), &[&[1, 2], &[2, 4]]);
        assert_eq!(sing.determinant().unwrap(), q().zero());
        assert!(sing.inverse().is_err());
    }

    #[test]
    fn proportionality() {
        let v = |xs: &[i64]| xs.iter().map(|&x| q().from_i64(x)).collect::<Vec<_>>();
        assert!(proportional(&v(&[1, 2, 0]), &v(&[-2, -4, 0])));
        assert!(!proportional(&v(&[1, 0, 0]), &v(&[1, 1, 0])));
        assert!(!proportional(&v(&[0, 0]), &v(&[0, 0])));
        assert_eq!(normalize(&v(&[0, 3, 6])), v(&[0, 1, 2]));
    }
}
