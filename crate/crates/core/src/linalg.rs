//! Dense matrices over a finite field, the structured builders the code
//! constructions rest on (Cauchy, Vandermonde, extended Vandermonde), and the
//! combinatorial checks behind MDS-ness: superregularity and
//! scalar-multiple-of column matching.
//!
//! Everything is exact. Elimination is plain Gaussian elimination over the
//! field; the superregularity check enumerates every square submatrix and is
//! deliberately exponential, guarded by a size cap.

use itertools::Itertools;

use crate::gf::{Field, FieldElement};
use crate::{Error, Result};

/// Caps for the exhaustive superregularity check.
const SUPERREGULAR_MIN_DIM_CAP: usize = 8;
const SUPERREGULAR_AREA_CAP: usize = 200;

/// Dense row-major matrix over one field. Entries are canonical values.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl std::fmt::Debug for Matrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Matrix {}x{} over {:?}", self.rows, self.cols, self.field)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", &self.data[i * self.cols..(i + 1) * self.cols])?;
        }
        Ok(())
    }
}

impl Matrix {
    pub fn new(field: Field, rows: usize, cols: usize, data: Vec<u64>) -> Result<Matrix> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                data.len()
            )));
        }
        if data.iter().any(|&v| v >= field.q()) {
            return Err(Error::InvalidArgument(
                "matrix entry is not a canonical field value".into(),
            ));
        }
        Ok(Matrix {
            field,
            rows,
            cols,
            data,
        })
    }

    /// Build from rows of canonical values.
    pub fn from_rows(field: Field, rows: &[Vec<u64>]) -> Result<Matrix> {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Matrix::new(field, r, c, rows.concat())
    }

    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix {
            field,
            rows,
            cols,
            data: vec![0; rows * cols],
        }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m.data[i * n + i] = 1;
        }
        m
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Raw canonical value at (i, j).
    pub fn at(&self, i: usize, j: usize) -> u64 {
        assert!(i < self.rows && j < self.cols, "index out of range");
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u64) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        assert!(v < self.field.q(), "not a canonical field value");
        self.data[i * self.cols + j] = v;
    }

    pub fn get(&self, i: usize, j: usize) -> FieldElement {
        self.field.element(self.at(i, j)).unwrap()
    }

    pub fn row(&self, i: usize) -> &[u64] {
        assert!(i < self.rows, "row out of range");
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<u64> {
        assert!(j < self.cols, "column out of range");
        (0..self.rows).map(|i| self.at(i, j)).collect()
    }

    /// Column as field elements, for scalar-multiple matching.
    pub fn column(&self, j: usize) -> Vec<FieldElement> {
        self.col(j)
            .into_iter()
            .map(|v| self.field.element(v).unwrap())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut out = Matrix::zeros(self.field.clone(), self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.at(i, j);
            }
        }
        out
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} * {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let f = &self.field;
        let mut out = Matrix::zeros(f.clone(), self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if a == 0 {
                    continue;
                }
                for j in 0..other.cols {
                    let cur = out.data[i * other.cols + j];
                    out.data[i * other.cols + j] = f.add(cur, f.mul(a, other.at(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product A * v (v as a column of canonical values).
    pub fn mul_vec(&self, v: &[u64]) -> Result<Vec<u64>> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "vector of length {} against {} columns",
                v.len(),
                self.cols
            )));
        }
        let f = &self.field;
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(0, |acc, (&a, &x)| f.add(acc, f.mul(a, x)))
            })
            .collect())
    }

    pub fn add(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix addition".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| self.field.add(a, b))
            .collect();
        Ok(Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&v| v == 0)
    }

    /// Restriction to the given rows and columns (indices may repeat or
    /// reorder; they must be in range).
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Result<Matrix> {
        if rows.iter().any(|&i| i >= self.rows) || cols.iter().any(|&j| j >= self.cols) {
            return Err(Error::InvalidArgument("submatrix index out of range".into()));
        }
        let mut data = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                data.push(self.at(i, j));
            }
        }
        Matrix::new(self.field.clone(), rows.len(), cols.len(), data)
    }

    pub fn slice_rows(&self, start: usize, end: usize) -> Matrix {
        assert!(start <= end && end <= self.rows);
        let idx: Vec<usize> = (start..end).collect();
        self.submatrix(&idx, &(0..self.cols).collect::<Vec<_>>())
            .unwrap()
    }

    pub fn slice_cols(&self, start: usize, end: usize) -> Matrix {
        assert!(start <= end && end <= self.cols);
        let idx: Vec<usize> = (start..end).collect();
        self.submatrix(&(0..self.rows).collect::<Vec<_>>(), &idx)
            .unwrap()
    }

    pub fn hconcat(&self, other: &Matrix) -> Result<Matrix> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch(
                "horizontal concat needs equal row counts".into(),
            ));
        }
        let cols = self.cols + other.cols;
        let mut data = Vec::with_capacity(self.rows * cols);
        for i in 0..self.rows {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Matrix::new(self.field.clone(), self.rows, cols, data)
    }

    /// Multiply column j by diag[j].
    pub fn scale_columns(&self, diag: &[u64]) -> Result<Matrix> {
        if diag.len() != self.cols {
            return Err(Error::DimensionMismatch(format!(
                "diagonal of length {} against {} columns",
                diag.len(),
                self.cols
            )));
        }
        let f = &self.field;
        let mut out = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[i * self.cols + j] = f.mul(self.at(i, j), diag[j]);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: u64) -> Matrix {
        let f = &self.field;
        let data = self.data.iter().map(|&v| f.mul(v, c)).collect();
        Matrix {
            field: self.field.clone(),
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    /// Gauss-Jordan reduction in place, pivoting only within the first
    /// `lead_cols` columns (the rest ride along, e.g. an augmented identity).
    /// Returns (rank of the leading block, its determinant when square).
    fn eliminate(data: &mut [Vec<u64>], field: &Field, lead_cols: usize) -> (usize, u64) {
        let rows = data.len();
        let cols = if rows == 0 { 0 } else { data[0].len() };
        let mut det: u64 = 1;
        let mut pivot_row = 0;
        for col in 0..lead_cols {
            if pivot_row == rows {
                break;
            }
            let Some(src) = (pivot_row..rows).find(|&r| data[r][col] != 0) else {
                det = 0;
                continue;
            };
            if src != pivot_row {
                data.swap(src, pivot_row);
                det = field.neg(det);
            }
            let pv = data[pivot_row][col];
            det = field.mul(det, pv);
            let pv_inv = field.inv(pv).unwrap();
            for j in col..cols {
                data[pivot_row][j] = field.mul(data[pivot_row][j], pv_inv);
            }
            for r in 0..rows {
                if r == pivot_row || data[r][col] == 0 {
                    continue;
                }
                let factor = data[r][col];
                for j in col..cols {
                    let sub = field.mul(factor, data[pivot_row][j]);
                    data[r][j] = field.sub(data[r][j], sub);
                }
            }
            pivot_row += 1;
        }
        (pivot_row, if pivot_row == rows { det } else { 0 })
    }

    pub fn rank(&self) -> usize {
        let mut work: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        Self::eliminate(&mut work, &self.field, self.cols).0
    }

    pub fn determinant(&self) -> Result<FieldElement> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "determinant of a non-square matrix".into(),
            ));
        }
        let mut work: Vec<Vec<u64>> = (0..self.rows).map(|i| self.row(i).to_vec()).collect();
        let (_, det) = Self::eliminate(&mut work, &self.field, self.cols);
        self.field.element(det)
    }

    pub fn is_invertible(&self) -> bool {
        self.rows == self.cols && self.rank() == self.rows
    }

    pub fn inverse(&self) -> Result<Matrix> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch(
                "inverse of a non-square matrix".into(),
            ));
        }
        let n = self.rows;
        let mut work: Vec<Vec<u64>> = (0..n)
            .map(|i| {
                let mut row = self.row(i).to_vec();
                row.extend((0..n).map(|j| u64::from(i == j)));
                row
            })
            .collect();
        let (rank, _) = Self::eliminate(&mut work, &self.field, n);
        if rank < n {
            return Err(Error::SingularMatrix);
        }
        let data: Vec<u64> = work.iter().flat_map(|row| row[n..].to_vec()).collect();
        Matrix::new(self.field.clone(), n, n, data)
    }

    /// Solve A X = B for X, with A square invertible.
    pub fn solve(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.field != rhs.field {
            return Err(Error::FieldMismatch);
        }
        if self.rows != self.cols || rhs.rows != self.rows {
            return Err(Error::DimensionMismatch("solve shapes".into()));
        }
        self.inverse()?.matmul(rhs)
    }

    /// True iff every square submatrix is nonsingular. Exhaustive by design;
    /// refuses matrices beyond the desk-scale cap.
    pub fn is_superregular(&self) -> Result<bool> {
        let s_max = self.rows.min(self.cols);
        if s_max > SUPERREGULAR_MIN_DIM_CAP || self.rows * self.cols > SUPERREGULAR_AREA_CAP {
            return Err(Error::SizeCapExceeded(format!(
                "superregularity check limited to min dim {SUPERREGULAR_MIN_DIM_CAP} and area {SUPERREGULAR_AREA_CAP}, got {}x{}",
                self.rows, self.cols
            )));
        }
        for s in 1..=s_max {
            for row_set in (0..self.rows).combinations(s) {
                for col_set in (0..self.cols).combinations(s) {
                    let sub = self.submatrix(&row_set, &col_set)?;
                    if sub.determinant()?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// Ordered collection of distinct field elements. Order is significant: it
/// fixes row/column placement in the structured matrix builders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderedSet {
    field: Field,
    values: Vec<u64>,
}

impl OrderedSet {
    pub fn new(elements: Vec<FieldElement>) -> Result<OrderedSet> {
        let field = elements
            .first()
            .map(|e| e.field().clone())
            .ok_or_else(|| Error::InvalidArgument("ordered set cannot be empty here".into()))?;
        if elements.iter().any(|e| e.field() != &field) {
            return Err(Error::FieldMismatch);
        }
        OrderedSet::from_values(field, elements.iter().map(|e| e.value()).collect())
    }

    pub fn from_values(field: Field, values: Vec<u64>) -> Result<OrderedSet> {
        for (i, &v) in values.iter().enumerate() {
            if v >= field.q() {
                return Err(Error::InvalidArgument(format!(
                    "{v} is not a canonical element of GF({})",
                    field.q()
                )));
            }
            if values[..i].contains(&v) {
                return Err(Error::DuplicateElement(format!("{v}")));
            }
        }
        Ok(OrderedSet { field, values })
    }

    pub fn empty(field: Field) -> OrderedSet {
        OrderedSet {
            field,
            values: Vec::new(),
        }
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[u64] {
        &self.values
    }

    pub fn get(&self, i: usize) -> u64 {
        self.values[i]
    }

    pub fn contains(&self, v: u64) -> bool {
        self.values.contains(&v)
    }

    pub fn is_disjoint(&self, other: &OrderedSet) -> bool {
        self.values.iter().all(|v| !other.values.contains(v))
    }

    /// Element-wise product c * S, order preserved.
    pub fn scaled(&self, c: u64) -> OrderedSet {
        OrderedSet {
            field: self.field.clone(),
            values: self.values.iter().map(|&v| self.field.mul(v, c)).collect(),
        }
    }

    /// Element-wise sum c + S, order preserved.
    pub fn translated(&self, c: u64) -> OrderedSet {
        OrderedSet {
            field: self.field.clone(),
            values: self.values.iter().map(|&v| self.field.add(v, c)).collect(),
        }
    }

    /// Concatenation; fails if the result has duplicates.
    pub fn concat(&self, other: &OrderedSet) -> Result<OrderedSet> {
        if self.field != other.field {
            return Err(Error::FieldMismatch);
        }
        let mut values = self.values.clone();
        values.extend_from_slice(&other.values);
        OrderedSet::from_values(self.field.clone(), values)
    }
}

/// Cauchy matrix: entry (i, j) = 1 / (x_i - y_j). Requires x and y disjoint.
pub fn cauchy(x: &OrderedSet, y: &OrderedSet) -> Result<Matrix> {
    if x.field() != y.field() {
        return Err(Error::FieldMismatch);
    }
    if !x.is_disjoint(y) {
        return Err(Error::NotDisjoint(
            "Cauchy evaluation sets must not intersect".into(),
        ));
    }
    let f = x.field();
    let mut data = Vec::with_capacity(x.len() * y.len());
    for &xi in x.values() {
        for &yj in y.values() {
            data.push(f.inv(f.sub(xi, yj))?);
        }
    }
    Matrix::new(f.clone(), x.len(), y.len(), data)
}

/// r x |a| Vandermonde matrix: row i holds the i-th powers of a's elements.
pub fn vandermonde(a: &OrderedSet, r: usize) -> Result<Matrix> {
    if r == 0 {
        return Err(Error::InvalidArgument(
            "Vandermonde matrix needs at least one row".into(),
        ));
    }
    let f = a.field();
    let mut data = Vec::with_capacity(r * a.len());
    let mut powers: Vec<u64> = vec![1; a.len()];
    for _ in 0..r {
        data.extend_from_slice(&powers);
        for (pw, &v) in powers.iter_mut().zip(a.values()) {
            *pw = f.mul(*pw, v);
        }
    }
    Matrix::new(f.clone(), r, a.len(), data)
}

/// [V_{a,r} | e_r]: Vandermonde with the r-th standard basis vector appended.
pub fn extended_vandermonde(a: &OrderedSet, r: usize) -> Result<Matrix> {
    let v = vandermonde(a, r)?;
    let mut basis = Matrix::zeros(a.field().clone(), r, 1);
    basis.set(r - 1, 0, 1);
    v.hconcat(&basis)
}

/// [V_{a,3} | e_2 | e_3]: the triply-extended form, fixed to r = 3.
pub fn triply_extended_vandermonde(a: &OrderedSet) -> Result<Matrix> {
    let v = vandermonde(a, 3)?;
    let mut basis = Matrix::zeros(a.field().clone(), 3, 2);
    basis.set(1, 0, 1);
    basis.set(2, 1, 1);
    v.hconcat(&basis)
}

/// If u = theta * v for a scalar theta, return it; otherwise None.
/// The scalar is pinned by the first nonzero entry of v and then checked on
/// every coordinate. v must not be all-zero.
pub fn scalar_multiple_of(u: &[FieldElement], v: &[FieldElement]) -> Result<Option<FieldElement>> {
    if u.len() != v.len() {
        return Err(Error::DimensionMismatch(
            "columns of unequal length".into(),
        ));
    }
    let field = match v.first() {
        Some(e) => e.field().clone(),
        None => return Err(Error::InvalidArgument("empty columns".into())),
    };
    if u.iter().chain(v).any(|e| e.field() != &field) {
        return Err(Error::FieldMismatch);
    }
    let Some(pivot) = v.iter().position(|e| !e.is_zero()) else {
        return Err(Error::InvalidArgument(
            "reference column is all-zero".into(),
        ));
    };
    let theta = field.div(u[pivot].value(), v[pivot].value())?;
    for (ue, ve) in u.iter().zip(v) {
        if ue.value() != field.mul(theta, ve.value()) {
            return Ok(None);
        }
    }
    Ok(Some(field.element(theta)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn gf13() -> Field {
        Field::gf(13).unwrap()
    }

    fn set(field: &Field, vals: &[u64]) -> OrderedSet {
        OrderedSet::from_values(field.clone(), vals.to_vec()).unwrap()
    }

    #[test]
    fn cauchy_examples() {
        let f = gf13();
        let m = cauchy(&set(&f, &[2]), &set(&f, &[1])).unwrap();
        assert_eq!(m.row(0), &[1]);
        let m = cauchy(&set(&f, &[2]), &set(&f, &[1, 12, 0])).unwrap();
        assert_eq!(m.row(0), &[1, 9, 7]);
        assert!(matches!(
            cauchy(&set(&f, &[0]), &set(&f, &[0])),
            Err(Error::NotDisjoint(_))
        ));
    }

    #[test]
    fn vandermonde_examples() {
        let f = gf13();
        let m = vandermonde(&set(&f, &[1, 2, 4, 8]), 2).unwrap();
        assert_eq!(m.row(0), &[1, 1, 1, 1]);
        assert_eq!(m.row(1), &[1, 2, 4, 8]);
        let m = vandermonde(&set(&f, &[5, 7, 11]), 1).unwrap();
        assert_eq!(m.row(0), &[1, 1, 1]);
        let m = vandermonde(&set(&f, &[3, 6, 12, 11]), 2).unwrap();
        assert_eq!(m.row(1), &[3, 6, 12, 11]);
    }

    #[test]
    fn extended_vandermonde_examples() {
        let f = gf13();
        let m = extended_vandermonde(&set(&f, &[0, 9]), 3).unwrap();
        assert_eq!(m.row(0), &[1, 1, 0]);
        assert_eq!(m.row(1), &[0, 9, 0]);
        assert_eq!(m.row(2), &[0, 3, 1]);

        let empty = OrderedSet::empty(f.clone());
        let m = extended_vandermonde(&empty, 2).unwrap();
        assert_eq!((m.rows(), m.cols()), (2, 1));
        assert_eq!(m.col(0), &[0, 1]);

        let f8 = Field::gf(8).unwrap();
        let m = triply_extended_vandermonde(&set(&f8, &[1])).unwrap();
        assert_eq!(m.row(0), &[1, 0, 0]);
        assert_eq!(m.row(1), &[1, 1, 0]);
        assert_eq!(m.row(2), &[1, 0, 1]);
    }

    #[test]
    fn inverse_example() {
        let f = gf13();
        let v = vandermonde(&set(&f, &[0, 9]), 2).unwrap();
        let inv = v.inverse().unwrap();
        assert_eq!(inv.row(0), &[1, 10]);
        assert_eq!(inv.row(1), &[0, 3]);
        let id = Matrix::identity(f.clone(), 2);
        assert_eq!(v.matmul(&inv).unwrap(), id);
        assert_eq!(inv.matmul(&v).unwrap(), id);
    }

    #[test]
    fn vandermonde_full_rank() {
        let f = gf13();
        for r in 1..=4 {
            let m = vandermonde(&set(&f, &[1, 2, 3, 5, 7]), r).unwrap();
            assert_eq!(m.rank(), r);
        }
    }

    #[test]
    fn solve_identity_is_rhs() {
        let f = gf13();
        let id = Matrix::identity(f.clone(), 3);
        let b = Matrix::new(f, 3, 1, vec![5, 0, 12]).unwrap();
        assert_eq!(id.solve(&b).unwrap(), b);
    }

    #[test]
    fn superregular_examples() {
        let f = gf13();
        let c = cauchy(&set(&f, &[2, 4, 8]), &set(&f, &[1, 12, 0])).unwrap();
        assert!(c.is_superregular().unwrap());

        let mut with_zero = c.clone();
        with_zero.set(1, 1, 0);
        assert!(!with_zero.is_superregular().unwrap());

        let big = Matrix::zeros(f, 20, 20);
        assert!(matches!(
            big.is_superregular(),
            Err(Error::SizeCapExceeded(_))
        ));
    }

    #[test]
    fn cauchy_superregular_sampled() {
        // disjoint sample sets over GF(13) and GF(16), all sizes up to 5
        for q in [13u64, 16] {
            let f = Field::gf(q).unwrap();
            let mut rng = StdRng::seed_from_u64(7);
            for _ in 0..20 {
                let nx = rng.gen_range(1..=5);
                let ny = rng.gen_range(1..=5);
                let mut pool: Vec<u64> = (0..q).collect();
                for i in (1..pool.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    pool.swap(i, j);
                }
                let x = set(&f, &pool[..nx]);
                let y = set(&f, &pool[nx..nx + ny]);
                assert!(cauchy(&x, &y).unwrap().is_superregular().unwrap());
            }
        }
    }

    #[test]
    fn all_one_column_preserves_superregularity() {
        // Cauchy matrices stay superregular with an all-one column appended
        for q in [13u64, 16] {
            let f = Field::gf(q).unwrap();
            let mut rng = StdRng::seed_from_u64(11);
            for _ in 0..15 {
                let nx = rng.gen_range(1..=4);
                let ny = rng.gen_range(1..=4);
                let mut pool: Vec<u64> = (0..q).collect();
                for i in (1..pool.len()).rev() {
                    let j = rng.gen_range(0..=i);
                    pool.swap(i, j);
                }
                let x = set(&f, &pool[..nx]);
                let y = set(&f, &pool[nx..nx + ny]);
                let c = cauchy(&x, &y).unwrap();
                let ones = Matrix::new(f.clone(), nx, 1, vec![1; nx]).unwrap();
                let ext = c.hconcat(&ones).unwrap();
                assert!(ext.is_superregular().unwrap(), "failed over GF({q})");
            }
        }
    }

    #[test]
    fn scalar_multiple_examples() {
        let f = gf13();
        let m = cauchy(&set(&f, &[2, 4, 8]), &set(&f, &[1, 12])).unwrap();
        let u = m.column(0);
        assert_eq!(
            scalar_multiple_of(&u, &u).unwrap().unwrap().value(),
            1
        );
        let scaled: Vec<FieldElement> = u.iter().map(|e| e * &f.element(12).unwrap()).collect();
        assert_eq!(
            scalar_multiple_of(&scaled, &u).unwrap().unwrap().value(),
            12
        );
        assert!(scalar_multiple_of(&m.column(0), &m.column(1))
            .unwrap()
            .is_none());
        let zeros = vec![f.zero(); 3];
        assert!(scalar_multiple_of(&u, &zeros).is_err());
    }

    #[test]
    fn scale_columns_and_concat() {
        let f = gf13();
        let m = vandermonde(&set(&f, &[1, 2, 3]), 2).unwrap();
        let scaled = m.scale_columns(&[1, 2, 3]).unwrap();
        assert_eq!(scaled.row(0), &[1, 2, 3]);
        assert_eq!(scaled.row(1), &[1, 4, 9]);
        let cat = m.hconcat(&scaled).unwrap();
        assert_eq!(cat.cols(), 6);
        assert_eq!(cat.row(0), &[1, 1, 1, 1, 2, 3]);
    }

    #[test]
    fn ordered_set_rejects_duplicates() {
        let f = gf13();
        assert!(matches!(
            OrderedSet::from_values(f, vec![1, 2, 1]),
            Err(Error::DuplicateElement(_))
        ));
    }

    proptest! {
        #[test]
        fn inverse_roundtrip_random(seed in 0u64..500) {
            let f = Field::gf(13).unwrap();
            let mut rng = StdRng::seed_from_u64(seed);
            let n = rng.gen_range(1..=5usize);
            let data: Vec<u64> = (0..n * n).map(|_| rng.gen_range(0..13)).collect();
            let m = Matrix::new(f.clone(), n, n, data).unwrap();
            if m.rank() == n {
                let inv = m.inverse().unwrap();
                prop_assert_eq!(m.matmul(&inv).unwrap(), Matrix::identity(f.clone(), n));
                prop_assert_eq!(inv.matmul(&m).unwrap(), Matrix::identity(f, n));
            } else {
                prop_assert!(m.inverse().is_err());
            }
        }

        #[test]
        fn scalar_multiple_detects_all_scalars(theta in 1u64..13, seed in 0u64..200) {
            let f = Field::gf(13).unwrap();
            let mut rng = StdRng::seed_from_u64(seed);
            let n = rng.gen_range(1..=6usize);
            let mut vals: Vec<u64> = (0..n).map(|_| rng.gen_range(0..13)).collect();
            if vals.iter().all(|&v| v == 0) {
                vals[0] = 1;
            }
            let v: Vec<FieldElement> = vals.iter().map(|&x| f.element(x).unwrap()).collect();
            let th = f.element(theta).unwrap();
            let u: Vec<FieldElement> = v.iter().map(|e| e * &th).collect();
            prop_assert_eq!(scalar_multiple_of(&u, &v).unwrap().unwrap().value(), theta);
        }
    }
}
