//! Dense matrices over an exact [`Field`], with the Gaussian-elimination
//! toolkit (rank, kernel, image, solve, inverse) the rest of the crate uses.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::field::{Field, Scalar};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    field: Field,
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} over {}", self.rows, self.cols, self.field)?;
        for r in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|c| self[(r, c)].to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// Serialized as `{"rows": r, "cols": c, "entries": [...]}` with entries
/// row-major as strings.
impl Serialize for Matrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Matrix", 3)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("cols", &self.cols)?;
        let entries: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        st.serialize_field("entries", &entries)?;
        st.end()
    }
}

impl Matrix {
    /// Inverse of the [`Serialize`] impl; the field is supplied by context.
    pub fn from_json(field: Field, v: &serde_json::Value) -> Result<Matrix> {
        let bad = || Error::Parse("malformed matrix".into());
        let rows = v.get("rows").and_then(|x| x.as_u64()).ok_or_else(bad)? as usize;
        let cols = v.get("cols").and_then(|x| x.as_u64()).ok_or_else(bad)? as usize;
        let entries = v.get("entries").and_then(|x| x.as_array()).ok_or_else(bad)?;
        if entries.len() != rows * cols {
            return Err(bad());
        }
        let data = entries
            .iter()
            .map(|e| e.as_str().ok_or_else(bad).and_then(|s| field.parse(s)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::from_vec(field, rows, cols, data))
    }
}

/// Result of row reduction: reduced row echelon form plus pivot columns.
pub struct Echelon {
    pub rref: Matrix,
    pub pivots: Vec<usize>,
}

impl Matrix {
    pub fn zeros(field: Field, rows: usize, cols: usize) -> Matrix {
        Matrix { field, rows, cols, data: vec![field.zero(); rows * cols] }
    }

    pub fn identity(field: Field, n: usize) -> Matrix {
        let mut m = Matrix::zeros(field, n, n);
        for i in 0..n {
            m[(i, i)] = field.one();
        }
        m
    }

    pub fn from_vec(field: Field, rows: usize, cols: usize, data: Vec<Scalar>) -> Matrix {
        assert_eq!(rows * cols, data.len());
        Matrix { field, rows, cols, data }
    }

    pub fn from_i64(field: Field, rows: usize, cols: usize, data: &[i64]) -> Matrix {
        assert_eq!(rows * cols, data.len());
        Matrix { field, rows, cols, data: data.iter().map(|&v| field.from_i64(v)).collect() }
    }

    /// Column vector.
    pub fn column_vector(field: Field, entries: Vec<Scalar>) -> Matrix {
        let n = entries.len();
        Matrix::from_vec(field, n, 1, entries)
    }

    pub fn unit_vector(field: Field, n: usize, i: usize) -> Matrix {
        let mut v = Matrix::zeros(field, n, 1);
        v[(i, 0)] = field.one();
        v
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

    pub fn data(&self) -> &[Scalar] {
        &self.data
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Matrix::identity(self.field, self.rows)
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.field, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t[(c, r)] = self[(r, c)].clone();
            }
        }
        t
    }

    pub fn scale(&self, s: &Scalar) -> Matrix {
        Matrix { data: self.data.iter().map(|x| x * s).collect(), ..self.clone() }
    }

    pub fn column(&self, c: usize) -> Matrix {
        self.select_columns(&[c])
    }

    pub fn column_entries(&self, c: usize) -> Vec<Scalar> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, self.rows, cols.len());
        for (j, &c) in cols.iter().enumerate() {
            for r in 0..self.rows {
                m[(r, j)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn select_rows(&self, rows: &[usize]) -> Matrix {
        let mut m = Matrix::zeros(self.field, rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            for c in 0..self.cols {
                m[(i, c)] = self[(r, c)].clone();
            }
        }
        m
    }

    /// Rows `r0..r1`, columns `c0..c1`.
    pub fn block(&self, r0: usize, r1: usize, c0: usize, c1: usize) -> Matrix {
        let mut m = Matrix::zeros(self.field, r1 - r0, c1 - c0);
        for r in r0..r1 {
            for c in c0..c1 {
                m[(r - r0, c - c0)] = self[(r, c)].clone();
            }
        }
        m
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, b: &Matrix) {
        for r in 0..b.rows {
            for c in 0..b.cols {
                self[(r0 + r, c0 + c)] = b[(r, c)].clone();
            }
        }
    }

    pub fn hstack(field: Field, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut c0 = 0;
        for p in parts {
            assert_eq!(p.rows, rows);
            m.set_block(0, c0, p);
            c0 += p.cols;
        }
        m
    }

    pub fn vstack(field: Field, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let mut r0 = 0;
        for p in parts {
            assert_eq!(p.cols, cols);
            m.set_block(r0, 0, p);
            r0 += p.rows;
        }
        m
    }

    pub fn block_diag(field: Field, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut m = Matrix::zeros(field, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for p in parts {
            m.set_block(r0, c0, p);
            r0 += p.rows;
            c0 += p.cols;
        }
        m
    }

    pub fn pow(&self, e: usize) -> Matrix {
        assert!(self.is_square());
        let mut acc = Matrix::identity(self.field, self.rows);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn is_nilpotent(&self) -> bool {
        self.pow(self.rows.max(1)).is_zero()
    }

    pub fn echelon(&self) -> Echelon {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(pr) = (row..m.rows).find(|&r| !m[(r, col)].is_zero()) else {
                continue;
            };
            m.swap_rows(pr, row);
            let inv = m[(row, col)].inv().expect("nonzero pivot");
            for c in col..m.cols {
                let v = &m[(row, c)] * &inv;
                m[(row, c)] = v;
            }
            for r in 0..m.rows {
                if r == row || m[(r, col)].is_zero() {
                    continue;
                }
                let factor = m[(r, col)].clone();
                for c in col..m.cols {
                    if m[(row, c)].is_zero() {
                        continue;
                    }
                    let v = &m[(r, c)] - &(&factor * &m[(row, c)]);
                    m[(r, c)] = v;
                }
            }
            pivots.push(col);
            row += 1;
        }
        Echelon { rref: m, pivots }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Basis of `{x : A x = 0}` as the columns of the result.
    pub fn nullspace(&self) -> Matrix {
        let Echelon { rref, pivots } = self.echelon();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Matrix::zeros(self.field, self.cols, free.len());
        for (j, &f) in free.iter().enumerate() {
            basis[(f, j)] = self.field.one();
            for (i, &p) in pivots.iter().enumerate() {
                basis[(p, j)] = -&rref[(i, f)];
            }
        }
        basis
    }

    /// A basis of the column space, chosen among the original columns.
    pub fn column_basis(&self) -> Matrix {
        let piv = self.echelon().pivots;
        self.select_columns(&piv)
    }

    /// Some `X` with `self * X = rhs`, if one exists.
    pub fn solve(&self, rhs: &Matrix) -> Option<Matrix> {
        assert_eq!(self.rows, rhs.rows);
        let aug = Matrix::hstack(self.field, self.rows, &[self, rhs]);
        let Echelon { rref, pivots } = aug.echelon();
        if pivots.iter().any(|&p| p >= self.cols) {
            return None;
        }
        let mut x = Matrix::zeros(self.field, self.cols, rhs.cols);
        for (i, &p) in pivots.iter().enumerate() {
            for c in 0..rhs.cols {
                x[(p, c)] = rref[(i, self.cols + c)].clone();
            }
        }
        Some(x)
    }

    pub fn inverse(&self) -> Option<Matrix> {
        if !self.is_square() {
            return None;
        }
        let inv = self.solve(&Matrix::identity(self.field, self.rows))?;
        (self.rank() == self.rows).then_some(inv)
    }

    pub fn is_invertible(&self) -> bool {
        self.is_square() && self.rank() == self.rows
    }

    /// Columns of the identity completing the (independent) columns of
    /// `self` to a basis of the ambient space.
    pub fn complement_columns(&self) -> Matrix {
        let n = self.rows;
        let aug = Matrix::hstack(self.field, n, &[self, &Matrix::identity(self.field, n)]);
        let extra: Vec<usize> =
            aug.echelon().pivots.into_iter().filter(|&p| p >= self.cols).map(|p| p - self.cols).collect();
        Matrix::identity(self.field, n).select_columns(&extra)
    }

    /// Basis of the intersection of two column spaces (given by bases).
    pub fn intersect_columns(a: &Matrix, b: &Matrix) -> Matrix {
        let field = a.field;
        let n = a.rows;
        let aug = Matrix::hstack(field, n, &[a, &b.scale(&field.from_i64(-1))]);
        let ker = aug.nullspace();
        let coeffs = ker.block(0, a.cols, 0, ker.cols);
        (a * &coeffs).column_basis()
    }

    /// Characteristic polynomial `det(t·I − A)`, coefficients from the
    /// constant term up (monic). Goes through the Hessenberg form, so it
    /// works in any characteristic.
    pub fn charpoly(&self) -> Vec<Scalar> {
        assert!(self.is_square());
        let n = self.rows;
        let f = self.field;
        let mut h = self.clone();
        for c in 0..n.saturating_sub(2) {
            let Some(r) = (c + 1..n).find(|&r| !h[(r, c)].is_zero()) else { continue };
            if r != c + 1 {
                h.swap_rows(r, c + 1);
                for i in 0..n {
                    h.data.swap(i * n + r, i * n + c + 1);
                }
            }
            let inv = h[(c + 1, c)].inv().unwrap();
            for i in c + 2..n {
                if h[(i, c)].is_zero() {
                    continue;
                }
                let m = &h[(i, c)] * &inv;
                for k in 0..n {
                    let v = &h[(i, k)] - &(&m * &h[(c + 1, k)]);
                    h[(i, k)] = v;
                }
                for k in 0..n {
                    let v = &h[(k, c + 1)] + &(&m * &h[(k, i)]);
                    h[(k, c + 1)] = v;
                }
            }
        }
        // p[m] is the charpoly of the leading m×m block
        let mut p: Vec<Vec<Scalar>> = vec![vec![f.one()]];
        for m in 1..=n {
            let mm = m - 1;
            let prev = &p[m - 1];
            let mut next = vec![f.zero(); m + 1];
            for (k, c) in prev.iter().enumerate() {
                next[k + 1] = &next[k + 1] + c;
                next[k] = &next[k] - &(&h[(mm, mm)] * c);
            }
            let mut prod = f.one();
            for i in (0..mm).rev() {
                prod = &prod * &h[(i + 1, i)];
                if prod.is_zero() {
                    break;
                }
                let coef = &h[(i, mm)] * &prod;
                for (k, c) in p[i].iter().enumerate() {
                    next[k] = &next[k] - &(&coef * c);
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// A left inverse of a matrix with independent columns: `L · self = I`.
    pub fn left_inverse(&self) -> Option<Matrix> {
        let rows = self.transpose().echelon().pivots;
        if rows.len() != self.cols {
            return None;
        }
        let square = self.select_rows(&rows).inverse()?;
        let mut out = Matrix::zeros(self.field, self.cols, self.rows);
        for (j, &r) in rows.iter().enumerate() {
            for i in 0..self.cols {
                out[(i, r)] = square[(i, j)].clone();
            }
        }
        Some(out)
    }

    /// Does the column space of `self` contain every column of `v`?
    pub fn spans(&self, v: &Matrix) -> bool {
        self.solve(v).is_some()
    }

    /// Flatten to a column vector (row-major).
    pub fn vectorize(&self) -> Matrix {
        Matrix::from_vec(self.field, self.rows * self.cols, 1, self.data.clone())
    }

    pub fn reshape(&self, rows: usize, cols: usize) -> Matrix {
        Matrix::from_vec(self.field, rows, cols, self.data.clone())
    }

    pub fn rows_as_strings(&self) -> Vec<Vec<String>> {
        (0..self.rows).map(|r| (0..self.cols).map(|c| self[(r, c)].to_string()).collect()).collect()
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (r, c): (usize, usize)) -> &Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut Scalar {
        debug_assert!(r < self.rows && c < self.cols);
        &mut self.data[r * self.cols + c]
    }
}

impl<'a> Mul<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = Matrix::zeros(self.field, self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(r, k)];
                if a.is_zero() {
                    continue;
                }
                for c in 0..rhs.cols {
                    let b = &rhs[(k, c)];
                    if b.is_zero() {
                        continue;
                    }
                    let v = &out[(r, c)] + &(a * b);
                    out[(r, c)] = v;
                }
            }
        }
        out
    }
}

impl<'a> Add<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Matrix { data, ..self.clone() }
    }
}

impl<'a> Sub<&'a Matrix> for &'a Matrix {
    type Output = Matrix;
    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect();
        Matrix { data, ..self.clone() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn f7() -> Field {
        Field::prime(7).unwrap()
    }

    #[test]
    fn kernel_and_rank() {
        let m = Matrix::from_i64(f7(), 2, 3, &[1, 2, 3, 2, 4, 6]);
        assert_eq!(m.rank(), 1);
        let k = m.nullspace();
        assert_eq!(k.cols(), 2);
        assert!((&m * &k).is_zero());
    }

    #[test]
    fn inverse_over_rationals() {
        let m = Matrix::from_i64(Field::Rational, 2, 2, &[2, 1, 1, 1]);
        let inv = m.inverse().unwrap();
        assert!((&m * &inv).is_identity());
        assert!(Matrix::from_i64(Field::Rational, 2, 2, &[1, 2, 2, 4]).inverse().is_none());
    }

    #[test]
    fn complement_completes_basis() {
        let b = Matrix::from_i64(f7(), 3, 1, &[1, 1, 0]);
        let c = b.complement_columns();
        assert_eq!(c.cols(), 2);
        assert!(Matrix::hstack(f7(), 3, &[&b, &c]).is_invertible());
    }

    proptest! {
        #[test]
        fn rank_nullity(entries in proptest::collection::vec(0i64..7, 12)) {
            let m = Matrix::from_i64(f7(), 3, 4, &entries);
            prop_assert_eq!(m.rank() + m.nullspace().cols(), 4);
            if let Some(x) = m.solve(&m.column(0)) {
                prop_assert_eq!(&m * &x, m.column(0));
            }
        }

        #[test]
        fn charpoly_roots_are_eigenvalues(entries in proptest::collection::vec(0i64..7, 16)) {
            let f = f7();
            let m = Matrix::from_i64(f, 4, 4, &entries);
            let cp = m.charpoly();
            prop_assert_eq!(cp.len(), 5);
            for l in 0..7 {
                let lam = f.from_i64(l);
                let mut val = f.zero();
                for c in cp.iter().rev() {
                    val = &(&val * &lam) + c;
                }
                let shifted = &Matrix::identity(f, 4).scale(&lam) - &m;
                prop_assert_eq!(val.is_zero(), !shifted.is_invertible());
            }
            prop_assert_eq!(m.left_inverse().is_some(), m.is_invertible());
        }
    }

    #[test]
    fn charpoly_of_companion() {
        // t^3 - 2t + 5 over GF(7)
        let f = f7();
        let m = Matrix::from_i64(f, 3, 3, &[0, 0, -5, 1, 0, 2, 0, 1, 0]);
        assert_eq!(m.charpoly(), vec![f.from_i64(5), f.from_i64(-2), f.zero(), f.one()]);
    }
}
