//! Dense square-or-rectangular matrices of [`Scalar`]s and permutations.

use crate::scalar::{Field, Scalar, ScalarError};
use serde_json::Value;
use std::cmp::Ordering;
use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![Scalar::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Scalar::one();
        }
        m
    }

    pub fn diagonal(d: &[Scalar]) -> Self {
        let n = d.len();
        let mut m = Matrix::zeros(n, n);
        for (i, x) in d.iter().enumerate() {
            m.data[i * n + i] = x.clone();
        }
        m
    }

    /// Builds from rows; panics on ragged input.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_ints(rows: &[&[i64]]) -> Self {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Side length; panics unless square.
    pub fn n(&self) -> usize {
        assert_eq!(self.rows, self.cols, "matrix is not square");
        self.rows
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn row(&self, i: usize) -> Vec<Scalar> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn column(&self, j: usize) -> Vec<Scalar> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<Scalar>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<Scalar>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn from_columns(cols: &[Vec<Scalar>]) -> Self {
        let c = cols.len();
        let r = cols.first().map_or(0, Vec::len);
        Matrix::from_fn(r, c, |i, j| cols[j][i].clone())
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    /// Smallest field containing every entry.
    pub fn field(&self) -> Result<Field, ScalarError> {
        self.data.iter().try_fold(Field::Rational, |acc, x| acc.join(&x.field()))
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn neg(&self) -> Matrix {
        self.map(|x| -x)
    }

    /// Entrywise `[x]₊`.
    pub fn pos(&self) -> Matrix {
        self.map(Scalar::pos)
    }

    pub fn scale(&self, k: &Scalar) -> Matrix {
        self.map(|x| x * k)
    }

    pub fn try_add(&self, other: &Matrix) -> Result<Matrix, ScalarError> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a.try_add(b)).collect::<Result<_, _>>()?;
        Ok(Matrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        self.try_add(other).unwrap_or_else(|e| panic!("{e}"))
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        self.add(&other.neg())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix, ScalarError> {
        assert_eq!(self.cols, other.rows, "shape mismatch in product");
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].try_add(&a.try_mul(b)?)?;
                }
            }
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).unwrap_or_else(|e| panic!("{e}"))
    }

    /// Determinant by Gaussian elimination in the entries' field.
    pub fn det(&self) -> Scalar {
        let n = self.n();
        let mut a = self.to_rows();
        let mut det = Scalar::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !a[r][c].is_zero()) else {
                return Scalar::zero();
            };
            if p != c {
                a.swap(p, c);
                det = -det;
            }
            let pivot = a[c][c].clone();
            det = &det * &pivot;
            for r in c + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let f = &a[r][c] / &pivot;
                #[allow(clippy::needless_range_loop)] // rows r and c are both borrowed
                for j in c..n {
                    let v = &f * &a[c][j];
                    a[r][j] -= &v;
                }
            }
        }
        det
    }

    /// Inverse in the entries' field, if invertible.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.n();
        let mut a = self.to_rows();
        let mut inv = Matrix::identity(n).to_rows();
        for c in 0..n {
            let p = (c..n).find(|&r| !a[r][c].is_zero())?;
            a.swap(p, c);
            inv.swap(p, c);
            let s = a[c][c].try_recip().ok()?;
            for j in 0..n {
                a[c][j] = &a[c][j] * &s;
                inv[c][j] = &inv[c][j] * &s;
            }
            for r in 0..n {
                if r == c || a[r][c].is_zero() {
                    continue;
                }
                let f = a[r][c].clone();
                for j in 0..n {
                    let v = &f * &a[c][j];
                    a[r][j] -= &v;
                    let w = &f * &inv[c][j];
                    inv[r][j] -= &w;
                }
            }
        }
        Some(Matrix::from_rows(inv))
    }

    /// Principal submatrix on the given 0-based indices, in the order given.
    pub fn submatrix(&self, idx: &[usize]) -> Matrix {
        Matrix::from_fn(idx.len(), idx.len(), |i, j| self.get(idx[i], idx[j]).clone())
    }

    /// First differing entry, as `(row, col)`.
    pub fn first_difference(&self, other: &Matrix) -> Option<(usize, usize)> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Some((0, 0));
        }
        (0..self.data.len()).find(|&k| self.data[k] != other.data[k]).map(|k| (k / self.cols, k % self.cols))
    }

    /// Entrywise lexicographic comparison by value.
    pub fn cmp_entries(&self, other: &Matrix) -> Ordering {
        for (a, b) in self.data.iter().zip(&other.data) {
            match a.cmp_value(b) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        self.data.len().cmp(&other.data.len())
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array(self.row(i).iter().map(Scalar::to_json).collect()))
                .collect(),
        )
    }

    pub fn from_json(v: &Value) -> Result<Matrix, ScalarError> {
        let rows = v.as_array().ok_or_else(|| ScalarError::Parse("matrix must be an array of rows".into()))?;
        let mut out = Vec::with_capacity(rows.len());
        for r in rows {
            let r = r.as_array().ok_or_else(|| ScalarError::Parse("matrix row must be an array".into()))?;
            out.push(r.iter().map(Scalar::from_json).collect::<Result<Vec<_>, _>>()?);
        }
        if out.iter().any(|r| r.len() != out[0].len()) {
            return Err(ScalarError::Parse("ragged matrix rows".into()));
        }
        Ok(Matrix::from_rows(out))
    }

    /// Rows rendered with right-aligned columns.
    pub fn render(&self) -> String {
        let cells: Vec<String> = self.data.iter().map(|x| x.to_string()).collect();
        let width = cells.iter().map(String::len).max().unwrap_or(1);
        let mut s = String::new();
        for i in 0..self.rows {
            s.push('[');
            for j in 0..self.cols {
                if j > 0 {
                    s.push(' ');
                }
                s.push_str(&format!("{:>width$}", cells[i * self.cols + j]));
            }
            s.push_str("]\n");
        }
        s
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.render().trim_end())
    }
}

/// A bijection of `{0..n-1}`, stored as the list of images `σ(i)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Permutation(Vec<usize>);

impl Permutation {
    pub fn identity(n: usize) -> Self {
        Permutation((0..n).collect())
    }

    /// From 0-based images; panics if not a bijection.
    pub fn new(images: Vec<usize>) -> Self {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            assert!(i < images.len() && !seen[i], "not a permutation: {images:?}");
            seen[i] = true;
        }
        Permutation(images)
    }

    /// From 1-based images `[p1, .., pn]`, meaning `i ↦ p_i`.
    pub fn from_one_based(images: &[usize]) -> Self {
        Permutation::new(images.iter().map(|&p| p - 1).collect())
    }

    pub fn one_based(&self) -> Vec<usize> {
        self.0.iter().map(|&p| p + 1).collect()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &p)| i == p)
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.0.len()];
        for (i, &p) in self.0.iter().enumerate() {
            inv[p] = i;
        }
        Permutation(inv)
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Permutation) -> Permutation {
        Permutation(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// `σA = (a_{σ⁻¹(i)σ⁻¹(j)})`.
    pub fn act(&self, a: &Matrix) -> Matrix {
        let inv = self.inverse();
        Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(inv.0[i], inv.0[j]).clone())
    }

    /// `σ̃A = (a_{iσ⁻¹(j)})`: column `j` moves to position `σ(j)`.
    pub fn act_columns(&self, a: &Matrix) -> Matrix {
        let inv = self.inverse();
        Matrix::from_fn(a.rows(), a.cols(), |i, j| a.get(i, inv.0[j]).clone())
    }

    /// `σx = (x_{σ⁻¹(1)}, .., x_{σ⁻¹(n)})`.
    pub fn act_vector<T: Clone>(&self, x: &[T]) -> Vec<T> {
        let inv = self.inverse();
        (0..x.len()).map(|i| x[inv.0[i]].clone()).collect()
    }

    /// Every permutation of `{0..n-1}` in lexicographic order.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut cur: Vec<usize> = (0..n).collect();
        loop {
            out.push(Permutation(cur.clone()));
            // Next lexicographic permutation.
            let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
            let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).expect("successor exists");
            cur.swap(i - 1, j);
            cur[i..].reverse();
        }
        out
    }
}

impl fmt::Display for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.one_based().iter().map(usize::to_string).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn actions_match_permutation_matrices() {
        let a = Matrix::from_ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        for s in Permutation::all(3) {
            // P_σ = (δ_{i,σ⁻¹(j)})
            let inv = s.inverse();
            let p = Matrix::from_fn(3, 3, |i, j| Scalar::from_int(i64::from(i == inv.apply(j))));
            assert_eq!(s.act(&a), p.transpose().mul(&a).mul(&p));
            assert_eq!(s.act_columns(&a), a.mul(&p));
        }
    }

    #[test]
    fn actions_compose_left() {
        let a = Matrix::from_ints(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]]);
        for s in Permutation::all(3) {
            for t in Permutation::all(3) {
                assert_eq!(t.act(&s.act(&a)), t.compose(&s).act(&a));
                assert_eq!(t.act_columns(&s.act_columns(&a)), t.compose(&s).act_columns(&a));
            }
        }
        assert_eq!(Permutation::all(4).len(), 24);
    }

    #[test]
    fn det_and_inverse() {
        let a = Matrix::from_ints(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        assert_eq!(a.det(), Scalar::from_int(18));
        assert_eq!(a.mul(&a.inverse().unwrap()), Matrix::identity(3));
        assert!(Matrix::from_ints(&[&[1, 2], &[2, 4]]).inverse().is_none());
    }

    #[test]
    fn json_round_trip() {
        let a = Matrix::from_rows(vec![
            vec![Scalar::zero(), Scalar::sqrt_int(2)],
            vec![Scalar::from_ratio(-1, 3), Scalar::one()],
        ]);
        assert_eq!(Matrix::from_json(&a.to_json()).unwrap(), a);
    }
}
