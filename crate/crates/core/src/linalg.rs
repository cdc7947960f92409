//! Dense exact linear algebra over any of the crate's scalar types.
//!
//! Elimination divides only when a nonzero entry actually has to be cleared,
//! so sparse systems over very large cyclotomic fields never touch a field
//! inverse.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::FieldElem;

/// Exact commutative scalars that know how to produce their own zero and one.
pub trait Scalar: Clone + PartialEq + fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, o: &Self) -> Self;
    fn minus(&self, o: &Self) -> Self;
    fn times(&self, o: &Self) -> Self;
    fn negated(&self) -> Self;
    fn inverse(&self) -> Result<Self>;
    fn from_i64_like(&self, k: i64) -> Self;
}

impl Scalar for FieldElem {
    fn zero_like(&self) -> Self {
        self.field().zero()
    }
    fn one_like(&self) -> Self {
        self.field().one()
    }
    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
    fn plus(&self, o: &Self) -> Self {
        self + o
    }
    fn minus(&self, o: &Self) -> Self {
        self - o
    }
    fn times(&self, o: &Self) -> Self {
        self * o
    }
    fn negated(&self) -> Self {
        -self
    }
    fn inverse(&self) -> Result<Self> {
        self.inv()
    }
    fn from_i64_like(&self, k: i64) -> Self {
        self.field().from_int(k)
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

pub type FMatrix = Matrix<FieldElem>;

impl<T: Serialize + Clone> Serialize for Matrix<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de, T: Deserialize<'de> + Scalar> Deserialize<'de> for Matrix<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows = Vec::<Vec<T>>::deserialize(d)?;
        Matrix::from_rows(rows).map_err(serde::de::Error::custom)
    }
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{:?}", self.data[i * self.cols + j])?;
            }
        }
        write!(f, "]")
    }
}

impl<T> Matrix<T> {
    pub fn from_vec(rows: usize, cols: usize, data: Vec<T>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data has the wrong length");
        Matrix { rows, cols, data }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
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

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn map<U>(&self, f: impl FnMut(&T) -> U) -> Matrix<U> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn try_map<U>(&self, f: impl FnMut(&T) -> Result<U>) -> Result<Matrix<U>> {
        Ok(Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect::<Result<_>>()? })
    }

    pub fn to_rows(&self) -> Vec<Vec<T>>
    where
        T: Clone,
    {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }
}

impl<T: Scalar> Matrix<T> {
    pub fn filled(rows: usize, cols: usize, v: &T) -> Self {
        Matrix { rows, cols, data: vec![v.clone(); rows * cols] }
    }

    pub fn zeros_like(rows: usize, cols: usize, sample: &T) -> Self {
        Self::filled(rows, cols, &sample.zero_like())
    }

    pub fn identity_like(n: usize, sample: &T) -> Self {
        let z = sample.zero_like();
        let o = sample.one_like();
        Self::from_fn(n, n, |i, j| if i == j { o.clone() } else { z.clone() })
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map(|x| x.len()).unwrap_or(0);
        if rows.iter().any(|x| x.len() != c) {
            return Err(Error::invalid("ragged matrix rows"));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    fn sample(&self) -> &T {
        self.data.first().expect("empty matrix has no scalar sample")
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero_elem())
    }

    pub fn is_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| {
                (0..self.cols).all(|j| {
                    let x = self.get(i, j);
                    if i == j {
                        *x == x.one_like()
                    } else {
                        x.is_zero_elem()
                    }
                })
            })
    }

    fn check_same_shape(&self, o: &Self) -> Result<()> {
        if self.rows != o.rows || self.cols != o.cols {
            return Err(Error::invalid(format!(
                "shape mismatch {}x{} vs {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.plus(b)).collect(),
        })
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same_shape(o)?;
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&o.data).map(|(a, b)| a.minus(b)).collect(),
        })
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.negated())
    }

    pub fn scale(&self, s: &T) -> Self {
        self.map(|x| x.times(s))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, o: &Self) -> Result<Self> {
        if self.cols != o.rows {
            return Err(Error::invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, o.rows, o.cols
            )));
        }
        let zero = self.sample().zero_like();
        let mut out = Self::filled(self.rows, o.cols, &zero);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero_elem() {
                    continue;
                }
                for j in 0..o.cols {
                    let b = o.get(k, j);
                    if b.is_zero_elem() {
                        continue;
                    }
                    let idx = i * out.cols + j;
                    out.data[idx] = out.data[idx].plus(&a.times(b));
                }
            }
        }
        Ok(out)
    }

    /// XY - YX.
    pub fn commutator(&self, o: &Self) -> Result<Self> {
        self.mul(o)?.sub(&o.mul(self)?)
    }

    pub fn trace(&self) -> T {
        let mut acc = self.sample().zero_like();
        for i in 0..self.rows.min(self.cols) {
            acc = acc.plus(self.get(i, i));
        }
        acc
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        let mut base = self.clone();
        let mut acc = Self::identity_like(self.rows, self.sample());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Column vector from a slice.
    pub fn column(v: &[T]) -> Self {
        Matrix { rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    /// Reduced row echelon form; returns the pivot columns.
    fn rref_in_place(rows: &mut [Vec<T>], ncols: usize) -> Result<Vec<usize>> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..ncols {
            if r == rows.len() {
                break;
            }
            let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero_elem()) else { continue };
            rows.swap(r, p);
            if rows[r][c] != rows[r][c].one_like() {
                let inv = rows[r][c].inverse()?;
                for x in rows[r].iter_mut() {
                    if !x.is_zero_elem() {
                        *x = x.times(&inv);
                    }
                }
            }
            let pivot_row = rows[r].clone();
            for (i, row) in rows.iter_mut().enumerate() {
                if i == r || row[c].is_zero_elem() {
                    continue;
                }
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero_elem() {
                        *x = x.minus(&f.times(y));
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        Ok(pivots)
    }

    /// Rank by forward elimination (no normalisation of pivots).
    pub fn rank(&self) -> Result<usize> {
        let mut rows = self.to_rows();
        let mut rank = 0;
        for c in 0..self.cols {
            let Some(p) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero_elem()) else { continue };
            rows.swap(rank, p);
            let needs_clearing = rows[rank + 1..].iter().any(|row| !row[c].is_zero_elem());
            if needs_clearing {
                let inv = rows[rank][c].inverse()?;
                let pivot_row = rows[rank].clone();
                for row in rows[rank + 1..].iter_mut() {
                    if row[c].is_zero_elem() {
                        continue;
                    }
                    let f = row[c].times(&inv);
                    for (x, y) in row.iter_mut().zip(&pivot_row) {
                        if !y.is_zero_elem() {
                            *x = x.minus(&f.times(y));
                        }
                    }
                }
            }
            rank += 1;
        }
        Ok(rank)
    }

    /// Basis of {v : self * v = 0}.
    pub fn nullspace(&self) -> Result<Vec<Vec<T>>> {
        let sample = self.sample().clone();
        let mut rows = self.to_rows();
        let pivots = Self::rref_in_place(&mut rows, self.cols)?;
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![sample.zero_like(); self.cols];
            v[free] = sample.one_like();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = rows[r][free].negated();
            }
            basis.push(v);
        }
        Ok(basis)
    }

    /// The unique X with self * X = rhs. Overdetermined systems are accepted
    /// when consistent.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        if rhs.rows != self.rows {
            return Err(Error::invalid("right-hand side has the wrong number of rows"));
        }
        let n = self.cols;
        let mut rows: Vec<Vec<T>> =
            (0..self.rows).map(|i| self.row(i).iter().chain(rhs.row(i)).cloned().collect()).collect();
        let pivots = Self::rref_in_place(&mut rows, n)?;
        if pivots.len() < n {
            return Err(Error::Singular(format!("rank {} < {} unknowns", pivots.len(), n)));
        }
        for row in rows.iter().skip(n) {
            if row[n..].iter().any(|x| !x.is_zero_elem()) {
                return Err(Error::Singular("inconsistent system".into()));
            }
        }
        Ok(Self::from_fn(n, rhs.cols, |i, j| rows[i][n + j].clone()))
    }

    pub fn inverse(&self) -> Result<Self> {
        if !self.is_square() {
            return Err(Error::invalid("inverse of a non-square matrix"));
        }
        self.solve(&Self::identity_like(self.rows, self.sample()))
    }

    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::invalid("determinant of a non-square matrix"));
        }
        let sample = self.sample().clone();
        let mut rows = self.to_rows();
        let mut det = sample.one_like();
        for c in 0..self.cols {
            let Some(p) = (c..rows.len()).find(|&i| !rows[i][c].is_zero_elem()) else {
                return Ok(sample.zero_like());
            };
            if p != c {
                rows.swap(c, p);
                det = det.negated();
            }
            det = det.times(&rows[c][c]);
            if rows[c + 1..].iter().all(|row| row[c].is_zero_elem()) {
                continue;
            }
            let inv = rows[c][c].inverse()?;
            let pivot_row = rows[c].clone();
            for row in rows[c + 1..].iter_mut() {
                if row[c].is_zero_elem() {
                    continue;
                }
                let f = row[c].times(&inv);
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero_elem() {
                        *x = x.minus(&f.times(y));
                    }
                }
            }
        }
        Ok(det)
    }

    /// Coefficients c_0..c_n of det(lambda I - self), ascending, by
    /// Faddeev-LeVerrier (characteristic zero).
    pub fn charpoly(&self) -> Result<Vec<T>>
    where
        T: Scalar,
    {
        if !self.is_square() {
            return Err(Error::invalid("characteristic polynomial of a non-square matrix"));
        }
        let n = self.rows;
        let s = self.sample().clone();
        let mut coeffs = vec![s.zero_like(); n + 1];
        coeffs[n] = s.one_like();
        let ident = Self::identity_like(n, &s);
        let mut m = Self::filled(n, n, &s.zero_like());
        for k in 1..=n {
            m = self.mul(&m)?.add(&ident.scale(&coeffs[n - k + 1]))?;
            let tr = self.mul(&m)?.trace();
            let kinv = s.from_i64_like(k as i64).inverse()?;
            coeffs[n - k] = tr.times(&kinv).negated();
        }
        Ok(coeffs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::CycloField;

    fn qm(f: &std::sync::Arc<CycloField>, rows: &[&[i64]]) -> FMatrix {
        FMatrix::from_rows(rows.iter().map(|r| r.iter().map(|&x| f.from_int(x)).collect()).collect()).unwrap()
    }

    #[test]
    fn rank_nullspace_solve() {
        let f = CycloField::new(1).unwrap();
        let a = qm(&f, &[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1]]);
        assert_eq!(a.rank().unwrap(), 2);
        let ns = a.nullspace().unwrap();
        assert_eq!(ns.len(), 1);
        let v = FMatrix::column(&ns[0]);
        assert!(a.mul(&v).unwrap().is_zero());
        let b = qm(&f, &[&[2, 1], &[1, 1]]);
        let x = b.solve(&qm(&f, &[&[3], &[2]])).unwrap();
        assert_eq!(x, qm(&f, &[&[1], &[1]]));
        assert_eq!(b.det().unwrap(), f.from_int(1));
        assert!(a.inverse().is_err());
    }

    #[test]
    fn charpoly_of_cycle() {
        let f = CycloField::new(1).unwrap();
        let c = qm(&f, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let p = c.charpoly().unwrap();
        assert_eq!(p, vec![f.from_int(-1), f.zero(), f.zero(), f.one()]);
    }
}
