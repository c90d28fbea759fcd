//! Square matrices and column vectors over a finite field.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Subspace};
use crate::poly::Poly;

/// A column vector of `F^n`. Arithmetic takes the field explicitly.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Vector {
    entries: Vec<Elem>,
}

impl Vector {
    pub fn new(entries: Vec<Elem>) -> Self {
        Vector { entries }
    }

    pub fn zero(n: usize) -> Self {
        Vector {
            entries: vec![0; n],
        }
    }

    /// Standard basis vector, 0-indexed.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut entries = vec![0; n];
        entries[i] = 1;
        Vector { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn leading_index(&self) -> Option<usize> {
        self.entries.iter().position(|&x| x != 0)
    }

    /// Projective representative: scaled so the first nonzero entry is 1.
    pub fn normalized(&self, f: &FieldCtx) -> Result<Vector> {
        let lead = self.leading_index().ok_or(Error::ZeroVector)?;
        let inv = f.inv(self.entries[lead]).expect("leading entry is nonzero");
        Ok(self.scale(f, inv))
    }

    pub fn scale(&self, f: &FieldCtx, c: Elem) -> Vector {
        Vector::new(self.entries.iter().map(|&x| f.mul(x, c)).collect())
    }

    pub fn add(&self, f: &FieldCtx, other: &Vector) -> Vector {
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        )
    }

    pub fn sub(&self, f: &FieldCtx, other: &Vector) -> Vector {
        Vector::new(
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        )
    }

    pub fn dot(&self, f: &FieldCtx, other: &Vector) -> Elem {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(0, |acc, (&a, &b)| f.add(acc, f.mul(a, b)))
    }
}

impl fmt::Display for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// An `n x n` matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Mat {
    n: usize,
    field: FieldCtx,
    entries: Vec<Elem>,
}

impl Mat {
    pub fn from_entries(field: &FieldCtx, n: usize, entries: Vec<Elem>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::shape(format!(
                "{} entries for a {n}x{n} matrix",
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|&&e| !field.is_valid(e)) {
            return Err(Error::arg(format!("{bad} is not an element of {field}")));
        }
        Ok(Mat {
            n,
            field: field.clone(),
            entries,
        })
    }

    pub(crate) fn from_entries_unchecked(field: &FieldCtx, n: usize, entries: Vec<Elem>) -> Self {
        debug_assert_eq!(entries.len(), n * n);
        Mat {
            n,
            field: field.clone(),
            entries,
        }
    }

    /// From signed integer rows, reduced into the prime subfield.
    pub fn from_int_rows(field: &FieldCtx, rows: &[&[i64]]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for r in rows {
            if r.len() != n {
                return Err(Error::shape("rows must form a square matrix"));
            }
            entries.extend(r.iter().map(|&x| field.from_int(x)));
        }
        Ok(Mat::from_entries_unchecked(field, n, entries))
    }

    pub fn zero(field: &FieldCtx, n: usize) -> Self {
        Mat::from_entries_unchecked(field, n, vec![0; n * n])
    }

    pub fn identity(field: &FieldCtx, n: usize) -> Self {
        let mut m = Mat::zero(field, n);
        for i in 0..n {
            m.entries[i * n + i] = 1;
        }
        m
    }

    /// Matrix unit `E_{i,j}`, 0-indexed.
    pub fn unit(field: &FieldCtx, n: usize, i: usize, j: usize) -> Self {
        let mut m = Mat::zero(field, n);
        m.entries[i * n + j] = 1;
        m
    }

    /// The matrix whose columns are the given vectors.
    pub fn from_columns(field: &FieldCtx, cols: &[Vector]) -> Result<Self> {
        let n = cols.len();
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::shape("columns must form a square matrix"));
        }
        let mut m = Mat::zero(field, n);
        for (j, c) in cols.iter().enumerate() {
            for i in 0..n {
                m.entries[i * n + j] = c.entries()[i];
            }
        }
        Ok(m)
    }

    /// The reversal permutation `(1_{i+j=n+1})`.
    pub fn reversal(field: &FieldCtx, n: usize) -> Self {
        let mut m = Mat::zero(field, n);
        for i in 0..n {
            m.entries[i * n + (n - 1 - i)] = 1;
        }
        m
    }

    pub fn random<R: Rng>(field: &FieldCtx, n: usize, rng: &mut R) -> Self {
        let q = field.q();
        Mat::from_entries_unchecked(field, n, (0..n * n).map(|_| rng.gen_range(0..q)).collect())
    }

    pub fn random_invertible<R: Rng>(field: &FieldCtx, n: usize, rng: &mut R) -> Self {
        loop {
            let m = Mat::random(field, n, rng);
            if m.inverse().is_ok() {
                return m;
            }
        }
    }

    /// A random upper-triangular matrix.
    pub fn random_upper<R: Rng>(field: &FieldCtx, n: usize, rng: &mut R) -> Self {
        let mut m = Mat::random(field, n, rng);
        for i in 0..n {
            for j in 0..i {
                m.entries[i * n + j] = 0;
            }
        }
        m
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    /// Row-major entries; this is also the vectorization used by matrix
    /// spaces.
    pub fn entries(&self) -> &[Elem] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Elem> {
        self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.entries[i * self.n + j] = v;
    }

    pub fn column(&self, j: usize) -> Vector {
        Vector::new((0..self.n).map(|i| self.get(i, j)).collect())
    }

    pub fn row(&self, i: usize) -> Vector {
        Vector::new(self.entries[i * self.n..(i + 1) * self.n].to_vec())
    }

    fn check_same(&self, other: &Mat) -> Result<()> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::shape("matrices differ in size or field"));
        }
        Ok(())
    }

    pub fn add(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        let f = &self.field;
        Ok(Mat::from_entries_unchecked(
            f,
            self.n,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.add(a, b))
                .collect(),
        ))
    }

    pub fn sub(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        let f = &self.field;
        Ok(Mat::from_entries_unchecked(
            f,
            self.n,
            self.entries
                .iter()
                .zip(&other.entries)
                .map(|(&a, &b)| f.sub(a, b))
                .collect(),
        ))
    }

    pub fn scale(&self, c: Elem) -> Mat {
        let f = &self.field;
        Mat::from_entries_unchecked(
            f,
            self.n,
            self.entries.iter().map(|&a| f.mul(a, c)).collect(),
        )
    }

    pub fn mul(&self, other: &Mat) -> Result<Mat> {
        self.check_same(other)?;
        let f = &self.field;
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.entries[i * n + k];
                if a == 0 {
                    continue;
                }
                for j in 0..n {
                    let o = &mut out[i * n + j];
                    *o = f.add(*o, f.mul(a, other.entries[k * n + j]));
                }
            }
        }
        Ok(Mat::from_entries_unchecked(f, n, out))
    }

    pub fn apply(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.n {
            return Err(Error::shape("vector length differs from matrix size"));
        }
        let f = &self.field;
        Ok(Vector::new(
            (0..self.n)
                .map(|i| {
                    (0..self.n).fold(0, |acc, j| {
                        f.add(acc, f.mul(self.get(i, j), v.entries()[j]))
                    })
                })
                .collect(),
        ))
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = vec![0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[j * n + i] = self.entries[i * n + j];
            }
        }
        Mat::from_entries_unchecked(&self.field, n, out)
    }

    pub fn trace(&self) -> Elem {
        (0..self.n).fold(0, |acc, i| self.field.add(acc, self.get(i, i)))
    }

    pub fn inverse(&self) -> Result<Mat> {
        linalg::inverse(&self.field, self.n, &self.entries)
            .map(|e| Mat::from_entries_unchecked(&self.field, self.n, e))
            .ok_or(Error::Singular)
    }

    /// `P M P^{-1}`.
    pub fn conjugate_by(&self, p: &Mat) -> Result<Mat> {
        p.mul(self)?.mul(&p.inverse()?)
    }

    pub fn rank(&self) -> usize {
        let rows: Vec<Vec<Elem>> = self.entries.chunks(self.n).map(|r| r.to_vec()).collect();
        linalg::rank(&self.field, &rows, self.n)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|&x| x == 0)
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == 0))
    }

    pub fn column_space(&self) -> Subspace {
        let cols = (0..self.n).map(|j| self.column(j).entries().to_vec());
        Subspace::span(&self.field, self.n, cols).expect("columns have length n")
    }

    pub fn kernel(&self) -> Subspace {
        let rows: Vec<Vec<Elem>> = self.entries.chunks(self.n).map(|r| r.to_vec()).collect();
        let k = linalg::kernel_basis(&self.field, &rows, self.n).expect("square rows");
        Subspace::span(&self.field, self.n, k).expect("kernel vectors have length n")
    }

    /// Characteristic polynomial `det(tI - M)`, monic of degree `n`.
    pub fn char_poly(&self) -> Poly {
        let desc = berkowitz(&self.field, self.n, &self.entries);
        Poly::from_coeffs(desc.into_iter().rev().collect())
    }
}

/// Berkowitz's division-free characteristic polynomial. Returns the
/// coefficients of `det(tI - A)` highest degree first.
///
/// Stepping from the leading `r x r` block `A_r` to the `(r+1) x (r+1)`
/// one multiplies by the lower-triangular Toeplitz matrix whose first column
/// is `(1, -a, -R C, -R A_r C, ..., -R A_r^{r-1} C)`, where `a = A[r][r]`,
/// `R` is row `r` left of the diagonal and `C` is column `r` above it.
pub fn berkowitz(f: &FieldCtx, n: usize, a: &[Elem]) -> Vec<Elem> {
    let mut poly = vec![1];
    let mut col = vec![0; n];
    let mut next = vec![0; n];
    for r in 0..n {
        let mut toeplitz = Vec::with_capacity(r + 2);
        toeplitz.push(1);
        toeplitz.push(f.neg(a[r * n + r]));
        for (i, c) in col.iter_mut().enumerate().take(r) {
            *c = a[i * n + r];
        }
        for _ in 0..r {
            let rc = (0..r).fold(0, |acc, j| f.add(acc, f.mul(a[r * n + j], col[j])));
            toeplitz.push(f.neg(rc));
            for i in 0..r {
                next[i] = (0..r).fold(0, |acc, j| f.add(acc, f.mul(a[i * n + j], col[j])));
            }
            col[..r].copy_from_slice(&next[..r]);
        }
        let mut out = vec![0; r + 2];
        for (i, o) in out.iter_mut().enumerate() {
            for (j, &pj) in poly.iter().enumerate().take(i + 1) {
                *o = f.add(*o, f.mul(toeplitz[i - j], pj));
            }
        }
        poly = out;
    }
    poly
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{self}")
    }
}

impl fmt::Display for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.n {
            if i > 0 {
                write!(f, ",")?;
            }
            let row: Vec<String> = (0..self.n).map(|j| self.get(i, j).to_string()).collect();
            write!(f, "[{}]", row.join(","))?;
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly;

    fn gf(q: u64) -> FieldCtx {
        FieldCtx::of_order(q).unwrap()
    }

    #[test]
    fn char_poly_of_identity() {
        let f = gf(3);
        let cp = Mat::identity(&f, 2).char_poly();
        assert_eq!(cp, Poly::from_ints(&f, &[1, 1, 1]));
        let tm1 = Poly::from_ints(&f, &[-1, 1]);
        assert_eq!(cp, poly::mul(&f, &tm1, &tm1));
    }

    #[test]
    fn char_poly_of_companion() {
        // companion of t^2 - 2 has char poly t^2 - 2 = t^2 + 1 over GF(3)
        let f = gf(3);
        let c = Mat::from_int_rows(&f, &[&[0, 2], &[1, 0]]).unwrap();
        assert_eq!(c.char_poly(), Poly::from_ints(&f, &[1, 0, 1]));
    }

    #[test]
    fn char_poly_small_cases() {
        let f = gf(5);
        let m = Mat::from_int_rows(&f, &[&[2]]).unwrap();
        assert_eq!(m.char_poly(), Poly::from_ints(&f, &[-2, 1]));
        // 3x3 upper triangular: product of (t - diagonal)
        let m = Mat::from_int_rows(&f, &[&[1, 4, 2], &[0, 3, 1], &[0, 0, 2]]).unwrap();
        let want = [1, 3, 2].iter().fold(Poly::one(), |acc, &d| {
            poly::mul(&f, &acc, &Poly::linear(&f, d))
        });
        assert_eq!(m.char_poly(), want);
        assert_eq!(Mat::zero(&f, 0).char_poly(), Poly::one());
    }

    #[test]
    fn inverse_and_conjugation() {
        let f = gf(3);
        let p = Mat::from_int_rows(&f, &[&[0, 1], &[1, 0]]).unwrap();
        let e21 = Mat::unit(&f, 2, 1, 0);
        assert_eq!(e21.conjugate_by(&p).unwrap(), Mat::unit(&f, 2, 0, 1));
        let s = Mat::from_int_rows(&f, &[&[1, 2], &[2, 1]]).unwrap();
        assert!(matches!(s.inverse(), Err(Error::Singular)));
    }

    #[test]
    fn entry_validation() {
        let f = gf(3);
        assert!(Mat::from_entries(&f, 2, vec![0, 1, 2]).is_err());
        assert!(Mat::from_entries(&f, 2, vec![0, 1, 2, 3]).is_err());
        assert!(Mat::from_entries(&f, 2, vec![0, 1, 2, 0]).is_ok());
    }

    #[test]
    fn normalized_vector() {
        let f = gf(5);
        let v = Vector::new(vec![0, 3, 1]);
        assert_eq!(v.normalized(&f).unwrap(), Vector::new(vec![0, 1, 2]));
        assert!(Vector::zero(2).normalized(&f).is_err());
    }
}
