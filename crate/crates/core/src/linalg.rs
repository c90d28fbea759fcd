//! Gaussian elimination over a [`FieldCtx`] on row-major dense data, and
//! canonical subspaces of `F^m`.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

/// Reduces `rows` in place to reduced row echelon form, drops zero rows and
/// returns the pivot columns. Every row must have length `ncols`.
pub fn rref(f: &FieldCtx, rows: &mut Vec<Vec<Elem>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        if r == rows.len() {
            break;
        }
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = f.inv(rows[r][col]).expect("pivot is nonzero");
        if inv != 1 {
            for x in rows[r][col..].iter_mut() {
                *x = f.mul(*x, inv);
            }
        }
        let (head, tail) = rows.split_at_mut(r);
        let (pivot_row, rest) = tail.split_first_mut().expect("row r exists");
        for other in head.iter_mut().chain(rest.iter_mut()) {
            let c = other[col];
            if c == 0 {
                continue;
            }
            for (x, &y) in other[col..].iter_mut().zip(&pivot_row[col..]) {
                *x = f.sub(*x, f.mul(c, y));
            }
        }
        pivots.push(col);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

pub fn rank(f: &FieldCtx, rows: &[Vec<Elem>], ncols: usize) -> usize {
    let mut work = rows.to_vec();
    rref(f, &mut work, ncols).len()
}

/// A basis of `{v : A v = 0}`, one vector per free column in increasing
/// column order.
pub fn kernel_basis(f: &FieldCtx, a: &[Vec<Elem>], ncols: usize) -> Result<Vec<Vec<Elem>>> {
    if a.iter().any(|r| r.len() != ncols) {
        return Err(Error::shape("row length differs from column count"));
    }
    let mut work = a.to_vec();
    let pivots = rref(f, &mut work, ncols);
    let mut is_pivot = vec![false; ncols];
    for &p in &pivots {
        is_pivot[p] = true;
    }
    Ok((0..ncols)
        .filter(|&c| !is_pivot[c])
        .map(|free| {
            let mut v = vec![0; ncols];
            v[free] = 1;
            for (row, &p) in work.iter().zip(&pivots) {
                v[p] = f.neg(row[free]);
            }
            v
        })
        .collect())
}

/// A particular solution of `A x = b`, or `None` when inconsistent.
pub fn solve(f: &FieldCtx, a: &[Vec<Elem>], ncols: usize, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
    if a.len() != b.len() || a.iter().any(|r| r.len() != ncols) {
        return Err(Error::shape("system dimensions disagree"));
    }
    let mut aug: Vec<Vec<Elem>> = a
        .iter()
        .zip(b)
        .map(|(r, &bi)| {
            let mut row = r.clone();
            row.push(bi);
            row
        })
        .collect();
    let pivots = rref(f, &mut aug, ncols + 1);
    if pivots.last() == Some(&ncols) {
        return Ok(None);
    }
    let mut x = vec![0; ncols];
    for (row, &p) in aug.iter().zip(&pivots) {
        x[p] = row[ncols];
    }
    Ok(Some(x))
}

/// Inverse of an `n x n` row-major matrix.
pub fn inverse(f: &FieldCtx, n: usize, entries: &[Elem]) -> Option<Vec<Elem>> {
    let mut aug: Vec<Vec<Elem>> = (0..n)
        .map(|i| {
            let mut row = entries[i * n..(i + 1) * n].to_vec();
            row.extend((0..n).map(|j| (i == j) as Elem));
            row
        })
        .collect();
    let pivots = rref(f, &mut aug, 2 * n);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(aug.iter().flat_map(|r| r[n..].iter().copied()).collect())
}

/// Subtracts from `v` the combination of `rows` (an RREF basis with the
/// given pivots) that clears its pivot coordinates; returns the
/// coefficients used.
pub fn reduce_against(
    f: &FieldCtx,
    rows: &[Vec<Elem>],
    pivots: &[usize],
    v: &mut [Elem],
) -> Vec<Elem> {
    let mut coeffs = Vec::with_capacity(rows.len());
    for (row, &p) in rows.iter().zip(pivots) {
        let c = v[p];
        coeffs.push(c);
        if c == 0 {
            continue;
        }
        for (x, &y) in v.iter_mut().zip(row) {
            *x = f.sub(*x, f.mul(c, y));
        }
    }
    coeffs
}

/// A subspace of `F^m` held as its reduced row echelon basis, so equality of
/// subspaces is equality of values.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            rows: (0..ambient)
                .map(|i| (0..ambient).map(|j| (i == j) as Elem).collect())
                .collect(),
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span<I, V>(f: &FieldCtx, ambient: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[Elem]>,
    {
        let mut rows = Vec::new();
        for v in vectors {
            let v = v.as_ref();
            if v.len() != ambient {
                return Err(Error::shape(format!(
                    "vector of length {} in ambient dimension {ambient}",
                    v.len()
                )));
            }
            rows.push(v.to_vec());
        }
        let pivots = rref(f, &mut rows, ambient);
        Ok(Subspace {
            ambient,
            rows,
            pivots,
        })
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    /// Coordinates of `v` in the canonical basis, or `None` when `v` is not
    /// in the subspace.
    pub fn coordinates(&self, f: &FieldCtx, v: &[Elem]) -> Option<Vec<Elem>> {
        let mut r = v.to_vec();
        let coeffs = reduce_against(f, &self.rows, &self.pivots, &mut r);
        r.iter().all(|&x| x == 0).then_some(coeffs)
    }

    pub fn contains(&self, f: &FieldCtx, v: &[Elem]) -> bool {
        v.len() == self.ambient && self.coordinates(f, v).is_some()
    }

    pub fn is_subspace_of(&self, f: &FieldCtx, other: &Subspace) -> bool {
        self.rows.iter().all(|r| other.contains(f, r))
    }

    pub fn sum(&self, f: &FieldCtx, other: &Subspace) -> Result<Subspace> {
        Subspace::span(f, self.ambient, self.rows.iter().chain(&other.rows))
    }

    /// The annihilator `{a : a . v = 0 for all v}`, as a subspace of the dual
    /// identified with `F^m`.
    pub fn annihilator(&self, f: &FieldCtx) -> Subspace {
        let kernel = kernel_basis(f, &self.rows, self.ambient).expect("rows have ambient length");
        Subspace::span(f, self.ambient, kernel).expect("kernel vectors have ambient length")
    }

    pub fn combination(&self, f: &FieldCtx, coeffs: &[Elem]) -> Vec<Elem> {
        let mut out = vec![0; self.ambient];
        for (row, &c) in self.rows.iter().zip(coeffs) {
            if c == 0 {
                continue;
            }
            for (x, &y) in out.iter_mut().zip(row) {
                *x = f.add(*x, f.mul(c, y));
            }
        }
        out
    }
}
