//! Enumeration of the `k`-dimensional subspaces of `F^m`.
//!
//! Subspaces are indexed by their reduced row echelon form: pivot patterns
//! in lexicographic order, and within a pattern the free entries read
//! row-major with the last one least significant. The global index makes it
//! possible to cut the enumeration into contiguous shards.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Subspace};
use crate::space::check_budget;

/// Number of `k`-dimensional subspaces of `F_q^m`, or `None` on overflow
/// or when `k > m`.
pub fn grassmann_count(m: usize, k: usize, q: u64) -> Option<u128> {
    if k > m {
        return None;
    }
    let q = q as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        // acc is the Gaussian binomial [m choose i] here, so the division
        // below is exact
        let num = q.checked_pow((m - i) as u32)? - 1;
        let den = q.checked_pow((i + 1) as u32)? - 1;
        acc = acc.checked_mul(num)? / den;
    }
    Some(acc)
}

/// All pivot patterns of `k` columns out of `m`, in lexicographic order.
fn pivot_patterns(m: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    if k > m {
        return out;
    }
    loop {
        out.push(cur.clone());
        let Some(i) = (0..k).rev().find(|&i| cur[i] < m - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

/// Free positions `(row, column)` of an RREF with the given pivots.
fn free_positions(m: usize, pivots: &[usize]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for (r, &p) in pivots.iter().enumerate() {
        for c in p + 1..m {
            if !pivots.contains(&c) {
                out.push((r, c));
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct Grassmannian {
    q: u32,
    m: usize,
    k: usize,
    patterns: Vec<Vec<usize>>,
    frees: Vec<Vec<(usize, usize)>>,
    /// `offsets[i]` is the global index of the first subspace with pattern `i`.
    offsets: Vec<u128>,
}

impl Grassmannian {
    pub fn new(field: &FieldCtx, m: usize, k: usize) -> Result<Self> {
        if k > m {
            return Err(Error::arg(format!("no {k}-dimensional subspaces of F^{m}")));
        }
        let q = field.q();
        let patterns = pivot_patterns(m, k);
        let frees: Vec<_> = patterns.iter().map(|p| free_positions(m, p)).collect();
        let mut offsets = Vec::with_capacity(patterns.len() + 1);
        let mut acc: u128 = 0;
        offsets.push(0);
        for free in &frees {
            let size = (q as u128)
                .checked_pow(free.len() as u32)
                .ok_or_else(|| Error::arg("Grassmannian too large to index"))?;
            acc = acc
                .checked_add(size)
                .ok_or_else(|| Error::arg("Grassmannian too large to index"))?;
            offsets.push(acc);
        }
        Ok(Grassmannian {
            q,
            m,
            k,
            patterns,
            frees,
            offsets,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn count(&self) -> u128 {
        *self.offsets.last().expect("offsets are nonempty")
    }

    /// RREF rows of the subspace with global index `idx`.
    pub fn rows_at(&self, idx: u128) -> Vec<Vec<Elem>> {
        assert!(idx < self.count(), "index {idx} out of range");
        let pat = self.offsets.partition_point(|&o| o <= idx) - 1;
        let mut digits = vec![0; self.frees[pat].len()];
        let mut local = idx - self.offsets[pat];
        for d in digits.iter_mut().rev() {
            *d = (local % self.q as u128) as Elem;
            local /= self.q as u128;
        }
        self.build_rows(pat, &digits)
    }

    fn build_rows(&self, pat: usize, digits: &[Elem]) -> Vec<Vec<Elem>> {
        let mut rows = vec![vec![0; self.m]; self.k];
        for (r, &p) in self.patterns[pat].iter().enumerate() {
            rows[r][p] = 1;
        }
        for (&(r, c), &d) in self.frees[pat].iter().zip(digits) {
            rows[r][c] = d;
        }
        rows
    }

    /// Walks the subspaces with global indices in `[lo, hi)`.
    pub fn cursor(&self, lo: u128, hi: u128) -> Cursor<'_> {
        let hi = hi.min(self.count());
        let lo = lo.min(hi);
        let (pat, digits, rows) = if lo < hi {
            let pat = self.offsets.partition_point(|&o| o <= lo) - 1;
            let mut digits = vec![0; self.frees[pat].len()];
            let mut local = lo - self.offsets[pat];
            for d in digits.iter_mut().rev() {
                *d = (local % self.q as u128) as Elem;
                local /= self.q as u128;
            }
            let rows = self.build_rows(pat, &digits);
            (pat, digits, rows)
        } else {
            (0, Vec::new(), Vec::new())
        };
        Cursor {
            g: self,
            remaining: hi - lo,
            started: false,
            pat,
            digits,
            rows,
        }
    }
}

/// Lending iterator over RREF row sets.
pub struct Cursor<'a> {
    g: &'a Grassmannian,
    remaining: u128,
    started: bool,
    pat: usize,
    digits: Vec<Elem>,
    rows: Vec<Vec<Elem>>,
}

impl Cursor<'_> {
    pub fn next_rows(&mut self) -> Option<&[Vec<Elem>]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        if !self.started {
            self.started = true;
            return Some(&self.rows);
        }
        let q = self.g.q;
        let frees = &self.g.frees[self.pat];
        for pos in (0..self.digits.len()).rev() {
            let (r, c) = frees[pos];
            self.digits[pos] += 1;
            if self.digits[pos] < q {
                self.rows[r][c] = self.digits[pos];
                return Some(&self.rows);
            }
            self.digits[pos] = 0;
            self.rows[r][c] = 0;
        }
        self.pat += 1;
        self.digits = vec![0; self.g.frees[self.pat].len()];
        self.rows = self.g.build_rows(self.pat, &self.digits);
        Some(&self.rows)
    }
}

/// The `k`-dimensional subspaces of `F^m` containing a fixed span `C`,
/// realized as subspaces of the quotient `F^m / C` lifted back.
#[derive(Clone, Debug)]
pub struct ConstrainedGrassmannian {
    field: FieldCtx,
    m: usize,
    constraint: Subspace,
    /// Coordinates of `F^m` that are not pivots of `C`; they identify the
    /// quotient with `F^{m - |C|}`.
    free_coords: Vec<usize>,
    quotient: Grassmannian,
}

impl ConstrainedGrassmannian {
    pub fn new(field: &FieldCtx, m: usize, k: usize, must_contain: &[Vec<Elem>]) -> Result<Self> {
        let constraint = Subspace::span(field, m, must_contain)?;
        if constraint.dim() != must_contain.len() {
            return Err(Error::arg("constraint vectors are linearly dependent"));
        }
        if k < constraint.dim() {
            return Err(Error::arg(format!(
                "dimension {k} cannot contain {} independent constraints",
                constraint.dim()
            )));
        }
        let free_coords: Vec<usize> = (0..m)
            .filter(|c| !constraint.pivots().contains(c))
            .collect();
        let quotient = Grassmannian::new(field, free_coords.len(), k - constraint.dim())?;
        Ok(ConstrainedGrassmannian {
            field: field.clone(),
            m,
            constraint,
            free_coords,
            quotient,
        })
    }

    pub fn count(&self) -> u128 {
        self.quotient.count()
    }

    pub fn quotient(&self) -> &Grassmannian {
        &self.quotient
    }

    pub fn constraint(&self) -> &Subspace {
        &self.constraint
    }

    /// Lifts quotient RREF rows into `out` (resized as needed); together
    /// with the constraint rows they span the candidate.
    pub fn lift_into(&self, rows: &[Vec<Elem>], out: &mut Vec<Vec<Elem>>) {
        out.resize_with(rows.len(), Vec::new);
        for (row, o) in rows.iter().zip(out.iter_mut()) {
            o.clear();
            o.resize(self.m, 0);
            for (&x, &c) in row.iter().zip(&self.free_coords) {
                o[c] = x;
            }
        }
    }

    /// Canonical candidate subspace from quotient RREF rows.
    pub fn lift(&self, rows: &[Vec<Elem>]) -> Subspace {
        let mut lifted = Vec::new();
        self.lift_into(rows, &mut lifted);
        Subspace::span(
            &self.field,
            self.m,
            self.constraint.rows().iter().chain(&lifted),
        )
        .expect("lifted rows have ambient length")
    }

    pub fn subspace_at(&self, idx: u128) -> Subspace {
        self.lift(&self.quotient.rows_at(idx))
    }
}

/// Every `k`-dimensional subspace of `F^m` containing `must_contain`,
/// each exactly once in index order.
pub fn enumerate_subspaces(
    field: &FieldCtx,
    m: usize,
    k: usize,
    must_contain: &[Vec<Elem>],
    budget: u128,
) -> Result<Subspaces> {
    let g = ConstrainedGrassmannian::new(field, m, k, must_contain)?;
    check_budget(g.count(), budget)?;
    Ok(Subspaces { g, next: 0 })
}

pub struct Subspaces {
    g: ConstrainedGrassmannian,
    next: u128,
}

impl Subspaces {
    pub fn count(&self) -> u128 {
        self.g.count()
    }
}

impl Iterator for Subspaces {
    type Item = Subspace;

    fn next(&mut self) -> Option<Subspace> {
        if self.next >= self.g.count() {
            return None;
        }
        let s = self.g.subspace_at(self.next);
        self.next += 1;
        Some(s)
    }
}

/// Reduced row echelon rows of `vectors`, for callers that only need the
/// canonical form.
pub fn canonical_rows(field: &FieldCtx, m: usize, vectors: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
    let mut rows = vectors.to_vec();
    linalg::rref(field, &mut rows, m);
    rows
}
