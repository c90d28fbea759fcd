//! Linear subspaces of `M_n(F)`.
//!
//! A space is stored as the reduced row echelon basis of its row-major
//! vectorization in `F^{n^2}`, so two spaces are equal as sets exactly when
//! their stored bases are equal.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Subspace};
use crate::mat::{Mat, Vector};

/// Library default for the number of elements a full sweep may visit.
pub const DEFAULT_BUDGET: u128 = 1 << 28;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatSpace {
    n: usize,
    field: FieldCtx,
    span: Subspace,
}

/// `q^d`, saturating.
pub fn power_count(q: u32, d: usize) -> u128 {
    let mut acc: u128 = 1;
    for _ in 0..d {
        acc = acc.saturating_mul(q as u128);
    }
    acc
}

pub(crate) fn check_budget(required: u128, budget: u128) -> Result<()> {
    if required > budget {
        return Err(Error::BudgetExceeded { required, budget });
    }
    Ok(())
}

impl MatSpace {
    pub fn zero(field: &FieldCtx, n: usize) -> Self {
        MatSpace {
            n,
            field: field.clone(),
            span: Subspace::zero(n * n),
        }
    }

    /// All of `M_n(F)`.
    pub fn full(field: &FieldCtx, n: usize) -> Self {
        MatSpace {
            n,
            field: field.clone(),
            span: Subspace::full(n * n),
        }
    }

    /// Canonical span of `mats`, which must share `n` and the field.
    pub fn from_span(field: &FieldCtx, n: usize, mats: &[Mat]) -> Result<Self> {
        for m in mats {
            if m.n() != n || m.field() != field {
                return Err(Error::shape(format!(
                    "matrix of size {} over {} in a space of size {n} over {field}",
                    m.n(),
                    m.field()
                )));
            }
        }
        let span = Subspace::span(field, n * n, mats.iter().map(|m| m.entries()))?;
        Ok(MatSpace {
            n,
            field: field.clone(),
            span,
        })
    }

    pub fn from_subspace(field: &FieldCtx, n: usize, span: Subspace) -> Result<Self> {
        if span.ambient() != n * n {
            return Err(Error::shape("subspace ambient dimension is not n^2"));
        }
        Ok(MatSpace {
            n,
            field: field.clone(),
            span,
        })
    }

    pub(crate) fn from_vectors<I, V>(field: &FieldCtx, n: usize, vectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: AsRef<[Elem]>,
    {
        Ok(MatSpace {
            n,
            field: field.clone(),
            span: Subspace::span(field, n * n, vectors)?,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn subspace(&self) -> &Subspace {
        &self.span
    }

    /// Canonical basis vectors (vectorized, row-major).
    pub fn basis_vectors(&self) -> &[Vec<Elem>] {
        self.span.rows()
    }

    pub fn basis(&self) -> Vec<Mat> {
        self.span
            .rows()
            .iter()
            .map(|r| Mat::from_entries_unchecked(&self.field, self.n, r.clone()))
            .collect()
    }

    fn check_mat(&self, m: &Mat) -> Result<()> {
        if m.n() != self.n || m.field() != &self.field {
            return Err(Error::shape(
                "matrix differs from the space in size or field",
            ));
        }
        Ok(())
    }

    pub fn contains(&self, m: &Mat) -> Result<bool> {
        self.check_mat(m)?;
        Ok(self.span.contains(&self.field, m.entries()))
    }

    pub fn contains_identity(&self) -> bool {
        self.span
            .contains(&self.field, Mat::identity(&self.field, self.n).entries())
    }

    /// Coordinates in the canonical basis, `None` if `m` is not a member.
    pub fn coordinates(&self, m: &Mat) -> Result<Option<Vec<Elem>>> {
        self.check_mat(m)?;
        Ok(self.span.coordinates(&self.field, m.entries()))
    }

    pub fn element(&self, coeffs: &[Elem]) -> Mat {
        Mat::from_entries_unchecked(
            &self.field,
            self.n,
            self.span.combination(&self.field, coeffs),
        )
    }

    /// Number of elements, `q^d` (saturating).
    pub fn element_count(&self) -> u128 {
        power_count(self.field.q(), self.dim())
    }

    /// Every element exactly once, coefficient vectors in lexicographic
    /// order (first coordinate most significant). Fails when `q^d > budget`.
    pub fn elements(&self, budget: u128) -> Result<Elements<'_>> {
        check_budget(self.element_count(), budget)?;
        Ok(Elements {
            space: self,
            digits: vec![0; self.dim()],
            done: false,
        })
    }

    pub fn is_subspace_of(&self, other: &MatSpace) -> bool {
        self.n == other.n
            && self.field == other.field
            && self.span.is_subspace_of(&self.field, &other.span)
    }

    pub fn sum(&self, other: &MatSpace) -> Result<MatSpace> {
        if self.n != other.n || self.field != other.field {
            return Err(Error::shape("spaces differ in size or field"));
        }
        Ok(MatSpace {
            n: self.n,
            field: self.field.clone(),
            span: self.span.sum(&self.field, &other.span)?,
        })
    }

    /// Applies `g` to every basis element and spans the results.
    pub fn map_basis<G>(&self, mut g: G) -> Result<MatSpace>
    where
        G: FnMut(&Mat) -> Result<Mat>,
    {
        let images = self
            .basis()
            .iter()
            .map(&mut g)
            .collect::<Result<Vec<_>>>()?;
        MatSpace::from_span(&self.field, self.n, &images)
    }

    /// `{P M P^{-1} : M in S}`.
    pub fn conjugate(&self, p: &Mat) -> Result<MatSpace> {
        self.check_mat(p)?;
        let p_inv = p.inverse()?;
        self.map_basis(|m| p.mul(m)?.mul(&p_inv))
    }

    /// `R S^T R^{-1}` for the reversal permutation `R`; entry `(i, j)` of
    /// the image of `M` is `M[n-1-j][n-1-i]`.
    pub fn transpose_dual(&self) -> MatSpace {
        let n = self.n;
        let images = self.span.rows().iter().map(|r| {
            let mut out = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    out[i * n + j] = r[(n - 1 - j) * n + (n - 1 - i)];
                }
            }
            out
        });
        MatSpace::from_vectors(&self.field, n, images).expect("vectors have length n^2")
    }

    /// `{N : tr(M N) = 0 for all M in S}`.
    pub fn trace_orthogonal(&self) -> MatSpace {
        let n = self.n;
        // tr(MN) = sum_{i,j} M[i][j] N[j][i]
        let functionals: Vec<Vec<Elem>> = self
            .span
            .rows()
            .iter()
            .map(|r| {
                let mut phi = vec![0; n * n];
                for i in 0..n {
                    for j in 0..n {
                        phi[j * n + i] = r[i * n + j];
                    }
                }
                phi
            })
            .collect();
        let kernel = linalg::kernel_basis(&self.field, &functionals, n * n)
            .expect("functionals have length n^2");
        MatSpace::from_vectors(&self.field, n, kernel).expect("vectors have length n^2")
    }

    /// Values of the linear functionals on each basis element, as a
    /// `functionals x dim` matrix.
    fn evaluate(&self, functionals: &[Vec<Elem>]) -> Vec<Vec<Elem>> {
        let f = &self.field;
        functionals
            .iter()
            .map(|phi| {
                self.span
                    .rows()
                    .iter()
                    .map(|b| {
                        b.iter()
                            .zip(phi)
                            .fold(0, |acc, (&x, &y)| f.add(acc, f.mul(x, y)))
                    })
                    .collect()
            })
            .collect()
    }

    /// `{M in S : phi(vec M) = 0}` for every given functional on `F^{n^2}`.
    pub fn restrict(&self, functionals: &[Vec<Elem>]) -> MatSpace {
        if self.dim() == 0 {
            return self.clone();
        }
        let system = self.evaluate(functionals);
        let kernel =
            linalg::kernel_basis(&self.field, &system, self.dim()).expect("system is dim wide");
        let vectors: Vec<Vec<Elem>> = kernel
            .iter()
            .map(|c| self.span.combination(&self.field, c))
            .collect();
        MatSpace::from_vectors(&self.field, self.n, vectors).expect("vectors have length n^2")
    }

    /// Solves `phi_i(vec M) = b_i` over `M in S`. Returns a solution (if
    /// any) and the dimension of the homogeneous solution space, which is
    /// zero exactly when a solution is unique.
    pub fn solve_affine(&self, constraints: &[(Vec<Elem>, Elem)]) -> (Option<Mat>, usize) {
        let functionals: Vec<Vec<Elem>> = constraints.iter().map(|(phi, _)| phi.clone()).collect();
        let rhs: Vec<Elem> = constraints.iter().map(|&(_, b)| b).collect();
        let system = self.evaluate(&functionals);
        let d = self.dim();
        let kernel_dim = d - linalg::rank(&self.field, &system, d);
        if d == 0 {
            let ok = rhs.iter().all(|&b| b == 0);
            return (ok.then(|| Mat::zero(&self.field, self.n)), 0);
        }
        let sol = linalg::solve(&self.field, &system, d, &rhs).expect("consistent shapes");
        (sol.map(|c| self.element(&c)), kernel_dim)
    }

    /// Span of `{M x : M in S}`.
    pub fn orbit_span(&self, x: &Vector) -> Result<Subspace> {
        let images = self
            .basis()
            .iter()
            .map(|m| m.apply(x).map(|v| v.entries().to_vec()))
            .collect::<Result<Vec<_>>>()?;
        Subspace::span(&self.field, self.n, images)
    }
}

/// Functional on `F^{n^2}` reading entry `(i, j)`.
pub(crate) fn entry_functional(n: usize, i: usize, j: usize) -> Vec<Elem> {
    let mut phi = vec![0; n * n];
    phi[i * n + j] = 1;
    phi
}

pub struct Elements<'a> {
    space: &'a MatSpace,
    digits: Vec<Elem>,
    done: bool,
}

impl Iterator for Elements<'_> {
    type Item = Mat;

    fn next(&mut self) -> Option<Mat> {
        if self.done {
            return None;
        }
        let out = self.space.element(&self.digits);
        let q = self.space.field.q();
        let mut pos = self.digits.len();
        loop {
            if pos == 0 {
                self.done = true;
                break;
            }
            pos -= 1;
            self.digits[pos] += 1;
            if self.digits[pos] < q {
                break;
            }
            self.digits[pos] = 0;
        }
        Some(out)
    }
}

impl fmt::Debug for MatSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MatSpace(n={}, {}, dim={}) {{",
            self.n,
            self.field,
            self.dim()
        )?;
        for (i, b) in self.basis().iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{b}")?;
        }
        write!(f, "}}")
    }
}
