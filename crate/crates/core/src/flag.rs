//! Complete flags, their stabilizer spaces, and invariant subspaces of
//! matrix spaces.

use std::fmt;

use crate::error::{Error, Result};
use crate::field::FieldCtx;
use crate::grassmann::{grassmann_count, Grassmannian};
use crate::linalg::Subspace;
use crate::mat::{Mat, Vector};
use crate::space::{check_budget, MatSpace};

/// A complete flag of `F^n`, held as an adapted basis `(e_1, .., e_n)`:
/// `V_i` is the span of the first `i` vectors.
#[derive(Clone)]
pub struct Flag {
    field: FieldCtx,
    basis: Vec<Vector>,
}

impl Flag {
    pub fn new(field: &FieldCtx, basis: Vec<Vector>) -> Result<Self> {
        let n = basis.len();
        if basis.iter().any(|v| v.len() != n) {
            return Err(Error::shape(format!(
                "flag basis of {n} vectors must live in F^{n}"
            )));
        }
        if basis
            .iter()
            .flat_map(|v| v.entries())
            .any(|&x| !field.is_valid(x))
        {
            return Err(Error::arg("flag basis entry outside the field"));
        }
        let span = Subspace::span(field, n, basis.iter().map(|v| v.entries()))?;
        if span.dim() != n {
            return Err(Error::arg("flag basis is linearly dependent"));
        }
        Ok(Flag {
            field: field.clone(),
            basis,
        })
    }

    pub fn standard(field: &FieldCtx, n: usize) -> Self {
        Flag {
            field: field.clone(),
            basis: (0..n).map(|i| Vector::unit(n, i)).collect(),
        }
    }

    pub fn n(&self) -> usize {
        self.basis.len()
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    /// The matrix whose columns are the basis vectors.
    pub fn basis_matrix(&self) -> Mat {
        Mat::from_columns(&self.field, &self.basis).expect("flag basis is square")
    }

    /// `V_0, V_1, .., V_n` in canonical form.
    pub fn subspaces(&self) -> Vec<Subspace> {
        let n = self.n();
        (0..=n)
            .map(|i| {
                Subspace::span(&self.field, n, self.basis[..i].iter().map(|v| v.entries()))
                    .expect("basis vectors have length n")
            })
            .collect()
    }

    /// The flag `(P V_i)`.
    pub fn image(&self, p: &Mat) -> Result<Flag> {
        let basis = self
            .basis
            .iter()
            .map(|v| p.apply(v))
            .collect::<Result<Vec<_>>>()?;
        Flag::new(&self.field, basis)
    }

    /// Whether both flags have the same chain of subspaces, regardless of the
    /// chosen bases.
    pub fn same_chain(&self, other: &Flag) -> bool {
        self.field == other.field && self.subspaces() == other.subspaces()
    }
}

impl fmt::Debug for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Flag[")?;
        for (i, v) in self.basis.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}

/// Endomorphisms leaving every member of the flag invariant: `P T_n P^{-1}`
/// with `P` the basis matrix.
pub fn flag_space(flag: &Flag) -> MatSpace {
    let f = flag.field();
    let n = flag.n();
    let p = flag.basis_matrix();
    let p_inv = p.inverse().expect("flag basis is invertible");
    let mats: Vec<Mat> = (0..n)
        .flat_map(|i| (i..n).map(move |j| (i, j)))
        .map(|(i, j)| {
            p.mul(&Mat::unit(f, n, i, j))
                .and_then(|m| m.mul(&p_inv))
                .expect("same shapes")
        })
        .collect();
    MatSpace::from_span(f, n, &mats).expect("same shapes")
}

/// Whether `u` is invariant under every element of `s`.
pub fn is_invariant(s: &MatSpace, u: &Subspace) -> bool {
    let f = s.field();
    s.basis().iter().all(|m| {
        u.rows().iter().all(|r| {
            let image = m.apply(&Vector::new(r.clone())).expect("row has length n");
            u.contains(f, image.entries())
        })
    })
}

/// Every `s`-invariant subspace of `F^n`, optionally only in the listed
/// dimensions, by a full Grassmannian sweep of at most `budget` candidates.
pub fn invariant_subspaces(
    s: &MatSpace,
    dims: Option<&[usize]>,
    budget: u128,
) -> Result<Vec<Subspace>> {
    let f = s.field();
    let n = s.n();
    let dims: Vec<usize> = match dims {
        Some(d) => d.iter().copied().filter(|&k| k <= n).collect(),
        None => (0..=n).collect(),
    };
    let total = dims.iter().try_fold(0u128, |acc, &k| {
        grassmann_count(n, k, f.q() as u64).and_then(|c| acc.checked_add(c))
    });
    check_budget(total.unwrap_or(u128::MAX), budget)?;
    let mut out = Vec::new();
    for k in dims {
        let g = Grassmannian::new(f, n, k)?;
        let mut cur = g.cursor(0, g.count());
        while let Some(rows) = cur.next_rows() {
            let u = Subspace::span(f, n, rows)?;
            if is_invariant(s, &u) {
                out.push(u);
            }
        }
    }
    Ok(out)
}

/// Whether the subspaces are totally ordered by inclusion.
pub fn is_chain(field: &FieldCtx, subspaces: &[Subspace]) -> bool {
    subspaces.iter().enumerate().all(|(i, a)| {
        subspaces[i + 1..]
            .iter()
            .all(|b| a.is_subspace_of(field, b) || b.is_subspace_of(field, a))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::survey::gen_triangular;

    fn gf3() -> FieldCtx {
        FieldCtx::prime(3).unwrap()
    }

    #[test]
    fn flag_space_examples() {
        let f = gf3();
        let std3 = Flag::standard(&f, 3);
        let t3 = flag_space(&std3);
        assert_eq!(t3.dim(), 6);
        assert_eq!(t3, gen_triangular(3, &f, None).unwrap());
        let swapped = Flag::new(&f, vec![Vector::unit(2, 1), Vector::unit(2, 0)]).unwrap();
        let lower = MatSpace::from_span(
            &f,
            2,
            &[
                Mat::unit(&f, 2, 0, 0),
                Mat::unit(&f, 2, 1, 0),
                Mat::unit(&f, 2, 1, 1),
            ],
        )
        .unwrap();
        assert_eq!(flag_space(&swapped), lower);
    }

    #[test]
    fn rejects_dependent_basis() {
        let f = gf3();
        let b = vec![Vector::new(vec![1, 2]), Vector::new(vec![2, 1])];
        assert!(Flag::new(&f, b).is_err());
    }

    #[test]
    fn invariant_subspaces_examples() {
        let f = gf3();
        let t3 = gen_triangular(3, &f, None).unwrap();
        let inv = invariant_subspaces(&t3, None, 1000).unwrap();
        assert_eq!(inv, Flag::standard(&f, 3).subspaces());
        assert!(is_chain(&f, &inv));
        // every subspace is invariant under the zero space and the scalars
        let all = 1 + 13 + 13 + 1;
        assert_eq!(
            invariant_subspaces(&MatSpace::zero(&f, 3), None, 1000)
                .unwrap()
                .len(),
            all
        );
        let scalars = MatSpace::from_span(&f, 3, &[Mat::identity(&f, 3)]).unwrap();
        assert_eq!(
            invariant_subspaces(&scalars, None, 1000).unwrap().len(),
            all
        );
        assert!(invariant_subspaces(&t3, None, 10).is_err());
        let only_lines = invariant_subspaces(&t3, Some(&[1]), 1000).unwrap();
        assert_eq!(only_lines.len(), 1);
    }

    #[test]
    fn chain_examples() {
        let f = gf3();
        let e1 = Subspace::span(&f, 2, [[1, 0]]).unwrap();
        let e2 = Subspace::span(&f, 2, [[0, 1]]).unwrap();
        assert!(!is_chain(&f, &[e1.clone(), e2]));
        assert!(is_chain(&f, &[Subspace::zero(2), e1, Subspace::full(2)]));
    }
}
