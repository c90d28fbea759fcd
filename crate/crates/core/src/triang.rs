//! Triangularizability of single matrices and weak triangularizability of
//! matrix spaces.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::Elem;
use crate::mat::{Mat, Vector};
use crate::poly;
use crate::space::{check_budget, MatSpace};
use crate::sweep::{first_non_split, SplitOracle};

/// A matrix is triangularizable over its field iff its characteristic
/// polynomial splits.
pub fn is_triangularizable(m: &Mat) -> bool {
    poly::splits_over(m.field(), &m.char_poly()).expect("characteristic polynomials are monic")
}

/// An invertible `P` with `P^{-1} M P` upper triangular, built by taking an
/// eigenvector, completing it to a basis and recursing on the quotient.
pub fn triangularize(m: &Mat) -> Result<Mat> {
    if !is_triangularizable(m) {
        return Err(Error::Precondition {
            message: "characteristic polynomial does not split".into(),
            witness: Some(Box::new(m.clone())),
        });
    }
    let p = triangularize_split(m)?;
    debug_assert!(p.inverse()?.mul(m)?.mul(&p)?.is_upper_triangular());
    Ok(p)
}

fn triangularize_split(m: &Mat) -> Result<Mat> {
    let f = m.field();
    let n = m.n();
    if n <= 1 {
        return Ok(Mat::identity(f, n));
    }
    let roots = poly::roots_with_multiplicity(f, &m.char_poly())?;
    let (lambda, _) = *roots
        .first()
        .ok_or_else(|| Error::precondition("no eigenvalue in the field"))?;
    let shifted = m.sub(&Mat::identity(f, n).scale(lambda))?;
    let kernel = shifted.kernel();
    let v = Vector::new(kernel.rows()[0].clone());
    let lead = v.leading_index().expect("kernel rows are nonzero");
    let mut cols = vec![v];
    cols.extend((0..n).filter(|&i| i != lead).map(|i| Vector::unit(n, i)));
    let b = Mat::from_columns(f, &cols)?;
    let inner = b.inverse()?.mul(m)?.mul(&b)?;
    let sub: Vec<Elem> = (1..n)
        .flat_map(|i| (1..n).map(move |j| (i, j)))
        .map(|(i, j)| inner.get(i, j))
        .collect();
    let sub_p = triangularize_split(&Mat::from_entries_unchecked(f, n - 1, sub))?;
    let mut lift = Mat::identity(f, n);
    for i in 1..n {
        for j in 1..n {
            lift.set(i, j, sub_p.get(i - 1, j - 1));
        }
    }
    b.mul(&lift)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Visit every element; the verdict is exact.
    Exhaustive,
    /// Test `count` uniformly random elements drawn from a seeded generator.
    Sample { count: u64, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    WeaklyTriangularizable,
    /// Carries an element whose characteristic polynomial does not split.
    /// In exhaustive mode it is the first one in enumeration order.
    Counterexample(Mat),
    /// Sample mode found nothing; this is not a certificate.
    NoCounterexample {
        samples: u64,
    },
}

impl Verdict {
    pub fn witness(&self) -> Option<&Mat> {
        match self {
            Verdict::Counterexample(w) => Some(w),
            _ => None,
        }
    }
}

pub fn space_weakly_triangularizable(s: &MatSpace, mode: Mode, budget: u128) -> Result<Verdict> {
    match mode {
        Mode::Exhaustive => {
            check_budget(s.element_count(), budget)?;
            let oracle = SplitOracle::shared(s.field(), s.n());
            if weakly_triangularizable_fast(&oracle, s) {
                return Ok(Verdict::WeaklyTriangularizable);
            }
            let coeffs = first_non_split(&oracle, s.basis_vectors())
                .expect("fast sweep found a non-split element");
            Ok(Verdict::Counterexample(s.element(&coeffs)))
        }
        Mode::Sample { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let q = s.field().q();
            let oracle = SplitOracle::shared(s.field(), s.n());
            for _ in 0..count {
                let coeffs: Vec<Elem> = (0..s.dim()).map(|_| rng.gen_range(0..q)).collect();
                let m = s.element(&coeffs);
                if !oracle.splits(m.entries()) {
                    return Ok(Verdict::Counterexample(m));
                }
            }
            Ok(Verdict::NoCounterexample { samples: count })
        }
    }
}

/// Exact verdict without a witness. When the identity is in `s`, only a
/// complement of `F I` is swept, since adding a scalar shifts every
/// eigenvalue by the same amount.
pub fn weakly_triangularizable_fast(oracle: &SplitOracle, s: &MatSpace) -> bool {
    let gens = identity_complement(s).unwrap_or_else(|| s.basis_vectors().to_vec());
    first_non_split(oracle, &gens).is_none()
}

/// Canonical basis of `s` minus one vector, chosen so that the rest plus
/// the identity still spans `s`. `None` when the identity is not in `s`.
pub(crate) fn identity_complement(s: &MatSpace) -> Option<Vec<Vec<Elem>>> {
    let id = Mat::identity(s.field(), s.n());
    let coords = s.subspace().coordinates(s.field(), id.entries())?;
    let drop = coords.iter().position(|&c| c != 0)?;
    Some(
        s.basis_vectors()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != drop)
            .map(|(_, v)| v.clone())
            .collect(),
    )
}

/// Exhaustive verdict as a boolean.
pub fn is_weakly_triangularizable(s: &MatSpace, budget: u128) -> Result<bool> {
    check_budget(s.element_count(), budget)?;
    Ok(weakly_triangularizable_fast(
        &SplitOracle::shared(s.field(), s.n()),
        s,
    ))
}
