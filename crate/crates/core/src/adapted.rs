//! Adapted vectors and adapted hyperplanes.
//!
//! A nonzero `x` is adapted to `S` when no nonzero element of `S` has range
//! `F x` and trace zero; dually a hyperplane `H` is adapted when no nonzero
//! element has kernel `H` and trace zero.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::linalg::{self, Subspace};
use crate::mat::Vector;
use crate::space::MatSpace;

/// Direction of the projective scan in [`find_adapted_vector_with`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum ScanOrder {
    #[default]
    Forward,
    Reverse,
}

/// Projective points of `F^n` as normalized representatives (first nonzero
/// coordinate equal to 1) in lexicographic order.
pub fn projective_points(f: &FieldCtx, n: usize) -> ProjectivePoints {
    ProjectivePoints {
        q: f.q(),
        lead: n,
        cur: vec![0; n],
    }
}

pub struct ProjectivePoints {
    q: Elem,
    /// Position of the leading 1; equal to the length before the first
    /// point and after the last.
    lead: usize,
    cur: Vec<Elem>,
}

impl Iterator for ProjectivePoints {
    type Item = Vector;

    fn next(&mut self) -> Option<Vector> {
        let n = self.cur.len();
        if self.lead == n {
            if n == 0 || self.cur[n - 1] == 1 {
                return None;
            }
            self.lead = n - 1;
            self.cur[n - 1] = 1;
            return Some(Vector::new(self.cur.clone()));
        }
        for pos in (self.lead + 1..n).rev() {
            self.cur[pos] += 1;
            if self.cur[pos] < self.q {
                return Some(Vector::new(self.cur.clone()));
            }
            self.cur[pos] = 0;
        }
        self.cur[self.lead] = 0;
        if self.lead == 0 {
            // park on a state that reports exhaustion
            self.lead = n;
            self.cur[n - 1] = 1;
            return None;
        }
        self.lead -= 1;
        self.cur[self.lead] = 1;
        Some(Vector::new(self.cur.clone()))
    }
}

fn check_vector(s: &MatSpace, x: &Vector) -> Result<()> {
    if x.len() != s.n() {
        return Err(Error::shape(format!(
            "vector of length {} for matrices of size {}",
            x.len(),
            s.n()
        )));
    }
    if x.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(())
}

/// `S ∩ Hom(V, F x)`: the elements of `S` whose columns are all multiples
/// of `x`.
pub fn range_constrained(s: &MatSpace, x: &Vector) -> Result<MatSpace> {
    check_vector(s, x)?;
    let n = s.n();
    let f = s.field();
    let line = Subspace::span(f, n, [x.entries()])?;
    // a^T M = 0 for every a annihilating x
    let functionals: Vec<Vec<Elem>> = line
        .annihilator(f)
        .rows()
        .iter()
        .flat_map(|a| {
            (0..n).map(move |j| {
                let mut phi = vec![0; n * n];
                for i in 0..n {
                    phi[i * n + j] = a[i];
                }
                phi
            })
        })
        .collect();
    Ok(s.restrict(&functionals))
}

/// `{u in S : H ⊆ ker u}`.
pub fn kernel_constrained(s: &MatSpace, h: &[Vector]) -> Result<MatSpace> {
    let n = s.n();
    let functionals: Vec<Vec<Elem>> = h
        .iter()
        .flat_map(|v| {
            (0..n).map(move |i| {
                let mut phi = vec![0; n * n];
                phi[i * n..(i + 1) * n].copy_from_slice(v.entries());
                phi
            })
        })
        .collect();
    Ok(s.restrict(&functionals))
}

/// Whether the trace is injective on `w`.
fn trace_injective(w: &MatSpace) -> bool {
    match w.dim() {
        0 => true,
        1 => w.basis()[0].trace() != 0,
        _ => false,
    }
}

pub fn is_adapted_vector(s: &MatSpace, x: &Vector) -> Result<bool> {
    Ok(trace_injective(&range_constrained(s, x)?))
}

/// First adapted vector in projective lexicographic order.
pub fn find_adapted_vector(s: &MatSpace) -> Option<Vector> {
    find_adapted_vector_with(s, ScanOrder::Forward)
}

pub fn find_adapted_vector_with(s: &MatSpace, order: ScanOrder) -> Option<Vector> {
    let test = |x: &Vector| is_adapted_vector(s, x).expect("projective points are nonzero");
    match order {
        ScanOrder::Forward => projective_points(s.field(), s.n()).find(test),
        ScanOrder::Reverse => {
            let all: Vec<Vector> = projective_points(s.field(), s.n()).collect();
            all.into_iter().rev().find(test)
        }
    }
}

/// Checks that `h` spans a hyperplane of `F^n` and returns its canonical
/// annihilating functional.
pub fn hyperplane_functional(f: &FieldCtx, n: usize, h: &[Vector]) -> Result<Vector> {
    if h.iter().any(|v| v.len() != n) {
        return Err(Error::shape("hyperplane vector of the wrong length"));
    }
    let span = Subspace::span(f, n, h.iter().map(|v| v.entries()))?;
    if span.dim() + 1 != n {
        return Err(Error::arg(format!(
            "vectors span a subspace of dimension {}, not a hyperplane of F^{n}",
            span.dim()
        )));
    }
    Ok(Vector::new(span.annihilator(f).rows()[0].clone()))
}

pub fn is_adapted_hyperplane(s: &MatSpace, h: &[Vector]) -> Result<bool> {
    let f = s.field();
    let n = s.n();
    hyperplane_functional(f, n, h)?;
    let rows = Subspace::span(f, n, h.iter().map(|v| v.entries()))?;
    let basis: Vec<Vector> = rows.rows().iter().cloned().map(Vector::new).collect();
    Ok(trace_injective(&kernel_constrained(s, &basis)?))
}

/// Hyperplane `{v : a . v = 0}` as a basis list.
pub fn hyperplane_from_functional(f: &FieldCtx, a: &Vector) -> Result<Vec<Vector>> {
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    Ok(linalg::kernel_basis(f, &[a.entries().to_vec()], a.len())?
        .into_iter()
        .map(Vector::new)
        .collect())
}
