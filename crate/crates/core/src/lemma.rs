//! Brute-force checks on split pencils of polynomials.
//!
//! For monic `p` of degree `d` and monic `q` of degree `d - 1` over a field
//! with more than two elements, if every `p - λ q` splits then `q` divides
//! `p`. Over `GF(2)` this fails for odd `d` with `p = t^d`,
//! `q = t^d - (t - 1)^d`.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};
use crate::par::{map_shards, Execution};
use crate::poly::{self, Poly};
use crate::space::{check_budget, power_count};
use crate::sweep::splits_by_deflation;

fn check_pencil(p: &Poly, q: &Poly) -> Result<usize> {
    let d = p
        .degree()
        .filter(|&d| d >= 1)
        .ok_or_else(|| Error::arg("p must have degree at least 1"))?;
    if !p.is_monic() || !q.is_monic() {
        return Err(Error::arg("p and q must be monic"));
    }
    if q.degree() != Some(d - 1) {
        return Err(Error::arg(format!("q must have degree {}", d - 1)));
    }
    Ok(d)
}

/// Whether `p - λ q` splits for every `λ` in the field.
pub fn pencil_splits_all(p: &Poly, q: &Poly, f: &FieldCtx) -> Result<bool> {
    check_pencil(p, q)?;
    for lambda in f.elements() {
        let member = poly::sub(f, p, &poly::scale(f, q, lambda));
        if !poly::splits_over(f, &member)? {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma31Report {
    pub field: FieldCtx,
    pub degree: usize,
    pub pairs_checked: u128,
    /// Pairs whose whole pencil splits.
    pub hypothesis_pairs: u128,
    /// Pairs satisfying the hypothesis where `q` does not divide `p`.
    pub violations: Vec<(Poly, Poly)>,
}

impl Lemma31Report {
    pub fn summary(&self) -> String {
        format!(
            "{} pairs, {} violations",
            self.pairs_checked,
            self.violations.len()
        )
    }
}

/// Monic polynomial of degree `deg` whose lower coefficients are the base-q
/// digits of `code`, constant term first.
fn monic_from_code(q: u64, deg: usize, mut code: u64) -> Vec<Elem> {
    let mut c = Vec::with_capacity(deg + 1);
    for _ in 0..deg {
        c.push((code % q) as Elem);
        code /= q;
    }
    c.push(1);
    c
}

/// Checks every pair of monic `p` (degree `d`) and monic `q` (degree
/// `d - 1`), sharded by the second-highest coefficient of `p`.
pub fn lemma31_verify(f: &FieldCtx, d: usize, budget: u128) -> Result<Lemma31Report> {
    lemma31_verify_with(f, d, budget, Execution::default())
}

pub fn lemma31_verify_with(
    f: &FieldCtx,
    d: usize,
    budget: u128,
    exec: Execution,
) -> Result<Lemma31Report> {
    let q = f.q() as u64;
    if q <= 2 {
        return Err(Error::arg(
            "the pencil lemma needs a field with more than two elements",
        ));
    }
    if d == 0 {
        return Err(Error::arg("degree must be at least 1"));
    }
    let pairs = power_count(f.q(), 2 * d - 1);
    check_budget(pairs, budget)?;
    let p_count = q.pow(d as u32);
    let q_count = q.pow(d as u32 - 1);
    // splitting verdict of every monic degree-d polynomial, by code
    let table: Vec<bool> = (0..p_count)
        .map(|code| {
            let asc = monic_from_code(q, d, code);
            let desc: Vec<Elem> = asc.into_iter().rev().collect();
            splits_by_deflation(f, &desc)
        })
        .collect();
    let elements: Vec<Elem> = f.elements().collect();
    let shard_of = |code: u64| code / q.pow(d as u32 - 1);
    let shards: Vec<u64> = (0..q).collect();
    let results = map_shards(shards, exec, |shard| {
        let mut hyp = 0u128;
        let mut violations = Vec::new();
        let mut member = vec![0; d];
        for p_code in (0..p_count).filter(|&c| shard_of(c) == shard) {
            let pc = monic_from_code(q, d, p_code);
            for q_code in 0..q_count {
                let qc = monic_from_code(q, d - 1, q_code);
                let splits_all = elements.iter().all(|&lambda| {
                    let mut code = 0u64;
                    for i in (0..d).rev() {
                        member[i] = f.sub(pc[i], f.mul(lambda, qc[i]));
                        code = code * q + member[i] as u64;
                    }
                    table[code as usize]
                });
                if splits_all {
                    hyp += 1;
                    let pp = Poly::from_coeffs(pc.clone());
                    let qq = Poly::from_coeffs(qc.clone());
                    if !poly::divides(f, &qq, &pp) {
                        violations.push((pp, qq));
                    }
                }
            }
        }
        (hyp, violations)
    });
    let mut report = Lemma31Report {
        field: f.clone(),
        degree: d,
        pairs_checked: pairs,
        hypothesis_pairs: 0,
        violations: Vec::new(),
    };
    for (hyp, v) in results {
        report.hypothesis_pairs += hyp;
        report.violations.extend(v);
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct F2CounterexampleReport {
    pub degree: usize,
    pub p: Poly,
    pub q: Poly,
    /// Every `p - λ q` splits over `GF(2)`.
    pub hypothesis_holds: bool,
    pub q_divides_p: bool,
}

impl F2CounterexampleReport {
    pub fn is_counterexample(&self) -> bool {
        self.hypothesis_holds && !self.q_divides_p
    }
}

/// `p = t^d`, `q = t^d - (t - 1)^d` over `GF(2)` for odd `d >= 3`.
pub fn f2_counterexample(d: usize) -> Result<F2CounterexampleReport> {
    if d < 3 || d.is_multiple_of(2) {
        return Err(Error::arg(format!("degree {d} is not an odd integer >= 3")));
    }
    let f = FieldCtx::exploratory(2, 1, None)?;
    let p = Poly::monomial(1, d);
    let t_minus_1 = Poly::linear(&f, 1);
    let power = (0..d).fold(Poly::one(), |acc, _| poly::mul(&f, &acc, &t_minus_1));
    let q = poly::sub(&f, &p, &power);
    let hypothesis_holds = pencil_splits_all(&p, &q, &f)?;
    let q_divides_p = poly::divides(&f, &q, &p);
    Ok(F2CounterexampleReport {
        degree: d,
        p,
        q,
        hypothesis_holds,
        q_divides_p,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::DEFAULT_BUDGET;

    #[test]
    fn pencil_examples() {
        let f = FieldCtx::prime(3).unwrap();
        let t2 = Poly::from_ints(&f, &[0, 0, 1]);
        let t = Poly::x();
        assert!(pencil_splits_all(&t2, &t, &f).unwrap());
        let t2p1 = Poly::from_ints(&f, &[1, 0, 1]);
        assert!(!pencil_splits_all(&t2p1, &t, &f).unwrap());
        assert!(pencil_splits_all(&t, &t2, &f).is_err());
        assert!(pencil_splits_all(&Poly::from_ints(&f, &[0, 0, 2]), &t, &f).is_err());
    }

    #[test]
    fn small_sweeps() {
        let f = FieldCtx::prime(3).unwrap();
        let r = lemma31_verify(&f, 2, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.pairs_checked, 27);
        assert!(r.violations.is_empty());
        let r = lemma31_verify(&f, 4, DEFAULT_BUDGET).unwrap();
        assert_eq!(r.summary(), "2187 pairs, 0 violations");
        assert!(lemma31_verify(&f, 4, 100).is_err());
    }

    #[test]
    fn counterexample_over_f2() {
        let r = f2_counterexample(3).unwrap();
        let f2 = FieldCtx::exploratory(2, 1, None).unwrap();
        assert_eq!(r.q, Poly::from_ints(&f2, &[1, 1, 1]));
        assert!(r.is_counterexample());
        assert!(f2_counterexample(5).unwrap().is_counterexample());
        assert!(f2_counterexample(4).is_err());
        assert!(lemma31_verify(&f2, 2, DEFAULT_BUDGET).is_err());
    }
}
