//! Recovery of the invariant complete flag of an optimal weakly
//! triangularizable space.
//!
//! The flag is built top-down: an adapted vector `x` becomes the last basis
//! vector, the space induced on `V / F x` is recovered recursively, and its
//! flag basis is lifted into the kernel of the rank one idempotent with
//! range `F x`. Dimension two is settled through the trace-orthogonal
//! complement. Every level ends with the exact check `flag_space(flag) = S`;
//! any failed assertion is reported as a theorem-violation alarm carrying
//! the full trace.

use std::fmt::{self, Write as _};

use crate::adapted::{self, find_adapted_vector_with, projective_points, ScanOrder};
use crate::error::{Error, Result};
use crate::field::Elem;
use crate::flag::{flag_space, Flag};
use crate::linalg::Subspace;
use crate::mat::{Mat, Vector};
use crate::space::{MatSpace, DEFAULT_BUDGET};
use crate::structure::{extract_structure_maps, StructureReport};
use crate::triang::{space_weakly_triangularizable, Mode, Verdict};

/// A named boolean assertion recorded in a trace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
}

/// Data of the two-dimensional base case: `v0` spans the trace-orthogonal
/// complement, `j` is the chosen cyclic vector and `beta` the lower-left
/// entry of `v0` in the basis `(v0 j, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BaseRecord {
    pub v0: Mat,
    pub j: Vector,
    pub beta: Elem,
}

/// One level of the recursion, in that level's coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelRecord {
    pub n: usize,
    pub dim_s: usize,
    pub adapted: Option<Vector>,
    /// `dim {u in S : u(x) in F x}`.
    pub dim_stabilizer: Option<usize>,
    /// `dim (S ∩ Hom(V, F x))`.
    pub dim_range_line: Option<usize>,
    /// Dimension of the induced space on `V / F x`.
    pub dim_quotient: Option<usize>,
    /// Rank one idempotent with range `F x`.
    pub pi: Option<Mat>,
    /// Idempotent of `S` whose kernel is `span(e_2, .., e_n)`.
    pub pi_prime: Option<Mat>,
    /// Lower-left entry of `pi_prime` in the flag basis.
    pub alpha: Option<Elem>,
    /// Dimension of the space induced on `span(e_2, .., e_n)`.
    pub dim_restriction: Option<usize>,
    pub base: Option<BaseRecord>,
    pub flag_basis: Option<Vec<Vector>>,
    pub checks: Vec<Check>,
}

impl LevelRecord {
    fn check(&mut self, name: &'static str, passed: bool) -> Result<()> {
        self.checks.push(Check { name, passed });
        if passed {
            Ok(())
        } else {
            Err(alarm(
                name,
                format!("assertion failed at dimension {}", self.n),
            ))
        }
    }
}

/// Audit record of a recovery: levels from the full dimension downwards.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RecoveryTrace {
    pub levels: Vec<LevelRecord>,
    pub structure: Option<StructureReport>,
}

impl RecoveryTrace {
    pub fn all_passed(&self) -> bool {
        self.levels
            .iter()
            .all(|l| l.checks.iter().all(|c| c.passed))
            && self.structure.as_ref().is_none_or(|s| s.passed())
    }

    /// `key: value` text, one section per level.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, l) in self.levels.iter().enumerate() {
            let _ = writeln!(out, "[level {i}]");
            let _ = writeln!(out, "n: {}", l.n);
            let _ = writeln!(out, "dim_s: {}", l.dim_s);
            let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
            let _ = writeln!(
                out,
                "adapted_vector: {}",
                opt(l.adapted.as_ref().map(|x| x.to_string()))
            );
            let _ = writeln!(
                out,
                "dim_stabilizer: {}",
                opt(l.dim_stabilizer.map(|d| d.to_string()))
            );
            let _ = writeln!(
                out,
                "dim_range_line: {}",
                opt(l.dim_range_line.map(|d| d.to_string()))
            );
            let _ = writeln!(
                out,
                "dim_quotient: {}",
                opt(l.dim_quotient.map(|d| d.to_string()))
            );
            let _ = writeln!(
                out,
                "dim_restriction: {}",
                opt(l.dim_restriction.map(|d| d.to_string()))
            );
            let _ = writeln!(out, "pi: {}", opt(l.pi.as_ref().map(|m| m.to_string())));
            let _ = writeln!(
                out,
                "pi_prime: {}",
                opt(l.pi_prime.as_ref().map(|m| m.to_string()))
            );
            let _ = writeln!(out, "alpha: {}", opt(l.alpha.map(|a| a.to_string())));
            if let Some(b) = &l.base {
                let _ = writeln!(out, "v0: {}", b.v0);
                let _ = writeln!(out, "j: {}", b.j);
                let _ = writeln!(out, "beta: {}", b.beta);
            }
            if let Some(basis) = &l.flag_basis {
                let rendered: Vec<String> = basis.iter().map(|v| v.to_string()).collect();
                let _ = writeln!(out, "flag_basis: {}", rendered.join(" "));
            }
            for c in &l.checks {
                let _ = writeln!(
                    out,
                    "check.{}: {}",
                    c.name,
                    if c.passed { "pass" } else { "FAIL" }
                );
            }
        }
        if let Some(s) = &self.structure {
            out.push_str("[structure]\n");
            out.push_str(&s.render());
        }
        out
    }
}

/// A failed assertion that the theory guarantees.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alarm {
    pub check: String,
    pub detail: String,
    pub trace: RecoveryTrace,
}

impl fmt::Display for Alarm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ({})", self.check, self.detail)
    }
}

pub(crate) fn alarm(check: &str, detail: impl Into<String>) -> Error {
    Error::TheoremViolation(Box::new(Alarm {
        check: check.into(),
        detail: detail.into(),
        trace: RecoveryTrace::default(),
    }))
}

/// Fills the trace into an alarm raised below the top level.
fn with_trace(err: Error, trace: &RecoveryTrace) -> Error {
    match err {
        Error::TheoremViolation(mut a) => {
            a.trace = trace.clone();
            Error::TheoremViolation(a)
        }
        other => other,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RecoverOptions {
    pub scan: ScanOrder,
    /// Check weak triangularizability exhaustively first when `q^d` is
    /// within `budget`; above the budget the caller vouches for it.
    pub precheck: bool,
    /// Run [`extract_structure_maps`] on the result when `n >= 3`.
    pub structure: bool,
    pub budget: u128,
}

impl Default for RecoverOptions {
    fn default() -> Self {
        RecoverOptions {
            scan: ScanOrder::Forward,
            precheck: true,
            structure: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

pub fn optimal_dim(n: usize) -> usize {
    n * (n + 1) / 2
}

fn check_hypotheses(s: &MatSpace, opts: &RecoverOptions) -> Result<()> {
    let n = s.n();
    if s.dim() != optimal_dim(n) {
        return Err(Error::precondition(format!(
            "dimension {} differs from n(n+1)/2 = {}",
            s.dim(),
            optimal_dim(n)
        )));
    }
    if opts.precheck && s.element_count() <= opts.budget {
        if let Verdict::Counterexample(w) =
            space_weakly_triangularizable(s, Mode::Exhaustive, opts.budget)?
        {
            return Err(Error::Precondition {
                message: "space is not weakly triangularizable".into(),
                witness: Some(Box::new(w)),
            });
        }
    }
    Ok(())
}

/// The two-dimensional case: `S⊥ = F v0` with `tr v0 = 0`, and `S` is upper
/// triangular in the basis `(v0 j, j)` for any `j` not an eigenvector of
/// `v0`.
pub fn base_case_n2(s: &MatSpace) -> Result<(Flag, RecoveryTrace)> {
    if s.n() != 2 {
        return Err(Error::arg("base case needs 2 x 2 matrices"));
    }
    check_hypotheses(s, &RecoverOptions::default())?;
    let mut trace = RecoveryTrace::default();
    let mut level = LevelRecord::default();
    let res = base_level(s, &mut level);
    trace.levels.push(level);
    match res {
        Ok(basis) => Ok((Flag::new(s.field(), basis).expect("checked basis"), trace)),
        Err(e) => Err(with_trace(e, &trace)),
    }
}

fn base_level(s: &MatSpace, level: &mut LevelRecord) -> Result<Vec<Vector>> {
    let f = s.field();
    level.n = 2;
    level.dim_s = s.dim();
    let perp = s.trace_orthogonal();
    level.check("orthogonal_complement_is_line", perp.dim() == 1)?;
    let v0 = perp.basis()[0].clone();
    level.check("orthogonal_generator_traceless", v0.trace() == 0)?;
    let cyclic = projective_points(f, 2).find_map(|j| {
        let image = v0.apply(&j).expect("length 2");
        let span = Subspace::span(f, 2, [j.entries(), image.entries()]).expect("length 2");
        (span.dim() == 2).then_some((j, image))
    });
    level.check("cyclic_vector_exists", cyclic.is_some())?;
    let (j, v0j) = cyclic.expect("checked");
    let b = Mat::from_columns(f, &[v0j.clone(), j.clone()])?;
    let rep = b.inverse()?.mul(&v0)?.mul(&b)?;
    let beta = rep.get(1, 0);
    level.base = Some(BaseRecord {
        v0: v0.clone(),
        j: j.clone(),
        beta,
    });
    level.check(
        "companion_shape",
        rep.get(0, 0) == 0 && rep.get(0, 1) == 1 && rep.get(1, 1) == 0,
    )?;
    level.check("beta_vanishes", beta == 0)?;
    let basis = vec![v0j, j];
    level.flag_basis = Some(basis.clone());
    let flag = Flag::new(f, basis.clone())?;
    level.check("flag_space_matches", flag_space(&flag) == *s)?;
    Ok(basis)
}

/// The unique trace-one element of `S ∩ Hom(V, F x)`, checked to be a rank
/// one idempotent with range `F x`.
pub fn find_rank1_idempotent(s: &MatSpace, x: &Vector) -> Result<Mat> {
    let w = adapted::range_constrained(s, x)?;
    rank1_idempotent_in(&w, x)
}

fn rank1_idempotent_in(w: &MatSpace, x: &Vector) -> Result<Mat> {
    let f = w.field();
    if w.dim() != 1 {
        return Err(alarm(
            "unique_trace_one_element",
            format!("S ∩ Hom(V, F x) has dimension {}", w.dim()),
        ));
    }
    let g = w.basis()[0].clone();
    let Some(inv) = f.inv(g.trace()) else {
        return Err(alarm(
            "unique_trace_one_element",
            "generator has trace zero",
        ));
    };
    let pi = g.scale(inv);
    let line = Subspace::span(f, x.len(), [x.entries()])?;
    if pi.mul(&pi)? != pi || pi.rank() != 1 || pi.column_space() != line {
        return Err(alarm(
            "rank_one_idempotent",
            format!("trace-one element {pi} is not an idempotent onto F x"),
        ));
    }
    Ok(pi)
}

/// Recovers the unique complete flag `F` with `flag_space(F) = S`.
pub fn recover_flag(s: &MatSpace) -> Result<(Flag, RecoveryTrace)> {
    recover_flag_with(s, &RecoverOptions::default())
}

pub fn recover_flag_with(s: &MatSpace, opts: &RecoverOptions) -> Result<(Flag, RecoveryTrace)> {
    check_hypotheses(s, opts)?;
    let mut trace = RecoveryTrace::default();
    let basis = match recover_level(s, opts, &mut trace.levels) {
        Ok(b) => b,
        Err(e) => return Err(with_trace(e, &trace)),
    };
    let flag = Flag::new(s.field(), basis).expect("every level checks its basis");
    if opts.structure && s.n() >= 3 {
        match extract_structure_maps(s, &flag) {
            Ok(report) => trace.structure = Some(report),
            Err(Error::TheoremViolation(mut a)) => {
                trace.structure = a.trace.structure.take();
                a.trace = trace;
                return Err(Error::TheoremViolation(a));
            }
            Err(e) => return Err(e),
        }
    }
    Ok((flag, trace))
}

fn recover_level(
    s: &MatSpace,
    opts: &RecoverOptions,
    levels: &mut Vec<LevelRecord>,
) -> Result<Vec<Vector>> {
    let n = s.n();
    let f = s.field().clone();
    levels.push(LevelRecord {
        n,
        dim_s: s.dim(),
        ..Default::default()
    });
    let idx = levels.len() - 1;
    if n == 1 {
        let level = &mut levels[idx];
        level.check("dimension_one_is_everything", s.dim() == 1)?;
        let basis = vec![Vector::unit(1, 0)];
        level.flag_basis = Some(basis.clone());
        return Ok(basis);
    }
    if n == 2 {
        return base_level(s, &mut levels[idx]);
    }

    let x = find_adapted_vector_with(s, opts.scan);
    levels[idx].check("adapted_vector_exists", x.is_some())?;
    let x = x.expect("checked");
    levels[idx].adapted = Some(x.clone());

    let w = adapted::range_constrained(s, &x)?;
    levels[idx].dim_range_line = Some(w.dim());
    levels[idx].check("range_line_dim_one", w.dim() == 1)?;
    let pi = match rank1_idempotent_in(&w, &x) {
        Ok(pi) => pi,
        Err(e) => {
            levels[idx].checks.push(Check {
                name: "rank_one_idempotent",
                passed: false,
            });
            return Err(e);
        }
    };
    levels[idx].check("rank_one_idempotent", true)?;
    levels[idx].pi = Some(pi.clone());

    // u(x) ∈ F x: a . (u x) = 0 for each a annihilating x
    let line = Subspace::span(&f, n, [x.entries()])?;
    let annihilator = line.annihilator(&f);
    let functionals: Vec<Vec<Elem>> = annihilator
        .rows()
        .iter()
        .map(|a| {
            let mut phi = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    phi[i * n + j] = f.mul(a[i], x.entries()[j]);
                }
            }
            phi
        })
        .collect();
    let stabilizer = s.restrict(&functionals);
    levels[idx].dim_stabilizer = Some(stabilizer.dim());
    let orbit = s.orbit_span(&x)?;
    levels[idx].check(
        "orbit_spans",
        orbit.dim() == n && stabilizer.dim() + (n - 1) == s.dim(),
    )?;

    // basis (e_i for i != lead(x), x) of V; the first n-1 columns map onto a
    // basis of V / F x
    let lead = x.leading_index().expect("x is nonzero");
    let mut cols: Vec<Vector> = (0..n)
        .filter(|&i| i != lead)
        .map(|i| Vector::unit(n, i))
        .collect();
    cols.push(x.clone());
    let b = Mat::from_columns(&f, &cols)?;
    let b_inv = b.inverse()?;
    let quotient_mats = stabilizer
        .basis()
        .iter()
        .map(|u| {
            let rep = b_inv.mul(u)?.mul(&b)?;
            let block: Vec<Elem> = (0..n - 1)
                .flat_map(|i| (0..n - 1).map(move |j| (i, j)))
                .map(|(i, j)| rep.get(i, j))
                .collect();
            Mat::from_entries(&f, n - 1, block)
        })
        .collect::<Result<Vec<_>>>()?;
    let t = MatSpace::from_span(&f, n - 1, &quotient_mats)?;
    levels[idx].dim_quotient = Some(t.dim());
    levels[idx].check("quotient_optimal", t.dim() == optimal_dim(n - 1))?;

    let sub_basis = recover_level(&t, opts, levels)?;

    // lift each quotient vector to V, then project into ker pi along F x
    let mut basis = Vec::with_capacity(n);
    for fv in &sub_basis {
        let mut v = Vector::zero(n);
        for (c, col) in fv.entries().iter().zip(&cols) {
            v = v.add(&f, &col.scale(&f, *c));
        }
        let e = v.sub(&f, &pi.apply(&v)?);
        basis.push(e);
    }
    basis.push(x.clone());
    let level = &mut levels[idx];
    level.check(
        "lift_in_kernel_of_pi",
        basis[..n - 1]
            .iter()
            .all(|e| pi.apply(e).is_ok_and(|v| v.is_zero())),
    )?;
    let flag = Flag::new(&f, basis.clone()).ok();
    level.check("lifted_basis_independent", flag.is_some())?;
    let flag = flag.expect("checked");
    level.flag_basis = Some(basis.clone());

    let h = &basis[1..];
    level.check("hyperplane_adapted", adapted::is_adapted_hyperplane(s, h)?)?;
    let killers = adapted::kernel_constrained(s, h)?;
    let pi_prime = (killers.dim() == 1)
        .then(|| killers.basis()[0].clone())
        .and_then(|g| f.inv(g.trace()).map(|inv| g.scale(inv)));
    let pi_prime_ok = pi_prime.as_ref().is_some_and(|p| {
        let kernel = Subspace::span(&f, n, h.iter().map(|v| v.entries())).expect("length n");
        p.mul(p).is_ok_and(|pp| pp == *p) && p.kernel() == kernel
    });
    level.pi_prime = pi_prime.clone();
    level.check("kernel_idempotent", pi_prime_ok)?;
    let p = flag.basis_matrix();
    let rep = p
        .inverse()?
        .mul(pi_prime.as_ref().expect("checked"))?
        .mul(&p)?;
    let alpha = rep.get(n - 1, 0);
    level.alpha = Some(alpha);
    let mut expected = Mat::unit(&f, n, 0, 0);
    expected.set(n - 1, 0, alpha);
    level.check("kernel_idempotent_shape", rep == expected)?;

    // u(H) ⊆ H for H = span(e_2, .., e_n); restriction kernel is `killers`
    let a = Vector::new(flag_functional(&p, 0));
    let functionals: Vec<Vec<Elem>> = h
        .iter()
        .map(|hv| {
            let mut phi = vec![0; n * n];
            for i in 0..n {
                for j in 0..n {
                    phi[i * n + j] = f.mul(a.entries()[i], hv.entries()[j]);
                }
            }
            phi
        })
        .collect();
    let hyper_stabilizer = s.restrict(&functionals);
    let restriction_dim = hyper_stabilizer.dim() - killers.dim();
    level.dim_restriction = Some(restriction_dim);
    level.check("restriction_optimal", restriction_dim == optimal_dim(n - 1))?;

    level.check("flag_space_matches", flag_space(&flag) == *s)?;
    Ok(basis)
}

/// Row `i` of `P^{-1}`: the coordinate functional of the `i`-th column of `P`.
fn flag_functional(p: &Mat, i: usize) -> Vec<Elem> {
    p.inverse()
        .expect("basis matrix is invertible")
        .row(i)
        .entries()
        .to_vec()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldCtx;
    use crate::survey::{gen_sym, gen_triangular};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gf3() -> FieldCtx {
        FieldCtx::prime(3).unwrap()
    }

    #[test]
    fn base_case_on_t2() {
        let f = gf3();
        let t2 = gen_triangular(2, &f, None).unwrap();
        let (flag, trace) = base_case_n2(&t2).unwrap();
        assert!(flag.same_chain(&Flag::standard(&f, 2)));
        let base = trace.levels[0].base.as_ref().unwrap();
        assert_eq!(base.beta, 0);
        assert!(trace.all_passed());
    }

    #[test]
    fn base_case_rejects_sym() {
        let f = gf3();
        let err = base_case_n2(&gen_sym(2, &f)).unwrap_err();
        assert!(matches!(
            err,
            Error::Precondition {
                witness: Some(_),
                ..
            }
        ));
    }

    #[test]
    fn rank1_idempotent_examples() {
        let f = gf3();
        let t2 = gen_triangular(2, &f, None).unwrap();
        let pi = find_rank1_idempotent(&t2, &Vector::unit(2, 1)).unwrap();
        assert_eq!(pi, Mat::unit(&f, 2, 1, 1));
        let scalar = MatSpace::from_span(&f, 2, &[Mat::identity(&f, 2)]).unwrap();
        assert!(matches!(
            find_rank1_idempotent(&scalar, &Vector::unit(2, 0)),
            Err(Error::TheoremViolation(_))
        ));
    }

    #[test]
    fn standard_flags() {
        let f = gf3();
        for n in 1..=4 {
            let t = gen_triangular(n, &f, None).unwrap();
            let (flag, trace) = recover_flag(&t).unwrap();
            assert!(flag.same_chain(&Flag::standard(&f, n)), "n = {n}");
            assert!(trace.all_passed());
            assert_eq!(trace.levels.len(), (n - 1).max(1));
            assert_eq!(trace.structure.is_some(), n >= 3);
        }
    }

    #[test]
    fn conjugated_flag_round_trip() {
        let f = gf3();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5 {
            let p = Mat::random_invertible(&f, 3, &mut rng);
            let s = gen_triangular(3, &f, Some(&p)).unwrap();
            let (flag, _) = recover_flag(&s).unwrap();
            assert!(flag.same_chain(&Flag::standard(&f, 3).image(&p).unwrap()));
            assert_eq!(flag_space(&flag), s);
        }
    }

    #[test]
    fn rejects_wrong_dimension_and_non_split_spaces() {
        let f = gf3();
        let s = MatSpace::from_span(&f, 2, &[Mat::identity(&f, 2)]).unwrap();
        assert!(matches!(recover_flag(&s), Err(Error::Precondition { .. })));
        // T_3 with E_12 replaced by E_12 + 2 E_21, whose top block has
        // characteristic polynomial t^2 + 1
        let mut mats: Vec<Mat> = gen_triangular(3, &f, None)
            .unwrap()
            .basis()
            .into_iter()
            .filter(|m| *m != Mat::unit(&f, 3, 0, 1))
            .collect();
        mats.push(Mat::from_int_rows(&f, &[&[0, 1, 0], &[2, 0, 0], &[0, 0, 0]]).unwrap());
        let s = MatSpace::from_span(&f, 3, &mats).unwrap();
        assert_eq!(s.dim(), 6);
        assert!(matches!(
            recover_flag(&s),
            Err(Error::Precondition {
                witness: Some(_),
                ..
            })
        ));
    }

    #[test]
    fn trace_renders_sections() {
        let f = gf3();
        let t3 = gen_triangular(3, &f, None).unwrap();
        let (_, trace) = recover_flag(&t3).unwrap();
        let text = trace.render();
        assert!(text.contains("[level 0]\nn: 3\n"));
        assert!(text.contains("[level 1]\nn: 2\n"));
        assert!(text.contains("beta: 0"));
        assert!(text.contains("[structure]"));
        assert!(!text.contains("FAIL"));
    }
}
