use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use trispace::adapted::{
    hyperplane_from_functional, is_adapted_hyperplane, is_adapted_vector, projective_points,
};
use trispace::poly;
use trispace::survey::{gen_joint, gen_random, gen_sl, gen_sym, gen_triangular};
use trispace::triang::{is_triangularizable, is_weakly_triangularizable, triangularize};
use trispace::{
    space_weakly_triangularizable, FieldCtx, Mat, MatSpace, Mode, Vector, Verdict, DEFAULT_BUDGET,
};

fn field(q: u64) -> FieldCtx {
    FieldCtx::of_order(q).unwrap()
}

/// First element, in coefficient-vector order, of a 2x2 space whose
/// characteristic polynomial has no root.
fn brute_force_first_witness(s: &MatSpace) -> Option<Mat> {
    assert_eq!(s.n(), 2);
    let f = s.field();
    s.elements(DEFAULT_BUDGET)
        .unwrap()
        .find(|m| f.elements().all(|z| poly::eval(f, &m.char_poly(), z) != 0))
}

fn random_case(seed: u64, max_n: usize, qs: &[u64]) -> (FieldCtx, usize, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    use rand::Rng;
    let n = rng.gen_range(1..=max_n);
    let q = qs[rng.gen_range(0..qs.len())];
    (field(q), n, rng)
}

#[test]
fn symmetric_witness_is_lex_first() {
    for q in [3u64, 5, 7] {
        let f = field(q);
        let s = gen_sym(2, &f);
        let verdict = space_weakly_triangularizable(&s, Mode::Exhaustive, DEFAULT_BUDGET).unwrap();
        assert_eq!(
            verdict.witness(),
            brute_force_first_witness(&s).as_ref(),
            "GF({q})"
        );
    }
    let f = field(3);
    let sym = gen_sym(2, &f);
    let first = Mat::from_int_rows(&f, &[&[0, 1], &[1, 1]]).unwrap();
    assert_eq!(
        space_weakly_triangularizable(&sym, Mode::Exhaustive, DEFAULT_BUDGET).unwrap(),
        Verdict::Counterexample(first)
    );
    // [[1,1],[1,2]] (char poly t^2 + 1) is another witness, later in the order
    let other = Mat::from_int_rows(&f, &[&[1, 1], &[1, 2]]).unwrap();
    assert!(sym.contains(&other).unwrap());
    assert!(!poly::splits_over(&f, &other.char_poly()).unwrap());
}

#[test]
fn named_spaces() {
    for q in [3u64, 5, 9] {
        let f = field(q);
        for n in 1..=3 {
            let t = gen_triangular(n, &f, None).unwrap();
            assert_eq!(t.dim(), n * (n + 1) / 2);
            assert!(is_weakly_triangularizable(&t, DEFAULT_BUDGET).unwrap());
        }
        let sl = gen_sl(2, &f);
        assert!(!is_weakly_triangularizable(&sl, DEFAULT_BUDGET).unwrap());
    }
}

#[test]
fn sample_mode_is_deterministic() {
    let f = field(5);
    let s = MatSpace::full(&f, 3);
    let mode = Mode::Sample { count: 50, seed: 7 };
    let a = space_weakly_triangularizable(&s, mode, DEFAULT_BUDGET).unwrap();
    assert_eq!(
        a,
        space_weakly_triangularizable(&s, mode, DEFAULT_BUDGET).unwrap()
    );
    assert!(a.witness().is_some());
    let t = gen_triangular(3, &f, None).unwrap();
    assert_eq!(
        space_weakly_triangularizable(&t, mode, DEFAULT_BUDGET).unwrap(),
        Verdict::NoCounterexample { samples: 50 }
    );
}

#[test]
fn budget_is_enforced() {
    let f = field(3);
    let s = MatSpace::full(&f, 3);
    assert!(matches!(
        space_weakly_triangularizable(&s, Mode::Exhaustive, 1000),
        Err(trispace::Error::BudgetExceeded {
            required: 19683,
            budget: 1000
        })
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn verdict_invariant_under_conjugation_and_transpose(seed in any::<u64>()) {
        let (f, n, mut rng) = random_case(seed, 3, &[3, 5]);
        use rand::Rng;
        let d = rng.gen_range(0..=(n * n).min(4));
        let s = gen_random(n, &f, d, seed).unwrap();
        let p = Mat::random_invertible(&f, n, &mut rng);
        let base = is_weakly_triangularizable(&s, DEFAULT_BUDGET).unwrap();
        prop_assert_eq!(base, is_weakly_triangularizable(&s.conjugate(&p).unwrap(), DEFAULT_BUDGET).unwrap());
        prop_assert_eq!(base, is_weakly_triangularizable(&s.transpose_dual(), DEFAULT_BUDGET).unwrap());
        prop_assert_eq!(s.transpose_dual().transpose_dual(), s);
    }

    #[test]
    fn joint_of_triangularizable_spaces(seed in any::<u64>()) {
        let (f, _, mut rng) = random_case(seed, 2, &[3, 5]);
        use rand::Rng;
        let mut blocks = Vec::new();
        let mut size = 0;
        for _ in 0..rng.gen_range(1..=3) {
            let k = rng.gen_range(1..=2).min(4 - size);
            if k == 0 {
                break;
            }
            size += k;
            let p = Mat::random_invertible(&f, k, &mut rng);
            let t = gen_triangular(k, &f, Some(&p)).unwrap();
            // a random subspace of a triangularizable space stays weakly triangularizable
            let keep = rng.gen_range(0..=t.dim());
            let mats: Vec<Mat> = t.basis().into_iter().take(keep).collect();
            blocks.push(MatSpace::from_span(&f, k, &mats).unwrap());
        }
        let j = gen_joint(&blocks).unwrap();
        prop_assert!(is_weakly_triangularizable(&j, DEFAULT_BUDGET).unwrap());
    }

    #[test]
    fn triangularize_conjugates_to_upper(seed in any::<u64>()) {
        let (f, n, mut rng) = random_case(seed, 4, &[3, 5, 9]);
        let p = Mat::random_invertible(&f, n, &mut rng);
        let m = Mat::random_upper(&f, n, &mut rng).conjugate_by(&p).unwrap();
        prop_assert!(is_triangularizable(&m));
        let b = triangularize(&m).unwrap();
        let upper = b.inverse().unwrap().mul(&m).unwrap().mul(&b).unwrap();
        prop_assert!(upper.is_upper_triangular());
        prop_assert_eq!(upper.char_poly(), m.char_poly());
    }

    #[test]
    fn char_poly_similarity_invariant(seed in any::<u64>()) {
        let (f, n, mut rng) = random_case(seed, 5, &[3, 5, 7, 9]);
        let m = Mat::random(&f, n, &mut rng);
        let p = Mat::random_invertible(&f, n, &mut rng);
        prop_assert_eq!(m.conjugate_by(&p).unwrap().char_poly(), m.char_poly());
        prop_assert_eq!(m.transpose().char_poly(), m.char_poly());
        let cp = m.char_poly();
        prop_assert_eq!(cp.coeff(n - 1), f.neg(m.trace()));
    }

    #[test]
    fn adapted_vectors_are_equivariant_and_dual(seed in any::<u64>()) {
        let (f, n, mut rng) = random_case(seed, 3, &[3, 5]);
        use rand::Rng;
        let p = Mat::random_invertible(&f, n, &mut rng);
        let d = rng.gen_range(0..=n * n);
        let s = gen_random(n, &f, d, seed).unwrap();
        let sp = s.conjugate(&p).unwrap();
        let dual = s.transpose_dual();
        let rev = Mat::reversal(&f, n);
        for x in projective_points(&f, n).take(20) {
            let adapted = is_adapted_vector(&s, &x).unwrap();
            prop_assert_eq!(adapted, is_adapted_vector(&sp, &p.apply(&x).unwrap()).unwrap());
            if n >= 2 {
                let h = hyperplane_from_functional(&f, &rev.apply(&x).unwrap()).unwrap();
                prop_assert_eq!(adapted, is_adapted_hyperplane(&dual, &h).unwrap());
            }
        }
    }
}

#[test]
fn adapted_vector_in_standard_triangular() {
    let f = field(3);
    let t = gen_triangular(3, &f, None).unwrap();
    let e3 = Vector::unit(3, 2);
    assert!(is_adapted_vector(&t, &e3).unwrap());
    assert!(!is_adapted_vector(&t, &Vector::unit(3, 0)).unwrap());
}
