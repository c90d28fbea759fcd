use proptest::prelude::*;
use trispace::poly::{self, Poly};
use trispace::{Elem, FieldCtx};

fn fields() -> Vec<FieldCtx> {
    [3u64, 5, 7, 9, 25, 27]
        .iter()
        .map(|&q| FieldCtx::of_order(q).unwrap())
        .collect()
}

fn field_and_poly(max_deg: usize) -> impl Strategy<Value = (FieldCtx, Poly)> {
    (
        0..6usize,
        prop::collection::vec(any::<u32>(), 1..=max_deg + 1),
    )
        .prop_map(|(i, raw)| {
            let f = fields()[i].clone();
            let coeffs: Vec<Elem> = raw.iter().map(|&c| c % f.q()).collect();
            (f, Poly::from_coeffs(coeffs))
        })
}

fn from_roots(f: &FieldCtx, roots: &[Elem]) -> Poly {
    roots.iter().fold(Poly::one(), |acc, &r| {
        poly::mul(f, &acc, &Poly::linear(f, r))
    })
}

proptest! {
    #[test]
    fn field_axioms(i in 0..6usize, a in any::<u32>(), b in any::<u32>(), c in any::<u32>()) {
        let f = &fields()[i];
        let (a, b, c) = (a % f.q(), b % f.q(), c % f.q());
        prop_assert_eq!(f.add(a, b), f.add(b, a));
        prop_assert_eq!(f.mul(a, f.mul(b, c)), f.mul(f.mul(a, b), c));
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.sub(f.add(a, b), b), a);
        if b != 0 {
            prop_assert_eq!(f.mul(f.div(a, b).unwrap(), b), a);
        }
        // Frobenius is additive
        let p = f.p() as u64;
        prop_assert_eq!(f.pow(f.add(a, b), p), f.add(f.pow(a, p), f.pow(b, p)));
        prop_assert_eq!(f.pow(a, f.q() as u64), a);
    }

    #[test]
    fn division_with_remainder((f, a) in field_and_poly(6), b_raw in prop::collection::vec(any::<u32>(), 1..4)) {
        let b = Poly::from_coeffs(b_raw.iter().map(|&c| c % f.q()).collect());
        prop_assume!(!b.is_zero());
        let (quo, rem) = poly::div_rem(&f, &a, &b).unwrap();
        prop_assert_eq!(poly::add(&f, &poly::mul(&f, &quo, &b), &rem), a);
        prop_assert!(rem.degree().is_none_or(|d| d < b.degree().unwrap()));
    }

    #[test]
    fn gcd_divides_both((f, a) in field_and_poly(5), (_, b) in field_and_poly(5)) {
        let b = Poly::from_coeffs(b.coeffs().iter().map(|&c| c % f.q()).collect());
        prop_assume!(!a.is_zero() || !b.is_zero());
        let g = poly::gcd(&f, &a, &b).unwrap();
        prop_assert!(g.is_monic());
        prop_assert!(poly::divides(&f, &g, &a));
        prop_assert!(poly::divides(&f, &g, &b));
    }

    #[test]
    fn products_of_linear_factors_split(i in 0..6usize, raw in prop::collection::vec(any::<u32>(), 1..6)) {
        let f = &fields()[i];
        let roots: Vec<Elem> = raw.iter().map(|&r| r % f.q()).collect();
        let p = from_roots(f, &roots);
        prop_assert!(poly::splits_over(f, &p).unwrap());
        let total: usize = poly::roots_with_multiplicity(f, &p).unwrap().iter().map(|&(_, m)| m).sum();
        prop_assert_eq!(total, roots.len());
        let rad = poly::radical(f, &p).unwrap();
        let mut distinct = roots.clone();
        distinct.sort_unstable();
        distinct.dedup();
        prop_assert_eq!(rad, from_roots(f, &distinct));
    }

    #[test]
    fn splitting_matches_root_count((f, p) in field_and_poly(5)) {
        prop_assume!(p.degree().is_some_and(|d| d >= 1));
        let p = poly::monic(&f, &p);
        let total: usize = f
            .elements()
            .map(|r| {
                let mut cur = p.clone();
                let mut mult = 0;
                let lin = Poly::linear(&f, r);
                while cur.degree().is_some_and(|d| d >= 1) && poly::divides(&f, &lin, &cur) {
                    cur = poly::div_exact(&f, &cur, &lin).unwrap();
                    mult += 1;
                }
                mult
            })
            .sum();
        prop_assert_eq!(poly::splits_over(&f, &p).unwrap(), total == p.degree().unwrap());
    }
}

#[test]
fn irreducible_quadratics_do_not_split() {
    for q in [3u64, 5, 7, 9] {
        let f = FieldCtx::of_order(q).unwrap();
        let nonsquare = f.elements().find(|&a| !f.is_square(a)).unwrap();
        // t^2 - c with c a non-square
        let p = Poly::from_coeffs(vec![f.neg(nonsquare), 0, 1]);
        assert!(!poly::splits_over(&f, &p).unwrap());
        assert!(f.elements().all(|z| poly::eval(&f, &p, z) != 0));
    }
}

#[test]
fn descriptors() {
    let f: FieldCtx = "GF(9)".parse().unwrap();
    assert_eq!(f.to_string(), "GF(3^2; 1,0,1)");
    let g: FieldCtx = "GF(3^2; 2,2,1)".parse().unwrap();
    assert_eq!(g.q(), 9);
    assert_ne!(f, g);
    assert_eq!(f.to_string().parse::<FieldCtx>().unwrap(), f);
    for bad in [
        "GF(6)",
        "GF(1)",
        "GF(3^2; 2,0,1)",
        "GF(9; 1,0,1)",
        "F(3)",
        "GF(2)",
        "GF(8)",
    ] {
        assert!(bad.parse::<FieldCtx>().is_err(), "{bad}");
    }
    assert!(FieldCtx::parse_descriptor("GF(8)", true)
        .unwrap()
        .is_exploratory());
}
