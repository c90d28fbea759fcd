use std::collections::HashSet;

use trispace::flag::{flag_space, invariant_subspaces, is_chain};
use trispace::grassmann::{
    enumerate_subspaces, grassmann_count, ConstrainedGrassmannian, Grassmannian,
};
use trispace::linalg::Subspace;
use trispace::survey::{count_flags, count_flags_formula, gen_triangular};
use trispace::{Elem, FieldCtx, Flag, DEFAULT_BUDGET};

fn q_binomial(m: usize, k: usize, q: u128) -> u128 {
    if k > m {
        return 0;
    }
    if k == 0 || k == m {
        return 1;
    }
    q_binomial(m - 1, k - 1, q) + q.pow(k as u32) * q_binomial(m - 1, k, q)
}

/// Every nonzero vector of `F^m`, then all subspaces of dimension `k` as
/// canonical spans of `k`-tuples.
fn brute_force_subspaces(f: &FieldCtx, m: usize, k: usize) -> HashSet<Subspace> {
    let q = f.q() as usize;
    let vectors: Vec<Vec<Elem>> = (1..q.pow(m as u32))
        .map(|code| {
            (0..m)
                .map(|i| ((code / q.pow(i as u32)) % q) as Elem)
                .collect()
        })
        .collect();
    let mut out = HashSet::new();
    let mut stack = vec![(Subspace::zero(m), 0usize)];
    while let Some((s, start)) = stack.pop() {
        if s.dim() == k {
            out.insert(s);
            continue;
        }
        for (i, v) in vectors.iter().enumerate().skip(start) {
            if !s.contains(f, v) {
                let mut rows = s.rows().to_vec();
                rows.push(v.clone());
                stack.push((Subspace::span(f, m, &rows).unwrap(), i + 1));
            }
        }
    }
    out
}

#[test]
fn counts_match_q_pascal() {
    for q in [2u64, 3, 4, 5, 7, 9] {
        for m in 0..=7 {
            for k in 0..=m + 1 {
                let expected = (k <= m).then(|| q_binomial(m, k, q as u128));
                assert_eq!(grassmann_count(m, k, q), expected, "G({k},{m}) q={q}");
            }
        }
    }
    assert_eq!(grassmann_count(9, 6, 3), Some(q_binomial(9, 6, 3)));
}

#[test]
fn enumeration_matches_brute_force() {
    for q in [3u64, 5] {
        let f = FieldCtx::of_order(q).unwrap();
        for m in 1..=3 {
            for k in 0..=m {
                let listed: Vec<Subspace> = enumerate_subspaces(&f, m, k, &[], DEFAULT_BUDGET)
                    .unwrap()
                    .collect();
                let set: HashSet<Subspace> = listed.iter().cloned().collect();
                assert_eq!(set.len(), listed.len());
                assert_eq!(set, brute_force_subspaces(&f, m, k), "G({k},{m}) q={q}");
            }
        }
    }
}

#[test]
fn cursor_agrees_with_random_access() {
    let f = FieldCtx::of_order(3).unwrap();
    let g = Grassmannian::new(&f, 5, 2).unwrap();
    let (lo, hi) = (100, 400);
    let mut cur = g.cursor(lo, hi);
    let mut idx = lo;
    while let Some(rows) = cur.next_rows() {
        assert_eq!(rows, g.rows_at(idx).as_slice());
        idx += 1;
    }
    assert_eq!(idx, hi);
}

#[test]
fn constrained_enumeration_counts_and_contains() {
    let f = FieldCtx::of_order(3).unwrap();
    let c = vec![vec![1, 0, 0, 1], vec![0, 1, 1, 0]];
    let g = ConstrainedGrassmannian::new(&f, 4, 3, &c).unwrap();
    assert_eq!(g.count(), q_binomial(2, 1, 3));
    let all: Vec<Subspace> = enumerate_subspaces(&f, 4, 3, &c, DEFAULT_BUDGET)
        .unwrap()
        .collect();
    let expected: HashSet<Subspace> = brute_force_subspaces(&f, 4, 3)
        .into_iter()
        .filter(|s| c.iter().all(|v| s.contains(&f, v)))
        .collect();
    assert_eq!(all.into_iter().collect::<HashSet<_>>(), expected);
    assert!(ConstrainedGrassmannian::new(&f, 4, 1, &c).is_err());
    assert!(ConstrainedGrassmannian::new(&f, 4, 3, &[vec![1, 0, 0, 0], vec![2, 0, 0, 0]]).is_err());
}

#[test]
fn flag_counts() {
    for q in [3u64, 5, 7] {
        let f = FieldCtx::of_order(q).unwrap();
        for n in 1..=3 {
            assert_eq!(count_flags(n, &f).unwrap(), count_flags_formula(n, q));
        }
    }
    assert_eq!(count_flags_formula(3, 3), 52);
}

#[test]
fn standard_flag_is_the_invariant_chain_of_triangular() {
    let f = FieldCtx::of_order(5).unwrap();
    let t = gen_triangular(3, &f, None).unwrap();
    let flag = Flag::standard(&f, 3);
    assert_eq!(flag_space(&flag), t);
    let inv = invariant_subspaces(&t, None, DEFAULT_BUDGET).unwrap();
    assert_eq!(inv, flag.subspaces());
    assert!(is_chain(&f, &inv));
}

#[test]
fn triangular_invariant_subspaces_are_the_standard_chain() {
    for q in [3u64, 5] {
        let f = FieldCtx::of_order(q).unwrap();
        for n in 1..=4 {
            let t = gen_triangular(n, &f, None).unwrap();
            let inv = invariant_subspaces(&t, None, DEFAULT_BUDGET).unwrap();
            assert_eq!(inv, Flag::standard(&f, n).subspaces(), "n={n} q={q}");
        }
    }
}
