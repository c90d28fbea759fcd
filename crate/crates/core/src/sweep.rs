//! Hot-path split testing for exhaustive element sweeps.
//!
//! A sweep walks the projective points of a span: each coefficient vector
//! whose first nonzero entry is 1, in lexicographic order. Splitting of the
//! characteristic polynomial is invariant under nonzero scaling, so this
//! visits every verdict-relevant element once, and the first failing
//! normalized vector is also the lexicographically first failing vector
//! overall.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use crate::field::{Elem, FieldCtx};
use crate::mat::berkowitz;

const MATRIX_TABLE_LIMIT: u128 = 1 << 20;
const CHARPOLY_TABLE_LIMIT: u128 = 1 << 16;

/// Split verdicts for `n x n` matrices over one field, backed by lookup
/// tables when they are small enough.
pub struct SplitOracle {
    field: FieldCtx,
    n: usize,
    by_matrix: Option<Vec<u64>>,
    by_charpoly: Option<Vec<bool>>,
}

impl SplitOracle {
    pub fn new(field: &FieldCtx, n: usize) -> Self {
        let q = field.q() as u128;
        let by_charpoly = (q.pow(n as u32) <= CHARPOLY_TABLE_LIMIT).then(|| {
            let count = q.pow(n as u32) as usize;
            let mut coeffs = vec![0; n + 1];
            (0..count)
                .map(|code| {
                    coeffs[0] = 1;
                    let mut c = code as u64;
                    for slot in coeffs.iter_mut().skip(1) {
                        *slot = (c % q as u64) as Elem;
                        c /= q as u64;
                    }
                    splits_by_deflation(field, &coeffs)
                })
                .collect()
        });
        let mut oracle = SplitOracle {
            field: field.clone(),
            n,
            by_matrix: None,
            by_charpoly,
        };
        let cells = (n * n) as u32;
        if q.checked_pow(cells)
            .is_some_and(|c| c <= MATRIX_TABLE_LIMIT)
        {
            let count = q.pow(cells) as usize;
            let mut bits = vec![0u64; count.div_ceil(64)];
            let mut entries = vec![0; n * n];
            for code in 0..count {
                let mut c = code as u64;
                for e in entries.iter_mut() {
                    *e = (c % q as u64) as Elem;
                    c /= q as u64;
                }
                if oracle.splits_uncached(&entries) {
                    bits[code / 64] |= 1 << (code % 64);
                }
            }
            oracle.by_matrix = Some(bits);
        }
        oracle
    }

    /// Process-wide cache, one oracle per `(field, n)`.
    pub fn shared(field: &FieldCtx, n: usize) -> Arc<SplitOracle> {
        type Cache = Mutex<HashMap<(FieldCtx, usize), Arc<SplitOracle>>>;
        static CACHE: OnceLock<Cache> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(o) = cache.lock().expect("oracle cache").get(&(field.clone(), n)) {
            return Arc::clone(o);
        }
        let built = Arc::new(SplitOracle::new(field, n));
        cache
            .lock()
            .expect("oracle cache")
            .entry((field.clone(), n))
            .or_insert(built)
            .clone()
    }

    pub fn field(&self) -> &FieldCtx {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Whether the matrix with these row-major entries has a split
    /// characteristic polynomial.
    #[inline]
    pub fn splits(&self, entries: &[Elem]) -> bool {
        if let Some(bits) = &self.by_matrix {
            let q = self.field.q() as usize;
            let code = entries
                .iter()
                .rev()
                .fold(0usize, |acc, &e| acc * q + e as usize);
            return bits[code / 64] >> (code % 64) & 1 == 1;
        }
        self.splits_uncached(entries)
    }

    fn splits_uncached(&self, entries: &[Elem]) -> bool {
        let desc = berkowitz(&self.field, self.n, entries);
        match &self.by_charpoly {
            Some(table) => {
                let q = self.field.q() as usize;
                let code = desc[1..]
                    .iter()
                    .rev()
                    .fold(0usize, |acc, &c| acc * q + c as usize);
                table[code]
            }
            None => splits_by_deflation(&self.field, &desc),
        }
    }
}

/// Splitting test for a polynomial given highest degree first: deflate by
/// every root found while scanning the field in increasing order.
pub(crate) fn splits_by_deflation(f: &FieldCtx, desc: &[Elem]) -> bool {
    let mut cur = desc.to_vec();
    let mut quot = Vec::with_capacity(cur.len());
    for z in f.elements() {
        if cur.len() <= 1 {
            return true;
        }
        loop {
            // synthetic division by (t - z)
            quot.clear();
            let mut acc = 0;
            for &c in &cur {
                acc = f.add(f.mul(acc, z), c);
                quot.push(acc);
            }
            if quot.pop() != Some(0) {
                break;
            }
            std::mem::swap(&mut cur, &mut quot);
            if cur.len() <= 1 {
                return true;
            }
        }
    }
    cur.len() <= 1
}

/// First element of the span of `gens` whose characteristic polynomial does
/// not split, scanning normalized coefficient vectors lexicographically.
/// Returns its coefficient vector.
pub fn first_non_split(oracle: &SplitOracle, gens: &[Vec<Elem>]) -> Option<Vec<Elem>> {
    let f = oracle.field();
    let d = gens.len();
    if d == 0 {
        return None;
    }
    let width = gens[0].len();
    let k = f.k() as usize;
    let p = f.p();
    // scaled[pos * k + j] = t^j * gens[pos]; bumping digit j of coefficient
    // pos adds exactly this, including on wrap-around since p * x = 0
    let scaled: Vec<Vec<Elem>> = gens
        .iter()
        .flat_map(|g| {
            (0..k).map(move |j| {
                let tj = p.pow(j as u32);
                g.iter().map(|&x| f.mul(x, tj)).collect::<Vec<_>>()
            })
        })
        .collect();
    let mut cur = vec![0; width];
    let mut digits = vec![0u32; d * k];
    for lead in (0..d).rev() {
        cur.copy_from_slice(&gens[lead]);
        digits.iter_mut().for_each(|x| *x = 0);
        loop {
            if !oracle.splits(&cur) {
                let mut coeffs = vec![0; d];
                coeffs[lead] = 1;
                for pos in lead + 1..d {
                    coeffs[pos] = digits[pos * k..(pos + 1) * k]
                        .iter()
                        .rev()
                        .fold(0, |acc, &x| acc * p + x);
                }
                return Some(coeffs);
            }
            if !advance(f, &scaled, &mut digits, &mut cur, lead + 1, d, k, p) {
                break;
            }
        }
    }
    None
}

/// Increments the tail `(lead..d)` of the coefficient odometer, keeping
/// `cur` equal to the combination. Returns `false` once the tail wraps.
#[allow(clippy::too_many_arguments)]
#[inline]
fn advance(
    f: &FieldCtx,
    scaled: &[Vec<Elem>],
    digits: &mut [u32],
    cur: &mut [Elem],
    lead: usize,
    d: usize,
    k: usize,
    p: u32,
) -> bool {
    for pos in (lead..d).rev() {
        for j in 0..k {
            let slot = pos * k + j;
            for (c, &g) in cur.iter_mut().zip(&scaled[slot]) {
                *c = f.add(*c, g);
            }
            digits[slot] += 1;
            if digits[slot] < p {
                return true;
            }
            digits[slot] = 0;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mat::Mat;
    use crate::poly;

    #[test]
    fn deflation_matches_radical_test() {
        for q in [3u64, 5, 9] {
            let f = FieldCtx::of_order(q).unwrap();
            let qq = f.q() as u64;
            for deg in 1..=3u32 {
                for code in 0..qq.pow(deg) {
                    let mut asc = Vec::new();
                    let mut c = code;
                    for _ in 0..deg {
                        asc.push((c % qq) as Elem);
                        c /= qq;
                    }
                    asc.push(1);
                    let p = poly::Poly::from_coeffs(asc.clone());
                    let desc: Vec<_> = asc.iter().rev().copied().collect();
                    assert_eq!(
                        splits_by_deflation(&f, &desc),
                        poly::splits_over(&f, &p).unwrap(),
                        "{q} {asc:?}"
                    );
                }
            }
        }
    }

    #[test]
    fn table_agrees_with_char_poly_route() {
        let f = FieldCtx::prime(3).unwrap();
        let oracle = SplitOracle::new(&f, 2);
        assert!(oracle.by_matrix.is_some());
        for code in 0..81u32 {
            let mut c = code;
            let entries: Vec<Elem> = (0..4)
                .map(|_| {
                    let e = c % 3;
                    c /= 3;
                    e
                })
                .collect();
            let m = Mat::from_entries(&f, 2, entries.clone()).unwrap();
            assert_eq!(
                oracle.splits(&entries),
                poly::splits_over(&f, &m.char_poly()).unwrap()
            );
        }
    }

    #[test]
    fn projective_sweep_finds_first_witness() {
        let f = FieldCtx::prime(3).unwrap();
        let oracle = SplitOracle::new(&f, 2);
        // basis E11, E12, E21, E22 of M_2
        let gens: Vec<Vec<Elem>> = (0..4)
            .map(|i| (0..4).map(|j| (i == j) as Elem).collect())
            .collect();
        assert_eq!(first_non_split(&oracle, &gens), Some(vec![0, 1, 1, 1]));
        let upper = vec![gens[0].clone(), gens[1].clone(), gens[3].clone()];
        assert_eq!(first_non_split(&oracle, &upper), None);
        assert_eq!(first_non_split(&oracle, &[]), None);
    }
}
