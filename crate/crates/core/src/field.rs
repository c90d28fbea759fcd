//! Prime fields and their extensions GF(p^k).
//!
//! An element is a plain integer in `[0, q)`. Its base-`p` digits, least
//! significant first, are the coefficients of the representative polynomial
//! modulo the defining modulus, so two matrices over the same field compare
//! equal exactly when their entry vectors do.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::poly::{self, Poly};

pub type Elem = u32;

/// Extensions larger than this are rejected; arithmetic goes through
/// exp/log tables of size `q`.
const MAX_EXTENSION_ORDER: u64 = 1 << 24;
const ADD_TABLE_LIMIT: u32 = 256;

#[derive(Clone)]
pub struct FieldCtx {
    inner: Arc<Inner>,
}

struct Inner {
    p: u32,
    k: u32,
    q: u32,
    modulus: Option<Poly>,
    exploratory: bool,
    ext: Option<ExtTables>,
}

struct ExtTables {
    exp: Vec<Elem>,
    log: Vec<u32>,
    add: Option<Vec<Elem>>,
}

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

impl FieldCtx {
    /// Builds GF(p^k) for an odd prime `p`. `modulus` must be supplied
    /// exactly when `k > 1`, as a monic irreducible polynomial over GF(p).
    pub fn new(p: u32, k: u32, modulus: Option<Poly>) -> Result<Self> {
        if p == 2 {
            return Err(Error::InvalidField(
                "characteristic 2 is only available through FieldCtx::exploratory".into(),
            ));
        }
        Self::build(p, k, modulus, false)
    }

    /// Like [`FieldCtx::new`] but also accepts characteristic 2. Such
    /// fields are flagged as exploratory.
    pub fn exploratory(p: u32, k: u32, modulus: Option<Poly>) -> Result<Self> {
        Self::build(p, k, modulus, p == 2)
    }

    pub fn prime(p: u32) -> Result<Self> {
        Self::new(p, 1, None)
    }

    /// GF(q) for a prime power `q`, using [`default_modulus`] when `q` is
    /// not prime. Even `q` is rejected; see [`FieldCtx::exploratory_of_order`].
    pub fn of_order(q: u64) -> Result<Self> {
        Self::order_with(q, false)
    }

    /// Like [`FieldCtx::of_order`] but also accepts powers of 2.
    pub fn exploratory_of_order(q: u64) -> Result<Self> {
        Self::order_with(q, true)
    }

    fn order_with(q: u64, allow_char2: bool) -> Result<Self> {
        let (p, k) = prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        let modulus = if k > 1 {
            Some(default_modulus(p, k)?)
        } else {
            None
        };
        if allow_char2 {
            Self::exploratory(p, k, modulus)
        } else {
            Self::new(p, k, modulus)
        }
    }

    /// Parses a descriptor as [`FromStr`] does, additionally accepting
    /// characteristic 2 when `allow_char2` is set.
    pub fn parse_descriptor(s: &str, allow_char2: bool) -> Result<Self> {
        let bad = || Error::InvalidField(format!("malformed field descriptor `{s}`"));
        let body = s
            .trim()
            .strip_prefix("GF(")
            .and_then(|r| r.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (order, modulus) = match body.split_once(';') {
            Some((o, m)) => (o.trim(), Some(m.trim())),
            None => (body.trim(), None),
        };
        let (p, k) = match order.split_once('^') {
            Some((p, k)) => (
                p.trim().parse::<u32>().map_err(|_| bad())?,
                k.trim().parse::<u32>().map_err(|_| bad())?,
            ),
            None => {
                let q = order.parse::<u64>().map_err(|_| bad())?;
                if modulus.is_some() {
                    return Err(bad());
                }
                return Self::order_with(q, allow_char2);
            }
        };
        let modulus = match modulus {
            Some(m) => {
                let coeffs = m
                    .split(',')
                    .map(|c| c.trim().parse::<u32>().map_err(|_| bad()))
                    .collect::<Result<Vec<_>>>()?;
                Some(Poly::from_coeffs(coeffs))
            }
            None if k > 1 => Some(default_modulus(p, k)?),
            None => None,
        };
        if allow_char2 {
            FieldCtx::exploratory(p, k, modulus)
        } else {
            FieldCtx::new(p, k, modulus)
        }
    }

    fn build(p: u32, k: u32, modulus: Option<Poly>, exploratory: bool) -> Result<Self> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p >= 1 << 31 {
            return Err(Error::InvalidField(format!("characteristic {p} too large")));
        }
        if k == 0 {
            return Err(Error::InvalidField(
                "extension degree must be at least 1".into(),
            ));
        }
        let q = (p as u64)
            .checked_pow(k)
            .filter(|&q| q <= u32::MAX as u64)
            .ok_or_else(|| Error::InvalidField(format!("{p}^{k} does not fit in 32 bits")))?;
        if k == 1 {
            if modulus.is_some() {
                return Err(Error::InvalidField("prime fields take no modulus".into()));
            }
            return Ok(FieldCtx {
                inner: Arc::new(Inner {
                    p,
                    k,
                    q: q as u32,
                    modulus: None,
                    exploratory,
                    ext: None,
                }),
            });
        }
        let modulus =
            modulus.ok_or_else(|| Error::InvalidField(format!("GF({p}^{k}) needs a modulus")))?;
        if q > MAX_EXTENSION_ORDER {
            return Err(Error::InvalidField(format!("GF({p}^{k}) is too large")));
        }
        let base = Self::build(p, 1, None, exploratory)?;
        if modulus.degree() != Some(k as usize) || modulus.leading() != 1 {
            return Err(Error::InvalidField(format!(
                "modulus must be monic of degree {k}"
            )));
        }
        if modulus.coeffs().iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(
                "modulus coefficient out of range".into(),
            ));
        }
        if !is_irreducible(&base, &modulus, k)? {
            return Err(Error::InvalidField(format!(
                "modulus {} is reducible over GF({p})",
                poly::render(&modulus)
            )));
        }
        let ext = ExtTables::build(&base, &modulus, q as u32)?;
        Ok(FieldCtx {
            inner: Arc::new(Inner {
                p,
                k,
                q: q as u32,
                modulus: Some(modulus),
                exploratory,
                ext: Some(ext),
            }),
        })
    }

    #[inline]
    pub fn p(&self) -> u32 {
        self.inner.p
    }

    #[inline]
    pub fn k(&self) -> u32 {
        self.inner.k
    }

    /// Field cardinality `p^k`.
    #[inline]
    pub fn q(&self) -> u32 {
        self.inner.q
    }

    pub fn modulus(&self) -> Option<&Poly> {
        self.inner.modulus.as_ref()
    }

    pub fn is_exploratory(&self) -> bool {
        self.inner.exploratory
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        0..self.inner.q
    }

    /// The prime-subfield image of an integer.
    pub fn from_int(&self, v: i64) -> Elem {
        v.rem_euclid(self.inner.p as i64) as Elem
    }

    pub fn is_valid(&self, a: Elem) -> bool {
        a < self.inner.q
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        match &inner.ext {
            None => {
                let s = a + b;
                if s >= inner.p {
                    s - inner.p
                } else {
                    s
                }
            }
            Some(ext) => match &ext.add {
                Some(table) => table[(a * inner.q + b) as usize],
                None => digit_add(inner.p, a, b),
            },
        }
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let inner = &*self.inner;
        match inner.ext {
            None => {
                if a == 0 {
                    0
                } else {
                    inner.p - a
                }
            }
            Some(_) => {
                let p = inner.p;
                let mut out = 0;
                let mut place = 1;
                let mut rest = a;
                while rest > 0 {
                    let d = rest % p;
                    out += ((p - d) % p) * place;
                    rest /= p;
                    place *= p;
                }
                out
            }
        }
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        let inner = &*self.inner;
        match &inner.ext {
            None => ((a as u64 * b as u64) % inner.p as u64) as Elem,
            Some(ext) => {
                if a == 0 || b == 0 {
                    0
                } else {
                    let s = ext.log[a as usize] + ext.log[b as usize];
                    let m = inner.q - 1;
                    ext.exp[(if s >= m { s - m } else { s }) as usize]
                }
            }
        }
    }

    pub fn pow(&self, a: Elem, mut e: u64) -> Elem {
        let mut base = a;
        let mut acc = 1;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Elem) -> Option<Elem> {
        if a == 0 {
            return None;
        }
        let inner = &*self.inner;
        Some(match &inner.ext {
            None => self.pow(a, inner.p as u64 - 2),
            Some(ext) => {
                let m = inner.q - 1;
                ext.exp[((m - ext.log[a as usize]) % m) as usize]
            }
        })
    }

    pub fn div(&self, a: Elem, b: Elem) -> Option<Elem> {
        self.inv(b).map(|ib| self.mul(a, ib))
    }

    /// The unique `b` with `b^p = a`; exists because finite fields are perfect.
    pub fn pth_root(&self, a: Elem) -> Elem {
        if self.inner.k == 1 {
            a
        } else {
            self.pow(a, (self.inner.q / self.inner.p) as u64)
        }
    }

    pub fn is_square(&self, a: Elem) -> bool {
        if a == 0 || self.inner.p == 2 {
            return true;
        }
        self.pow(a, ((self.inner.q - 1) / 2) as u64) == 1
    }
}

fn digit_add(p: u32, mut a: u32, mut b: u32) -> u32 {
    let mut out = 0;
    let mut place = 1;
    while a > 0 || b > 0 {
        let d = (a % p + b % p) % p;
        out += d * place;
        a /= p;
        b /= p;
        place *= p;
    }
    out
}

impl ExtTables {
    fn build(base: &FieldCtx, modulus: &Poly, q: u32) -> Result<Self> {
        let p = base.p();
        let k = modulus.degree().unwrap_or(0);
        let to_poly = |mut a: u32| {
            let mut c = Vec::with_capacity(k);
            for _ in 0..k {
                c.push(a % p);
                a /= p;
            }
            Poly::from_coeffs(c)
        };
        let to_elem = |f: &Poly| f.coeffs().iter().rev().fold(0u32, |acc, &c| acc * p + c);
        let slow_mul = |a: u32, b: u32| {
            let prod = poly::mul(base, &to_poly(a), &to_poly(b));
            let (_, r) = poly::div_rem(base, &prod, modulus).expect("modulus is nonzero");
            to_elem(&r)
        };
        let order = q - 1;
        let mut exp = vec![0u32; order as usize];
        let mut found = false;
        'candidates: for g in 2..q.max(3) {
            let mut x = 1u32;
            for i in 0..order {
                if i > 0 && x == 1 {
                    continue 'candidates;
                }
                exp[i as usize] = x;
                x = slow_mul(x, g);
            }
            if x == 1 {
                found = true;
                break;
            }
        }
        if !found {
            return Err(Error::InvalidField("no primitive element found".into()));
        }
        let mut log = vec![0u32; q as usize];
        for (i, &e) in exp.iter().enumerate() {
            log[e as usize] = i as u32;
        }
        let add = (q <= ADD_TABLE_LIMIT).then(|| {
            let mut t = vec![0u32; (q * q) as usize];
            for a in 0..q {
                for b in 0..q {
                    t[(a * q + b) as usize] = digit_add(p, a, b);
                }
            }
            t
        });
        Ok(ExtTables { exp, log, add })
    }
}

/// Irreducibility over GF(p): `gcd(t^{p^i} - t, m) = 1` for `i <= k/2`
/// and `m | t^{p^k} - t`.
fn is_irreducible(base: &FieldCtx, m: &Poly, k: u32) -> Result<bool> {
    let t = Poly::x();
    let p = base.p() as u64;
    let mut frob = t.clone();
    for i in 1..=k {
        frob = poly::pow_mod(base, &frob, p, m)?;
        let diff = poly::sub(base, &frob, &t);
        if i <= k / 2 {
            let g = poly::gcd(base, &diff, m)?;
            if g.degree() != Some(0) {
                return Ok(false);
            }
        }
        if i == k && !diff.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The first monic irreducible polynomial of degree `k` over GF(p), with
/// lower coefficients read as a base-`p` integer, constant term least
/// significant.
pub fn default_modulus(p: u32, k: u32) -> Result<Poly> {
    let base = FieldCtx::build(p, 1, None, p == 2)?;
    let count = (p as u64).pow(k);
    for code in 0..count {
        let mut coeffs = Vec::with_capacity(k as usize + 1);
        let mut c = code;
        for _ in 0..k {
            coeffs.push((c % p as u64) as u32);
            c /= p as u64;
        }
        coeffs.push(1);
        let m = Poly::from_coeffs(coeffs);
        if is_irreducible(&base, &m, k)? {
            return Ok(m);
        }
    }
    Err(Error::InvalidField(format!(
        "no irreducible of degree {k} over GF({p})"
    )))
}

fn prime_power(q: u64) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let mut p = 2u64;
    while p * p <= q && !q.is_multiple_of(p) {
        p += 1;
    }
    if !q.is_multiple_of(p) {
        p = q;
    }
    let mut k = 0u32;
    let mut rest = q;
    while rest.is_multiple_of(p) {
        rest /= p;
        k += 1;
    }
    (rest == 1 && p <= u32::MAX as u64).then_some((p as u32, k))
}

impl PartialEq for FieldCtx {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.k == other.inner.k
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldCtx {}

impl Hash for FieldCtx {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.inner.p.hash(state);
        self.inner.k.hash(state);
        self.inner.modulus.hash(state);
    }
}

impl fmt::Display for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.inner.modulus {
            None => write!(f, "GF({})", self.inner.p),
            Some(m) => {
                let coeffs: Vec<String> = m.coeffs().iter().map(|c| c.to_string()).collect();
                write!(
                    f,
                    "GF({}^{}; {})",
                    self.inner.p,
                    self.inner.k,
                    coeffs.join(",")
                )
            }
        }
    }
}

impl fmt::Debug for FieldCtx {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")?;
        if self.inner.exploratory {
            write!(f, " [exploratory]")?;
        }
        Ok(())
    }
}

/// Parses `GF(p)`, `GF(q)` for a prime power `q`, `GF(p^k)` or
/// `GF(p^k; c0,c1,...,ck)`. Characteristic 2 is rejected.
impl FromStr for FieldCtx {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        FieldCtx::parse_descriptor(s, false)
    }
}
