//! Dense univariate polynomials over a [`FieldCtx`].
//!
//! Coefficients are stored constant term first with no trailing zeros. All
//! arithmetic takes the field explicitly; a `Poly` is just its coefficients.

use crate::error::{Error, Result};
use crate::field::{Elem, FieldCtx};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Elem>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly { coeffs: vec![1] }
    }

    /// The indeterminate `t`.
    pub fn x() -> Self {
        Poly { coeffs: vec![0, 1] }
    }

    pub fn constant(c: Elem) -> Self {
        Poly::from_coeffs(vec![c])
    }

    pub fn monomial(c: Elem, degree: usize) -> Self {
        let mut coeffs = vec![0; degree + 1];
        coeffs[degree] = c;
        Poly::from_coeffs(coeffs)
    }

    /// `t - a`.
    pub fn linear(f: &FieldCtx, a: Elem) -> Self {
        Poly::from_coeffs(vec![f.neg(a), 1])
    }

    pub fn from_coeffs(mut coeffs: Vec<Elem>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// Coefficients from signed integers, reduced into the prime subfield.
    pub fn from_ints(f: &FieldCtx, coeffs: &[i64]) -> Self {
        Poly::from_coeffs(coeffs.iter().map(|&c| f.from_int(c)).collect())
    }

    pub fn coeffs(&self) -> &[Elem] {
        &self.coeffs
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Elem {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == 1
    }

    pub fn coeff(&self, i: usize) -> Elem {
        self.coeffs.get(i).copied().unwrap_or(0)
    }
}

pub fn add(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::from_coeffs((0..n).map(|i| f.add(a.coeff(i), b.coeff(i))).collect())
}

pub fn neg(f: &FieldCtx, a: &Poly) -> Poly {
    Poly::from_coeffs(a.coeffs.iter().map(|&c| f.neg(c)).collect())
}

pub fn sub(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    let n = a.coeffs.len().max(b.coeffs.len());
    Poly::from_coeffs((0..n).map(|i| f.sub(a.coeff(i), b.coeff(i))).collect())
}

pub fn scale(f: &FieldCtx, a: &Poly, c: Elem) -> Poly {
    Poly::from_coeffs(a.coeffs.iter().map(|&x| f.mul(x, c)).collect())
}

pub fn mul(f: &FieldCtx, a: &Poly, b: &Poly) -> Poly {
    if a.is_zero() || b.is_zero() {
        return Poly::zero();
    }
    let mut out = vec![0; a.coeffs.len() + b.coeffs.len() - 1];
    for (i, &x) in a.coeffs.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.coeffs.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(x, y));
        }
    }
    Poly::from_coeffs(out)
}

/// Euclidean division `a = q*b + r` with `deg r < deg b`.
pub fn div_rem(f: &FieldCtx, a: &Poly, b: &Poly) -> Result<(Poly, Poly)> {
    let db = b.degree().ok_or(Error::ZeroPolynomial)?;
    let inv_lead = f.inv(b.leading()).ok_or(Error::ZeroPolynomial)?;
    let mut rem = a.coeffs.clone();
    if rem.len() <= db {
        return Ok((Poly::zero(), a.clone()));
    }
    let mut quot = vec![0; rem.len() - db];
    for i in (0..quot.len()).rev() {
        let c = f.mul(rem[i + db], inv_lead);
        quot[i] = c;
        if c == 0 {
            continue;
        }
        for (j, &bc) in b.coeffs.iter().enumerate() {
            rem[i + j] = f.sub(rem[i + j], f.mul(c, bc));
        }
    }
    rem.truncate(db);
    Ok((Poly::from_coeffs(quot), Poly::from_coeffs(rem)))
}

pub fn rem(f: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    div_rem(f, a, b).map(|(_, r)| r)
}

/// Whether `d` divides `a`. The zero polynomial divides only zero.
pub fn divides(f: &FieldCtx, d: &Poly, a: &Poly) -> bool {
    if d.is_zero() {
        return a.is_zero();
    }
    rem(f, a, d).map(|r| r.is_zero()).unwrap_or(false)
}

/// Exact quotient; errors when `b` does not divide `a`.
pub fn div_exact(f: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    let (q, r) = div_rem(f, a, b)?;
    if !r.is_zero() {
        return Err(Error::arg("inexact polynomial division"));
    }
    Ok(q)
}

pub fn monic(f: &FieldCtx, a: &Poly) -> Poly {
    match f.inv(a.leading()) {
        Some(inv) => scale(f, a, inv),
        None => Poly::zero(),
    }
}

/// Monic greatest common divisor.
pub fn gcd(f: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    if a.is_zero() && b.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut x = a.clone();
    let mut y = b.clone();
    while !y.is_zero() {
        let r = rem(f, &x, &y)?;
        x = y;
        y = r;
    }
    Ok(monic(f, &x))
}

pub fn lcm(f: &FieldCtx, a: &Poly, b: &Poly) -> Result<Poly> {
    let g = gcd(f, a, b)?;
    Ok(monic(f, &div_exact(f, &mul(f, a, b), &g)?))
}

pub fn derivative(f: &FieldCtx, a: &Poly) -> Poly {
    Poly::from_coeffs(
        a.coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.mul(c, f.from_int(i as i64)))
            .collect(),
    )
}

pub fn eval(f: &FieldCtx, a: &Poly, z: Elem) -> Elem {
    a.coeffs
        .iter()
        .rev()
        .fold(0, |acc, &c| f.add(f.mul(acc, z), c))
}

/// `base^e mod m`.
pub fn pow_mod(f: &FieldCtx, base: &Poly, mut e: u64, m: &Poly) -> Result<Poly> {
    let mut acc = rem(f, &Poly::one(), m)?;
    let mut b = rem(f, base, m)?;
    while e > 0 {
        if e & 1 == 1 {
            acc = rem(f, &mul(f, &acc, &b), m)?;
        }
        b = rem(f, &mul(f, &b, &b), m)?;
        e >>= 1;
    }
    Ok(acc)
}

/// Monic product of the distinct irreducible factors of `a`.
///
/// With `g = gcd(a, a')`, every factor of multiplicity not divisible by `p`
/// survives in `a / g` and every repeated factor survives in `g`, so the
/// radical is `lcm(a / g, rad(g))`. When `a' = 0`, `a(t) = h(t)^p` for the
/// coefficientwise `p`-th root `h` of the `t^p`-decimated coefficients.
pub fn radical(f: &FieldCtx, a: &Poly) -> Result<Poly> {
    let deg = a.degree().ok_or(Error::ZeroPolynomial)?;
    if deg == 0 {
        return Ok(Poly::one());
    }
    let d = derivative(f, a);
    if d.is_zero() {
        let p = f.p() as usize;
        let root: Vec<Elem> = a.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
        return radical(f, &Poly::from_coeffs(root));
    }
    let g = gcd(f, a, &d)?;
    let w = monic(f, &div_exact(f, a, &g)?);
    if g.degree() == Some(0) {
        return Ok(w);
    }
    lcm(f, &w, &radical(f, &g)?)
}

pub fn is_squarefree(f: &FieldCtx, a: &Poly) -> Result<bool> {
    let g = gcd(f, a, &derivative(f, a))?;
    Ok(g.degree() == Some(0))
}

/// Whether `a` is a product of linear factors over `f`: the radical must
/// divide `t^q - t`.
pub fn splits_over(f: &FieldCtx, a: &Poly) -> Result<bool> {
    let r = radical(f, a)?;
    match r.degree() {
        Some(0) | Some(1) => Ok(true),
        _ => {
            let tq = pow_mod(f, &Poly::x(), f.q() as u64, &r)?;
            Ok(rem(f, &sub(f, &tq, &Poly::x()), &r)?.is_zero())
        }
    }
}

/// All roots in `f` with multiplicity, in increasing element order.
pub fn roots_with_multiplicity(f: &FieldCtx, a: &Poly) -> Result<Vec<(Elem, usize)>> {
    if a.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    let mut out = Vec::new();
    if a.degree() == Some(0) {
        return Ok(out);
    }
    let tq = pow_mod(f, &Poly::x(), f.q() as u64, a)?;
    let split_part = gcd(f, a, &sub(f, &tq, &Poly::x()))?;
    if split_part.degree() == Some(0) {
        return Ok(out);
    }
    for z in f.elements() {
        if eval(f, &split_part, z) != 0 {
            continue;
        }
        let lin = Poly::linear(f, z);
        let mut rest = a.clone();
        let mut mult = 0;
        loop {
            let (q, r) = div_rem(f, &rest, &lin)?;
            if !r.is_zero() {
                break;
            }
            mult += 1;
            rest = q;
        }
        out.push((z, mult));
    }
    Ok(out)
}

/// Text form used in reports: coefficients constant term first, e.g. `[1,0,1]`.
pub fn render(a: &Poly) -> String {
    let parts: Vec<String> = a.coeffs.iter().map(|c| c.to_string()).collect();
    format!("[{}]", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gf(q: u64) -> FieldCtx {
        FieldCtx::of_order(q).unwrap()
    }

    #[test]
    fn gcd_examples() {
        let f = gf(3);
        let a = Poly::from_ints(&f, &[-1, 0, 1]);
        let b = Poly::from_ints(&f, &[-1, 1]);
        assert_eq!(gcd(&f, &a, &b).unwrap(), b);
        let a = Poly::from_ints(&f, &[1, 0, 1]);
        let b = Poly::from_ints(&f, &[1, 1]);
        assert_eq!(gcd(&f, &a, &b).unwrap(), Poly::one());
        assert_eq!(gcd(&f, &Poly::zero(), &Poly::x()).unwrap(), Poly::x());
        assert!(matches!(
            gcd(&f, &Poly::zero(), &Poly::zero()),
            Err(Error::ZeroPolynomial)
        ));
    }

    #[test]
    fn radical_examples() {
        let f = gf(3);
        let tm1 = Poly::from_ints(&f, &[-1, 1]);
        let cube = mul(&f, &tm1, &mul(&f, &tm1, &tm1));
        assert_eq!(radical(&f, &cube).unwrap(), tm1);
        let sq_free = Poly::from_ints(&f, &[1, 0, 1]);
        assert_eq!(radical(&f, &sq_free).unwrap(), sq_free);
        // t^3 has zero derivative in characteristic 3
        let t3 = Poly::monomial(1, 3);
        assert!(derivative(&f, &t3).is_zero());
        assert_eq!(radical(&f, &t3).unwrap(), Poly::x());
        assert!(radical(&f, &Poly::zero()).is_err());
    }

    #[test]
    fn radical_over_extension_uses_frobenius_root() {
        let f = gf(9);
        // (t - x)^3 = t^3 - x^3 in characteristic 3, with x encoded as 3
        let x = 3;
        let a = Poly::from_coeffs(vec![f.neg(f.pow(x, 3)), 0, 0, 1]);
        assert_eq!(radical(&f, &a).unwrap(), Poly::linear(&f, x));
    }

    #[test]
    fn splits_examples() {
        let f3 = gf(3);
        assert!(splits_over(&f3, &Poly::monomial(1, 2)).unwrap());
        // t^2 - 2: squares in GF(3) are {0, 1}
        let a = Poly::from_ints(&f3, &[-2, 0, 1]);
        assert!(f3.elements().all(|z| eval(&f3, &a, z) != 0));
        assert!(!splits_over(&f3, &a).unwrap());
        let f9 = gf(9);
        let b = Poly::from_ints(&f9, &[1, 0, 1]);
        assert!(splits_over(&f9, &b).unwrap());
        assert!(splits_over(&f3, &Poly::zero()).is_err());
    }

    #[test]
    fn roots_examples() {
        let f3 = gf(3);
        let a = mul(
            &f3,
            &mul(&f3, &Poly::linear(&f3, 1), &Poly::linear(&f3, 1)),
            &Poly::linear(&f3, 2),
        );
        assert_eq!(
            roots_with_multiplicity(&f3, &a).unwrap(),
            vec![(1, 2), (2, 1)]
        );
        let b = Poly::from_ints(&f3, &[1, 0, 1]);
        assert!(roots_with_multiplicity(&f3, &b).unwrap().is_empty());
        let f9 = gf(9);
        assert_eq!(
            roots_with_multiplicity(&f9, &Poly::x()).unwrap(),
            vec![(0, 1)]
        );
    }

    #[test]
    fn div_rem_reconstructs() {
        let f = gf(5);
        let a = Poly::from_ints(&f, &[3, 1, 4, 1, 2]);
        let b = Poly::from_ints(&f, &[2, 0, 3]);
        let (q, r) = div_rem(&f, &a, &b).unwrap();
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(add(&f, &mul(&f, &q, &b), &r), a);
    }

    #[test]
    fn render_is_constant_first() {
        let f = gf(3);
        assert_eq!(render(&Poly::from_ints(&f, &[1, 0, 1])), "[1,0,1]");
        assert_eq!(render(&Poly::zero()), "[]");
    }
}
