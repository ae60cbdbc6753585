//! Prime-power finite fields GF(p^m).
//!
//! Elements are stored as their canonical integer encoding: the base-p digits
//! of the value, least significant first, are the coefficients of the
//! polynomial representative modulo the field's modulus. Multiplication goes
//! through exp/log tables built from the primitive element.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::{param, Error, Result};

/// Largest field order accepted by [`Field::new`].
pub const FIELD_BUDGET: u64 = 1 << 20;

/// A field element in canonical encoding. Only meaningful together with the
/// [`Field`] that produced it.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(transparent)]
pub struct Elem(u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);
    pub const ONE: Elem = Elem(1);

    #[inline]
    pub fn value(self) -> u32 {
        self.0
    }

    /// Caller guarantees `v` is below the field order.
    #[inline]
    pub(crate) const fn from_raw(v: u32) -> Elem {
        Elem(v)
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Inner {
    p: u32,
    m: u32,
    q: u32,
    modulus: Vec<u32>,
    alpha: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

/// A concrete finite field with a fixed modulus and primitive element.
/// Cloning is cheap; the arithmetic tables are shared.
#[derive(Clone)]
pub struct Field(Arc<Inner>);

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
            || (self.0.p == other.0.p
                && self.0.m == other.0.m
                && self.0.modulus == other.0.modulus
                && self.0.alpha == other.0.alpha)
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.0.p)
            .field("m", &self.0.m)
            .field("modulus", &self.0.modulus)
            .field("alpha", &self.0.alpha)
            .finish()
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.m == 1 {
            write!(f, "GF({})", self.0.p)
        } else {
            write!(f, "GF({}^{})", self.0.p, self.0.m)
        }
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime factors in increasing order.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Returns `(p, m)` when `q = p^m` for a prime `p`.
pub fn prime_power_parts(q: u64) -> Option<(u32, u32)> {
    let factors = prime_factors(q);
    if factors.len() != 1 {
        return None;
    }
    let p = factors[0];
    let mut m = 0;
    let mut rest = q;
    while rest > 1 {
        rest /= p;
        m += 1;
    }
    Some((p as u32, m))
}

/// Smallest prime power that is at least `lower`.
pub fn smallest_prime_power_at_least(lower: u64) -> u64 {
    let mut q = lower.max(2);
    while prime_power_parts(q).is_none() {
        q += 1;
    }
    q
}

fn order_of(p: u32, m: u32) -> Result<u32> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q.saturating_mul(p as u64);
        if q > FIELD_BUDGET {
            return Err(Error::Capacity {
                order: (p as u64).saturating_pow(m),
                budget: FIELD_BUDGET,
            });
        }
    }
    Ok(q as u32)
}

// Dense polynomials over GF(p) used while choosing the modulus. Little-endian
// coefficient vectors, not necessarily trimmed.

fn zp_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn zp_inv(a: u32, p: u32) -> u32 {
    // p is small; Fermat.
    let mut result = 1u64;
    let mut base = a as u64 % p as u64;
    let mut e = p as u64 - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

fn zp_rem(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let b = zp_trim(b.to_vec());
    let mut r = zp_trim(a.to_vec());
    let db = b.len() - 1;
    let lead_inv = zp_inv(b[db], p) as u64;
    let p64 = p as u64;
    while r.len() > db {
        let shift = r.len() - 1 - db;
        let c = r[r.len() - 1] as u64 * lead_inv % p64;
        for (i, &bi) in b.iter().enumerate() {
            let sub = c * bi as u64 % p64;
            let slot = &mut r[shift + i];
            *slot = ((*slot as u64 + p64 - sub) % p64) as u32;
        }
        r = zp_trim(r);
    }
    r
}

fn digits_of(mut v: u32, p: u32, m: u32) -> Vec<u32> {
    (0..m)
        .map(|_| {
            let d = v % p;
            v /= p;
            d
        })
        .collect()
}

fn value_of(digits: &[u32], p: u32) -> u32 {
    digits.iter().rev().fold(0u32, |acc, &d| acc * p + d)
}

/// Monic modulus of degree `m` is irreducible over GF(p) iff no monic
/// polynomial of degree 1..=m/2 divides it.
pub(crate) fn is_irreducible(modulus: &[u32], p: u32) -> bool {
    let m = modulus.len() as u32 - 1;
    for d in 1..=m / 2 {
        let count = (p as u64).pow(d);
        for low in 0..count {
            let mut divisor = digits_of(low as u32, p, d);
            divisor.push(1);
            if zp_rem(modulus, &divisor, p).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Product of two elements (as digit vectors) modulo a monic modulus.
fn raw_mul(a: &[u32], b: &[u32], modulus: &[u32], p: u32) -> Vec<u32> {
    let m = modulus.len() - 1;
    let p64 = p as u64;
    let mut prod = vec![0u64; 2 * m];
    for (i, &ai) in a.iter().enumerate() {
        if ai == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + ai as u64 * bj as u64) % p64;
        }
    }
    for d in (m..2 * m).rev() {
        let c = prod[d];
        if c == 0 {
            continue;
        }
        prod[d] = 0;
        for i in 0..m {
            let sub = c * modulus[i] as u64 % p64;
            prod[d - m + i] = (prod[d - m + i] + p64 - sub) % p64;
        }
    }
    prod.truncate(m);
    prod.into_iter().map(|x| x as u32).collect()
}

fn raw_pow(a: u32, mut e: u64, modulus: &[u32], p: u32) -> u32 {
    let m = modulus.len() as u32 - 1;
    let mut result = digits_of(1, p, m);
    let mut base = digits_of(a, p, m);
    while e > 0 {
        if e & 1 == 1 {
            result = raw_mul(&result, &base, modulus, p);
        }
        base = raw_mul(&base, &base, modulus, p);
        e >>= 1;
    }
    value_of(&result, p)
}

fn is_primitive(a: u32, q: u32, modulus: &[u32], p: u32) -> bool {
    if a == 0 {
        return false;
    }
    let n = (q - 1) as u64;
    if n == 1 {
        return a == 1;
    }
    if raw_pow(a, n, modulus, p) != 1 {
        return false;
    }
    prime_factors(n)
        .into_iter()
        .all(|r| raw_pow(a, n / r, modulus, p) != 1)
}

impl Field {
    /// Builds GF(p^m) with the smallest irreducible modulus (lower coefficients
    /// compared as a base-p integer) and the smallest primitive element.
    pub fn new(p: u32, m: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(param(format!("characteristic {p} is not prime")));
        }
        if m == 0 {
            return Err(param("extension degree must be at least 1"));
        }
        let q = order_of(p, m)?;
        let modulus = (0..q)
            .map(|low| {
                let mut poly = digits_of(low, p, m);
                poly.push(1);
                poly
            })
            .find(|poly| is_irreducible(poly, p))
            .expect("an irreducible polynomial of every degree exists");
        let alpha = (1..q)
            .find(|&a| is_primitive(a, q, &modulus, p))
            .expect("the multiplicative group is cyclic");
        Ok(Self::with_tables(p, m, q, modulus, alpha))
    }

    /// Rebuilds a field from serialized parts, validating the modulus and the
    /// primitive element.
    pub fn from_parts(p: u32, m: u32, modulus: &[u32], alpha: u32) -> Result<Field> {
        if !is_prime(p as u64) {
            return Err(param(format!("characteristic {p} is not prime")));
        }
        if m == 0 {
            return Err(param("extension degree must be at least 1"));
        }
        let q = order_of(p, m)?;
        if modulus.len() != m as usize + 1 || modulus[m as usize] != 1 {
            return Err(param(format!("modulus must be monic of degree {m}")));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(param("modulus coefficient out of range"));
        }
        if !is_irreducible(modulus, p) {
            return Err(param("modulus is reducible"));
        }
        if alpha >= q || !is_primitive(alpha, q, modulus, p) {
            return Err(param(format!("{alpha} is not a primitive element")));
        }
        Ok(Self::with_tables(p, m, q, modulus.to_vec(), alpha))
    }

    fn with_tables(p: u32, m: u32, q: u32, modulus: Vec<u32>, alpha: u32) -> Field {
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![u32::MAX; q as usize];
        let alpha_digits = digits_of(alpha, p, m);
        let mut cur = 1u32;
        for i in 0..n {
            exp[i] = cur;
            log[cur as usize] = i as u32;
            cur = if m == 1 {
                ((cur as u64 * alpha as u64) % p as u64) as u32
            } else {
                value_of(
                    &raw_mul(&digits_of(cur, p, m), &alpha_digits, &modulus, p),
                    p,
                )
            };
        }
        for i in n..2 * n {
            exp[i] = exp[i - n];
        }
        Field(Arc::new(Inner {
            p,
            m,
            q,
            modulus,
            alpha,
            exp,
            log,
        }))
    }

    /// Field of order `q`, which must be a prime power.
    pub fn of_order(q: u64) -> Result<Field> {
        let (p, m) =
            prime_power_parts(q).ok_or_else(|| param(format!("{q} is not a prime power")))?;
        Field::new(p, m)
    }

    pub fn characteristic(&self) -> u32 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.m
    }

    pub fn order(&self) -> u32 {
        self.0.q
    }

    /// Monic modulus, little-endian coefficients (length `m + 1`).
    pub fn modulus(&self) -> &[u32] {
        &self.0.modulus
    }

    pub fn alpha(&self) -> Elem {
        Elem(self.0.alpha)
    }

    pub fn elem(&self, value: u64) -> Result<Elem> {
        if value < self.0.q as u64 {
            Ok(Elem(value as u32))
        } else {
            Err(param(format!("{value} is not an element of {self}")))
        }
    }

    /// Image of an integer in the prime subfield.
    pub fn from_int(&self, v: i64) -> Elem {
        Elem(v.rem_euclid(self.0.p as i64) as u32)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.0.q).map(Elem)
    }

    pub fn digits(&self, a: Elem) -> Vec<u32> {
        digits_of(a.0, self.0.p, self.0.m)
    }

    pub fn from_digits(&self, digits: &[u32]) -> Result<Elem> {
        if digits.len() != self.0.m as usize || digits.iter().any(|&d| d >= self.0.p) {
            return Err(param("digit vector does not encode a field element"));
        }
        Ok(Elem(value_of(digits, self.0.p)))
    }

    #[inline]
    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let Inner { p, m, .. } = *self.0;
        if p == 2 {
            return Elem(a.0 ^ b.0);
        }
        if m == 1 {
            let s = a.0 + b.0;
            return Elem(if s >= p { s - p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..m {
            let d = (x % p + y % p) % p;
            out += d * place;
            place = place.wrapping_mul(p);
            x /= p;
            y /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn neg(&self, a: Elem) -> Elem {
        let Inner { p, m, .. } = *self.0;
        if p == 2 {
            return a;
        }
        if m == 1 {
            return Elem(if a.0 == 0 { 0 } else { p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut place = 1u32;
        for _ in 0..m {
            let d = x % p;
            out += ((p - d) % p) * place;
            place = place.wrapping_mul(p);
            x /= p;
        }
        Elem(out)
    }

    #[inline]
    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let inner = &*self.0;
        let i = inner.log[a.0 as usize] + inner.log[b.0 as usize];
        Elem(inner.exp[i as usize])
    }

    pub fn inv(&self, a: Elem) -> Result<Elem> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let inner = &*self.0;
        let n = inner.q - 1;
        let l = inner.log[a.0 as usize];
        Ok(Elem(inner.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Elem, b: Elem) -> Result<Elem> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Elem, e: u64) -> Elem {
        if e == 0 {
            return Elem::ONE;
        }
        if a.0 == 0 {
            return Elem::ZERO;
        }
        let inner = &*self.0;
        let n = (inner.q - 1) as u64;
        let l = inner.log[a.0 as usize] as u64;
        Elem(inner.exp[((l * (e % n)) % n) as usize])
    }

    /// `alpha^e` for any integer exponent.
    pub fn alpha_pow(&self, e: i64) -> Elem {
        let n = (self.0.q - 1) as i64;
        Elem(self.0.exp[e.rem_euclid(n) as usize])
    }

    /// Discrete logarithm to base alpha; `None` for zero.
    pub fn log(&self, a: Elem) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.0.log[a.0 as usize])
        }
    }

    pub fn sum<I: IntoIterator<Item = Elem>>(&self, items: I) -> Elem {
        items.into_iter().fold(Elem::ZERO, |acc, x| self.add(acc, x))
    }

    pub fn dot(&self, a: &[Elem], b: &[Elem]) -> Elem {
        debug_assert_eq!(a.len(), b.len());
        a.iter()
            .zip(b)
            .fold(Elem::ZERO, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn gf3_basics() {
        let f = Field::new(3, 1).unwrap();
        assert_eq!(f.order(), 3);
        assert_eq!(f.alpha(), Elem(2));
        assert_eq!(f.inv(Elem(2)).unwrap(), Elem(2));
        assert_eq!(f.inv(Elem::ZERO), Err(Error::DivisionByZero));
    }

    #[test]
    fn gf2_alpha_is_one() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.order(), 2);
        assert_eq!(f.alpha(), Elem::ONE);
        assert_eq!(f.pow(f.alpha(), 1), Elem::ONE);
    }

    #[test]
    fn gf4_modulus_is_unique_irreducible_quadratic() {
        // Exhaustive: the only monic quadratic over GF(2) with no linear factor.
        let irreducible: Vec<Vec<u32>> = (0..4u32)
            .map(|low| vec![low & 1, (low >> 1) & 1, 1])
            .filter(|poly| {
                (0..2u32).all(|root| (poly[0] + poly[1] * root + poly[2] * root * root) % 2 != 0)
            })
            .collect();
        assert_eq!(irreducible, vec![vec![1, 1, 1]]);
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let a = f.alpha();
        let a3 = f.mul(f.mul(a, a), a);
        assert_eq!(a3, Elem::ONE);
        assert_ne!(f.mul(a, a), Elem::ONE);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(Field::new(4, 1), Err(Error::Parameter(_))));
        assert!(matches!(Field::new(2, 0), Err(Error::Parameter(_))));
        assert!(matches!(Field::new(2, 21), Err(Error::Capacity { .. })));
        assert!(Field::new(2, 20).is_ok());
    }

    #[test]
    fn from_parts_validates() {
        let f = Field::new(2, 3).unwrap();
        let g = Field::from_parts(2, 3, f.modulus(), f.alpha().value()).unwrap();
        assert_eq!(f, g);
        // x^3 + x^2 + x + 1 = (x + 1)^3 over GF(2)
        assert!(Field::from_parts(2, 3, &[1, 1, 1, 1], 2).is_err());
        assert!(Field::from_parts(3, 1, &[0, 1], 1).is_err());
    }

    #[test]
    fn alpha_order_is_exactly_q_minus_one() {
        for (p, m) in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1), (2, 3), (3, 2), (2, 4), (13, 1), (5, 2), (2, 6), (3, 4), (2, 10), (2, 12)] {
            let f = Field::new(p, m).unwrap();
            let q = f.order() as u64;
            let a = f.alpha();
            let mut acc = Elem::ONE;
            for k in 1..q - 1 {
                acc = f.mul(acc, a);
                assert_ne!(acc, Elem::ONE, "{f}: alpha^{k} = 1");
            }
            assert_eq!(f.pow(a, q - 1), Elem::ONE);
        }
    }

    #[test]
    fn field_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for (p, m) in [(2, 1), (3, 1), (2, 2), (7, 1), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 8), (11, 2)] {
            let f = Field::new(p, m).unwrap();
            let q = f.order();
            for _ in 0..1000 {
                let a = Elem(rng.gen_range(0..q));
                let b = Elem(rng.gen_range(0..q));
                let c = Elem(rng.gen_range(0..q));
                assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.sub(f.add(a, b), b), a);
                if !a.is_zero() {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), Elem::ONE);
                }
            }
        }
    }

    #[test]
    fn multiplication_matches_polynomial_product() {
        // Table multiplication must agree with schoolbook products modulo the modulus.
        for (p, m) in [(2, 4), (3, 2), (5, 2)] {
            let f = Field::new(p, m).unwrap();
            for a in f.elements() {
                for b in f.elements() {
                    let expect = raw_mul(&f.digits(a), &f.digits(b), f.modulus(), p);
                    assert_eq!(f.digits(f.mul(a, b)), expect);
                }
            }
        }
    }

    #[test]
    fn digits_round_trip() {
        let f = Field::new(3, 3).unwrap();
        for a in f.elements() {
            assert_eq!(f.from_digits(&f.digits(a)).unwrap(), a);
        }
    }

    #[test]
    fn prime_power_helpers() {
        assert_eq!(prime_power_parts(8), Some((2, 3)));
        assert_eq!(prime_power_parts(12), None);
        assert_eq!(prime_power_parts(1), None);
        assert_eq!(smallest_prime_power_at_least(6), 7);
        assert_eq!(smallest_prime_power_at_least(10), 11);
        assert_eq!(smallest_prime_power_at_least(26), 27);
        assert_eq!(smallest_prime_power_at_least(0), 2);
    }
}
