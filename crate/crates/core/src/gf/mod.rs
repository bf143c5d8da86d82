//! Arithmetic in the finite fields GF(p^h), q = p^h ≤ 4096.
//!
//! Elements are stored by their integer encoding `Σ cᵢ pⁱ`, where `cᵢ` are the
//! coefficients of the polynomial-basis representation modulo the field's
//! modulus. The encoding doubles as the canonical total order on elements, which
//! every downstream enumeration relies on for reproducible tie-breaking.
//!
//! The modulus for each `(p, h)` comes from an embedded table of Conway
//! polynomials, so the same parameters always produce the same field.

mod conway;

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Largest field order supported.
pub const MAX_ORDER: u32 = 4096;

/// Fields up to this order get precomputed addition/multiplication tables.
pub const TABLE_THRESHOLD: u32 = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("field order {p}^{h} exceeds {MAX_ORDER}")]
    OrderTooLarge { p: u32, h: u32 },
    #[error("extension degree must be at least 1")]
    ZeroDegree,
    #[error("modulus is not a monic irreducible polynomial of degree {0}")]
    BadModulus(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{den} is not invertible modulo {modulus}")]
    NotInvertible { den: i64, modulus: u64 },
    #[error("{0} is not the encoding of a field element")]
    NotAnElement(u32),
}

/// A field element, identified by its integer encoding.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FieldElem(u16);

impl FieldElem {
    pub const ZERO: FieldElem = FieldElem(0);
    pub const ONE: FieldElem = FieldElem(1);

    /// Wraps a raw encoding without range checking; use [`Field::elem`] for
    /// untrusted input.
    #[inline]
    pub fn from_encoding(e: u32) -> FieldElem {
        FieldElem(e as u16)
    }

    #[inline]
    pub fn encoding(self) -> u32 {
        self.0 as u32
    }

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u16>,
    mul: Vec<u16>,
    neg: Vec<u16>,
    inv: Vec<u16>,
}

/// The finite field GF(p^h).
///
/// Immutable after construction; share it behind an `Arc` across workers.
pub struct Field {
    p: u32,
    h: u32,
    q: u32,
    /// Monic modulus, constant term first (length h + 1).
    modulus: Vec<u32>,
    tables: Option<Tables>,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("h", &self.h)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.h == other.h && self.modulus == other.modulus
    }
}

impl Eq for Field {}

pub fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Splits `q` as `p^h` with `p` prime, if possible.
pub fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q.is_multiple_of(*d))?;
    let (mut rest, mut h) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        h += 1;
    }
    (rest == 1).then_some((p, h))
}

fn checked_order(p: u32, h: u32) -> Result<u32, GfError> {
    if !is_prime(p) {
        return Err(GfError::NotPrime(p));
    }
    if h == 0 {
        return Err(GfError::ZeroDegree);
    }
    let mut q: u64 = 1;
    for _ in 0..h {
        q *= p as u64;
        if q > MAX_ORDER as u64 {
            return Err(GfError::OrderTooLarge { p, h });
        }
    }
    Ok(q as u32)
}

impl Field {
    /// The field of order `p^h` with its tabulated Conway modulus (`x` for prime fields).
    pub fn new(p: u32, h: u32) -> Result<Field, GfError> {
        checked_order(p, h)?;
        let modulus = if h == 1 {
            vec![0, 1]
        } else {
            conway::CONWAY
                .iter()
                .find(|(cp, ch, _)| *cp == p && *ch == h)
                .map(|(_, _, c)| c.to_vec())
                .ok_or(GfError::OrderTooLarge { p, h })?
        };
        Field::with_modulus(p, modulus)
    }

    /// The field of order `q`, which must be a prime power.
    pub fn of_order(q: u32) -> Result<Field, GfError> {
        let (p, h) = prime_power(q).ok_or(GfError::NotPrime(q))?;
        Field::new(p, h)
    }

    /// Builds `GF(p)[x]/(modulus)`; the modulus is checked for irreducibility.
    pub fn with_modulus(p: u32, modulus: Vec<u32>) -> Result<Field, GfError> {
        let h = modulus.len().saturating_sub(1) as u32;
        let q = checked_order(p, h)?;
        if modulus.last() != Some(&1) || modulus.iter().any(|&c| c >= p) {
            return Err(GfError::BadModulus(h));
        }
        if h > 1 && !poly::is_irreducible(&modulus, p) {
            return Err(GfError::BadModulus(h));
        }
        let mut field = Field {
            p,
            h,
            q,
            modulus,
            tables: None,
        };
        if q <= TABLE_THRESHOLD {
            field.tables = Some(field.build_tables());
        }
        Ok(field)
    }

    fn build_tables(&self) -> Tables {
        let q = self.q as usize;
        let mut add = vec![0u16; q * q];
        let mut mul = vec![0u16; q * q];
        let mut neg = vec![0u16; q];
        let mut inv = vec![0u16; q];
        for a in 0..q {
            let ea = FieldElem(a as u16);
            neg[a] = self.neg_slow(ea).0;
            for b in 0..q {
                let eb = FieldElem(b as u16);
                add[a * q + b] = self.add_slow(ea, eb).0;
                let m = self.mul_slow(ea, eb).0;
                mul[a * q + b] = m;
                if m == 1 {
                    inv[a] = b as u16;
                }
            }
        }
        Tables { add, mul, neg, inv }
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn h(&self) -> u32 {
        self.h
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    /// Modulus coefficients, constant term first.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElem {
        FieldElem::ZERO
    }

    pub fn one(&self) -> FieldElem {
        FieldElem::ONE
    }

    /// All elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (0..self.q).map(|e| FieldElem(e as u16))
    }

    pub fn nonzero_elements(&self) -> impl Iterator<Item = FieldElem> + Clone {
        (1..self.q).map(|e| FieldElem(e as u16))
    }

    pub fn elem(&self, encoding: u32) -> Result<FieldElem, GfError> {
        if encoding < self.q {
            Ok(FieldElem(encoding as u16))
        } else {
            Err(GfError::NotAnElement(encoding))
        }
    }

    /// The image of an integer in the prime subfield.
    pub fn from_int(&self, n: i64) -> FieldElem {
        FieldElem(n.rem_euclid(self.p as i64) as u16)
    }

    /// The polynomial-basis coordinates of `a` over GF(p), constant term first.
    pub fn digits(&self, a: FieldElem) -> Vec<u32> {
        let mut e = a.encoding();
        (0..self.h)
            .map(|_| {
                let d = e % self.p;
                e /= self.p;
                d
            })
            .collect()
    }

    pub fn from_digits(&self, digits: &[u32]) -> FieldElem {
        let enc = digits.iter().rev().fold(0u32, |acc, &d| acc * self.p + (d % self.p));
        FieldElem(enc as u16)
    }

    /// The element `x^i` of the polynomial basis.
    pub fn basis_element(&self, i: u32) -> FieldElem {
        FieldElem(self.p.pow(i) as u16)
    }

    #[inline]
    pub fn add(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        if self.p == 2 {
            return FieldElem(a.0 ^ b.0);
        }
        match &self.tables {
            Some(t) => FieldElem(t.add[a.0 as usize * self.q as usize + b.0 as usize]),
            None => self.add_slow(a, b),
        }
    }

    #[inline]
    pub fn neg(&self, a: FieldElem) -> FieldElem {
        if self.p == 2 {
            return a;
        }
        match &self.tables {
            Some(t) => FieldElem(t.neg[a.0 as usize]),
            None => self.neg_slow(a),
        }
    }

    #[inline]
    pub fn sub(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        match &self.tables {
            Some(t) => FieldElem(t.mul[a.0 as usize * self.q as usize + b.0 as usize]),
            None => self.mul_slow(a, b),
        }
    }

    pub fn inv(&self, a: FieldElem) -> Result<FieldElem, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        Ok(match &self.tables {
            Some(t) => FieldElem(t.inv[a.0 as usize]),
            None => self.pow_u(a, (self.q - 2) as u64),
        })
    }

    pub fn div(&self, a: FieldElem, b: FieldElem) -> Result<FieldElem, GfError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// `a^e`; negative exponents invert first.
    pub fn pow(&self, a: FieldElem, e: i64) -> Result<FieldElem, GfError> {
        if e < 0 {
            let inv = self.inv(a)?;
            return Ok(self.pow_u(inv, e.unsigned_abs()));
        }
        Ok(self.pow_u(a, e as u64))
    }

    /// Square-and-multiply for non-negative exponents (`0^0 = 1`).
    pub fn pow_u(&self, a: FieldElem, mut e: u64) -> FieldElem {
        let mut base = a;
        let mut acc = FieldElem::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }

    /// The Frobenius automorphism `a ↦ a^p`.
    pub fn frobenius(&self, a: FieldElem) -> FieldElem {
        self.pow_u(a, self.p as u64)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: FieldElem) -> Result<u32, GfError> {
        if a.is_zero() {
            return Err(GfError::DivisionByZero);
        }
        let n = self.q - 1;
        let mut order = n;
        for r in prime_factors(n) {
            while order.is_multiple_of(r) && self.pow_u(a, (order / r) as u64) == FieldElem::ONE {
                order /= r;
            }
        }
        Ok(order)
    }

    /// The smallest (by encoding) generator of the multiplicative group.
    pub fn primitive_element(&self) -> FieldElem {
        self.nonzero_elements()
            .find(|&a| self.multiplicative_order(a) == Ok(self.q - 1))
            .expect("the multiplicative group of a finite field is cyclic")
    }

    /// Whether `a` is a square in the field.
    pub fn is_square(&self, a: FieldElem) -> bool {
        a.is_zero() || self.p == 2 || self.pow_u(a, ((self.q - 1) / 2) as u64) == FieldElem::ONE
    }

    fn add_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let (x, y) = (self.digits(a), self.digits(b));
        let s: Vec<u32> = x.iter().zip(&y).map(|(u, v)| (u + v) % self.p).collect();
        self.from_digits(&s)
    }

    fn neg_slow(&self, a: FieldElem) -> FieldElem {
        let s: Vec<u32> = self.digits(a).iter().map(|&u| (self.p - u) % self.p).collect();
        self.from_digits(&s)
    }

    fn mul_slow(&self, a: FieldElem, b: FieldElem) -> FieldElem {
        let prod = poly::mul(&self.digits(a), &self.digits(b), self.p);
        let reduced = poly::rem(&prod, &self.modulus, self.p);
        self.from_digits(&reduced)
    }
}

fn prime_factors(mut n: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
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

/// Resolves the exponent `num/den` modulo `q − 1`.
///
/// The result `e` satisfies `den·e ≡ num (mod q−1)` and lies in `1..=q−1`; a
/// residue of zero is reported as `q − 1`. Under the convention that `t ↦ tᵉ`
/// sends 0 to 0, the map is the same either way.
pub fn frac_exponent(num: i64, den: i64, q: u64) -> Result<u64, GfError> {
    let m = q as i64 - 1;
    if m < 1 {
        return Err(GfError::NotInvertible {
            den,
            modulus: m.max(0) as u64,
        });
    }
    let g = den.extended_gcd(&m);
    if g.gcd != 1 {
        return Err(GfError::NotInvertible { den, modulus: m as u64 });
    }
    let inv = g.x.rem_euclid(m);
    let e = ((num.rem_euclid(m) as i128 * inv as i128) % m as i128) as u64;
    Ok(if e == 0 { m as u64 } else { e })
}

/// Dense polynomial helpers over GF(p); coefficient vectors are constant-term first.
pub(crate) mod poly {
    fn trim(mut v: Vec<u32>) -> Vec<u32> {
        while v.len() > 1 && *v.last().unwrap() == 0 {
            v.pop();
        }
        v
    }

    pub fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
            }
        }
        out.into_iter().map(|c| c as u32).collect()
    }

    /// Remainder of `a` modulo the monic polynomial `m`, padded to `deg m` coefficients.
    pub fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let n = m.len() - 1;
        let mut r: Vec<u32> = a.to_vec();
        if r.len() < n {
            r.resize(n, 0);
        }
        for d in (n..r.len()).rev() {
            let c = r[d];
            if c == 0 {
                continue;
            }
            for k in 0..=n {
                let idx = d - n + k;
                r[idx] = (r[idx] + p - (c as u64 * m[k] as u64 % p as u64) as u32) % p;
            }
        }
        r.truncate(n);
        r
    }

    /// Remainder modulo an arbitrary nonzero divisor (leading coefficient inverted).
    fn rem_general(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
        let m = trim(m.to_vec());
        let n = m.len() - 1;
        let lead_inv = (1..p).find(|&x| x * m[n] % p == 1).unwrap_or(1);
        let mut r = trim(a.to_vec());
        while r.len() > n && !(r.len() == 1 && r[0] == 0) {
            let d = r.len() - 1;
            let c = (r[d] as u64 * lead_inv as u64 % p as u64) as u32;
            for k in 0..=n {
                let idx = d - n + k;
                r[idx] = (r[idx] + p - (c as u64 * m[k] as u64 % p as u64) as u32) % p;
            }
            r = trim(r);
            if n == 0 {
                return vec![0];
            }
        }
        r
    }

    /// Trial division by every monic polynomial of degree `1..=deg/2`.
    pub fn is_irreducible(m: &[u32], p: u32) -> bool {
        let deg = m.len() - 1;
        for d in 1..=deg / 2 {
            let count = (p as u64).pow(d as u32);
            for idx in 0..count {
                let mut div = Vec::with_capacity(d + 1);
                let mut e = idx;
                for _ in 0..d {
                    div.push((e % p as u64) as u32);
                    e /= p as u64;
                }
                div.push(1);
                let r = rem_general(m, &div, p);
                if r.iter().all(|&c| c == 0) {
                    return false;
                }
            }
        }
        true
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf4_modulus_and_square_of_generator() {
        let f = Field::new(2, 2).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 1]);
        let w = f.basis_element(1);
        // x² ≡ x + 1
        assert_eq!(f.mul(w, w), f.from_digits(&[1, 1]));
        assert_eq!(f.pow(w, 3).unwrap(), FieldElem::ONE);
    }

    #[test]
    fn prime_field_uses_modulus_x() {
        let f = Field::new(2, 1).unwrap();
        assert_eq!(f.modulus(), &[0, 1]);
        assert_eq!(f.q(), 2);
        let f7 = Field::new(7, 1).unwrap();
        assert_eq!(f7.mul(f7.from_int(3), f7.from_int(5)), f7.from_int(1));
    }

    #[test]
    fn gf8_inverse_of_x() {
        let f = Field::new(2, 3).unwrap();
        assert_eq!(f.modulus(), &[1, 1, 0, 1]);
        let x = f.basis_element(1);
        assert_eq!(f.inv(x).unwrap(), f.from_digits(&[1, 0, 1]));
        assert_eq!(f.pow(x, 7).unwrap(), FieldElem::ONE);
    }

    #[test]
    fn gf9_modulus_is_irreducible() {
        let f = Field::new(3, 2).unwrap();
        assert!(poly::is_irreducible(f.modulus(), 3));
        assert_eq!(f.q(), 9);
    }

    #[test]
    fn construction_errors() {
        assert_eq!(Field::new(4, 1).unwrap_err(), GfError::NotPrime(4));
        assert_eq!(Field::new(2, 13).unwrap_err(), GfError::OrderTooLarge { p: 2, h: 13 });
        assert_eq!(Field::new(67, 2).unwrap_err(), GfError::OrderTooLarge { p: 67, h: 2 });
        assert!(Field::with_modulus(2, vec![1, 0, 1]).is_err()); // x²+1 = (x+1)²
        assert!(Field::new(4093, 1).is_ok());
    }

    #[test]
    fn division_by_zero() {
        let f = Field::new(5, 1).unwrap();
        assert_eq!(f.inv(FieldElem::ZERO), Err(GfError::DivisionByZero));
        assert_eq!(f.pow(FieldElem::ZERO, -1), Err(GfError::DivisionByZero));
        assert_eq!(f.pow(FieldElem::ZERO, 0).unwrap(), FieldElem::ONE);
    }

    #[test]
    fn frac_exponents_for_q32() {
        assert_eq!(frac_exponent(1, 6, 32).unwrap(), 26);
        assert_eq!(frac_exponent(3, 6, 32).unwrap(), 16);
        assert_eq!(frac_exponent(5, 6, 32).unwrap(), 6);
        assert!(matches!(frac_exponent(1, 6, 64), Err(GfError::NotInvertible { .. })));
    }

    #[test]
    fn every_table_entry_is_primitive() {
        for &(p, h, _) in conway::CONWAY {
            let f = Field::new(p, h).unwrap();
            let x = f.basis_element(1);
            assert_eq!(f.multiplicative_order(x).unwrap(), f.q() - 1, "GF({p}^{h})");
        }
    }

    #[test]
    fn prime_power_split() {
        assert_eq!(prime_power(32), Some((2, 5)));
        assert_eq!(prime_power(9), Some((3, 2)));
        assert_eq!(prime_power(12), None);
        assert_eq!(prime_power(1), None);
    }

    fn check_axioms_exhaustive(f: &Field) {
        let elems: Vec<_> = f.elements().collect();
        for &a in &elems {
            assert_eq!(f.mul(a, FieldElem::ONE), a);
            assert_eq!(f.add(a, f.neg(a)), FieldElem::ZERO);
            if !a.is_zero() {
                assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                assert_eq!(f.pow(a, (f.q() - 1) as i64).unwrap(), FieldElem::ONE);
            }
            assert_eq!(f.from_digits(&f.digits(a)), a);
            for &b in &elems {
                assert_eq!(f.add(a, b), f.add(b, a));
                assert_eq!(f.mul(a, b), f.mul(b, a));
                assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                for &c in &elems {
                    assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                    assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                }
            }
        }
    }

    #[test]
    fn axioms_hold_exhaustively_for_small_fields() {
        for (p, h) in [(2, 1), (3, 1), (2, 2), (2, 3), (3, 2), (5, 1), (2, 4), (7, 2), (2, 6)] {
            check_axioms_exhaustive(&Field::new(p, h).unwrap());
        }
    }

    #[test]
    fn untabulated_arithmetic_matches_tabulated() {
        // GF(512) and GF(3^6) take the on-the-fly path.
        for (p, h) in [(2, 9), (3, 6), (5, 4)] {
            let f = Field::new(p, h).unwrap();
            assert!(f.tables.is_none());
            let g = f.primitive_element();
            assert_eq!(f.multiplicative_order(g).unwrap(), f.q() - 1);
            let a = f.pow_u(g, 17);
            assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn field_and_elems() -> impl Strategy<Value = ((u32, u32), u32, u32, u32)> {
            prop::sample::select(vec![(2u32, 8u32), (2, 10), (3, 5), (5, 3), (13, 3), (61, 2), (2, 12)]).prop_flat_map(
                |(p, h)| {
                    let q = p.pow(h);
                    (Just((p, h)), 0..q, 0..q, 0..q)
                },
            )
        }

        proptest! {
            #[test]
            fn field_axioms_randomized(((p, h), a, b, c) in field_and_elems()) {
                let f = Field::new(p, h).unwrap();
                let (a, b, c) = (f.elem(a).unwrap(), f.elem(b).unwrap(), f.elem(c).unwrap());
                prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
                prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                prop_assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                prop_assert_eq!(f.frobenius(f.add(a, b)), f.add(f.frobenius(a), f.frobenius(b)));
                if !a.is_zero() {
                    prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), FieldElem::ONE);
                }
            }
        }
    }
}
