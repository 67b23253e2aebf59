//! Exact arithmetic in finite fields GF(p^m).
//!
//! Elements are encoded as canonical integers below q = p^m: the coordinate
//! vector (c_0, ..., c_{m-1}) of an element in the polynomial basis maps to
//! the integer sum c_i * p^i. For GF(2^4) with modulus x^4 + x + 1 this is the
//! usual bit-string convention, e.g. x^3 + x^2 + 1 <-> 13.
//!
//! Field sizes are capped at q <= 2^16; everything here is meant for exact
//! desk-scale verification, not throughput.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::{Error, Result};

/// Largest supported field cardinality.
pub const MAX_FIELD_SIZE: u64 = 1 << 16;

/// Description of a finite field GF(p^m).
///
/// For m = 1 the modulus is unused and stored empty. For m > 1 the modulus is
/// a monic polynomial of degree m, irreducible over GF(p), stored as its
/// coefficient list in ascending degree order (length m + 1, last entry 1).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    modulus: Vec<u64>,
    q: u64,
}

impl FieldSpec {
    /// Prime field GF(p).
    pub fn prime(p: u64) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if p > MAX_FIELD_SIZE {
            return Err(Error::InvalidField(format!(
                "field size {p} exceeds the cap {MAX_FIELD_SIZE}"
            )));
        }
        Ok(FieldSpec {
            p,
            m: 1,
            modulus: Vec::new(),
            q: p,
        })
    }

    /// Extension field GF(p^m) with an explicit modulus polynomial
    /// (coefficients in ascending degree order, monic, degree m).
    pub fn extension(p: u64, m: u32, modulus: Vec<u64>) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if m < 2 {
            return Err(Error::InvalidField(
                "extension degree must be at least 2; use FieldSpec::prime".into(),
            ));
        }
        let q = checked_pow(p, m)?;
        if modulus.len() != m as usize + 1 {
            return Err(Error::InvalidField(format!(
                "modulus must have degree {m} (got {} coefficients)",
                modulus.len()
            )));
        }
        if modulus[m as usize] != 1 {
            return Err(Error::InvalidField("modulus must be monic".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidField(
                "modulus coefficients must be reduced mod p".into(),
            ));
        }
        if !poly_is_irreducible(p, &modulus) {
            return Err(Error::InvalidField(
                "modulus is reducible over GF(p)".into(),
            ));
        }
        Ok(FieldSpec { p, m, modulus, q })
    }

    /// Field with q elements, picking the modulus deterministically for
    /// extension fields: the lexicographically smallest primitive polynomial
    /// (by the canonical integer encoding of its low coefficients). GF(16)
    /// resolves to x^4 + x + 1 under this rule.
    pub fn gf(q: u64) -> Result<FieldSpec> {
        let (p, m) = factor_prime_power(q)
            .ok_or_else(|| Error::InvalidField(format!("{q} is not a prime power")))?;
        if m == 1 {
            FieldSpec::prime(p)
        } else {
            if q > MAX_FIELD_SIZE {
                return Err(Error::InvalidField(format!(
                    "field size {q} exceeds the cap {MAX_FIELD_SIZE}"
                )));
            }
            let modulus = smallest_primitive_polynomial(p, m);
            FieldSpec::extension(p, m, modulus)
        }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }
}

fn checked_pow(p: u64, m: u32) -> Result<u64> {
    let mut q: u64 = 1;
    for _ in 0..m {
        q = q
            .checked_mul(p)
            .filter(|&v| v <= MAX_FIELD_SIZE)
            .ok_or_else(|| {
                Error::InvalidField(format!(
                    "field size {p}^{m} exceeds the cap {MAX_FIELD_SIZE}"
                ))
            })?;
    }
    Ok(q)
}

/// Handle to a finite field; cheap to clone and share across threads.
#[derive(Clone)]
pub struct Field {
    spec: Arc<FieldSpec>,
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.spec, &other.spec) || self.spec == other.spec
    }
}

impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.spec.q)
    }
}

impl Field {
    pub fn new(spec: FieldSpec) -> Field {
        Field {
            spec: Arc::new(spec),
        }
    }

    /// Shorthand for `Field::new(FieldSpec::gf(q)?)`.
    pub fn gf(q: u64) -> Result<Field> {
        Ok(Field::new(FieldSpec::gf(q)?))
    }

    pub fn spec(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn p(&self) -> u64 {
        self.spec.p
    }

    pub fn q(&self) -> u64 {
        self.spec.q
    }

    pub fn element(&self, value: u64) -> Result<FieldElement> {
        if value >= self.spec.q {
            return Err(Error::InvalidArgument(format!(
                "value {value} is not a canonical element of GF({})",
                self.spec.q
            )));
        }
        Ok(FieldElement {
            value,
            field: self.clone(),
        })
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement {
            value: 0,
            field: self.clone(),
        }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement {
            value: 1,
            field: self.clone(),
        }
    }

    /// All field elements in canonical order 0, 1, ..., q-1.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.spec.q).map(move |v| FieldElement {
            value: v,
            field: self.clone(),
        })
    }

    /// Decode a canonical integer into its coordinate vector (c_0, ..., c_{m-1}).
    pub fn coords(&self, value: u64) -> Vec<u64> {
        let mut v = value;
        let mut out = Vec::with_capacity(self.spec.m as usize);
        for _ in 0..self.spec.m {
            out.push(v % self.spec.p);
            v /= self.spec.p;
        }
        out
    }

    /// Encode a coordinate vector back into its canonical integer.
    pub fn from_coords(&self, coords: &[u64]) -> u64 {
        let mut v = 0u64;
        for &c in coords.iter().rev() {
            v = v * self.spec.p + c % self.spec.p;
        }
        v
    }

    // Raw arithmetic on canonical values. Inputs are assumed canonical.

    pub fn add(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.spec.q && b < self.spec.q);
        if self.spec.m == 1 {
            return (a + b) % self.spec.p;
        }
        if self.spec.p == 2 {
            return a ^ b;
        }
        let p = self.spec.p;
        let (mut out, mut scale) = (0u64, 1u64);
        let (mut x, mut y) = (a, b);
        for _ in 0..self.spec.m {
            out += (x % p + y % p) % p * scale;
            x /= p;
            y /= p;
            scale *= p;
        }
        out
    }

    pub fn neg(&self, a: u64) -> u64 {
        debug_assert!(a < self.spec.q);
        if self.spec.m == 1 {
            return (self.spec.p - a) % self.spec.p;
        }
        if self.spec.p == 2 {
            return a;
        }
        let p = self.spec.p;
        let (mut out, mut scale) = (0u64, 1u64);
        let mut x = a;
        for _ in 0..self.spec.m {
            out += (p - x % p) % p * scale;
            x /= p;
            scale *= p;
        }
        out
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.spec.q && b < self.spec.q);
        if self.spec.m == 1 {
            return a * b % self.spec.p;
        }
        let p = self.spec.p;
        let m = self.spec.m as usize;
        let ac = self.coords(a);
        let bc = self.coords(b);
        // schoolbook product, then reduce by the monic modulus
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &ai) in ac.iter().enumerate() {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in bc.iter().enumerate() {
                prod[i + j] = (prod[i + j] + ai * bj) % p;
            }
        }
        for d in (m..prod.len()).rev() {
            let c = prod[d];
            if c == 0 {
                continue;
            }
            prod[d] = 0;
            for (i, &mi) in self.spec.modulus.iter().enumerate().take(m) {
                let idx = d - m + i;
                prod[idx] = (prod[idx] + c * (p - mi)) % p;
            }
        }
        self.from_coords(&prod[..m])
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        // Lagrange: a^(q-2) inverts a in GF(q)
        self.pow(a, self.spec.q as i64 - 2)
    }

    pub fn div(&self, a: u64, b: u64) -> Result<u64> {
        Ok(self.mul(a, self.inv(b)?))
    }

    /// Exponentiation by squaring; negative exponents go through the inverse.
    pub fn pow(&self, a: u64, e: i64) -> Result<u64> {
        debug_assert!(a < self.spec.q);
        let (base, exp) = if e < 0 {
            if a == 0 {
                return Err(Error::ZeroInverse);
            }
            (self.inv(a)?, e.unsigned_abs())
        } else {
            (a, e as u64)
        };
        let mut acc = 1u64;
        let mut b = base;
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, b);
            }
            b = self.mul(b, b);
            e >>= 1;
        }
        Ok(acc)
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        let n = self.spec.q - 1;
        let mut order = n;
        for f in prime_factors(n) {
            while order.is_multiple_of(f) && self.pow(a, (order / f) as i64)? == 1 {
                order /= f;
            }
        }
        Ok(order)
    }

    /// Smallest canonical integer generating the multiplicative group.
    pub fn primitive_element(&self) -> Result<FieldElement> {
        let q = self.spec.q;
        if q < 3 {
            return Err(Error::InvalidArgument(format!(
                "GF({q}) has a trivial multiplicative group, no generator to pick"
            )));
        }
        for v in 2..q {
            if self.multiplicative_order(v)? == q - 1 {
                return self.element(v);
            }
        }
        unreachable!("every finite field has a primitive element")
    }

    /// Element of multiplicative order exactly r, for r dividing q - 1.
    pub fn nth_root_of_unity(&self, r: u64) -> Result<FieldElement> {
        if r == 0 {
            return Err(Error::InvalidArgument("root order must be positive".into()));
        }
        if r == 1 {
            return Ok(self.one());
        }
        let n = self.spec.q - 1;
        if !n.is_multiple_of(r) {
            return Err(Error::InvalidArgument(format!(
                "{r} does not divide q - 1 = {n}"
            )));
        }
        let alpha = self.primitive_element()?;
        let gamma = self.pow(alpha.value, (n / r) as i64)?;
        debug_assert_eq!(self.multiplicative_order(gamma).unwrap(), r);
        self.element(gamma)
    }
}

/// A field element: a canonical integer plus the field it lives in.
#[derive(Clone, PartialEq, Eq)]
pub struct FieldElement {
    value: u64,
    field: Field,
}

impl FieldElement {
    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn inv(&self) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.inv(self.value)?,
            field: self.field.clone(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<FieldElement> {
        Ok(FieldElement {
            value: self.field.pow(self.value, e)?,
            field: self.field.clone(),
        })
    }

    pub fn coords(&self) -> Vec<u64> {
        self.field.coords(self.value)
    }

    fn expect_same_field(&self, other: &FieldElement) {
        assert!(
            self.field == other.field,
            "arithmetic between elements of different fields"
        );
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for &FieldElement {
    type Output = FieldElement;
    fn add(self, rhs: &FieldElement) -> FieldElement {
        self.expect_same_field(rhs);
        FieldElement {
            value: self.field.add(self.value, rhs.value),
            field: self.field.clone(),
        }
    }
}

impl Sub for &FieldElement {
    type Output = FieldElement;
    fn sub(self, rhs: &FieldElement) -> FieldElement {
        self.expect_same_field(rhs);
        FieldElement {
            value: self.field.sub(self.value, rhs.value),
            field: self.field.clone(),
        }
    }
}

impl Mul for &FieldElement {
    type Output = FieldElement;
    fn mul(self, rhs: &FieldElement) -> FieldElement {
        self.expect_same_field(rhs);
        FieldElement {
            value: self.field.mul(self.value, rhs.value),
            field: self.field.clone(),
        }
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement {
            value: self.field.neg(self.value),
            field: self.field.clone(),
        }
    }
}

macro_rules! owned_ops {
    ($($trait:ident :: $fn:ident),*) => {$(
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $fn(self, rhs: FieldElement) -> FieldElement {
                $trait::$fn(&self, &rhs)
            }
        }
    )*};
}
owned_ops!(Add::add, Sub::sub, Mul::mul);

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Integer and polynomial helpers
// ---------------------------------------------------------------------------

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Returns (p, m) with n = p^m for prime p, if n is a prime power.
pub fn factor_prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut m = 0;
            let mut v = n;
            while v.is_multiple_of(p) {
                v /= p;
                m += 1;
            }
            return if v == 1 { Some((p, m)) } else { None };
        }
        p += 1;
    }
    Some((n, 1))
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
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

// Polynomials over GF(p) as coefficient vectors in ascending degree order.

fn poly_trim(c: &mut Vec<u64>) {
    while c.len() > 1 && *c.last().unwrap() == 0 {
        c.pop();
    }
}

fn poly_rem(p: u64, a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut r: Vec<u64> = a.to_vec();
    poly_trim(&mut r);
    let db = b.len() - 1;
    let lead_inv = mod_inv(b[db], p);
    while r.len() > db {
        let dr = r.len() - 1;
        let factor = r[dr] * lead_inv % p;
        for i in 0..=db {
            let idx = dr - db + i;
            r[idx] = (r[idx] + (p - b[i] * factor % p) % p) % p;
        }
        r.pop();
        poly_trim(&mut r);
    }
    r
}

fn mod_inv(a: u64, p: u64) -> u64 {
    // Fermat; p prime and a nonzero mod p
    let mut acc = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

fn poly_is_zero(a: &[u64]) -> bool {
    a.iter().all(|&c| c == 0)
}

/// Trial division by every monic polynomial of degree 1..=deg/2.
pub(crate) fn poly_is_irreducible(p: u64, f: &[u64]) -> bool {
    let deg = f.len() - 1;
    if deg == 0 {
        return false;
    }
    if deg == 1 {
        return true;
    }
    for d in 1..=deg / 2 {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut g = Vec::with_capacity(d + 1);
            let mut v = low;
            for _ in 0..d {
                g.push(v % p);
                v /= p;
            }
            g.push(1);
            if poly_is_zero(&poly_rem(p, f, &g)) {
                return false;
            }
        }
    }
    true
}

/// Deterministic modulus search: monic degree-m polynomials ordered by the
/// canonical integer encoding of their low coefficients; first one that is
/// irreducible and has x as a multiplicative generator wins.
pub(crate) fn smallest_primitive_polynomial(p: u64, m: u32) -> Vec<u64> {
    let count = p.pow(m);
    for low in 0..count {
        let mut f = Vec::with_capacity(m as usize + 1);
        let mut v = low;
        for _ in 0..m {
            f.push(v % p);
            v /= p;
        }
        f.push(1);
        if !poly_is_irreducible(p, &f) {
            continue;
        }
        let spec = FieldSpec {
            p,
            m,
            modulus: f.clone(),
            q: p.pow(m),
        };
        let field = Field::new(spec);
        // x is the element with canonical value p
        if field.multiplicative_order(p).unwrap() == field.q() - 1 {
            return f;
        }
    }
    unreachable!("a primitive polynomial exists for every p, m")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn gf13() -> Field {
        Field::gf(13).unwrap()
    }

    fn gf16() -> Field {
        Field::gf(16).unwrap()
    }

    #[test]
    fn gf16_modulus_is_x4_x_1() {
        let f = gf16();
        assert_eq!(f.spec().modulus(), &[1, 1, 0, 0, 1]);
    }

    #[test]
    fn add_examples() {
        let f13 = gf13();
        assert_eq!(f13.add(7, 9), 3);
        let f16 = gf16();
        assert_eq!(f16.add(13, 13), 0);
        for a in 0..13 {
            assert_eq!(f13.add(a, 0), a);
        }
    }

    #[test]
    fn mul_examples() {
        let f13 = gf13();
        assert_eq!(f13.mul(5, 8), 1);
        let f16 = gf16();
        assert_eq!(f16.mul(6, 7), 1);
        for a in 0..16 {
            assert_eq!(f16.mul(a, 1), a);
        }
    }

    #[test]
    fn inv_examples() {
        let f13 = gf13();
        assert_eq!(f13.inv(3).unwrap(), 9);
        let f16 = gf16();
        assert_eq!(f16.inv(6).unwrap(), 7);
        assert_eq!(f13.inv(1).unwrap(), 1);
        assert!(matches!(f13.inv(0), Err(Error::ZeroInverse)));
    }

    #[test]
    fn pow_examples() {
        let f13 = gf13();
        assert_eq!(f13.pow(2, 6).unwrap(), 12);
        let f16 = gf16();
        assert_eq!(f16.pow(2, 4).unwrap(), 3);
        for a in 0..13 {
            assert_eq!(f13.pow(a, 0).unwrap(), 1);
        }
        assert!(f13.pow(0, -1).is_err());
        assert_eq!(f13.pow(3, -1).unwrap(), 9);
    }

    #[test]
    fn primitive_element_examples() {
        assert_eq!(gf13().primitive_element().unwrap().value(), 2);
        assert_eq!(gf16().primitive_element().unwrap().value(), 2);
        let f2 = Field::gf(2).unwrap();
        assert!(f2.primitive_element().is_err());
    }

    #[test]
    fn nth_root_examples() {
        let f13 = gf13();
        assert_eq!(f13.nth_root_of_unity(2).unwrap().value(), 12);
        let r4 = f13.nth_root_of_unity(4).unwrap().value();
        assert_eq!(r4, 8);
        assert_eq!(f13.pow(r4, 4).unwrap(), 1);
        assert_ne!(f13.pow(r4, 2).unwrap(), 1);
        assert_eq!(f13.nth_root_of_unity(1).unwrap().value(), 1);
        assert!(f13.nth_root_of_unity(5).is_err());
    }

    #[test]
    fn field_axioms_exhaustive_small_fields() {
        for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
            let f = Field::gf(q).unwrap();
            for a in 0..q {
                assert_eq!(f.add(a, 0), a);
                assert_eq!(f.mul(a, 1), a);
                assert_eq!(f.add(a, f.neg(a)), 0);
                if a != 0 {
                    assert_eq!(f.mul(a, f.inv(a).unwrap()), 1, "inverse fails in GF({q})");
                    assert_eq!(f.pow(a, q as i64 - 1).unwrap(), 1);
                }
                for b in 0..q {
                    assert_eq!(f.add(a, b), f.add(b, a));
                    assert_eq!(f.mul(a, b), f.mul(b, a));
                    assert!(f.add(a, b) < q && f.mul(a, b) < q);
                    for c in 0..q {
                        assert_eq!(f.add(f.add(a, b), c), f.add(a, f.add(b, c)));
                        assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
                        assert_eq!(
                            f.mul(a, f.add(b, c)),
                            f.add(f.mul(a, b), f.mul(a, c)),
                            "distributivity fails in GF({q})"
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn primitive_element_order_is_group_order() {
        for q in [3u64, 4, 5, 7, 8, 9, 11, 13, 16, 25, 27] {
            let f = Field::gf(q).unwrap();
            let g = f.primitive_element().unwrap().value();
            assert_eq!(f.multiplicative_order(g).unwrap(), q - 1);
            // no proper divisor of q-1 is an exponent of unity for g
            for d in 1..q - 1 {
                if (q - 1) % d == 0 {
                    assert_ne!(f.pow(g, d as i64).unwrap(), 1, "order too small in GF({q})");
                }
            }
        }
    }

    #[test]
    fn coordinate_roundtrip() {
        for q in [13u64, 16, 27] {
            let f = Field::gf(q).unwrap();
            for v in 0..q {
                assert_eq!(f.from_coords(&f.coords(v)), v);
            }
        }
    }

    #[test]
    fn spec_validation() {
        assert!(FieldSpec::prime(12).is_err());
        assert!(FieldSpec::gf(12).is_err());
        assert!(FieldSpec::gf(1 << 17).is_err());
        // x^4 + x^2 + 1 = (x^2 + x + 1)^2 over GF(2)
        assert!(FieldSpec::extension(2, 4, vec![1, 0, 1, 0, 1]).is_err());
        assert!(FieldSpec::extension(2, 4, vec![1, 1, 0, 0, 1]).is_ok());
    }

    #[test]
    #[should_panic(expected = "different fields")]
    fn cross_field_arithmetic_panics() {
        let a = gf13().element(3).unwrap();
        let b = gf16().element(3).unwrap();
        let _ = &a + &b;
    }

    #[test]
    fn element_ops() {
        let f = gf13();
        let a = f.element(7).unwrap();
        let b = f.element(9).unwrap();
        assert_eq!((&a + &b).value(), 3);
        assert_eq!((&a - &b).value(), 11);
        assert_eq!((a.clone() * b).value(), 63 % 13);
        assert_eq!(a.inv().unwrap().value(), 2);
    }

    proptest! {
        #[test]
        fn encode_decode_roundtrip_random_fields(qi in 0usize..6, v in 0u64..65536) {
            let q = [4u64, 8, 9, 16, 32, 64][qi];
            let f = Field::gf(q).unwrap();
            let v = v % q;
            prop_assert_eq!(f.from_coords(&f.coords(v)), v);
        }

        #[test]
        fn mul_inverse_cancels(qi in 0usize..4, a in 1u64..64, b in 1u64..64) {
            let q = [13u64, 16, 27, 64][qi];
            let f = Field::gf(q).unwrap();
            let (a, b) = (1 + a % (q - 1), 1 + b % (q - 1));
            let ab = f.mul(a, b);
            prop_assert_eq!(f.div(ab, b).unwrap(), a);
        }
    }
}
