//! Prime fields `F_p` and their small extensions `F_{p^k}` (k <= 4).
//!
//! Field descriptors are interned: [`make_field`] returns a `&'static FieldSpec`
//! and repeated calls with the same `(p, k)` return the same reference. That
//! keeps [`FieldElement`] a small `Copy` value that still knows its field, so
//! mixing elements of different fields is detected by a pointer comparison.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::sync::{Mutex, OnceLock};

use serde::ser::{SerializeSeq, SerializeStruct};
use serde::{Serialize, Serializer};
use thiserror::Error;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 4;
/// Primes must stay below this bound so that products of residues fit in `u64` sums.
pub const PRIME_BOUND: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("prime {0} is too large (must be below 65536)")]
    PrimeTooLarge(u64),
    #[error("extension degree {0} is unsupported (expected 1..=4)")]
    UnsupportedDegree(u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands live in different fields")]
    FieldMismatch,
    #[error("no primitive {n}-th root of unity in a field of order {order}")]
    NoSuchRoot { n: u64, order: u64 },
    #[error("malformed element: {0}")]
    Malformed(String),
}

/// Description of `F_{p^k}`: the prime, the degree and the defining modulus.
pub struct FieldSpec {
    p: u32,
    k: usize,
    /// Monic modulus, little-endian, `k + 1` meaningful entries. Unused for k = 1.
    modulus: [u32; MAX_DEGREE + 1],
    order: u64,
    generator: OnceLock<[u32; MAX_DEGREE]>,
}

/// Interned field handle.
pub type Field = &'static FieldSpec;

static REGISTRY: OnceLock<Mutex<Vec<Field>>> = OnceLock::new();

pub fn is_prime(n: u64) -> bool {
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

/// Distinct prime factors in increasing order.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
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

/// Returns the interned field `F_{p^k}`.
///
/// For `k > 1` the modulus is the first monic irreducible polynomial of degree
/// `k` when the non-leading coefficients `(c_{k-1}, ..., c_0)` are enumerated
/// in lexicographic order with `0 < 1 < ... < p-1`.
pub fn make_field(p: u64, k: u32) -> Result<Field, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p >= PRIME_BOUND {
        return Err(FieldError::PrimeTooLarge(p));
    }
    if k == 0 || k as usize > MAX_DEGREE {
        return Err(FieldError::UnsupportedDegree(k));
    }
    let registry = REGISTRY.get_or_init(|| Mutex::new(Vec::new()));
    let mut fields = registry.lock().expect("field registry poisoned");
    if let Some(f) = fields.iter().find(|f| f.p as u64 == p && f.k == k as usize) {
        return Ok(f);
    }
    let k = k as usize;
    let mut modulus = [0u32; MAX_DEGREE + 1];
    if k == 1 {
        modulus[1] = 1;
    } else {
        let tails = p.pow(k as u32);
        let found = (0..tails).find_map(|t| {
            let mut poly = vec![0u64; k + 1];
            let mut rest = t;
            for c in poly.iter_mut().take(k) {
                *c = rest % p;
                rest /= p;
            }
            poly[k] = 1;
            upoly::is_irreducible(&poly, p).then_some(poly)
        });
        // An irreducible polynomial of every degree exists over F_p.
        let poly = found.expect("irreducible polynomial exists");
        for (dst, src) in modulus.iter_mut().zip(&poly) {
            *dst = *src as u32;
        }
    }
    let spec: Field = Box::leak(Box::new(FieldSpec {
        p: p as u32,
        k,
        modulus,
        order: p.pow(k as u32),
        generator: OnceLock::new(),
    }));
    fields.push(spec);
    Ok(spec)
}

impl FieldSpec {
    pub fn characteristic(&self) -> u64 {
        self.p as u64
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.order
    }

    /// The monic modulus, little-endian; empty for prime fields.
    pub fn modulus(&self) -> Vec<u32> {
        if self.k == 1 {
            Vec::new()
        } else {
            self.modulus[..=self.k].to_vec()
        }
    }

    pub fn zero(&'static self) -> FieldElement {
        FieldElement { field: self, c: [0; MAX_DEGREE] }
    }

    pub fn one(&'static self) -> FieldElement {
        self.constant(1)
    }

    /// The prime-field constant `n mod p`.
    pub fn constant(&'static self, n: u64) -> FieldElement {
        let mut c = [0; MAX_DEGREE];
        c[0] = (n % self.p as u64) as u32;
        FieldElement { field: self, c }
    }

    /// The prime-field constant `n mod p` for a signed integer.
    pub fn from_i64(&'static self, n: i64) -> FieldElement {
        self.constant(n.rem_euclid(self.p as i64) as u64)
    }

    /// The class of the extension generator (the root of the modulus).
    pub fn generator_root(&'static self) -> FieldElement {
        if self.k == 1 {
            // F_p is generated by 1 over itself.
            return self.one();
        }
        let mut c = [0; MAX_DEGREE];
        c[1] = 1;
        FieldElement { field: self, c }
    }

    /// Builds an element from its little-endian coefficient list.
    pub fn element(&'static self, coeffs: &[u64]) -> Result<FieldElement, FieldError> {
        if coeffs.len() != self.k {
            return Err(FieldError::Malformed(format!(
                "expected {} coefficients, got {}",
                self.k,
                coeffs.len()
            )));
        }
        let mut c = [0; MAX_DEGREE];
        for (dst, &src) in c.iter_mut().zip(coeffs) {
            if src >= self.p as u64 {
                return Err(FieldError::Malformed(format!(
                    "coefficient {src} not reduced mod {}",
                    self.p
                )));
            }
            *dst = src as u32;
        }
        Ok(FieldElement { field: self, c })
    }

    /// Element with canonical index `index` (base-p digits, c0 least significant).
    pub fn from_index(&'static self, index: u64) -> FieldElement {
        debug_assert!(index < self.order);
        let mut c = [0; MAX_DEGREE];
        let mut rest = index;
        for slot in c.iter_mut().take(self.k) {
            *slot = (rest % self.p as u64) as u32;
            rest /= self.p as u64;
        }
        FieldElement { field: self, c }
    }

    /// All elements in canonical order.
    pub fn elements(&'static self) -> impl Iterator<Item = FieldElement> + Clone {
        (0..self.order).map(move |i| self.from_index(i))
    }

    /// Smallest (in canonical order) generator of the multiplicative group.
    pub fn multiplicative_generator(&'static self) -> FieldElement {
        let c = *self.generator.get_or_init(|| {
            let factors = prime_factors(self.order - 1);
            (1..self.order)
                .map(|i| self.from_index(i))
                .find(|g| factors.iter().all(|r| !g.pow((self.order - 1) / r).is_one()))
                .expect("multiplicative group is cyclic")
                .c
        });
        FieldElement { field: self, c }
    }

    /// An element of exact multiplicative order `n`, derived from the
    /// canonical generator `g` as `g^((q-1)/n)`.
    pub fn primitive_root_of_unity(&'static self, n: u64) -> Result<FieldElement, FieldError> {
        if n == 0 || !(self.order - 1).is_multiple_of(n) {
            return Err(FieldError::NoSuchRoot { n, order: self.order });
        }
        Ok(self.multiplicative_generator().pow((self.order - 1) / n))
    }

    /// Whether `other` is the same interned field.
    #[inline]
    pub fn same(&'static self, other: Field) -> bool {
        std::ptr::eq(self, other)
    }
}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}", self.p, self.k)
    }
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}

impl Eq for FieldSpec {}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("FieldSpec", 3)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("k", &self.k)?;
        st.serialize_field("modulus", &self.modulus())?;
        st.end()
    }
}

/// `F_{p^k}` element stored as `k` residues in the power basis of the modulus root.
#[derive(Clone, Copy)]
pub struct FieldElement {
    field: Field,
    c: [u32; MAX_DEGREE],
}

impl FieldElement {
    #[inline]
    pub fn field(&self) -> Field {
        self.field
    }

    /// Little-endian residues (length `k`).
    pub fn coeffs(&self) -> &[u32] {
        &self.c[..self.field.k]
    }

    #[inline]
    pub fn is_zero(&self) -> bool {
        self.c == [0; MAX_DEGREE]
    }

    #[inline]
    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..] == [0; MAX_DEGREE - 1]
    }

    /// Position in the canonical element order.
    pub fn index(&self) -> u64 {
        let p = self.field.p as u64;
        self.coeffs().iter().rev().fold(0, |acc, &c| acc * p + c as u64)
    }

    /// True when the element lies in the prime subfield.
    pub fn in_prime_field(&self) -> bool {
        self.c[1..] == [0; MAX_DEGREE - 1]
    }

    fn check(&self, rhs: &FieldElement) -> Result<(), FieldError> {
        if self.field.same(rhs.field) {
            Ok(())
        } else {
            Err(FieldError::FieldMismatch)
        }
    }

    #[inline]
    fn assert_same(&self, rhs: &FieldElement) {
        assert!(self.field.same(rhs.field), "field mismatch: {:?} vs {:?}", self.field, rhs.field);
    }

    pub fn checked_add(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(self.add_raw(&rhs))
    }

    pub fn checked_sub(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(self.add_raw(&rhs.neg_raw()))
    }

    pub fn checked_mul(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(self.mul_raw(&rhs))
    }

    pub fn checked_div(self, rhs: FieldElement) -> Result<FieldElement, FieldError> {
        self.check(&rhs)?;
        Ok(self.mul_raw(&rhs.inv()?))
    }

    #[inline]
    fn add_raw(&self, rhs: &FieldElement) -> FieldElement {
        let p = self.field.p;
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.field.k {
            let s = self.c[i] + rhs.c[i];
            c[i] = if s >= p { s - p } else { s };
        }
        FieldElement { field: self.field, c }
    }

    #[inline]
    fn neg_raw(&self) -> FieldElement {
        let p = self.field.p;
        let mut c = [0; MAX_DEGREE];
        for i in 0..self.field.k {
            c[i] = if self.c[i] == 0 { 0 } else { p - self.c[i] };
        }
        FieldElement { field: self.field, c }
    }

    #[inline]
    fn mul_raw(&self, rhs: &FieldElement) -> FieldElement {
        let f = self.field;
        let p = f.p as u64;
        if f.k == 1 {
            let mut c = [0; MAX_DEGREE];
            c[0] = ((self.c[0] as u64 * rhs.c[0] as u64) % p) as u32;
            return FieldElement { field: f, c };
        }
        let k = f.k;
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..k {
            let a = self.c[i] as u64;
            if a == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] += a * rhs.c[j] as u64;
            }
        }
        // x^k = -(m_0 + m_1 x + ... + m_{k-1} x^{k-1})
        for d in (k..2 * k - 1).rev() {
            let t = prod[d] % p;
            if t == 0 {
                continue;
            }
            for i in 0..k {
                let m = f.modulus[i] as u64;
                if m != 0 {
                    prod[d - k + i] += t * (p - m);
                }
            }
        }
        let mut c = [0; MAX_DEGREE];
        for i in 0..k {
            c[i] = (prod[i] % p) as u32;
        }
        FieldElement { field: f, c }
    }

    /// Square-and-multiply exponentiation.
    pub fn pow(self, mut e: u64) -> FieldElement {
        let mut base = self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_raw(&base);
            }
            base = base.mul_raw(&base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(self) -> Result<FieldElement, FieldError> {
        if self.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        Ok(self.pow(self.field.order - 2))
    }

    /// Multiplicative order of a nonzero element.
    pub fn multiplicative_order(self) -> Option<u64> {
        if self.is_zero() {
            return None;
        }
        let mut n = self.field.order - 1;
        for r in prime_factors(n) {
            while n.is_multiple_of(r) && self.pow(n / r).is_one() {
                n /= r;
            }
        }
        Some(n)
    }

    /// Applies the Frobenius `x -> x^(p^j)`.
    pub fn frobenius(self, j: usize) -> FieldElement {
        let mut x = self;
        for _ in 0..j {
            x = x.pow(self.field.p as u64);
        }
        x
    }

    /// Degree over `F_p` of the smallest subfield containing this element.
    pub fn minimal_degree(self) -> usize {
        let k = self.field.k;
        (1..=k)
            .filter(|d| k.is_multiple_of(*d))
            .find(|&d| self.frobenius(d) == self)
            .unwrap_or(k)
    }

    /// Re-expresses a prime-field element inside `target` (same characteristic).
    pub fn embed(self, target: Field) -> Result<FieldElement, FieldError> {
        if self.field.same(target) {
            return Ok(self);
        }
        if self.field.p != target.p || !self.in_prime_field() {
            return Err(FieldError::FieldMismatch);
        }
        Ok(target.constant(self.c[0] as u64))
    }
}

impl PartialEq for FieldElement {
    #[inline]
    fn eq(&self, other: &Self) -> bool {
        self.field.same(other.field) && self.c == other.c
    }
}

impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.c.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical element order: by [`FieldElement::index`].
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs()
            .iter()
            .rev()
            .cmp(other.coeffs().iter().rev())
            .then_with(|| self.field.p.cmp(&other.field.p))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 {
            write!(f, "{}", self.c[0])
        } else {
            write!(f, "{:?}", self.coeffs())
        }
    }
}

/// Serialized as the decimal coefficient list `[c0, ..., c_{k-1}]`.
impl Serialize for FieldElement {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.field.k))?;
        for c in self.coeffs() {
            seq.serialize_element(c)?;
        }
        seq.end()
    }
}

impl Add for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn add(self, rhs: FieldElement) -> FieldElement {
        self.assert_same(&rhs);
        self.add_raw(&rhs)
    }
}

impl Sub for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn sub(self, rhs: FieldElement) -> FieldElement {
        self.assert_same(&rhs);
        self.add_raw(&rhs.neg_raw())
    }
}

impl Mul for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn mul(self, rhs: FieldElement) -> FieldElement {
        self.assert_same(&rhs);
        self.mul_raw(&rhs)
    }
}

/// Panics on a zero divisor; use [`FieldElement::checked_div`] to handle it.
impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        self.checked_div(rhs).expect("field division")
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    #[inline]
    fn neg(self) -> FieldElement {
        self.neg_raw()
    }
}

impl AddAssign for FieldElement {
    #[inline]
    fn add_assign(&mut self, rhs: FieldElement) {
        *self = *self + rhs;
    }
}

impl SubAssign for FieldElement {
    #[inline]
    fn sub_assign(&mut self, rhs: FieldElement) {
        *self = *self - rhs;
    }
}

impl MulAssign for FieldElement {
    #[inline]
    fn mul_assign(&mut self, rhs: FieldElement) {
        *self = *self * rhs;
    }
}

impl Sum for FieldElement {
    /// Panics on an empty iterator (the field is unknown).
    fn sum<I: Iterator<Item = FieldElement>>(mut iter: I) -> FieldElement {
        let first = iter.next().expect("sum of an empty iterator of field elements");
        iter.fold(first, |a, b| a + b)
    }
}

impl Product for FieldElement {
    fn product<I: Iterator<Item = FieldElement>>(mut iter: I) -> FieldElement {
        let first = iter.next().expect("product of an empty iterator of field elements");
        iter.fold(first, |a, b| a * b)
    }
}

/// Dense univariate polynomials over `F_p` with `u64` residues, used only to
/// pick extension moduli.
mod upoly {
    fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    fn inv_mod(a: u64, p: u64) -> u64 {
        let mut acc = 1;
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

    pub(super) fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod(m[dm], p);
        while r.len() > dm {
            let shift = r.len() - 1 - dm;
            let t = r[r.len() - 1] * lead_inv % p;
            for (i, &mc) in m.iter().enumerate() {
                r[shift + i] = (r[shift + i] + p - t * mc % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    fn powmod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                acc = mulmod(&acc, &b, m, p);
            }
            b = mulmod(&b, &b, m, p);
            e >>= 1;
        }
        acc
    }

    pub(super) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = a.to_vec();
        let mut y = b.to_vec();
        trim(&mut x);
        trim(&mut y);
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    /// x^(p^j) mod m.
    fn frobenius_power(m: &[u64], p: u64, j: u32) -> Vec<u64> {
        let mut h = vec![0, 1];
        for _ in 0..j {
            h = powmod(&h, p, m, p);
        }
        h
    }

    /// Rabin's test: `f` of degree k is irreducible iff `x^(p^k) = x mod f`
    /// and `gcd(x^(p^(k/r)) - x, f) = 1` for every prime `r | k`.
    pub(super) fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        if k <= 1 {
            return k == 1;
        }
        let x = vec![0, 1];
        let full = frobenius_power(f, p, k as u32);
        if rem(&full, f, p) != rem(&x, f, p) {
            return false;
        }
        super::prime_factors(k as u64).into_iter().all(|r| {
            let mut h = frobenius_power(f, p, (k as u64 / r) as u32);
            h.resize(h.len().max(2), 0);
            h[1] = (h[1] + p - 1) % p;
            gcd(&h, f, p).len() == 1
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_has_no_modulus() {
        let f = make_field(11, 1).unwrap();
        assert_eq!(f.order(), 11);
        assert!(f.modulus().is_empty());
    }

    #[test]
    fn composite_rejected() {
        assert_eq!(make_field(12, 1).unwrap_err(), FieldError::NotPrime(12));
        assert_eq!(make_field(11, 0).unwrap_err(), FieldError::UnsupportedDegree(0));
        assert_eq!(make_field(11, 5).unwrap_err(), FieldError::UnsupportedDegree(5));
    }

    #[test]
    fn interning_returns_same_reference() {
        let a = make_field(13, 2).unwrap();
        let b = make_field(13, 2).unwrap();
        assert!(a.same(b));
    }

    /// Oracle: brute-force root search plus gcd with `x^p - x`.
    fn quadratic_irreducible_oracle(m: &[u64], p: u64) -> bool {
        let has_root = (0..p).any(|x| (m[0] + m[1] * x + m[2] * x * x).is_multiple_of(p));
        let mut xp = vec![0u64; p as usize + 1];
        xp[p as usize] = 1;
        xp[1] = p - 1;
        let g = upoly::gcd(&xp, m, p);
        assert_eq!(has_root, g.len() > 1);
        !has_root
    }

    #[test]
    fn quadratic_extension_modulus_is_irreducible_and_minimal() {
        let f = make_field(11, 2).unwrap();
        let m: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
        assert_eq!(m.len(), 3);
        assert_eq!(m[2], 1);
        assert!(quadratic_irreducible_oracle(&m, 11));
        // every lexicographically smaller monic quadratic is reducible
        for c1 in 0..=m[1] {
            for c0 in 0..11 {
                if c1 == m[1] && c0 >= m[0] {
                    break;
                }
                assert!(!quadratic_irreducible_oracle(&[c0, c1, 1], 11));
            }
        }
    }

    /// Oracle for degree 4: no monic divisor of degree 1 or 2.
    #[test]
    fn quartic_modulus_has_no_small_factor() {
        let p = 5;
        let f = make_field(p, 4).unwrap();
        let m: Vec<u64> = f.modulus().iter().map(|&c| c as u64).collect();
        for c0 in 0..p {
            assert!(!upoly::rem(&m, &[c0, 1], p).is_empty());
            for c1 in 0..p {
                assert!(!upoly::rem(&m, &[c0, c1, 1], p).is_empty());
            }
        }
    }

    #[test]
    fn small_examples() {
        let f = make_field(11, 1).unwrap();
        assert_eq!(f.constant(3).pow(5), f.one());
        assert_eq!(f.one().inv().unwrap(), f.one());
        assert_eq!(f.zero().inv().unwrap_err(), FieldError::DivisionByZero);
        let g = make_field(13, 1).unwrap();
        assert_eq!(f.one().checked_add(g.one()).unwrap_err(), FieldError::FieldMismatch);
    }

    #[test]
    fn roots_of_unity() {
        let f = make_field(11, 1).unwrap();
        let z = f.primitive_root_of_unity(5).unwrap();
        assert_eq!(z.multiplicative_order(), Some(5));
        let g = make_field(29, 1).unwrap();
        let z7 = g.primitive_root_of_unity(7).unwrap();
        assert!(z7.pow(7).is_one());
        for m in 1..7 {
            assert!(!z7.pow(m).is_one());
        }
        let h = make_field(7, 1).unwrap();
        assert_eq!(h.primitive_root_of_unity(5).unwrap_err(), FieldError::NoSuchRoot { n: 5, order: 7 });
        // 5 | 7^4 - 1 = 2400, so the extension has the root.
        let h4 = make_field(7, 4).unwrap();
        assert_eq!(h4.primitive_root_of_unity(5).unwrap().multiplicative_order(), Some(5));
    }

    #[test]
    fn fermat_in_extensions() {
        for (p, k) in [(3, 2), (5, 3), (13, 2), (7, 4)] {
            let f = make_field(p, k).unwrap();
            for x in f.elements().skip(1).step_by(7) {
                assert!(x.pow(f.order() - 1).is_one(), "{x} in {f:?}");
                assert_eq!(x * x.inv().unwrap(), f.one());
            }
        }
    }

    #[test]
    fn index_round_trip_and_minimal_degree() {
        let f = make_field(13, 2).unwrap();
        for i in 0..f.order() {
            assert_eq!(f.from_index(i).index(), i);
        }
        assert_eq!(f.constant(5).minimal_degree(), 1);
        assert_eq!(f.generator_root().minimal_degree(), 2);
        let e = f.constant(4);
        let base = make_field(13, 1).unwrap();
        assert_eq!(e.embed(base).unwrap(), base.constant(4));
        assert_eq!(f.generator_root().embed(base).unwrap_err(), FieldError::FieldMismatch);
        assert_eq!(make_field(13, 1).unwrap().constant(4).embed(f).unwrap(), e);
    }

    #[test]
    fn serialization_format() {
        let f = make_field(13, 2).unwrap();
        let e = f.element(&[3, 7]).unwrap();
        assert_eq!(serde_json::to_string(&e).unwrap(), "[3,7]");
        let spec = serde_json::to_value(make_field(11, 1).unwrap()).unwrap();
        assert_eq!(spec, serde_json::json!({"p": 11, "k": 1, "modulus": []}));
        assert!(f.element(&[13, 0]).is_err());
        assert!(f.element(&[1]).is_err());
    }
}
