//! Finite fields `F_p` and single-step extensions `F_p[z]/(m(z))` of degree at most six.
//!
//! Field descriptors are interned: `make_field(p, k)` returns the same `&'static FieldDesc`
//! for the same `(p, k)`, which lets elements be small `Copy` values.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Mutex, OnceLock};

use rand::Rng;

use super::roots::{RootData, SpecialConstants};
use super::Field;

/// Largest extension degree a descriptor may carry.
pub const MAX_EXT_DEGREE: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("characteristic {0} must exceed 3")]
    SmallCharacteristic(u64),
    #[error("characteristic {0} must be below 2^32")]
    CharacteristicTooLarge(u64),
    #[error("extension degree {0} outside [1, {MAX_EXT_DEGREE}]")]
    BadDegree(usize),
    #[error("field order {p}^{k} does not fit in 63 bits")]
    OrderOverflow { p: u64, k: usize },
    #[error("q = {0} is not 1 mod 3, so the field has no primitive cube root of unity")]
    NoCubeRootOfUnity(u64),
    #[error("zero has no residue symbol")]
    ZeroSymbol,
}

/// Descriptor of `F_q`, `q = p^k`.
pub struct FieldDesc {
    p: u64,
    k: usize,
    /// Monic irreducible modulus, little-endian, length `k + 1`; empty for prime fields.
    modulus: Vec<u64>,
    order: u64,
    pub(crate) sylow2: OnceLock<RootData>,
    pub(crate) sylow3: OnceLock<Option<RootData>>,
    pub(crate) constants: OnceLock<Option<SpecialConstants>>,
}

pub type FieldRef = &'static FieldDesc;

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k
    }
}
impl Eq for FieldDesc {}

impl Hash for FieldDesc {
    fn hash<H: Hasher>(&self, state: &mut H) {
        (self.p, self.k).hash(state);
    }
}

impl PartialOrd for FieldDesc {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldDesc {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.p, self.k).cmp(&(other.p, other.k))
    }
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)?;
        if self.k > 1 {
            write!(f, "^{} mod {:?}", self.k, self.modulus)?;
        }
        Ok(())
    }
}

impl fmt::Display for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.k == 1 {
            write!(f, "F_{}", self.p)
        } else {
            write!(f, "F_{}^{}", self.p, self.k)
        }
    }
}

impl FieldDesc {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.k
    }

    /// `q = p^k`.
    pub fn order(&self) -> u64 {
        self.order
    }

    /// The modulus `m(z)` as residues, little-endian; `None` for a prime field.
    pub fn modulus(&self) -> Option<&[u64]> {
        if self.k == 1 {
            None
        } else {
            Some(&self.modulus)
        }
    }

    pub fn is_prime_field(&self) -> bool {
        self.k == 1
    }

    pub fn zero(&'static self) -> FieldElement {
        FieldElement { field: self, c: [0; MAX_EXT_DEGREE] }
    }

    pub fn one(&'static self) -> FieldElement {
        self.from_u64(1)
    }

    pub fn from_u64(&'static self, v: u64) -> FieldElement {
        let mut c = [0; MAX_EXT_DEGREE];
        c[0] = v % self.p;
        FieldElement { field: self, c }
    }

    pub fn from_i64(&'static self, v: i64) -> FieldElement {
        let r = v.rem_euclid(self.p as i64) as u64;
        self.from_u64(r)
    }

    /// Element from little-endian residues in the modulus basis.
    pub fn from_coeffs(&'static self, coeffs: &[u64]) -> FieldElement {
        assert!(coeffs.len() <= self.k, "too many coefficients for {self}");
        let mut c = [0; MAX_EXT_DEGREE];
        for (dst, src) in c.iter_mut().zip(coeffs) {
            *dst = src % self.p;
        }
        FieldElement { field: self, c }
    }

    /// The generator `z` of the extension (the class of the modulus variable).
    pub fn generator(&'static self) -> FieldElement {
        if self.k == 1 {
            // the modulus variable does not exist; the prime field is generated by 1
            return self.one();
        }
        let mut c = [0; MAX_EXT_DEGREE];
        c[1] = 1;
        FieldElement { field: self, c }
    }

    /// Inverse of [`FieldElement::index`]: digits of `idx` in base `p`, little-endian.
    pub fn from_index(&'static self, mut idx: u64) -> FieldElement {
        let mut c = [0; MAX_EXT_DEGREE];
        for slot in c.iter_mut().take(self.k) {
            *slot = idx % self.p;
            idx /= self.p;
        }
        FieldElement { field: self, c }
    }

    pub fn elements(&'static self) -> impl Iterator<Item = FieldElement> {
        (0..self.order).map(move |i| self.from_index(i))
    }

    pub fn random<R: Rng + ?Sized>(&'static self, rng: &mut R) -> FieldElement {
        let mut c = [0; MAX_EXT_DEGREE];
        for slot in c.iter_mut().take(self.k) {
            *slot = rng.gen_range(0..self.p);
        }
        FieldElement { field: self, c }
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&'static self, rng: &mut R) -> FieldElement {
        loop {
            let a = self.random(rng);
            if !a.is_zero() {
                return a;
            }
        }
    }

    /// Image of a prime-field element of the same characteristic.
    pub fn embed(&'static self, a: &FieldElement) -> FieldElement {
        assert!(
            a.field.k == 1 && a.field.p == self.p,
            "can only embed F_{} into {self}",
            self.p
        );
        self.from_u64(a.c[0])
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn registry() -> &'static Mutex<HashMap<(u64, usize), FieldRef>> {
    static FIELDS: OnceLock<Mutex<HashMap<(u64, usize), FieldRef>>> = OnceLock::new();
    FIELDS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Returns the descriptor of `F_{p^k}` with the smallest irreducible monic modulus.
///
/// Monic polynomials of degree `k` are ordered by the integer `sum c_i p^i` of their
/// non-leading coefficients; the first irreducible one is the modulus.
pub fn make_field(p: u64, k: usize) -> Result<FieldRef, FieldError> {
    if !is_prime(p) {
        return Err(FieldError::NotPrime(p));
    }
    if p <= 3 {
        return Err(FieldError::SmallCharacteristic(p));
    }
    if p >= 1 << 32 {
        return Err(FieldError::CharacteristicTooLarge(p));
    }
    if k == 0 || k > MAX_EXT_DEGREE {
        return Err(FieldError::BadDegree(k));
    }
    let order = (0..k)
        .try_fold(1u64, |acc, _| acc.checked_mul(p))
        .filter(|q| *q < 1 << 63)
        .ok_or(FieldError::OrderOverflow { p, k })?;

    if let Some(f) = registry().lock().unwrap().get(&(p, k)) {
        return Ok(f);
    }
    let modulus = if k == 1 {
        Vec::new()
    } else {
        smallest_irreducible(make_field(p, 1)?, k)
    };
    let desc = FieldDesc {
        p,
        k,
        modulus,
        order,
        sylow2: OnceLock::new(),
        sylow3: OnceLock::new(),
        constants: OnceLock::new(),
    };
    let mut reg = registry().lock().unwrap();
    // another thread may have won the race; keep the first
    let entry = reg.entry((p, k)).or_insert_with(|| Box::leak(Box::new(desc)));
    Ok(*entry)
}

fn smallest_irreducible(prime: FieldRef, k: usize) -> Vec<u64> {
    use super::poly::Poly;
    let p = prime.p;
    let count = p.pow(k as u32);
    for idx in 0..count {
        let mut coeffs: Vec<u64> = (0..k).map(|i| (idx / p.pow(i as u32)) % p).collect();
        coeffs.push(1);
        let poly = Poly::from_u64s(prime, &coeffs);
        if super::factor::is_irreducible(&poly) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_{p}")
}

/// Element of `F_{p^k}`: residues of the coefficients in the modulus basis.
#[derive(Clone, Copy)]
pub struct FieldElement {
    field: FieldRef,
    c: [u64; MAX_EXT_DEGREE],
}

impl FieldElement {
    pub fn field(&self) -> FieldRef {
        self.field
    }

    /// Little-endian residues in the modulus basis (length `k`).
    pub fn coeffs(&self) -> &[u64] {
        &self.c[..self.field.k]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&x| x == 0)
    }

    pub fn is_one(&self) -> bool {
        self.c[0] == 1 && self.c[1..].iter().all(|&x| x == 0)
    }

    /// True when the element lies in the prime subfield.
    pub fn is_prime_subfield(&self) -> bool {
        self.c[1..].iter().all(|&x| x == 0)
    }

    /// Integer encoding `sum c_i p^i`; consistent with the total order on elements.
    pub fn index(&self) -> u64 {
        self.coeffs().iter().rev().fold(0, |acc, &d| acc * self.field.p + d)
    }

    fn same_field(&self, other: &Self) {
        debug_assert!(
            std::ptr::eq(self.field, other.field),
            "mixing elements of {} and {}",
            self.field,
            other.field
        );
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = *self;
        let mut acc = self.field.one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            e >>= 1;
        }
        acc
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            None
        } else {
            Some(self.pow(self.field.order - 2))
        }
    }

    /// `a ↦ a^(p^e)`, the `e`-th power of the absolute Frobenius.
    pub fn frobenius(&self, e: usize) -> Self {
        let mut out = *self;
        for _ in 0..e % self.field.k {
            out = out.pow(self.field.p);
        }
        out
    }

    /// Square of the element, for readability at call sites.
    pub fn square(&self) -> Self {
        *self * *self
    }

    pub fn double(&self) -> Self {
        *self + *self
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field == other.field && self.c == other.c
    }
}
impl Eq for FieldElement {}

impl Hash for FieldElement {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.field.p.hash(state);
        self.field.k.hash(state);
        self.coeffs().hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Integer order in prime fields, lexicographic from the top coefficient in extensions.
impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs().iter().rev().cmp(other.coeffs().iter().rev())
    }
}

impl Add for FieldElement {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let p = self.field.p;
        let mut c = [0; MAX_EXT_DEGREE];
        for i in 0..self.field.k {
            let s = self.c[i] + rhs.c[i];
            c[i] = if s >= p { s - p } else { s };
        }
        FieldElement { field: self.field, c }
    }
}

impl Sub for FieldElement {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for FieldElement {
    type Output = Self;
    fn neg(self) -> Self {
        let p = self.field.p;
        let mut c = [0; MAX_EXT_DEGREE];
        for i in 0..self.field.k {
            c[i] = if self.c[i] == 0 { 0 } else { p - self.c[i] };
        }
        FieldElement { field: self.field, c }
    }
}

impl Mul for FieldElement {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.same_field(&rhs);
        let f = self.field;
        let p = f.p;
        if f.k == 1 {
            let mut c = [0; MAX_EXT_DEGREE];
            c[0] = self.c[0] * rhs.c[0] % p;
            return FieldElement { field: f, c };
        }
        let k = f.k;
        let mut prod = [0u64; 2 * MAX_EXT_DEGREE - 1];
        for i in 0..k {
            if self.c[i] == 0 {
                continue;
            }
            for j in 0..k {
                prod[i + j] = (prod[i + j] + self.c[i] * rhs.c[j]) % p;
            }
        }
        // reduce with z^k = -(m_0 + ... + m_{k-1} z^{k-1})
        for top in (k..2 * k - 1).rev() {
            let lead = prod[top];
            if lead == 0 {
                continue;
            }
            prod[top] = 0;
            for (i, &m) in f.modulus[..k].iter().enumerate() {
                let idx = top - k + i;
                prod[idx] = (prod[idx] + (p - lead) * m) % p;
            }
        }
        let mut c = [0; MAX_EXT_DEGREE];
        c[..k].copy_from_slice(&prod[..k]);
        FieldElement { field: f, c }
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.field.k == 1 || self.is_prime_subfield() {
            return write!(f, "{}", self.c[0]);
        }
        let mut first = true;
        for i in (0..self.field.k).rev() {
            let d = self.c[i];
            if d == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match (i, d) {
                (0, _) => write!(f, "{d}")?,
                (1, 1) => write!(f, "z")?,
                (1, _) => write!(f, "{d}*z")?,
                (_, 1) => write!(f, "z^{i}")?,
                _ => write!(f, "{d}*z^{i}")?,
            }
        }
        Ok(())
    }
}

impl Field for FieldElement {
    fn zero_like(&self) -> Self {
        self.field.zero()
    }
    fn one_like(&self) -> Self {
        self.field.one()
    }
    fn is_zero(&self) -> bool {
        FieldElement::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse()
    }
    fn from_i64_like(&self, n: i64) -> Self {
        self.field.from_i64(n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prime_field_basics() {
        let f7 = make_field(7, 1).unwrap();
        assert_eq!(f7.order(), 7);
        assert!(f7.modulus().is_none());
        let a = f7.from_u64(3);
        let b = f7.from_u64(5);
        assert_eq!(a + b, f7.from_u64(1));
        assert_eq!(a * b, f7.from_u64(1));
        assert_eq!(a.inverse().unwrap(), b);
        assert_eq!(-a, f7.from_u64(4));
        assert!(f7.zero().inverse().is_none());
    }

    #[test]
    fn rejects_bad_characteristics() {
        assert_eq!(make_field(4, 1).unwrap_err(), FieldError::NotPrime(4));
        assert_eq!(make_field(3, 1).unwrap_err(), FieldError::SmallCharacteristic(3));
        assert_eq!(make_field(7, 7).unwrap_err(), FieldError::BadDegree(7));
        assert_eq!(make_field(7, 0).unwrap_err(), FieldError::BadDegree(0));
    }

    #[test]
    fn descriptors_are_interned() {
        let a = make_field(13, 2).unwrap();
        let b = make_field(13, 2).unwrap();
        assert!(std::ptr::eq(a, b));
    }

    #[test]
    fn f49_modulus_is_smallest_irreducible_quadratic() {
        // Oracle: enumerate monic quadratics t^2 + c1 t + c0 in index order c0 + 7 c1
        // and take the first without a root in F_7.
        let oracle = (0..49u64)
            .map(|i| (i % 7, i / 7))
            .find(|&(c0, c1)| (0..7u64).all(|x| (x * x + c1 * x + c0) % 7 != 0))
            .unwrap();
        assert_eq!(oracle, (1, 0));
        let f49 = make_field(7, 2).unwrap();
        assert_eq!(f49.modulus().unwrap(), &[1, 0, 1]);
        assert_eq!(f49.order(), 49);
    }

    #[test]
    fn extension_generator_satisfies_modulus() {
        for (p, k) in [(7, 2), (7, 3), (7, 6), (13, 6), (11, 5)] {
            let f = make_field(p, k).unwrap();
            let z = f.generator();
            let m = f.modulus().unwrap();
            let value = m
                .iter()
                .enumerate()
                .fold(f.zero(), |acc, (i, &mi)| acc + f.from_u64(mi) * z.pow(i as u64));
            assert!(value.is_zero(), "{f}");
            // z^(q-1) = 1
            assert!(z.pow(f.order() - 1).is_one());
        }
    }

    #[test]
    fn frobenius_has_order_k() {
        let f = make_field(7, 6).unwrap();
        let z = f.generator();
        assert_ne!(z.frobenius(1), z);
        assert_eq!(z.frobenius(6), z);
        assert_eq!(z.frobenius(1), z.pow(7));
    }

    #[test]
    fn index_round_trip_and_order() {
        let f = make_field(5, 3).unwrap();
        for i in [0, 1, 4, 5, 17, 124] {
            assert_eq!(f.from_index(i).index(), i);
        }
        let mut all: Vec<_> = f.elements().collect();
        let sorted = all.clone();
        all.sort();
        assert_eq!(all, sorted);
    }

    #[test]
    fn display_forms() {
        let f = make_field(7, 3).unwrap();
        assert_eq!(f.from_coeffs(&[5, 1, 2]).to_string(), "2*z^2 + z + 5");
        assert_eq!(f.from_coeffs(&[3]).to_string(), "3");
        assert_eq!(f.zero().to_string(), "0");
    }
}
