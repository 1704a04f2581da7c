//! Dense univariate polynomials in `t` over a finite field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::field::{FieldElement, FieldRef};

/// Polynomial with coefficients little-endian; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: FieldRef,
    coeffs: Vec<FieldElement>,
}

impl Poly {
    pub fn zero(field: FieldRef) -> Self {
        Poly { field, coeffs: Vec::new() }
    }

    pub fn one(field: FieldRef) -> Self {
        Self::constant(field.one())
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_coeffs(c.field(), vec![c])
    }

    /// The variable `t`.
    pub fn var(field: FieldRef) -> Self {
        Self::monomial(field.one(), 1)
    }

    pub fn monomial(c: FieldElement, deg: usize) -> Self {
        let mut coeffs = vec![c.field().zero(); deg + 1];
        coeffs[deg] = c;
        Self::from_coeffs(c.field(), coeffs)
    }

    pub fn from_coeffs(field: FieldRef, coeffs: Vec<FieldElement>) -> Self {
        let mut p = Poly { field, coeffs };
        p.trim();
        p
    }

    /// Prime-field convenience constructor from little-endian integer coefficients.
    pub fn from_u64s(field: FieldRef, coeffs: &[u64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_u64(c)).collect())
    }

    pub fn from_i64s(field: FieldRef, coeffs: &[i64]) -> Self {
        Self::from_coeffs(field, coeffs.iter().map(|&c| field.from_i64(c)).collect())
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn field(&self) -> FieldRef {
        self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> FieldElement {
        self.coeffs.get(i).copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to 0; for size bounds only.
    pub fn degree_or_zero(&self) -> usize {
        self.degree().unwrap_or(0)
    }

    pub fn leading(&self) -> FieldElement {
        self.coeffs.last().copied().unwrap_or_else(|| self.field.zero())
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn monic(&self) -> Self {
        match self.leading().inverse() {
            Some(inv) => self.scale(inv),
            None => self.clone(),
        }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(|&a| a * c).collect())
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(self.field.zero(), |acc, &c| acc * *x + c)
    }

    pub fn derivative(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| c * self.field.from_u64(i as u64))
            .collect();
        Self::from_coeffs(self.field, coeffs)
    }

    /// Substitution `t ↦ t^m`.
    pub fn substitute_power(&self, m: usize) -> Self {
        assert!(m >= 1);
        let Some(d) = self.degree() else { return self.clone() };
        let mut coeffs = vec![self.field.zero(); d * m + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * m] = c;
        }
        Self::from_coeffs(self.field, coeffs)
    }

    /// Coefficientwise `a ↦ a^e`; `t` is fixed.
    pub fn map_coeffs(&self, f: impl Fn(&FieldElement) -> FieldElement) -> Self {
        Self::from_coeffs(self.field, self.coeffs.iter().map(f).collect())
    }

    /// Coefficients raised to the `q`-th power for the given base order `q`.
    pub fn frobenius(&self, q: u64) -> Self {
        self.map_coeffs(|a| a.pow(q))
    }

    /// Image under the embedding of the prime field into `into`.
    pub fn embed(&self, into: FieldRef) -> Self {
        self.map_coeffs(|a| into.embed(a)).with_field(into)
    }

    fn with_field(mut self, field: FieldRef) -> Self {
        self.field = field;
        self
    }

    /// Euclidean division. Panics on a zero divisor.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let Some(sd) = self.degree() else {
            return (Poly::zero(self.field), Poly::zero(self.field));
        };
        if sd < dd {
            return (Poly::zero(self.field), self.clone());
        }
        let inv_lead = d.leading().inverse().expect("nonzero leading coefficient");
        let mut rem = self.coeffs.clone();
        let mut quot = vec![self.field.zero(); sd - dd + 1];
        for i in (0..=sd - dd).rev() {
            let c = rem[i + dd] * inv_lead;
            quot[i] = c;
            if c.is_zero() {
                continue;
            }
            for (j, &dc) in d.coeffs.iter().enumerate() {
                rem[i + j] = rem[i + j] - c * dc;
            }
        }
        rem.truncate(dd);
        (Poly::from_coeffs(self.field, quot), Poly::from_coeffs(self.field, rem))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.div_rem(d).1
    }

    /// Exact quotient; panics in debug builds when the division leaves a remainder.
    pub fn exact_div(&self, d: &Poly) -> Poly {
        let (q, r) = self.div_rem(d);
        debug_assert!(r.is_zero(), "{self} is not divisible by {d}");
        q
    }

    pub fn divides(&self, other: &Poly) -> bool {
        other.rem(self).is_zero()
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn pow(&self, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one(self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::one(self.field).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = (&acc * &base).rem(m);
            }
            e >>= 1;
            if e > 0 {
                base = (&base * &base).rem(m);
            }
        }
        acc
    }

    /// Multiplicity of `pi` in `self` (`self` nonzero, `pi` nonconstant).
    pub fn multiplicity(&self, pi: &Poly) -> usize {
        assert!(!self.is_zero(), "multiplicity in the zero polynomial is infinite");
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(pi);
            if !r.is_zero() {
                return n;
            }
            cur = q;
            n += 1;
        }
    }
}

impl PartialOrd for Poly {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// By degree, then coefficients from the top in the field's element order.
impl Ord for Poly {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect();
        Poly::from_coeffs(self.field, coeffs)
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let coeffs = (0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect();
        Poly::from_coeffs(self.field, coeffs)
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero(self.field);
        }
        let mut coeffs = vec![self.field.zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] = coeffs[i + j] + a * b;
            }
        }
        Poly::from_coeffs(self.field, coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.map_coeffs(|a| -*a)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        -&self
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let compound = !c.is_prime_subfield();
            let coef = if compound { format!("({c})") } else { c.to_string() };
            match i {
                0 => write!(f, "{coef}")?,
                _ if c.is_one() => {}
                _ => write!(f, "{coef}*")?,
            }
            match i {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{i}")?,
            }
        }
        Ok(())
    }
}
