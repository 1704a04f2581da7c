//! Reduced rational functions in `t` and the places of `F_q(t)`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::factor::is_irreducible;
use super::field::{FieldElement, FieldRef};
use super::poly::Poly;
use super::Field;

/// `num / den` with `gcd(num, den) = 1` and `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

impl RatFunc {
    /// Builds and reduces `num / den`. Panics if `den` is zero.
    pub fn new(num: Poly, den: Poly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let field = num.field();
        if num.is_zero() {
            return RatFunc { num, den: Poly::one(field) };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() { (num, den) } else { (num.exact_div(&g), den.exact_div(&g)) };
        let lc = den.leading().inverse().expect("nonzero");
        RatFunc { num: num.scale(lc), den: den.scale(lc) }
    }

    pub fn from_poly(p: Poly) -> Self {
        let field = p.field();
        RatFunc { num: p, den: Poly::one(field) }
    }

    pub fn constant(c: FieldElement) -> Self {
        Self::from_poly(Poly::constant(c))
    }

    pub fn zero(field: FieldRef) -> Self {
        Self::from_poly(Poly::zero(field))
    }

    pub fn one(field: FieldRef) -> Self {
        Self::from_poly(Poly::one(field))
    }

    /// The variable `t`.
    pub fn var(field: FieldRef) -> Self {
        Self::from_poly(Poly::var(field))
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn field(&self) -> FieldRef {
        self.num.field()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<FieldElement> {
        (self.den.is_one() && self.num.is_constant()).then(|| self.num.coeff(0))
    }

    /// `max(deg num, deg den)`, the degree of the map `P^1 → P^1`.
    pub fn degree(&self) -> usize {
        self.num.degree_or_zero().max(self.den.degree_or_zero())
    }

    pub fn pow(&self, e: u64) -> Self {
        // num and den stay coprime under powers
        RatFunc { num: self.num.pow(e), den: self.den.pow(e) }
    }

    pub fn scale(&self, c: FieldElement) -> Self {
        if c.is_zero() {
            return Self::zero(self.field());
        }
        RatFunc { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Value at `t = a`, or `None` at a pole.
    pub fn eval(&self, a: &FieldElement) -> Option<FieldElement> {
        let d = self.den.eval(a);
        d.inverse().map(|inv| self.num.eval(a) * inv)
    }

    /// Substitution `t ↦ t^m`.
    pub fn substitute_power(&self, m: usize) -> Self {
        RatFunc::new(self.num.substitute_power(m), self.den.substitute_power(m))
    }

    /// Composition `self(g(t))`.
    pub fn compose(&self, g: &RatFunc) -> Self {
        let horner = |p: &Poly| {
            p.coeffs()
                .iter()
                .rev()
                .fold(RatFunc::zero(self.field()), |acc, &c| acc * g.clone() + RatFunc::constant(c))
        };
        let n = horner(&self.num);
        let d = horner(&self.den);
        n.checked_div(&d).expect("composition hits a pole of the denominator")
    }

    pub fn checked_div(&self, other: &RatFunc) -> Option<RatFunc> {
        other.inv().map(|inv| self.clone() * inv)
    }

    /// Coefficientwise `a ↦ a^q`.
    pub fn frobenius(&self, q: u64) -> Self {
        RatFunc::new(self.num.frobenius(q), self.den.frobenius(q))
    }

    pub fn embed(&self, into: FieldRef) -> Self {
        RatFunc { num: self.num.embed(into), den: self.den.embed(into) }
    }

    /// Order of vanishing at `place`; `None` stands for `+∞` (the zero function).
    pub fn valuation(&self, place: &Place) -> Option<i64> {
        if self.is_zero() {
            return None;
        }
        Some(match place {
            Place::Finite(pi) => self.num.multiplicity(pi) as i64 - self.den.multiplicity(pi) as i64,
            Place::Infinity(_) => {
                self.den.degree_or_zero() as i64 - self.num.degree_or_zero() as i64
            }
        })
    }
}

impl<'a> Add<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        if self.den == rhs.den {
            return RatFunc::new(&self.num + &rhs.num, self.den.clone());
        }
        RatFunc::new(&(&self.num * &rhs.den) + &(&rhs.num * &self.den), &self.den * &rhs.den)
    }
}

impl<'a> Sub<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RatFunc> for &'a RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        if self.is_zero() || rhs.is_zero() {
            return RatFunc::zero(self.field());
        }
        // cross-cancel before multiplying to keep intermediate degrees small
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n = &self.num.exact_div(&g1) * &rhs.num.exact_div(&g2);
        let d = &self.den.exact_div(&g2) * &rhs.den.exact_div(&g1);
        RatFunc::new(n, d)
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc { num: -&self.num, den: self.den.clone() }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc {
                (&self).$m(&rhs)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl Field for RatFunc {
    fn zero_like(&self) -> Self {
        RatFunc::zero(self.field())
    }
    fn one_like(&self) -> Self {
        RatFunc::one(self.field())
    }
    fn is_zero(&self) -> bool {
        RatFunc::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        Some(RatFunc::new(self.den.clone(), self.num.clone()))
    }
    fn from_i64_like(&self, n: i64) -> Self {
        RatFunc::constant(self.field().from_i64(n))
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

/// A closed point of `P^1` over the coefficient field: a monic irreducible polynomial
/// or the point at infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Finite(Poly),
    Infinity(FieldRef),
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{0} is not a monic irreducible polynomial")]
pub struct NotAPlace(pub String);

impl Place {
    pub fn finite(pi: Poly) -> Result<Self, NotAPlace> {
        if pi.is_monic() && is_irreducible(&pi) {
            Ok(Place::Finite(pi))
        } else {
            Err(NotAPlace(pi.to_string()))
        }
    }

    /// The place `t = a`.
    pub fn at(a: FieldElement) -> Self {
        Place::Finite(Poly::from_coeffs(a.field(), vec![-a, a.field().one()]))
    }

    pub fn degree(&self) -> usize {
        match self {
            Place::Finite(pi) => pi.degree_or_zero(),
            Place::Infinity(_) => 1,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, Place::Infinity(_))
    }

    pub fn field(&self) -> FieldRef {
        match self {
            Place::Finite(pi) => pi.field(),
            Place::Infinity(f) => f,
        }
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Finite(pi) => write!(f, "{pi}"),
            Place::Infinity(_) => write!(f, "inf"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{factor::factor, make_field};

    #[test]
    fn canonical_form() {
        let f = make_field(7, 1).unwrap();
        let x = Poly::var(f);
        let r = RatFunc::new(&x * &Poly::from_u64s(f, &[1, 1]), &x.scale(f.from_u64(3)) * &x);
        assert!(r.den().is_monic());
        assert!(r.num().gcd(r.den()).is_one());
        assert_eq!(r.den(), &x);
    }

    #[test]
    fn valuation_examples() {
        let f = make_field(7, 1).unwrap();
        let t2 = RatFunc::from_poly(Poly::monomial(f.one(), 2));
        assert_eq!(t2.valuation(&Place::at(f.zero())), Some(2));
        assert_eq!(t2.valuation(&Place::Infinity(f)), Some(-2));
        assert_eq!(RatFunc::zero(f).valuation(&Place::Infinity(f)), None);
        // t^6 - c vanishes simply at each of its places
        let g = Poly::from_i64s(f, &[-6, 0, 0, 0, 0, 0, 1]);
        for (pi, _) in factor(&g) {
            let place = Place::finite(pi).unwrap();
            assert_eq!(RatFunc::from_poly(g.clone()).valuation(&place), Some(1));
        }
    }

    #[test]
    fn rejects_reducible_place() {
        let f = make_field(7, 1).unwrap();
        assert!(Place::finite(Poly::from_i64s(f, &[-1, 0, 1])).is_err());
        assert!(Place::finite(Poly::from_i64s(f, &[1, 0, 1])).is_ok());
    }

    #[test]
    fn compose_with_inversion() {
        let f = make_field(13, 1).unwrap();
        let t = RatFunc::var(f);
        let r = RatFunc::new(Poly::from_u64s(f, &[1, 2]), Poly::from_u64s(f, &[3, 0, 1]));
        let inv_t = t.inv().unwrap();
        assert_eq!(r.compose(&inv_t).compose(&inv_t), r);
        assert_eq!(r.compose(&t), r);
    }
}
