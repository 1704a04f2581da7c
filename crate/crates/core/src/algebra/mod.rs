//! Exact arithmetic: finite fields, their extensions, polynomials and rational functions.

pub mod factor;
pub mod field;
pub mod poly;
pub mod ratfunc;
pub mod roots;

use std::fmt::Debug;
use std::ops::{Add, Mul, Neg, Sub};

pub use factor::{factor, is_irreducible};
pub use field::{make_field, FieldDesc, FieldElement, FieldError, FieldRef, MAX_EXT_DEGREE};
pub use poly::Poly;
pub use ratfunc::{Place, RatFunc};
pub use roots::{cbrt, cube_roots, cubic_symbol, is_cube, is_square, legendre, special_constants, sqrt, SpecialConstants};

/// A commutative field whose elements know which field they belong to.
///
/// Implemented by [`FieldElement`] (finite fields) and [`RatFunc`] (function fields), so the
/// group law and the isomorphism formulas are written once for both.
pub trait Field:
    Clone + PartialEq + Debug + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn inv(&self) -> Option<Self>;
    fn from_i64_like(&self, n: i64) -> Self;

    fn checked_quotient(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|i| self.clone() * i)
    }

    fn square(&self) -> Self {
        self.clone() * self.clone()
    }

    fn cube(&self) -> Self {
        self.square() * self.clone()
    }
}
