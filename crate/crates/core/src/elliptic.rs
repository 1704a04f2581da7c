//! Short Weierstrass curves `y² = x³ + Ax + B` over any [`Field`], one group law for
//! curves over `F_q` and over `F_q(t)`.

use std::fmt;

use crate::algebra::{legendre, FieldElement, FieldRef, Field, RatFunc};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CurveError {
    #[error("singular curve: 4A^3 + 27B^2 = 0")]
    Singular,
    #[error("twist parameter {0} is a square, so the twist is trivial")]
    SquareTwist(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve<F> {
    a: F,
    b: F,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Point<F> {
    Zero,
    Affine { x: F, y: F },
}

/// A point over a function field `F_{q^k}(t)`; the coefficient field of `x`, `y` records `k`.
pub type Section = Point<RatFunc>;

/// A point over a finite field.
pub type PointOverField = Point<FieldElement>;

impl<F> Point<F> {
    pub fn affine(x: F, y: F) -> Self {
        Point::Affine { x, y }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Point::Zero)
    }

    pub fn coords(&self) -> Option<(&F, &F)> {
        match self {
            Point::Zero => None,
            Point::Affine { x, y } => Some((x, y)),
        }
    }

    pub fn map<G>(&self, f: impl Fn(&F) -> G) -> Point<G> {
        match self {
            Point::Zero => Point::Zero,
            Point::Affine { x, y } => Point::Affine { x: f(x), y: f(y) },
        }
    }
}

impl Section {
    /// Extension degree of the coefficient field over the prime field.
    pub fn ext_degree(&self) -> Option<usize> {
        self.coords().map(|(x, _)| x.field().degree())
    }

    /// Coefficientwise `a ↦ a^q`.
    pub fn frobenius(&self, q: u64) -> Self {
        self.map(|f| f.frobenius(q))
    }

    /// Value at `t = a`, or `None` when a coordinate has a pole there.
    pub fn specialize(&self, a: &FieldElement) -> Option<PointOverField> {
        match self {
            Point::Zero => Some(Point::Zero),
            Point::Affine { x, y } => Some(Point::Affine { x: x.eval(a)?, y: y.eval(a)? }),
        }
    }
}

impl<F: fmt::Display> fmt::Display for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Zero => write!(f, "O"),
            Point::Affine { x, y } => write!(f, "({x}, {y})"),
        }
    }
}

impl<F: fmt::Display> fmt::Debug for Point<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> Curve<F> {
    pub fn new(a: F, b: F) -> Result<Self, CurveError> {
        let c = Curve { a, b };
        if c.discriminant().is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(c)
    }

    pub fn a(&self) -> &F {
        &self.a
    }

    pub fn b(&self) -> &F {
        &self.b
    }

    /// `-16(4A³ + 27B²)`.
    pub fn discriminant(&self) -> F {
        let four = self.a.from_i64_like(4);
        let tw7 = self.a.from_i64_like(27);
        self.a.from_i64_like(-16) * (four * self.a.cube() + tw7 * self.b.square())
    }

    /// `1728 · 4A³ / (4A³ + 27B²)`.
    pub fn j_invariant(&self) -> F {
        let four_a3 = self.a.from_i64_like(4) * self.a.cube();
        let denom = four_a3.clone() + self.a.from_i64_like(27) * self.b.square();
        (self.a.from_i64_like(1728) * four_a3)
            .checked_quotient(&denom)
            .expect("nonsingular curve")
    }

    pub fn rhs(&self, x: &F) -> F {
        x.cube() + self.a.clone() * x.clone() + self.b.clone()
    }

    pub fn contains(&self, p: &Point<F>) -> bool {
        match p {
            Point::Zero => true,
            Point::Affine { x, y } => y.square() == self.rhs(x),
        }
    }

    pub fn neg(&self, p: &Point<F>) -> Point<F> {
        match p {
            Point::Zero => Point::Zero,
            Point::Affine { x, y } => Point::Affine { x: x.clone(), y: -y.clone() },
        }
    }

    /// Chord–tangent addition.
    pub fn add(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        let (Point::Affine { x: x1, y: y1 }, Point::Affine { x: x2, y: y2 }) = (p, q) else {
            return if p.is_zero() { q.clone() } else { p.clone() };
        };
        let slope = if x1 == x2 {
            if (y1.clone() + y2.clone()).is_zero() {
                return Point::Zero;
            }
            // doubling: (3x² + A) / 2y
            (x1.from_i64_like(3) * x1.square() + self.a.clone())
                .checked_quotient(&(y1.from_i64_like(2) * y1.clone()))
                .expect("y ≠ 0 when 2P ≠ O")
        } else {
            (y2.clone() - y1.clone())
                .checked_quotient(&(x2.clone() - x1.clone()))
                .expect("x1 ≠ x2")
        };
        let x3 = slope.square() - x1.clone() - x2.clone();
        let y3 = slope * (x1.clone() - x3.clone()) - y1.clone();
        Point::Affine { x: x3, y: y3 }
    }

    pub fn sub(&self, p: &Point<F>, q: &Point<F>) -> Point<F> {
        self.add(p, &self.neg(q))
    }

    /// `[n]P` for any integer `n`.
    pub fn mul(&self, n: i64, p: &Point<F>) -> Point<F> {
        let mut base = if n < 0 { self.neg(p) } else { p.clone() };
        let mut k = n.unsigned_abs();
        let mut acc = Point::Zero;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(&acc, &base);
            }
            k >>= 1;
            if k > 0 {
                base = self.add(&base, &base);
            }
        }
        acc
    }

    /// `Σ n_i P_i`.
    pub fn combination(&self, coeffs: &[i64], points: &[Point<F>]) -> Point<F> {
        coeffs
            .iter()
            .zip(points)
            .fold(Point::Zero, |acc, (&n, p)| self.add(&acc, &self.mul(n, p)))
    }

    /// Smallest `n ≤ bound` with `[n]P = O`.
    pub fn order(&self, p: &Point<F>, bound: u32) -> Option<u32> {
        let mut acc = p.clone();
        for n in 1..=bound {
            if acc.is_zero() {
                return Some(n);
            }
            acc = self.add(&acc, p);
        }
        None
    }

    pub fn map<G: Field>(&self, f: impl Fn(&F) -> G) -> Curve<G> {
        Curve { a: f(&self.a), b: f(&self.b) }
    }
}

impl Curve<FieldElement> {
    pub fn field(&self) -> FieldRef {
        self.a.field()
    }

    /// `#E(F_q)` by summing the quadratic character over `x ∈ F_q`.
    pub fn count_points(&self) -> u64 {
        let q = self.field().order() as i64;
        let s: i64 = self
            .field()
            .elements()
            .map(|x| legendre(&self.rhs(&x)) as i64)
            .sum();
        (q + 1 + s) as u64
    }

    pub fn points(&self) -> Vec<PointOverField> {
        let mut out = vec![Point::Zero];
        for x in self.field().elements() {
            let r = self.rhs(&x);
            for y in crate::algebra::sqrt(&r).into_iter() {
                out.push(Point::affine(x, y));
                if !y.is_zero() {
                    out.push(Point::affine(x, -y));
                }
            }
        }
        out
    }
}

/// `E_b: y² = x³ - b`.
pub fn j_zero_curve(b: FieldElement) -> Result<Curve<FieldElement>, CurveError> {
    Curve::new(b.field().zero(), -b)
}

/// The twist `c·y² = x³ - b` of `E_b` and its short model `Y² = X³ - b c³`
/// under `(x, y) ↦ (c x, c² y)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticTwist {
    pub b: FieldElement,
    pub c: FieldElement,
    pub short: Curve<FieldElement>,
}

impl QuadraticTwist {
    /// Image of a point of `c·y² = x³ - b` on the short model.
    pub fn to_short(&self, x: FieldElement, y: FieldElement) -> PointOverField {
        Point::affine(self.c * x, self.c * self.c * y)
    }

    pub fn from_short(&self, p: &PointOverField) -> Option<(FieldElement, FieldElement)> {
        let (x, y) = p.coords()?;
        let ci = self.c.inverse().expect("c ≠ 0");
        Some((*x * ci, *y * ci * ci))
    }

    /// True when `(x, y)` satisfies `c·y² = x³ - b`.
    pub fn contains(&self, x: FieldElement, y: FieldElement) -> bool {
        self.c * y * y == x * x * x - self.b
    }
}

pub fn quadratic_twist(b: FieldElement, c: FieldElement) -> Result<QuadraticTwist, CurveError> {
    if legendre(&c) >= 0 {
        return Err(CurveError::SquareTwist(c.to_string()));
    }
    let short = Curve::new(b.field().zero(), -(b * c * c * c))?;
    Ok(QuadraticTwist { b, c, short })
}
