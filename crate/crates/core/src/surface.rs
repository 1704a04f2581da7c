//! The surface family attached to `(q, b, c)`: the Kummer surface `K₂`, the Kuwata
//! surfaces `K₆ₙ`, their Weierstrass model `E` and the auxiliary surfaces `E_j`.

use std::fmt;

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    cbrt, cube_roots, factor, is_cube, is_square, make_field, special_constants, sqrt, Field,
    FieldElement, FieldError, FieldRef, Place, Poly, RatFunc, SpecialConstants,
};
use crate::elliptic::{Curve, Point, Section};

/// Degree of the working extension `F_{q^6} ⊇ F_q(ω, √c, ∛b, ∛(4b))`.
pub const EXT_DEGREE: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Strict,
    /// Accepts a cube `b`, flagging it.
    Relaxed,
}

/// One hypothesis on `(q, b, c)`; the variants double as stable error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, thiserror::Error)]
#[serde(rename_all = "kebab-case")]
pub enum ParamError {
    #[error("q must be a prime above 3")]
    QNotPrime,
    #[error("q must be 1 mod 3")]
    QMod3,
    #[error("b must be nonzero")]
    BZero,
    #[error("c must be nonzero")]
    CZero,
    #[error("b is a cube in F_q")]
    BIsCube,
    #[error("c is not a cube in F_q")]
    CNotCube,
    #[error("c is a square in F_q")]
    CIsSquare,
}

impl ParamError {
    pub fn code(&self) -> &'static str {
        match self {
            ParamError::QNotPrime => "q-not-prime",
            ParamError::QMod3 => "q-mod-3",
            ParamError::BZero => "b-zero",
            ParamError::CZero => "c-zero",
            ParamError::BIsCube => "b-is-cube",
            ParamError::CNotCube => "c-not-cube",
            ParamError::CIsSquare => "c-is-square",
        }
    }

    /// The hypothesis whose failure this error reports.
    pub fn requirement(&self) -> &'static str {
        match self {
            ParamError::QNotPrime => "q is a prime above 3",
            ParamError::QMod3 => "q = 1 mod 3",
            ParamError::BZero => "b != 0",
            ParamError::CZero => "c != 0",
            ParamError::BIsCube => "b is not a cube",
            ParamError::CNotCube => "c is a cube",
            ParamError::CIsSquare => "c is not a square",
        }
    }
}

/// Outcome of one hypothesis check, for reporting.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub hypothesis: ParamError,
    pub holds: bool,
    /// Set when the hypothesis fails but the mode tolerates it.
    pub tolerated: bool,
}

/// Validated parameters with every root the constructions need.
#[derive(Debug, Clone)]
pub struct FamilyParams {
    pub base: FieldRef,
    pub ext: FieldRef,
    pub b: FieldElement,
    pub c: FieldElement,
    pub constants: SpecialConstants,
    /// Canonical `∛c ∈ F_q`.
    pub cbrt_c: FieldElement,
    /// `√c`, `∛b`, `∛(4b)` in `F_{q^6}`, canonical (smallest) choices.
    pub sqrt_c: FieldElement,
    pub cbrt_b: FieldElement,
    pub cbrt_4b: FieldElement,
    pub mode: Mode,
    pub b_is_cube: bool,
}

/// Checks every hypothesis independently.
pub fn hypothesis_checks(q: u64, b: u64, c: u64, mode: Mode) -> Vec<HypothesisCheck> {
    let check = |hypothesis, holds: bool| HypothesisCheck {
        hypothesis,
        holds,
        tolerated: !holds && hypothesis == ParamError::BIsCube && mode == Mode::Relaxed,
    };
    let Ok(f) = make_field(q, 1) else {
        return vec![check(ParamError::QNotPrime, false)];
    };
    let (b, c) = (f.from_u64(b), f.from_u64(c));
    vec![
        check(ParamError::QNotPrime, true),
        check(ParamError::QMod3, q % 3 == 1),
        check(ParamError::BZero, !b.is_zero()),
        check(ParamError::CZero, !c.is_zero()),
        check(ParamError::BIsCube, !b.is_zero() && !is_cube(&b)),
        check(ParamError::CNotCube, c.is_zero() || is_cube(&c)),
        check(ParamError::CIsSquare, !c.is_zero() && !is_square(&c)),
    ]
}

pub fn validate_params(q: u64, b: u64, c: u64, mode: Mode) -> Result<FamilyParams, ParamError> {
    let checks = hypothesis_checks(q, b, c, mode);
    if let Some(bad) = checks.iter().find(|h| !h.holds && !h.tolerated) {
        return Err(bad.hypothesis);
    }
    let base = make_field(q, 1).map_err(|_| ParamError::QNotPrime)?;
    let ext = make_field(q, EXT_DEGREE).map_err(|_| ParamError::QNotPrime)?;
    let (b, c) = (base.from_u64(b), base.from_u64(c));
    let constants = special_constants(base).map_err(|_| ParamError::QMod3)?;
    let cbrt_c = cbrt(&c).ok_or(ParamError::CNotCube)?;
    let root_in_ext = |a: FieldElement, roots: fn(&FieldElement) -> Option<FieldElement>| {
        roots(&ext.embed(&a)).expect("F_{q^6} contains square and cube roots of F_q")
    };
    Ok(FamilyParams {
        base,
        ext,
        b,
        c,
        constants,
        cbrt_c,
        sqrt_c: root_in_ext(c, sqrt),
        cbrt_b: root_in_ext(b, cbrt),
        cbrt_4b: root_in_ext(base.from_u64(4) * b, cbrt),
        mode,
        b_is_cube: is_cube(&b),
    })
}

/// All `(b, c)` satisfying the strict hypotheses for a prime `q`.
pub fn valid_pairs(q: u64) -> Vec<(u64, u64)> {
    let Ok(f) = make_field(q, 1) else { return Vec::new() };
    if q % 3 != 1 {
        return Vec::new();
    }
    let cs: Vec<u64> = (1..q)
        .filter(|&c| {
            let c = f.from_u64(c);
            is_cube(&c) && !is_square(&c)
        })
        .collect();
    (1..q)
        .filter(|&b| !is_cube(&f.from_u64(b)))
        .flat_map(|b| cs.iter().map(move |&c| (b, c)))
        .collect()
}

impl FamilyParams {
    pub fn q(&self) -> u64 {
        self.base.order()
    }

    pub fn omega(&self) -> FieldElement {
        self.constants.omega
    }

    pub fn embed(&self, a: &FieldElement) -> FieldElement {
        self.ext.embed(a)
    }

    /// `2b²` in the base field.
    fn two_b2(&self) -> FieldElement {
        self.base.from_u64(2) * self.b * self.b
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SurfaceId {
    K2,
    K6n(u32),
    E,
    Ej(u8),
}

impl SurfaceId {
    pub fn ej(j: i64) -> Self {
        SurfaceId::Ej(j.rem_euclid(6) as u8)
    }
}

impl fmt::Display for SurfaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SurfaceId::K2 => write!(f, "K2"),
            SurfaceId::K6n(n) => write!(f, "K{}", 6 * n),
            SurfaceId::E => write!(f, "E"),
            SurfaceId::Ej(j) => write!(f, "E_{j}"),
        }
    }
}

/// `(x₁³ - b)·t^e = c·(x₀³ - b)` with `e = 2` for `K₂` and `e = 6n` for `K₆ₙ`.
#[derive(Debug, Clone, PartialEq)]
pub struct KummerSurface {
    pub t_exponent: u32,
    pub b: FieldElement,
    pub c: FieldElement,
}

/// A point of a Kummer-type surface: affine `(x₀, x₁)` or `(X₀ : X₁ : 0)` on the line at
/// infinity. The fiber parameter `t` is supplied by context.
#[derive(Debug, Clone, PartialEq)]
pub enum KummerPoint<F> {
    Affine { x0: F, x1: F },
    AtInfinity { x0: F, x1: F },
}

impl<F: Field> KummerPoint<F> {
    /// `(X₀, X₁, X₂)`.
    pub fn homogeneous(&self) -> (F, F, F) {
        match self {
            KummerPoint::Affine { x0, x1 } => (x0.clone(), x1.clone(), x0.one_like()),
            KummerPoint::AtInfinity { x0, x1 } => (x0.clone(), x1.clone(), x0.zero_like()),
        }
    }

    /// Equality as points of the projective plane.
    pub fn same_point(&self, other: &Self) -> bool {
        let (a0, a1, a2) = self.homogeneous();
        let (b0, b1, b2) = other.homogeneous();
        let cross = |u: &F, v: &F, s: &F, w: &F| (u.clone() * w.clone() - v.clone() * s.clone()).is_zero();
        cross(&a0, &a1, &b0, &b1) && cross(&a0, &a2, &b0, &b2) && cross(&a1, &a2, &b1, &b2)
    }
}

impl KummerSurface {
    pub fn k2(b: FieldElement, c: FieldElement) -> Self {
        KummerSurface { t_exponent: 2, b, c }
    }

    pub fn k6n(b: FieldElement, c: FieldElement, n: u32) -> Self {
        KummerSurface { t_exponent: 6 * n, b, c }
    }

    /// Whether the homogenised equation holds at `point` over the fiber `t`.
    pub fn contains<F: Field>(&self, point: &KummerPoint<F>, t: &F, lift: impl Fn(FieldElement) -> F) -> bool {
        let (x0, x1, x2) = point.homogeneous();
        if x0.is_zero() && x1.is_zero() && x2.is_zero() {
            return false;
        }
        let (b, c) = (lift(self.b), lift(self.c));
        let te = pow(t, self.t_exponent);
        let x2c = x2.cube();
        (x1.cube() - b.clone() * x2c.clone()) * te == c * (x0.cube() - b * x2c)
    }

    /// The equation pulled back along `t ↦ t^m`.
    pub fn pullback(&self, m: u32) -> Self {
        KummerSurface { t_exponent: self.t_exponent * m, ..self.clone() }
    }
}

impl fmt::Display for KummerSurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(x1^3 - {})*t^{} = {}*(x0^3 - {})", self.b, self.t_exponent, self.c, self.b)
    }
}

fn pow<F: Field>(x: &F, e: u32) -> F {
    (0..e).fold(x.one_like(), |acc, _| acc * x.clone())
}

/// `y² = x³ + B(t)` over `F_q(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct JZeroModel {
    b: RatFunc,
}

impl JZeroModel {
    pub fn new(b: RatFunc) -> Self {
        assert!(!b.is_zero(), "y^2 = x^3 is singular");
        JZeroModel { b }
    }

    pub fn b(&self) -> &RatFunc {
        &self.b
    }

    pub fn field(&self) -> FieldRef {
        self.b.field()
    }

    pub fn curve(&self) -> Curve<RatFunc> {
        Curve::new(self.b.zero_like(), self.b.clone()).expect("B ≠ 0")
    }

    /// The same curve with coefficients pushed into an extension.
    pub fn curve_over(&self, ext: FieldRef) -> Curve<RatFunc> {
        if ext == self.field() {
            return self.curve();
        }
        let b = self.b.embed(ext);
        Curve::new(b.zero_like(), b).expect("B ≠ 0")
    }

    /// Twist exponent `m` of the chart `s = 1/t`, `(x, y) ↦ (s^{2m} x, s^{3m} y)`, making the
    /// model integral and minimal at infinity; it equals `χ` for the resulting surface.
    pub fn infinity_twist(&self) -> u32 {
        let v = self.b.valuation(&Place::Infinity(self.field())).expect("B ≠ 0");
        if v >= 0 {
            0
        } else {
            ((-v) as u32).div_ceil(6)
        }
    }

    /// `v_∞(B) + 6m` in the twisted chart.
    pub fn infinity_valuation(&self) -> i64 {
        self.b.valuation(&Place::Infinity(self.field())).expect("B ≠ 0") + 6 * self.infinity_twist() as i64
    }
}

impl fmt::Display for JZeroModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "y^2 = x^3 + {}", self.b)
    }
}

/// Defining data of a member of the family.
#[derive(Debug, Clone)]
pub struct SurfaceRecord {
    pub id: SurfaceId,
    pub kummer: Option<KummerSurface>,
    pub weierstrass: Option<JZeroModel>,
}

/// `((t^{6n} - c)/(2b²))²`.
fn kuwata_b(params: &FamilyParams, n: u32) -> RatFunc {
    let base = params.base;
    let inner = RatFunc::from_poly(&Poly::monomial(base.one(), 6 * n as usize) - &Poly::constant(params.c))
        .scale(params.two_b2().inverse().expect("b ≠ 0"));
    inner.square()
}

/// `t^j ((t - c)/(2b²))²`.
fn ej_b(params: &FamilyParams, j: u8) -> RatFunc {
    let base = params.base;
    let inner = RatFunc::from_poly(Poly::from_coeffs(base, vec![-params.c, base.one()]))
        .scale(params.two_b2().inverse().expect("b ≠ 0"));
    RatFunc::from_poly(Poly::monomial(base.one(), j as usize)) * inner.square()
}

pub fn build_surface(params: &FamilyParams, id: SurfaceId) -> SurfaceRecord {
    let (kummer, weierstrass) = match id {
        SurfaceId::K2 => (Some(KummerSurface::k2(params.b, params.c)), None),
        SurfaceId::K6n(n) => {
            assert!(n >= 1, "K_6n needs n ≥ 1");
            (Some(KummerSurface::k6n(params.b, params.c, n)), Some(JZeroModel::new(kuwata_b(params, n))))
        }
        SurfaceId::E => (None, Some(JZeroModel::new(kuwata_b(params, 1)))),
        SurfaceId::Ej(j) => (None, Some(JZeroModel::new(ej_b(params, j % 6)))),
    };
    SurfaceRecord { id, kummer, weierstrass }
}

pub fn weierstrass_model(params: &FamilyParams, id: SurfaceId) -> JZeroModel {
    build_surface(params, id).weierstrass.expect("surface has a Weierstrass model")
}

/// Constants of the isomorphism `K₆ₙ → y² = x³ + ((t^{6n} - c)/(2b²))²`, lifted into the
/// coefficient field `F` together with the fiber parameter `t`.
#[derive(Debug, Clone)]
pub struct IsoConstants<F> {
    pub b: F,
    pub c: F,
    pub cbrt_c: F,
    pub sqrt_minus3: F,
    pub t: F,
    pub n: u32,
}

impl IsoConstants<RatFunc> {
    /// Generic fiber over `F_q(t)`.
    pub fn generic(params: &FamilyParams, n: u32) -> Self {
        let k = |a: FieldElement| RatFunc::constant(a);
        IsoConstants {
            b: k(params.b),
            c: k(params.c),
            cbrt_c: k(params.cbrt_c),
            sqrt_minus3: k(params.constants.sqrt_minus3),
            t: RatFunc::var(params.base),
            n,
        }
    }
}

impl IsoConstants<FieldElement> {
    /// Fiber over `t = value` with everything in `value`'s field (an extension of `F_q`).
    pub fn at(params: &FamilyParams, value: FieldElement, n: u32) -> Self {
        let field = value.field();
        let k = |a: FieldElement| field.embed(&a);
        IsoConstants {
            b: k(params.b),
            c: k(params.c),
            cbrt_c: k(params.cbrt_c),
            sqrt_minus3: k(params.constants.sqrt_minus3),
            t: value,
            n,
        }
    }
}

/// The maps are undefined here (a pole of the formulas or a degenerate fiber).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("point lies on the exceptional locus of the isomorphism")]
pub struct ExceptionalLocus;

impl<F: Field> IsoConstants<F> {
    fn n_poly(&self) -> F {
        pow(&self.t, 6 * self.n) - self.c.clone()
    }

    /// `φ`: `x = (t^{6n} - c) X₂ / (b D)`, `y = √-3 S (t^{6n} - c) / (-2b² D)` with
    /// `D = X₀∛c - t^{2n}X₁`, `S = X₀∛c + t^{2n}X₁`; the zero section goes to `O`.
    pub fn phi(&self, point: &KummerPoint<F>) -> Result<Point<F>, ExceptionalLocus> {
        let (x0, x1, x2) = point.homogeneous();
        let t2n = pow(&self.t, 2 * self.n);
        let d = x0.clone() * self.cbrt_c.clone() - t2n.clone() * x1.clone();
        let s = x0 * self.cbrt_c.clone() + t2n * x1;
        let nn = self.n_poly();
        if nn.is_zero() {
            return Err(ExceptionalLocus);
        }
        if d.is_zero() {
            return if x2.is_zero() { Ok(Point::Zero) } else { Err(ExceptionalLocus) };
        }
        let b = self.b.clone();
        let x = (nn.clone() * x2).checked_quotient(&(b.clone() * d.clone())).ok_or(ExceptionalLocus)?;
        let y = (self.sqrt_minus3.clone() * s * nn)
            .checked_quotient(&(b.from_i64_like(-2) * b.square() * d))
            .ok_or(ExceptionalLocus)?;
        Ok(Point::affine(x, y))
    }

    /// `φ⁻¹`, homogenised: `X₀ = (2b²y - √-3 N) t^{2n}`, `X₁ = (2b²y + √-3 N) ∛c`,
    /// `X₂ = -2√-3 b ∛c t^{2n} x` with `N = t^{6n} - c`.
    pub fn phi_inv(&self, point: &Point<F>) -> Result<KummerPoint<F>, ExceptionalLocus> {
        let t2n = pow(&self.t, 2 * self.n);
        let Some((x, y)) = point.coords() else {
            return Ok(KummerPoint::AtInfinity { x0: t2n, x1: self.cbrt_c.clone() });
        };
        let nn = self.n_poly();
        if nn.is_zero() {
            return Err(ExceptionalLocus);
        }
        let b = self.b.clone();
        let two_b2y = b.from_i64_like(2) * b.square() * y.clone();
        let s3n = self.sqrt_minus3.clone() * nn;
        let big_x0 = (two_b2y.clone() - s3n.clone()) * t2n.clone();
        let big_x1 = (two_b2y + s3n) * self.cbrt_c.clone();
        let big_x2 = b.from_i64_like(-2) * self.sqrt_minus3.clone() * b * self.cbrt_c.clone() * t2n * x.clone();
        if big_x2.is_zero() {
            if big_x0.is_zero() && big_x1.is_zero() {
                return Err(ExceptionalLocus);
            }
            return Ok(KummerPoint::AtInfinity { x0: big_x0, x1: big_x1 });
        }
        let inv = big_x2.inv().expect("nonzero");
        Ok(KummerPoint::Affine { x0: big_x0 * inv.clone(), x1: big_x1 * inv })
    }
}

/// `(t^{2n} : ∛c : 0)`.
pub fn zero_section(params: &FamilyParams, n: u32) -> KummerPoint<RatFunc> {
    KummerPoint::AtInfinity {
        x0: RatFunc::from_poly(Poly::monomial(params.base.one(), 2 * n as usize)),
        x1: RatFunc::constant(params.cbrt_c),
    }
}

/// `(t^{2n} : ω^j ∛c : 0)` for `j = 1, 2`.
pub fn torsion_sections(params: &FamilyParams, n: u32) -> [KummerPoint<RatFunc>; 2] {
    let t2n = RatFunc::from_poly(Poly::monomial(params.base.one(), 2 * n as usize));
    let omega = params.omega();
    [omega, omega * omega].map(|w| KummerPoint::AtInfinity {
        x0: t2n.clone(),
        x1: RatFunc::constant(w * params.cbrt_c),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SectionFamily {
    /// `P_k` on `E₁`.
    P,
    /// `Q_k` on `E₂`.
    Q,
}

/// `P_k = (ω^k (t-c) / (-b∛(4b)), √c (t-c)/(2b²))` on `E₁`,
/// `Q_k = (ω^k ∛c t / (b∛b), (t² + ct)/(2b²))` on `E₂`, over `F_{q^6}(t)`.
pub fn named_section(params: &FamilyParams, which: SectionFamily, k: i64) -> Section {
    let ext = params.ext;
    let e = |a: FieldElement| params.embed(&a);
    let wk = e(params.omega().pow(k.rem_euclid(3) as u64));
    let inv_2b2 = e(params.two_b2().inverse().expect("b ≠ 0"));
    let b = e(params.b);
    let c = e(params.c);
    let t_minus_c = Poly::from_coeffs(ext, vec![-c, ext.one()]);
    match which {
        SectionFamily::P => {
            let x_scale = wk * (-(b * params.cbrt_4b)).inverse().expect("nonzero");
            let x = RatFunc::from_poly(t_minus_c.scale(x_scale));
            let y = RatFunc::from_poly(t_minus_c.scale(params.sqrt_c * inv_2b2));
            Point::affine(x, y)
        }
        SectionFamily::Q => {
            let x_scale = wk * e(params.cbrt_c) * (b * params.cbrt_b).inverse().expect("nonzero");
            let x = RatFunc::from_poly(Poly::monomial(x_scale, 1));
            let y = RatFunc::from_poly(Poly::from_coeffs(ext, vec![ext.zero(), c, ext.one()]).scale(inv_2b2));
            Point::affine(x, y)
        }
    }
}

/// The isomorphism `E_j → E_{4-j}` over `F_q(t)`: `t ↦ c²/t` followed by
/// `(x, y) ↦ (u²x, u³y)` with `u = t / (∛c)^{j+1}`.
pub fn reflect_section(params: &FamilyParams, j: u8, section: &Section) -> Section {
    let Some((x, y)) = section.coords() else { return Point::Zero };
    let field = x.field();
    let lift = |a: FieldElement| if field == params.base { a } else { field.embed(&a) };
    let t = RatFunc::var(field);
    let c = lift(params.c);
    let inv_t = t.inv().expect("t ≠ 0");
    let s = inv_t.scale(c * c);
    let gamma_inv = lift(params.cbrt_c).pow(j as u64 + 1).inverse().expect("c ≠ 0");
    let u = t.scale(gamma_inv);
    let u2 = u.square();
    Point::affine(u2.clone() * x.compose(&s), u2 * u * y.compose(&s))
}

/// `t ↦ t^{3n}` applied to a point of `K₂` gives a point of `K₆ₙ`.
pub fn base_change(point: &KummerPoint<RatFunc>, n: u32) -> KummerPoint<RatFunc> {
    let m = 3 * n as usize;
    match point {
        KummerPoint::Affine { x0, x1 } => KummerPoint::Affine {
            x0: x0.substitute_power(m),
            x1: x1.substitute_power(m),
        },
        KummerPoint::AtInfinity { x0, x1 } => KummerPoint::AtInfinity {
            x0: x0.substitute_power(m),
            x1: x1.substitute_power(m),
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceMinimality {
    pub place: String,
    pub degree: usize,
    pub valuation: i64,
    pub minimal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MinimalityReport {
    pub model: String,
    pub finite: Vec<PlaceMinimality>,
    pub infinity_twist: u32,
    pub infinity_valuation: i64,
    pub minimal: bool,
}

/// Minimal iff `0 ≤ v(B) < 6` at every finite place and at infinity in the chart `s = 1/t`
/// twisted by [`JZeroModel::infinity_twist`]. Places are closed points over the base field.
pub fn check_global_minimality(model: &JZeroModel) -> MinimalityReport {
    let b = model.b();
    let mut finite = Vec::new();
    for (pi, _) in factor(b.num()).into_iter().chain(factor(b.den())) {
        let place = Place::Finite(pi);
        let v = b.valuation(&place).expect("B ≠ 0");
        finite.push(PlaceMinimality {
            place: place.to_string(),
            degree: place.degree(),
            valuation: v,
            minimal: (0..6).contains(&v),
        });
    }
    let infinity_valuation = model.infinity_valuation();
    let minimal = finite.iter().all(|p| p.minimal) && (0..6).contains(&infinity_valuation);
    MinimalityReport {
        model: model.to_string(),
        finite,
        infinity_twist: model.infinity_twist(),
        infinity_valuation,
        minimal,
    }
}

/// Outcome of randomised round trips of `φ` on points of `K₆ₙ` over `F_{q^6}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IsoSampling {
    pub n: u32,
    pub samples: u32,
    pub failures: u32,
    pub field_order: u64,
    /// Degree bound `(18n+3)(6n+3)` of the checked identities restricted to the surface.
    pub degree_bound: u64,
    /// Largest `k` with `(degree_bound / field_order)^samples ≤ 2^-k`.
    pub bound_log2: i64,
}

/// Samples affine points of `K₆ₙ` over `F_{q^6}` (random `t`, `x₁`, then a random cube
/// root for `x₀`) and checks that `φ` lands on the Weierstrass model and `φ⁻¹ ∘ φ = id`.
pub fn sample_round_trips(params: &FamilyParams, n: u32, samples: u32, seed: u64) -> IsoSampling {
    let ext = params.ext;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surface = KummerSurface::k6n(params.b, params.c, n);
    let (b, c) = (params.embed(&params.b), params.embed(&params.c));
    let inv_2b2 = params.embed(&params.two_b2()).inverse().expect("b ≠ 0");
    let mut failures = 0;
    let mut done = 0;
    while done < samples {
        let t = ext.random_nonzero(&mut rng);
        let t6n = t.pow(6 * n as u64);
        if t6n == c {
            continue;
        }
        let x1 = ext.random(&mut rng);
        let x0_cubed = b + (x1.pow(3) - b) * t6n * c.inverse().expect("c ≠ 0");
        let roots = cube_roots(&x0_cubed);
        if roots.is_empty() {
            continue;
        }
        let x0 = roots[rand::Rng::gen_range(&mut rng, 0..roots.len())];
        done += 1;
        let consts = IsoConstants::at(params, t, n);
        let point = KummerPoint::Affine { x0, x1 };
        let ok = surface.contains(&point, &t, |a| ext.embed(&a))
            && match consts.phi(&point) {
                Ok(image) => {
                    let bt = (t6n - c) * inv_2b2;
                    let on_curve = Curve::new(ext.zero(), bt * bt).is_ok_and(|e| e.contains(&image));
                    on_curve && consts.phi_inv(&image).is_ok_and(|back| back == point)
                }
                Err(_) => false,
            };
        if !ok {
            failures += 1;
        }
    }
    let n64 = n as u64;
    let degree_bound = (18 * n64 + 3) * (6 * n64 + 3);
    let bound_log2 = if degree_bound >= ext.order() {
        0
    } else {
        let num = BigUint::from(ext.order()).pow(samples);
        let den = BigUint::from(degree_bound).pow(samples);
        ((num / den).bits() as i64 - 1).max(0)
    };
    IsoSampling { n, samples, failures, field_order: ext.order(), degree_bound, bound_log2 }
}

impl From<FieldError> for ParamError {
    fn from(_: FieldError) -> Self {
        ParamError::QNotPrime
    }
}
