//! Canonical heights through intersection numbers, the lattices `⟨P₀, P₁⟩` and `⟨Q₀, Q₁⟩`,
//! the Frobenius action on them and the rank of `MW(K₆)` over `F_q`.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::algebra::{cubic_symbol, factor, FieldRef, Place, RatFunc};
use crate::elliptic::{Curve, Point, Section};
use crate::kodaira::{fiber_configuration, geometric_mw, FiberType, FibrationReport, KodairaError, KodairaFiber, MwGroup};
use crate::surface::{
    named_section, reflect_section, torsion_sections, weierstrass_model, FamilyParams, IsoConstants, JZeroModel,
    SectionFamily, SurfaceId,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HeightError {
    #[error(transparent)]
    Kodaira(#[from] KodairaError),
    #[error("odd pole order {order} of x at {place}")]
    OddPole { place: String, order: i64 },
    #[error("cannot identify the component met at {place} ({fiber})")]
    Component { place: String, fiber: FiberType },
    #[error("section is not on the curve")]
    NotOnCurve,
    #[error("the zero section has no intersection data")]
    ZeroSection,
    #[error("Gram matrix is singular")]
    Degenerate,
    #[error("Frobenius image of generator {0} is not an integral combination of the generators")]
    NotInLattice(usize),
    #[error("unsupported configuration for {0}")]
    Unsupported(String),
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Square matrix of exact rationals.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HeightMatrix(pub Vec<Vec<BigRational>>);

/// Serializes as `{"num": "...", "den": "..."}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExactRational {
    pub num: String,
    pub den: String,
}

impl From<&BigRational> for ExactRational {
    fn from(r: &BigRational) -> Self {
        ExactRational { num: r.numer().to_string(), den: r.denom().to_string() }
    }
}

impl Serialize for HeightMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Vec<ExactRational>> =
            self.0.iter().map(|r| r.iter().map(ExactRational::from).collect()).collect();
        rows.serialize(s)
    }
}

impl HeightMatrix {
    pub fn from_fractions(rows: &[&[(i64, i64)]]) -> Self {
        HeightMatrix(rows.iter().map(|r| r.iter().map(|&(n, d)| rat(n, d)).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.size();
        (0..n).all(|i| (0..n).all(|j| self.0[i][j] == self.0[j][i]))
    }

    pub fn det(&self) -> BigRational {
        let (_, det, _) = self.eliminate();
        det
    }

    pub fn rank(&self) -> usize {
        let (_, _, rank) = self.eliminate();
        rank
    }

    /// Row reduction: (reduced matrix, determinant, rank).
    fn eliminate(&self) -> (Vec<Vec<BigRational>>, BigRational, usize) {
        let mut a = self.0.clone();
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        let mut det = BigRational::one();
        let mut rank = 0;
        for col in 0..cols {
            let Some(pivot) = (rank..rows).find(|&r| !a[r][col].is_zero()) else {
                det = BigRational::zero();
                continue;
            };
            if pivot != rank {
                a.swap(pivot, rank);
                det = -det;
            }
            let p = a[rank][col].clone();
            det *= &p;
            for r in 0..rows {
                if r != rank && !a[r][col].is_zero() {
                    let factor = &a[r][col] / &p;
                    for c in col..cols {
                        let sub = &factor * &a[rank][c];
                        a[r][c] -= sub;
                    }
                }
            }
            rank += 1;
        }
        if rank < rows {
            det = BigRational::zero();
        }
        (a, det, rank)
    }

    pub fn inverse(&self) -> Option<HeightMatrix> {
        let n = self.size();
        let mut aug: Vec<Vec<BigRational>> = self
            .0
            .iter()
            .enumerate()
            .map(|(i, row)| {
                let mut r = row.clone();
                r.extend((0..n).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
                r
            })
            .collect();
        for col in 0..n {
            let pivot = (col..n).find(|&r| !aug[r][col].is_zero())?;
            aug.swap(pivot, col);
            let p = aug[col][col].clone();
            for c in 0..2 * n {
                aug[col][c] = &aug[col][c] / &p;
            }
            for r in 0..n {
                if r != col && !aug[r][col].is_zero() {
                    let f = aug[r][col].clone();
                    for c in 0..2 * n {
                        let sub = &f * &aug[col][c];
                        aug[r][c] -= sub;
                    }
                }
            }
        }
        Some(HeightMatrix(aug.into_iter().map(|r| r[n..].to_vec()).collect()))
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> Vec<BigRational> {
        self.0
            .iter()
            .map(|row| row.iter().zip(v).fold(BigRational::zero(), |acc, (a, b)| acc + a * b))
            .collect()
    }

    pub fn is_positive_definite(&self) -> bool {
        // leading principal minors
        (1..=self.size()).all(|k| {
            let minor = HeightMatrix(self.0[..k].iter().map(|r| r[..k].to_vec()).collect());
            minor.det().is_positive()
        })
    }
}

impl fmt::Display for HeightMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Integer matrix in column convention: column `j` holds the coordinates of `Fr(g_j)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct FrobMatrix(pub Vec<Vec<i64>>);

impl FrobMatrix {
    pub fn identity(n: usize) -> Self {
        FrobMatrix((0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect())
    }

    pub fn size(&self) -> usize {
        self.0.len()
    }

    pub fn mul(&self, other: &FrobMatrix) -> FrobMatrix {
        let n = self.size();
        FrobMatrix(
            (0..n)
                .map(|i| (0..n).map(|j| (0..n).map(|k| self.0[i][k] * other.0[k][j]).sum()).collect())
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> FrobMatrix {
        (0..e).fold(FrobMatrix::identity(self.size()), |acc, _| acc.mul(self))
    }

    /// Smallest `k ≤ bound` with `M^k = I`.
    pub fn order(&self, bound: u32) -> Option<u32> {
        let id = FrobMatrix::identity(self.size());
        let mut acc = self.clone();
        for k in 1..=bound {
            if acc == id {
                return Some(k);
            }
            acc = acc.mul(self);
        }
        None
    }

    /// `Mᵀ h M = h`.
    pub fn preserves(&self, h: &HeightMatrix) -> bool {
        let n = self.size();
        (0..n).all(|i| {
            (0..n).all(|j| {
                let mut s = BigRational::zero();
                for k in 0..n {
                    for l in 0..n {
                        s += BigRational::from_integer((self.0[k][i] * self.0[l][j]).into()) * &h.0[k][l];
                    }
                }
                s == h.0[i][j]
            })
        })
    }

    fn as_rational(&self) -> HeightMatrix {
        HeightMatrix(
            self.0
                .iter()
                .map(|r| r.iter().map(|&v| BigRational::from_integer(v.into())).collect())
                .collect(),
        )
    }
}

impl fmt::Display for FrobMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self
            .0
            .iter()
            .map(|r| format!("[{}]", r.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ")))
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

/// Rank of `ker(M - I)` over `Q`.
pub fn invariant_rank(m: &FrobMatrix) -> usize {
    let n = m.size();
    let mut diff = m.clone();
    for i in 0..n {
        diff.0[i][i] -= 1;
    }
    n - diff.as_rational().rank()
}

/// Height machinery for one model, with every place taken over a fixed coefficient field.
#[derive(Debug, Clone)]
pub struct HeightContext {
    model: JZeroModel,
    curve: Curve<RatFunc>,
    report: FibrationReport,
    twist: i64,
}

/// Valuation of `f` at `place`, read in the chart twisted by `shift` at infinity.
fn val(f: &RatFunc, place: &Place, shift: i64) -> Option<i64> {
    let v = f.valuation(place)?;
    Some(if place.is_infinity() { v + shift } else { v })
}

fn at_least(v: Option<i64>, bound: i64) -> bool {
    v.is_none_or(|v| v >= bound)
}

impl HeightContext {
    /// Works over `field`, which must contain the coefficients of every section passed in.
    pub fn new(model: &JZeroModel, field: FieldRef, label: &str) -> Result<Self, HeightError> {
        let model = if field == model.field() { model.clone() } else { JZeroModel::new(model.b().embed(field)) };
        let report = fiber_configuration(&model, label)?;
        let twist = model.infinity_twist() as i64;
        Ok(HeightContext { curve: model.curve(), model, report, twist })
    }

    pub fn curve(&self) -> &Curve<RatFunc> {
        &self.curve
    }

    pub fn report(&self) -> &FibrationReport {
        &self.report
    }

    pub fn chi(&self) -> i64 {
        self.report.chi as i64
    }

    fn field(&self) -> FieldRef {
        self.model.field()
    }

    fn lift(&self, p: &Section) -> Result<(RatFunc, RatFunc), HeightError> {
        let (x, y) = p.coords().ok_or(HeightError::ZeroSection)?;
        let lift = |f: &RatFunc| if f.field() == self.field() { f.clone() } else { f.embed(self.field()) };
        let (x, y) = (lift(x), lift(y));
        if !self.curve.contains(&Point::affine(x.clone(), y.clone())) {
            return Err(HeightError::NotOnCurve);
        }
        Ok((x, y))
    }

    /// `(P·O)`: half the degree-weighted pole order of `x` in minimal charts.
    pub fn intersection_with_zero(&self, p: &Section) -> Result<i64, HeightError> {
        let (x, _) = self.lift(p)?;
        let mut total = 0;
        let places = factor(x.den())
            .into_iter()
            .map(|(pi, _)| Place::Finite(pi))
            .chain([Place::Infinity(self.field())]);
        for place in places {
            let Some(v) = val(&x, &place, 2 * self.twist) else { continue };
            if v < 0 {
                if v % 2 != 0 {
                    return Err(HeightError::OddPole { place: place.to_string(), order: -v });
                }
                total += place.degree() as i64 * (-v / 2);
            }
        }
        Ok(total)
    }

    /// Whether the section meets a non-identity component of `fiber`.
    fn non_identity(&self, fiber: &KodairaFiber, x: &RatFunc, y: &RatFunc) -> Result<bool, HeightError> {
        let place = &fiber.place;
        let vx = val(x, place, 2 * self.twist);
        if !at_least(vx, 1) {
            return Ok(false);
        }
        let vy = val(y, place, 3 * self.twist);
        let ok = match fiber.fiber_type {
            FiberType::IV => vy == Some(1),
            FiberType::I0Star => vx == Some(1) && at_least(vy, 2),
            FiberType::IVStar => at_least(vx, 2) && vy == Some(2),
            _ => false,
        };
        if ok {
            Ok(true)
        } else {
            Err(HeightError::Component { place: place.to_string(), fiber: fiber.fiber_type })
        }
    }

    fn same_component(&self, fiber: &KodairaFiber, dx: &RatFunc, dy: &RatFunc) -> bool {
        let place = &fiber.place;
        match fiber.fiber_type {
            FiberType::IV => at_least(val(dy, place, 3 * self.twist), 2),
            FiberType::I0Star => at_least(val(dx, place, 2 * self.twist), 2),
            FiberType::IVStar => at_least(val(dy, place, 3 * self.twist), 3),
            _ => true,
        }
    }

    /// `contr_v(P, Q)` (with `Q = P` when absent) from the component-group pairing.
    pub fn local_contribution(
        &self,
        fiber: &KodairaFiber,
        p: &Section,
        q: Option<&Section>,
    ) -> Result<BigRational, HeightError> {
        let (xp, yp) = self.lift(p)?;
        let (xq, yq) = match q {
            Some(q) => self.lift(q)?,
            None => (xp.clone(), yp.clone()),
        };
        if !self.non_identity(fiber, &xp, &yp)? || !self.non_identity(fiber, &xq, &yq)? {
            return Ok(BigRational::zero());
        }
        let same = self.same_component(fiber, &(&xp - &xq), &(&yp - &yq));
        Ok(match (fiber.fiber_type, same) {
            (FiberType::IV, true) => rat(2, 3),
            (FiberType::IV, false) => rat(1, 3),
            (FiberType::I0Star, true) => rat(1, 1),
            (FiberType::I0Star, false) => rat(1, 2),
            (FiberType::IVStar, true) => rat(4, 3),
            (FiberType::IVStar, false) => rat(2, 3),
            _ => BigRational::zero(),
        })
    }

    fn total_contribution(&self, p: &Section, q: Option<&Section>) -> Result<BigRational, HeightError> {
        let mut sum = BigRational::zero();
        for fiber in &self.report.fibers {
            let c = self.local_contribution(fiber, p, q)?;
            sum += c * BigRational::from_integer(BigInt::from(fiber.degree()));
        }
        Ok(sum)
    }

    /// `(P·Q)` for distinct sections, as the degree-weighted order of contact in minimal charts.
    pub fn intersection(&self, p: &Section, q: &Section) -> Result<i64, HeightError> {
        let (xp, yp) = self.lift(p)?;
        let (xq, yq) = self.lift(q)?;
        let (dx, dy) = (&xp - &xq, &yp - &yq);
        assert!(!(dx.is_zero() && dy.is_zero()), "intersection of a section with itself");
        let meet = if dx.is_zero() {
            dy.num().clone()
        } else if dy.is_zero() {
            dx.num().clone()
        } else {
            dx.num().gcd(dy.num())
        };
        let mut places: BTreeSet<Place> = BTreeSet::new();
        for poly in [&meet, xp.den(), xq.den()] {
            if poly.degree_or_zero() > 0 {
                places.extend(factor(poly).into_iter().map(|(pi, _)| Place::Finite(pi)));
            }
        }
        places.insert(Place::Infinity(self.field()));
        let mut total = 0;
        for place in &places {
            let local = self.local_intersection(place, (&xp, &yp), (&xq, &yq), (&dx, &dy))?;
            total += place.degree() as i64 * local;
        }
        Ok(total)
    }

    fn local_intersection(
        &self,
        place: &Place,
        (xp, yp): (&RatFunc, &RatFunc),
        (xq, yq): (&RatFunc, &RatFunc),
        (dx, dy): (&RatFunc, &RatFunc),
    ) -> Result<i64, HeightError> {
        let m = self.twist;
        let vxp = val(xp, place, 2 * m);
        let vxq = val(xq, place, 2 * m);
        let pole_p = vxp.is_some_and(|v| v < 0);
        let pole_q = vxq.is_some_and(|v| v < 0);
        if pole_p && pole_q {
            // x/y is a local parameter along the fiber near O
            let w = xp.checked_div(yp).expect("y ≠ 0 at a pole") - xq.checked_div(yq).expect("y ≠ 0 at a pole");
            return Ok(val(&w, place, -m).expect("distinct sections differ near O"));
        }
        if pole_p || pole_q {
            return Ok(0);
        }
        let fiber = self.report.fibers.iter().find(|f| &f.place == place);
        let (shift_x, shift_y) = match fiber {
            Some(f) => {
                let np = self.non_identity(f, xp, yp)?;
                let nq = self.non_identity(f, xq, yq)?;
                match (np, nq) {
                    (false, false) => (0, 0),
                    (true, true) if self.same_component(f, dx, dy) => match f.fiber_type {
                        FiberType::IV => (1, 1),
                        FiberType::I0Star => (1, 2),
                        FiberType::IVStar => (2, 2),
                        other => {
                            return Err(HeightError::Component { place: place.to_string(), fiber: other })
                        }
                    },
                    _ => return Ok(0),
                }
            }
            None => (0, 0),
        };
        let ex = val(dx, place, 2 * m).map(|v| v - shift_x);
        let ey = val(dy, place, 3 * m).map(|v| v - shift_y);
        let local = match (ex, ey) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("distinct sections"),
        };
        Ok(local.max(0))
    }

    /// `⟨P, Q⟩` by Shioda's formula.
    pub fn height_pairing(&self, p: &Section, q: &Section) -> Result<BigRational, HeightError> {
        if p.is_zero() || q.is_zero() {
            return Ok(BigRational::zero());
        }
        let chi = self.chi();
        if p == q {
            let po = self.intersection_with_zero(p)?;
            let base = BigRational::from_integer(BigInt::from(2 * chi + 2 * po));
            return Ok(base - self.total_contribution(p, None)?);
        }
        let po = self.intersection_with_zero(p)?;
        let qo = self.intersection_with_zero(q)?;
        let pq = self.intersection(p, q)?;
        let base = BigRational::from_integer(BigInt::from(chi + po + qo - pq));
        Ok(base - self.total_contribution(p, Some(q))?)
    }

    pub fn height(&self, p: &Section) -> Result<BigRational, HeightError> {
        self.height_pairing(p, p)
    }

    pub fn height_matrix(&self, gens: &[Section]) -> Result<HeightMatrix, HeightError> {
        let mut rows = Vec::with_capacity(gens.len());
        for g in gens {
            let row = gens.iter().map(|h| self.height_pairing(g, h)).collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok(HeightMatrix(rows))
    }

    /// Height zero, with the order found by repeated addition up to 12.
    pub fn is_torsion(&self, p: &Section) -> Result<(bool, Option<u32>), HeightError> {
        if p.is_zero() {
            return Ok((true, Some(1)));
        }
        let torsion = self.height(p)?.is_zero();
        let order = if torsion { self.curve.order(p, 12) } else { None };
        Ok((torsion, order))
    }

    /// Matrix of `Fr: a ↦ a^q` on the lattice spanned by `gens`, solved through the Gram
    /// matrix and confirmed with the group law.
    pub fn frobenius_action(&self, gens: &[Section], q: u64) -> Result<FrobMatrix, HeightError> {
        let gram = self.height_matrix(gens)?;
        let inv = gram.inverse().ok_or(HeightError::Degenerate)?;
        let n = gens.len();
        let mut m = vec![vec![0i64; n]; n];
        for (j, g) in gens.iter().enumerate() {
            let image = g.frobenius(q);
            let pairings = gens.iter().map(|h| self.height_pairing(&image, h)).collect::<Result<Vec<_>, _>>()?;
            let coords = inv.mul_vec(&pairings);
            let ints = coords
                .iter()
                .map(|c| c.is_integer().then(|| c.to_integer().to_i64()).flatten())
                .collect::<Option<Vec<i64>>>()
                .ok_or(HeightError::NotInLattice(j))?;
            if self.curve.combination(&ints, gens) != image {
                return Err(HeightError::NotInLattice(j));
            }
            for i in 0..n {
                m[i][j] = ints[i];
            }
        }
        Ok(FrobMatrix(m))
    }
}

/// The three published Frobenius matrices on `⟨P₀, P₁⟩`, indexed by `e` with `(4b/q)₃ = ω^e`.
pub fn expected_frobenius_l1(e: u8) -> FrobMatrix {
    FrobMatrix(match e % 3 {
        0 => vec![vec![-1, 0], vec![0, -1]],
        1 => vec![vec![1, -1], vec![1, 0]],
        _ => vec![vec![0, 1], vec![-1, 1]],
    })
}

/// The same for `⟨Q₀, Q₁⟩`, indexed by `(b/q)₃ = ω^e`.
pub fn expected_frobenius_l2(e: u8) -> FrobMatrix {
    FrobMatrix(match e % 3 {
        0 => vec![vec![1, 0], vec![0, 1]],
        1 => vec![vec![-1, 1], vec![-1, 0]],
        _ => vec![vec![0, -1], vec![1, -1]],
    })
}

pub fn expected_gram_l1() -> HeightMatrix {
    HeightMatrix::from_fractions(&[&[(1, 3), (-1, 6)], &[(-1, 6), (1, 3)]])
}

pub fn expected_gram_l2() -> HeightMatrix {
    HeightMatrix::from_fractions(&[&[(2, 3), (-1, 3)], &[(-1, 3), (2, 3)]])
}

/// A rank-2 lattice of named sections with its Gram and Frobenius matrices.
#[derive(Debug, Clone, Serialize)]
pub struct SectionLattice {
    pub name: &'static str,
    #[serde(skip)]
    pub generators: Vec<Section>,
    pub gram: HeightMatrix,
    /// `e` with symbol `ω^e` selecting the Frobenius case.
    pub symbol: u8,
    pub frobenius: FrobMatrix,
    pub invariant_rank: usize,
}

/// `L₁ = ⟨P₀, P₁⟩ ⊂ E₁` or `L₂ = ⟨Q₀, Q₁⟩ ⊂ E₂` with everything computed.
pub fn section_lattice(params: &FamilyParams, which: SectionFamily) -> Result<SectionLattice, HeightError> {
    let (j, name, symbol_of) = match which {
        SectionFamily::P => (1, "L1", params.base.from_u64(4) * params.b),
        SectionFamily::Q => (2, "L2", params.b),
    };
    let ctx = HeightContext::new(&weierstrass_model(params, SurfaceId::Ej(j)), params.ext, &format!("E_{j}"))?;
    let generators: Vec<Section> = (0..2).map(|k| named_section(params, which, k)).collect();
    let gram = ctx.height_matrix(&generators)?;
    let frobenius = ctx.frobenius_action(&generators, params.q())?;
    let symbol = cubic_symbol(&symbol_of).expect("nonzero");
    let invariant_rank = invariant_rank(&frobenius);
    Ok(SectionLattice { name, generators, gram, symbol, frobenius, invariant_rank })
}

#[derive(Debug, Clone, Serialize)]
pub struct EjRank {
    pub j: u8,
    pub rank: usize,
    pub geometric: MwGroup,
    /// How the `F_q`-rank was obtained.
    pub method: &'static str,
}

#[derive(Debug, Clone, Serialize)]
pub struct MwReport {
    pub rank: usize,
    pub torsion: Vec<u32>,
    pub geometric_rank: u32,
    pub symbol_4b: u8,
    pub symbol_b: u8,
    pub per_surface: Vec<EjRank>,
    pub l1: SectionLattice,
    pub l2: SectionLattice,
}

fn geometric_group(params: &FamilyParams, id: SurfaceId) -> Result<MwGroup, HeightError> {
    let report = fiber_configuration(&weierstrass_model(params, id), id.to_string())?;
    geometric_mw(&report)
        .map(|c| c.group)
        .map_err(|e| HeightError::Unsupported(format!("{id}: {e}")))
}

/// `φ` of the two sections `(t² : ω^j ∛c : 0)`, over `F_q(t)`.
pub fn torsion_images(params: &FamilyParams) -> [Section; 2] {
    let iso = IsoConstants::generic(params, 1);
    torsion_sections(params, 1).map(|t| iso.phi(&t).expect("torsion sections avoid the exceptional locus"))
}

/// `rk MW(K₆)(F_q) = Σ_j rk E_j(F_q)` and the torsion of `MW(K₆)`.
pub fn mw_rank_k6(params: &FamilyParams) -> Result<MwReport, HeightError> {
    let l1 = section_lattice(params, SectionFamily::P)?;
    let l2 = section_lattice(params, SectionFamily::Q)?;
    let mut per_surface = Vec::new();
    for j in 0..6u8 {
        let geometric = geometric_group(params, SurfaceId::Ej(j))?;
        let (rank, method) = match j {
            1 => (l1.invariant_rank, "frobenius-invariants"),
            2 => (l2.invariant_rank, "frobenius-invariants"),
            3 => {
                // E₃ ≅ E₁ over F_q; the isomorphism must carry L₁ into E₃
                let e3 = weierstrass_model(params, SurfaceId::Ej(3)).curve_over(params.ext);
                if !l1.generators.iter().all(|g| e3.contains(&reflect_section(params, 1, g))) {
                    return Err(HeightError::NotOnCurve);
                }
                (l1.invariant_rank, "isomorphic-to-E_1")
            }
            _ if geometric.rank == 0 => (0, "geometric-rank-zero"),
            _ => return Err(HeightError::Unsupported(format!("E_{j}"))),
        };
        per_surface.push(EjRank { j, rank, geometric, method });
    }
    let e = weierstrass_model(params, SurfaceId::E).curve();
    let geometric_e = geometric_group(params, SurfaceId::E)?;
    let torsion_ok = torsion_images(params).iter().all(|t| e.order(t, 12) == Some(3));
    // the geometric torsion Z/3 is already F_q-rational
    let torsion = if torsion_ok && geometric_e.torsion == [3] { vec![3] } else { geometric_e.torsion.clone() };
    Ok(MwReport {
        rank: per_surface.iter().map(|r| r.rank).sum(),
        torsion,
        geometric_rank: per_surface.iter().map(|r| r.geometric.rank).sum(),
        symbol_4b: l1.symbol,
        symbol_b: l2.symbol,
        per_surface,
        l1,
        l2,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RelationReport {
    pub p_sum_zero: bool,
    pub q_sum_zero: bool,
    /// Orders of `φ(t² : ω^j ∛c : 0)`, `j = 1, 2`.
    pub torsion_orders: [Option<u32>; 2],
}

/// `P₀ + P₁ + P₂ = O`, `Q₀ + Q₁ + Q₂ = O` and `3T = O` by the exact group law.
pub fn verify_relations(params: &FamilyParams) -> RelationReport {
    let sum = |which, j: u8| {
        let curve = weierstrass_model(params, SurfaceId::Ej(j)).curve_over(params.ext);
        let pts: Vec<Section> = (0..3).map(|k| named_section(params, which, k)).collect();
        relation_holds(&curve, &pts)
    };
    let e = weierstrass_model(params, SurfaceId::E).curve();
    let orders = torsion_images(params).map(|t| e.order(&t, 12));
    RelationReport { p_sum_zero: sum(SectionFamily::P, 1), q_sum_zero: sum(SectionFamily::Q, 2), torsion_orders: orders }
}

/// Whether the given sections sum to `O`.
pub fn relation_holds(curve: &Curve<RatFunc>, sections: &[Section]) -> bool {
    sections.iter().fold(Point::Zero, |acc, s| curve.add(&acc, s)).is_zero()
}
