//! Exhaustive search for affine `F_q`-sections `(x₀(t), x₁(t))` of `K₂` and `K₆ₙ` with
//! bounded degree.
//!
//! Rather than testing every pair, `x₁` is enumerated and `x₀` is recovered from
//! `x₀³ = b + (x₁³ - b) t^e / c` by an exact polynomial cube root, so the pair space is
//! covered completely at the cost of its square root.

use std::time::Instant;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::algebra::{FieldElement, FieldRef, Poly, RatFunc};
use crate::surface::{FamilyParams, KummerPoint, KummerSurface, SurfaceId};

pub const DEFAULT_CAP: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchFamily {
    /// `x₀, x₁ ∈ F_q[t]` of degree `≤ d`.
    Polynomial,
    /// `x₀, x₁ ∈ F_q(t)` with numerator and denominator of degree `≤ d`.
    Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchQuery {
    pub surface: SurfaceId,
    pub max_deg: usize,
    pub family: SearchFamily,
    pub cap: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("search space of {space} candidate pairs exceeds the cap {cap}")]
    CapExceeded { space: BigUint, cap: u64 },
    #[error("{0} is not a Kummer-type surface")]
    NotKummer(SurfaceId),
}

#[derive(Debug, Clone)]
pub struct SearchResult {
    pub surface: SurfaceId,
    pub max_deg: usize,
    pub family: SearchFamily,
    /// Number of candidate pairs `(x₀, x₁)` the bound admits.
    pub pair_space: BigUint,
    /// Number of `x₁` actually enumerated.
    pub enumerated: u64,
    pub found: Vec<(RatFunc, RatFunc)>,
    pub exhausted: bool,
    pub elapsed_ms: u128,
}

/// Size of the candidate pair space for `d` and the family.
pub fn pair_space(q: u64, max_deg: usize, family: SearchFamily) -> BigUint {
    let per_poly = BigUint::from(q).pow(max_deg as u32 + 1);
    match family {
        SearchFamily::Polynomial => per_poly.pow(2),
        SearchFamily::Rational => per_poly.pow(4),
    }
}

pub fn kummer_surface(params: &FamilyParams, id: SurfaceId) -> Result<KummerSurface, SearchError> {
    match id {
        SurfaceId::K2 => Ok(KummerSurface::k2(params.b, params.c)),
        SurfaceId::K6n(n) if n >= 1 => Ok(KummerSurface::k6n(params.b, params.c, n)),
        other => Err(SearchError::NotKummer(other)),
    }
}

/// Exact identity check; points at infinity are not affine sections and are rejected.
pub fn verify_candidate(surface: &KummerSurface, point: &KummerPoint<RatFunc>) -> bool {
    match point {
        KummerPoint::AtInfinity { .. } => false,
        KummerPoint::Affine { x0, .. } => surface.contains(point, &RatFunc::var(x0.field()), RatFunc::constant),
    }
}

/// Some `r` with `r³ = f` (the others are `ωr`, `ω²r`), solved from the top coefficient down.
pub fn poly_cbrt(f: &Poly) -> Option<Poly> {
    let field = f.field();
    let Some(n) = f.degree() else { return Some(Poly::zero(field)) };
    if n % 3 != 0 {
        return None;
    }
    let k = n / 3;
    let lead = crate::algebra::cbrt(&f.leading())?;
    let three_lead2 = (field.from_u64(3) * lead * lead).inverse().expect("p > 3");
    let mut coeffs = vec![field.zero(); k + 1];
    coeffs[k] = lead;
    for i in (0..k).rev() {
        let partial = Poly::from_coeffs(field, coeffs.clone());
        let cube = partial.pow(3);
        coeffs[i] = (f.coeff(2 * k + i) - cube.coeff(2 * k + i)) * three_lead2;
    }
    let root = Poly::from_coeffs(field, coeffs);
    (&root.pow(3) == f).then_some(root)
}

fn poly_from_index(field: FieldRef, mut idx: u64, len: usize) -> Poly {
    let q = field.order();
    let coeffs = (0..len)
        .map(|_| {
            let c = field.from_u64(idx % q);
            idx /= q;
            c
        })
        .collect();
    Poly::from_coeffs(field, coeffs)
}

/// Monic polynomials of degree `≤ d`, in a fixed order.
fn monic_polys(field: FieldRef, d: usize) -> Vec<Poly> {
    let q = field.order();
    (0..=d)
        .flat_map(|deg| {
            (0..q.pow(deg as u32)).map(move |idx| {
                let mut p = poly_from_index(field, idx, deg).coeffs().to_vec();
                p.resize(deg, field.zero());
                p.push(field.one());
                Poly::from_coeffs(field, p)
            })
        })
        .collect()
}

/// All `x₀` of the family with `x₀³ = target`.
fn cube_roots_in_family(target: &RatFunc, max_deg: usize, omega: FieldElement) -> Vec<RatFunc> {
    let Some(num) = poly_cbrt(target.num()) else { return Vec::new() };
    let Some(den) = poly_cbrt(target.den()) else { return Vec::new() };
    if num.degree_or_zero() > max_deg || den.degree_or_zero() > max_deg {
        return Vec::new();
    }
    let den = den.monic();
    if num.is_zero() {
        return vec![RatFunc::zero(num.field())];
    }
    [omega.field().one(), omega, omega * omega]
        .into_iter()
        .map(|w| RatFunc::new(num.scale(w), den.clone()))
        .collect()
}

pub fn search_sections(params: &FamilyParams, query: &SearchQuery) -> Result<SearchResult, SearchError> {
    let surface = kummer_surface(params, query.surface)?;
    let field = params.base;
    let q = field.order();
    let space = pair_space(q, query.max_deg, query.family);
    if space > BigUint::from(query.cap) {
        return Err(SearchError::CapExceeded { space, cap: query.cap });
    }
    let start = Instant::now();
    let d = query.max_deg;
    let numerators = q.pow(d as u32 + 1);
    let denominators = match query.family {
        SearchFamily::Polynomial => vec![Poly::one(field)],
        SearchFamily::Rational => monic_polys(field, d),
    };
    let t = RatFunc::var(field);
    let te = t.pow(surface.t_exponent as u64);
    let b = RatFunc::constant(params.b);
    let c_inv = params.c.inverse().expect("c ≠ 0");
    let omega = params.omega();
    let total = numerators * denominators.len() as u64;
    let mut found: Vec<(RatFunc, RatFunc)> = (0..total)
        .into_par_iter()
        .flat_map_iter(|idx| {
            let num = poly_from_index(field, idx % numerators, d + 1);
            let den = &denominators[(idx / numerators) as usize];
            if !num.gcd(den).is_one() {
                return Vec::new();
            }
            let x1 = RatFunc::new(num, den.clone());
            let target = &b + &(&(&x1.pow(3) - &b) * &te).scale(c_inv);
            cube_roots_in_family(&target, d, omega)
                .into_iter()
                .map(|x0| (x0, x1.clone()))
                .filter(|(x0, x1)| {
                    verify_candidate(&surface, &KummerPoint::Affine { x0: x0.clone(), x1: x1.clone() })
                })
                .collect::<Vec<_>>()
        })
        .collect();
    found.sort_by(|a, b| {
        let key = |p: &(RatFunc, RatFunc)| (p.0.num().clone(), p.0.den().clone(), p.1.num().clone(), p.1.den().clone());
        key(a).cmp(&key(b))
    });
    Ok(SearchResult {
        surface: query.surface,
        max_deg: d,
        family: query.family,
        pair_space: space,
        enumerated: total,
        found,
        exhausted: true,
        elapsed_ms: start.elapsed().as_millis(),
    })
}
