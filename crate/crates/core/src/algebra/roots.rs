//! Square roots, cube roots and the quadratic / cubic residue characters.
//!
//! Roots are extracted with the prime-power generalisation of Tonelli–Shanks
//! (Adleman–Manders–Miller): split `q - 1 = r^s m` with `r ∤ m`, take `a^(r^-1 mod m)`
//! and fix the remaining Sylow-`r` error by a base-`r` discrete logarithm.

use super::field::{FieldElement, FieldError, FieldRef};

/// Sylow-`r` data for a field with `r | q - 1`.
#[derive(Debug, Clone)]
pub(crate) struct RootData {
    r: u64,
    s: u32,
    m: u64,
    /// generator of the Sylow-`r` subgroup (order `r^s`)
    z: FieldElement,
    /// primitive `r`-th root of unity, `z^(r^(s-1))`
    zeta: FieldElement,
}

fn mod_inverse(a: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let (mut old_r, mut r) = (a as i128, m as i128);
    let (mut old_s, mut s) = (1i128, 0i128);
    while r != 0 {
        let q = old_r / r;
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
    }
    debug_assert_eq!(old_r, 1);
    old_s.rem_euclid(m as i128) as u64
}

impl RootData {
    fn compute(field: FieldRef, r: u64) -> Option<Self> {
        let q1 = field.order() - 1;
        if !q1.is_multiple_of(r) {
            return None;
        }
        let (mut s, mut m) = (0u32, q1);
        while m % r == 0 {
            m /= r;
            s += 1;
        }
        // smallest non-r-th power in index order
        let g = (2..field.order())
            .map(|i| field.from_index(i))
            .find(|g| !g.pow(q1 / r).is_one())?;
        let z = g.pow(m);
        let zeta = z.pow(r.pow(s - 1));
        Some(RootData { r, s, m, z, zeta })
    }

    /// Some `x` with `x^r = a`, assuming `a` is a nonzero `r`-th power.
    fn root(&self, a: &FieldElement) -> FieldElement {
        let field = a.field();
        let e = mod_inverse(self.r % self.m.max(1), self.m);
        let x0 = a.pow(e);
        // delta = a / x0^r lies in the Sylow-r subgroup and is an r-th power there
        let delta = *a * x0.pow(self.r).inverse().expect("a is nonzero");
        let z_inv = self.z.inverse().expect("generator is nonzero");
        let mut log = 0u64;
        let mut r_pow = 1u64;
        for i in 0..self.s {
            let h = (delta * z_inv.pow(log)).pow(self.r.pow(self.s - 1 - i));
            let digit = (0..self.r)
                .find(|&d| self.zeta.pow(d) == h)
                .expect("element of the Sylow subgroup has a base-r digit");
            log += digit * r_pow;
            r_pow *= self.r;
        }
        debug_assert_eq!(log % self.r, 0);
        let y = self.z.pow(log / self.r);
        let x = x0 * y;
        debug_assert_eq!(x.pow(self.r), *a, "root extraction in {field}");
        x
    }
}

fn sylow2(field: FieldRef) -> &'static RootData {
    field
        .sylow2
        .get_or_init(|| RootData::compute(field, 2).expect("q is odd"))
}

fn sylow3(field: FieldRef) -> Option<&'static RootData> {
    field.sylow3.get_or_init(|| RootData::compute(field, 3)).as_ref()
}

/// Quadratic character `a^((q-1)/2)` as -1, 0 or +1.
pub fn legendre(a: &FieldElement) -> i8 {
    if a.is_zero() {
        return 0;
    }
    if a.pow((a.field().order() - 1) / 2).is_one() {
        1
    } else {
        -1
    }
}

pub fn is_square(a: &FieldElement) -> bool {
    legendre(a) >= 0
}

/// The smaller of the two square roots, or `None` for a non-square.
pub fn sqrt(a: &FieldElement) -> Option<FieldElement> {
    match legendre(a) {
        0 => Some(*a),
        -1 => None,
        _ => {
            let x = sylow2(a.field()).root(a);
            Some(x.min(-x))
        }
    }
}

pub fn is_cube(a: &FieldElement) -> bool {
    if a.is_zero() {
        return true;
    }
    let q1 = a.field().order() - 1;
    !q1.is_multiple_of(3) || a.pow(q1 / 3).is_one()
}

/// All cube roots of `a` in its field, sorted in the field's total order.
///
/// When `q ≡ 2 (mod 3)` cubing is a bijection and the single root is returned.
pub fn cube_roots(a: &FieldElement) -> Vec<FieldElement> {
    let field = a.field();
    if a.is_zero() {
        return vec![*a];
    }
    let q1 = field.order() - 1;
    let Some(data) = sylow3(field) else {
        return vec![a.pow(mod_inverse(3, q1))];
    };
    if !a.pow(q1 / 3).is_one() {
        return Vec::new();
    }
    let x = data.root(a);
    let mut roots = vec![x, x * data.zeta, x * data.zeta * data.zeta];
    roots.sort();
    roots
}

/// Canonical (smallest) cube root, when one exists.
pub fn cbrt(a: &FieldElement) -> Option<FieldElement> {
    cube_roots(a).first().copied()
}

/// The primitive cube root of unity `ω = (-1 + √-3)/2` with the canonical `√-3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpecialConstants {
    pub omega: FieldElement,
    pub omega_squared: FieldElement,
    /// Always the smaller square root of -3; `ω` is derived from it.
    pub sqrt_minus3: FieldElement,
}

pub fn special_constants(field: FieldRef) -> Result<SpecialConstants, FieldError> {
    field
        .constants
        .get_or_init(|| {
            if field.order() % 3 != 1 {
                return None;
            }
            let s = sqrt(&field.from_i64(-3))?;
            let half = field.from_u64(2).inverse()?;
            let omega = (s - field.one()) * half;
            Some(SpecialConstants { omega, omega_squared: omega * omega, sqrt_minus3: s })
        })
        .ok_or(FieldError::NoCubeRootOfUnity(field.order()))
}

/// Exponent `e ∈ {0, 1, 2}` with `a^((q-1)/3) = ω^e` for the canonical `ω`.
pub fn cubic_symbol(a: &FieldElement) -> Result<u8, FieldError> {
    let field = a.field();
    let consts = special_constants(field)?;
    if a.is_zero() {
        return Err(FieldError::ZeroSymbol);
    }
    let v = a.pow((field.order() - 1) / 3);
    if v.is_one() {
        Ok(0)
    } else if v == consts.omega {
        Ok(1)
    } else {
        debug_assert_eq!(v, consts.omega_squared);
        Ok(2)
    }
}
