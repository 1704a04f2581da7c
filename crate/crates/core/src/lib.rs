//! Exact arithmetic for the surfaces `(x₁³ - b)·t^e = c·(x₀³ - b)` over `F_q` and the
//! `j = 0` elliptic surfaces `y² = x³ + B(t)` they are isomorphic to.
//!
//! - [`algebra`]: finite fields `F_{p^k}`, polynomials, factorisation, rational functions
//!   and their valuations at closed points of `P¹`.
//! - [`elliptic`]: the group law over any field, including `F_q(t)`.
//! - [`surface`]: parameter validation, the family members, their Weierstrass models and
//!   the isomorphism between the two descriptions.
//! - [`kodaira`]: Tate's algorithm for `j = 0`, trivial lattices and the geometric
//!   Mordell-Weil group.
//! - [`mordell_weil`]: height pairings, Frobenius actions and ranks over `F_q`.
//! - [`search`]: bounded exhaustive search for sections.

pub mod algebra;
pub mod elliptic;
pub mod surface;
pub mod kodaira;
pub mod mordell_weil;
pub mod search;
