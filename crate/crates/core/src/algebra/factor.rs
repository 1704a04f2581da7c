//! Factorisation over `F_q`: square-free decomposition, distinct-degree splitting and
//! Cantor–Zassenhaus equal-degree splitting (odd `q`).

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::field::FieldRef;
use super::poly::Poly;

const SPLIT_SEED: u64 = 0x6b75_6d6d_6572;

/// `p`-th root of a polynomial whose derivative vanishes.
fn pth_root(f: &Poly) -> Poly {
    let field = f.field();
    let p = field.characteristic() as usize;
    // a^(1/p) = a^(q/p) = a^(p^(k-1))
    let e = field.degree() - 1;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|c| c.frobenius(e))
        .collect();
    Poly::from_coeffs(field, coeffs)
}

/// Square-free decomposition of a monic polynomial: pairs `(g, i)` with `f = Π g^i`,
/// each `g` square-free, monic, nonconstant.
pub fn squarefree_decomposition(f: &Poly) -> Vec<(Poly, usize)> {
    let f = f.monic();
    let mut out = Vec::new();
    if f.degree_or_zero() == 0 {
        return out;
    }
    let p = f.field().characteristic() as usize;
    let d = f.derivative();
    if d.is_zero() {
        for (g, j) in squarefree_decomposition(&pth_root(&f)) {
            out.push((g, j * p));
        }
        return out;
    }
    let mut c = f.gcd(&d);
    let mut w = f.exact_div(&c);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c);
        let z = w.exact_div(&y);
        if z.degree_or_zero() > 0 {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.exact_div(&w);
    }
    if !c.is_one() {
        for (g, j) in squarefree_decomposition(&pth_root(&c)) {
            out.push((g, j * p));
        }
    }
    out
}

/// Distinct-degree factorisation of a square-free monic polynomial.
pub fn distinct_degree(f: &Poly) -> Vec<(Poly, usize)> {
    let field = f.field();
    let q = field.order();
    let x = Poly::var(field);
    let mut rest = f.monic();
    let mut h = x.rem(&rest);
    let mut out = Vec::new();
    let mut i = 1;
    while rest.degree_or_zero() >= 2 * i {
        h = h.pow_mod(q, &rest);
        let g = (&h - &x).gcd(&rest);
        if !g.is_one() {
            rest = rest.exact_div(&g);
            h = h.rem(&rest);
            out.push((g, i));
        }
        i += 1;
    }
    if rest.degree_or_zero() > 0 {
        let d = rest.degree_or_zero();
        out.push((rest, d));
    }
    out
}

fn random_poly(field: FieldRef, below: usize, rng: &mut ChaCha8Rng) -> Poly {
    let coeffs = (0..below).map(|_| field.random(rng)).collect();
    Poly::from_coeffs(field, coeffs)
}

/// Splits a product of distinct monic irreducibles of degree `d`.
pub fn equal_degree(f: &Poly, d: usize) -> Vec<Poly> {
    let mut rng = ChaCha8Rng::seed_from_u64(SPLIT_SEED);
    let mut out = Vec::new();
    equal_degree_into(&f.monic(), d, &mut rng, &mut out);
    out
}

fn equal_degree_into(f: &Poly, d: usize, rng: &mut ChaCha8Rng, out: &mut Vec<Poly>) {
    let n = f.degree_or_zero();
    if n == d {
        out.push(f.clone());
        return;
    }
    let field = f.field();
    let q = field.order();
    let one = Poly::one(field);
    loop {
        let r = random_poly(field, n, rng);
        if r.degree_or_zero() == 0 {
            continue;
        }
        // r^((q^d - 1)/2) = (r · r^q · … · r^(q^(d-1)))^((q-1)/2)
        let mut cur = r.rem(f);
        let mut norm = cur.clone();
        for _ in 1..d {
            cur = cur.pow_mod(q, f);
            norm = (&norm * &cur).rem(f);
        }
        let g = (&norm.pow_mod((q - 1) / 2, f) - &one).gcd(f);
        let gd = g.degree_or_zero();
        if gd > 0 && gd < n {
            let cofactor = f.exact_div(&g);
            equal_degree_into(&g, d, rng, out);
            equal_degree_into(&cofactor, d, rng, out);
            return;
        }
    }
}

/// Complete factorisation into monic irreducibles with multiplicities, sorted
/// canonically. The leading coefficient is dropped; constants factor as `[]`.
pub fn factor(f: &Poly) -> Vec<(Poly, usize)> {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let mut out = Vec::new();
    for (g, mult) in squarefree_decomposition(f) {
        for (h, d) in distinct_degree(&g) {
            for irr in equal_degree(&h, d) {
                out.push((irr, mult));
            }
        }
    }
    out.sort();
    out
}

/// Rabin's test.
pub fn is_irreducible(f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = f.monic();
    let field = f.field();
    let q = field.order();
    let x = Poly::var(field);
    let frob_iter = |times: usize| {
        let mut h = x.rem(&f);
        for _ in 0..times {
            h = h.pow_mod(q, &f);
        }
        h
    };
    if !(&frob_iter(n) - &x).rem(&f).is_zero() {
        return false;
    }
    prime_divisors(n)
        .into_iter()
        .all(|r| (&frob_iter(n / r) - &x).gcd(&f).is_one())
}

fn prime_divisors(mut n: usize) -> Vec<usize> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
