use kummer_mw::algebra::{cbrt, cubic_symbol, is_cube, make_field, sqrt, FieldElement, FieldRef, Poly, RatFunc};
use proptest::prelude::*;

const PRIMES: [u64; 4] = [7, 13, 19, 31];

/// `(p, k)` pairs covering prime fields and extensions up to degree 6.
fn field_choice() -> impl Strategy<Value = FieldRef> {
    prop_oneof![
        proptest::sample::select(PRIMES.to_vec()).prop_map(|p| make_field(p, 1).unwrap()),
        Just(make_field(7, 2).unwrap()),
        Just(make_field(7, 3).unwrap()),
        Just(make_field(7, 6).unwrap()),
        Just(make_field(13, 6).unwrap()),
        Just(make_field(5, 4).unwrap()),
    ]
}

fn triple() -> impl Strategy<Value = (FieldElement, FieldElement, FieldElement)> {
    field_choice().prop_flat_map(|f| {
        let q = f.order();
        (0..q, 0..q, 0..q).prop_map(move |(a, b, c)| (f.from_index(a), f.from_index(b), f.from_index(c)))
    })
}

/// Cubic symbol by brute force: the exponent `e` with `a^((q-1)/3) = w^e`, `w` found by
/// scanning for `2w + 1 = r`, `r` the smaller square root of -3 in index order.
fn cubic_symbol_oracle(a: FieldElement) -> u8 {
    let f = a.field();
    let minus3 = f.from_i64(-3);
    let root = f.elements().filter(|r| *r * *r == minus3).min_by_key(|r| r.index()).unwrap();
    let w = f.elements().find(|w| f.from_u64(2) * *w + f.one() == root).unwrap();
    let v = a.pow((f.order() - 1) / 3);
    (0..3u8).find(|&e| w.pow(e as u64) == v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 256, rng_seed: proptest::test_runner::RngSeed::Fixed(7), failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn field_axioms((a, b, c) in triple()) {
        let f = a.field();
        prop_assert_eq!(a + b, b + a);
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a + b) + c, a + (b + c));
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!(a + f.zero(), a);
        prop_assert_eq!(a * f.one(), a);
        prop_assert_eq!(a + (-a), f.zero());
        prop_assert_eq!(a - b, a + (-b));
        if !a.is_zero() {
            prop_assert_eq!(a * a.inverse().unwrap(), f.one());
        } else {
            prop_assert!(a.inverse().is_none());
        }
        prop_assert_eq!(a.pow(f.order()), a);
        prop_assert_eq!(a.frobenius(f.degree()), a);
        prop_assert_eq!((a + b).frobenius(1), a.frobenius(1) + b.frobenius(1));
    }

    #[test]
    fn roots_are_roots((a, _b, _c) in triple()) {
        if let Some(s) = sqrt(&a) {
            prop_assert_eq!(s * s, a);
        }
        if let Some(r) = cbrt(&a) {
            prop_assert_eq!(r * r * r, a);
        }
    }

    #[test]
    fn cubic_symbol_multiplicative(q in proptest::sample::select(vec![7u64, 13, 19, 31, 37, 43]), i in 1u64..1000, j in 1u64..1000) {
        let f = make_field(q, 1).unwrap();
        let a = f.from_u64(1 + i % (q - 1));
        let b = f.from_u64(1 + j % (q - 1));
        let (sa, sb, sab) = (cubic_symbol(&a).unwrap(), cubic_symbol(&b).unwrap(), cubic_symbol(&(a * b)).unwrap());
        prop_assert_eq!(sab, (sa + sb) % 3);
        prop_assert_eq!(sa, cubic_symbol_oracle(a));
        prop_assert_eq!(sa == 0, is_cube(&a));
    }

    #[test]
    fn ratfunc_field_and_valuations(
        q in proptest::sample::select(vec![7u64, 13]),
        n1 in proptest::collection::vec(0u64..13, 1..4),
        d1 in proptest::collection::vec(0u64..13, 1..3),
        n2 in proptest::collection::vec(0u64..13, 1..4),
        at in 0u64..13,
    ) {
        let f = make_field(q, 1).unwrap();
        let mk = |v: &[u64], monic: bool| {
            let mut v: Vec<u64> = v.iter().map(|x| x % q).collect();
            if monic { v.push(1) }
            Poly::from_u64s(f, &v)
        };
        let den = mk(&d1, true);
        let r = RatFunc::new(mk(&n1, false), den);
        let s = RatFunc::from_poly(mk(&n2, false));
        prop_assert_eq!(&r + &s, &s + &r);
        prop_assert_eq!(&(&r * &s) - &(&s * &r), RatFunc::zero(f));
        if !s.is_zero() {
            prop_assert_eq!(&(&r * &s).checked_div(&s).unwrap(), &r);
            let place = kummer_mw::algebra::Place::at(f.from_u64(at % q));
            if !r.is_zero() {
                let vr = r.valuation(&place).unwrap();
                let vs = s.valuation(&place).unwrap();
                prop_assert_eq!((&r * &s).valuation(&place).unwrap(), vr + vs);
            }
        }
    }
}
