use kummer_mw::algebra::RatFunc;
use kummer_mw::elliptic::Point;
use kummer_mw::kodaira::fiber_configuration;
use kummer_mw::surface::{
    check_global_minimality, sample_round_trips, torsion_sections, validate_params, weierstrass_model, zero_section,
    IsoConstants, KummerPoint, Mode, SurfaceId,
};

const SETS: [(u64, u64, u64); 3] = [(7, 2, 6), (13, 2, 5), (19, 2, 8)];

#[test]
fn round_trips_have_no_failures_and_a_tiny_bound() {
    for (q, b, c) in SETS {
        let p = validate_params(q, b, c, Mode::Strict).unwrap();
        for n in 1..=3 {
            let s = sample_round_trips(&p, n, 1000, 42);
            assert_eq!((s.samples, s.failures), (1000, 0), "q={q} n={n}");
            assert_eq!(s.field_order, q.pow(6));
            // floor(samples · log2(|L| / degree bound)), to within the f64 rounding
            let approx = 1000.0 * ((q.pow(6) as f64).log2() - (s.degree_bound as f64).log2());
            assert!((s.bound_log2 as f64 - approx).abs() <= 1.0, "{} vs {approx}", s.bound_log2);
            assert!(s.bound_log2 > 40);
        }
    }
}

#[test]
fn sampling_is_deterministic_per_seed() {
    let p = validate_params(7, 2, 6, Mode::Strict).unwrap();
    assert_eq!(sample_round_trips(&p, 1, 200, 9), sample_round_trips(&p, 1, 200, 9));
}

#[test]
fn every_model_is_globally_minimal() {
    for (q, b, c) in SETS {
        let p = validate_params(q, b, c, Mode::Strict).unwrap();
        let mut ids: Vec<SurfaceId> = (0..6).map(SurfaceId::Ej).collect();
        ids.push(SurfaceId::E);
        for id in ids {
            assert!(check_global_minimality(&weierstrass_model(&p, id)).minimal, "{id}");
        }
        for n in 1..=3u32 {
            let model = weierstrass_model(&p, SurfaceId::K6n(n));
            assert!(check_global_minimality(&model).minimal);
            let report = fiber_configuration(&model, "K6n").unwrap();
            assert_eq!(report.euler_sum(), 24 * n);
            assert_eq!(report.chi, 2 * n);
        }
    }
}

#[test]
fn generic_points_map_onto_the_weierstrass_model() {
    for (q, b, c) in SETS {
        let p = validate_params(q, b, c, Mode::Strict).unwrap();
        for n in 1..=2 {
            let iso = IsoConstants::generic(&p, n);
            let curve = weierstrass_model(&p, SurfaceId::K6n(n)).curve();
            assert_eq!(iso.phi(&zero_section(&p, n)).unwrap(), Point::Zero);
            for t in torsion_sections(&p, n) {
                let image = iso.phi(&t).unwrap();
                assert!(curve.contains(&image));
                assert_eq!(curve.order(&image, 12), Some(3));
                let back: KummerPoint<RatFunc> = iso.phi_inv(&image).unwrap();
                assert!(back.same_point(&t));
            }
        }
    }
}
