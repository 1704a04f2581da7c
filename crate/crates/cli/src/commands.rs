//! One function per subcommand, each returning its check records.

use anyhow::Result;
use num_bigint::BigUint;
use num_rational::BigRational;
use serde_json::{json, Value};

use kummer_mw::algebra::{cube_roots, special_constants, Place, RatFunc};
use kummer_mw::elliptic::Point;
use kummer_mw::kodaira::{expected_rows, fiber_configuration, geometric_mw, shioda_tate_rho, FibrationReport};
use kummer_mw::mordell_weil::{
    expected_frobenius_l1, expected_frobenius_l2, expected_gram_l1, expected_gram_l2, mw_rank_k6, section_lattice,
    torsion_images, verify_relations, ExactRational, HeightContext, SectionLattice,
};
use kummer_mw::search::{search_sections, SearchError, SearchFamily, SearchQuery};
use kummer_mw::surface::{
    check_global_minimality, hypothesis_checks, named_section, sample_round_trips, torsion_sections, valid_pairs,
    weierstrass_model, zero_section, FamilyParams, IsoConstants, Mode, ParamError, SectionFamily, SurfaceId,
};

use crate::report::{claim, Check};
use crate::{Options, SurfaceArg, EXIT_CAP};

fn exact(r: &BigRational) -> ExactRational {
    ExactRational::from(r)
}

fn strings<T: ToString>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

pub fn check_params(q: u64, b: u64, c: u64, mode: Mode) -> (Vec<Check>, Option<ParamError>) {
    let results = hypothesis_checks(q, b, c, mode);
    let first_failure = results.iter().find(|h| !h.holds && !h.tolerated).map(|h| h.hypothesis);
    let checks = results
        .iter()
        .map(|h| {
            let name = format!("hypothesis: {}", h.hypothesis.requirement());
            let computed = json!({"holds": h.holds, "tolerated": h.tolerated, "code": h.hypothesis.code()});
            Check::with(name, claim::HYPOTHESES, json!({"holds": true}), computed, h.holds || h.tolerated)
        })
        .collect();
    (checks, first_failure)
}

pub fn scan(q: u64) -> Vec<Check> {
    let pairs: Vec<Value> = valid_pairs(q).into_iter().map(|(b, c)| json!([b.to_string(), c.to_string()])).collect();
    let count = pairs.len();
    vec![Check::with("valid (b, c) pairs", claim::HYPOTHESES, "at least one pair", pairs, count > 0)]
}

fn fibration(params: &FamilyParams, id: SurfaceId) -> Result<FibrationReport> {
    Ok(fiber_configuration(&weierstrass_model(params, id), id.to_string())?)
}

pub fn table1(params: &FamilyParams) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let reports: Vec<FibrationReport> = (0..6).map(|j| fibration(params, SurfaceId::Ej(j))).collect::<Result<_>>()?;
    let mut geometric_ranks = 0;
    for report in &reports {
        if let Ok(g) = geometric_mw(report) {
            geometric_ranks += g.group.rank;
        }
    }
    for row in expected_rows() {
        let rep = &reports[row.j as usize];
        let name = |what: &str| format!("E_{} {what}", row.j);
        let lattice = rep.trivial_lattice();
        checks.push(Check::equal(name("fibers"), claim::FIBER_TABLE, strings(&row.fibers), strings(&rep.geometric_fibers())));
        checks.push(Check::equal(name("lattice T"), claim::FIBER_TABLE, strings(&row.lattice), strings(&lattice)));
        let mw = geometric_mw(rep);
        let (mw_str, mw_source) = match &mw {
            Ok(c) => (c.group.to_string(), c.source.to_string()),
            Err(e) => (e.to_string(), String::new()),
        };
        checks.push(
            Check::equal(name("MW over the closure"), claim::FIBER_TABLE, row.mw.to_string(), mw_str)
                .bound(json!({"source": mw_source})),
        );
        let rho = mw.as_ref().map(|c| shioda_tate_rho(&lattice, &c.group)).ok();
        checks.push(Check::equal(name("rho"), claim::FIBER_TABLE, row.rho, rho));
        let expected_chi = if row.rho == 20 { 2 } else { 1 };
        checks.push(Check::equal(
            name("Euler budget"),
            claim::DERIVED,
            json!({"euler_sum": 12 * expected_chi, "chi": expected_chi}),
            json!({"euler_sum": rep.euler_sum(), "chi": rep.chi}),
        ));
    }
    for (j, partner) in [(3usize, 1usize), (4, 0)] {
        checks.push(Check::equal(
            format!("E_{j} fibers equal E_{partner} fibers"),
            claim::DERIVED,
            strings(&reports[partner].geometric_fibers()),
            strings(&reports[j].geometric_fibers()),
        ));
    }
    checks.push(Check::equal("sum of geometric ranks of E_0..E_5", claim::MW_RANK_ZERO, 6, geometric_ranks));
    Ok(checks)
}

fn gram_checks(lattice: &SectionLattice, expected: kummer_mw::mordell_weil::HeightMatrix) -> Vec<Check> {
    let name = |what: &str| format!("{} {what}", lattice.name);
    vec![
        Check::equal(name("Gram matrix"), claim::HEIGHTS, &expected, &lattice.gram),
        Check::equal(name("determinant"), claim::DERIVED, exact(&expected.det()), exact(&lattice.gram.det())),
        Check::equal(
            name("symmetric positive definite"),
            claim::DERIVED,
            true,
            lattice.gram.is_symmetric() && lattice.gram.is_positive_definite(),
        ),
    ]
}

pub fn heights(params: &FamilyParams) -> Result<Vec<Check>> {
    let l1 = section_lattice(params, SectionFamily::P)?;
    let l2 = section_lattice(params, SectionFamily::Q)?;
    let mut checks = gram_checks(&l1, expected_gram_l1());
    checks.extend(gram_checks(&l2, expected_gram_l2()));
    let ctx = HeightContext::new(&weierstrass_model(params, SurfaceId::E), params.base, "E")?;
    for (i, t) in torsion_images(params).iter().enumerate() {
        let h = ctx.height(t)?;
        checks.push(Check::equal(format!("height of T{}", i + 1), claim::TORSION, json!({"num": "0", "den": "1"}), exact(&h)));
    }
    Ok(checks)
}

fn symbol_label(e: u8) -> &'static str {
    ["1", "omega", "omega^2"][e as usize % 3]
}

fn frobenius_checks(lattice: &SectionLattice, expected: kummer_mw::mordell_weil::FrobMatrix, symbol_of: &str) -> Vec<Check> {
    let name = |what: &str| format!("{} {what}", lattice.name);
    let expected_invariant = if expected == kummer_mw::mordell_weil::FrobMatrix::identity(2) { 2 } else { 0 };
    vec![
        Check::with(
            name("residue symbol"),
            claim::DERIVED,
            json!(null),
            json!({"symbol_of": symbol_of, "value": symbol_label(lattice.symbol)}),
            true,
        ),
        Check::equal(name("Frobenius matrix"), claim::FROBENIUS, &expected, &lattice.frobenius),
        Check::equal(name("isometry M^T h M = h"), claim::DERIVED, true, lattice.frobenius.preserves(&lattice.gram)),
        Check::with(
            name("order of M divides 6"),
            claim::DERIVED,
            "divides 6",
            lattice.frobenius.order(6),
            lattice.frobenius.order(6).is_some_and(|k| 6 % k == 0),
        ),
        Check::equal(name("rank of invariants"), claim::FROBENIUS, expected_invariant, lattice.invariant_rank),
    ]
}

pub fn frobenius(params: &FamilyParams) -> Result<Vec<Check>> {
    let l1 = section_lattice(params, SectionFamily::P)?;
    let l2 = section_lattice(params, SectionFamily::Q)?;
    let constants = special_constants(params.base)?;
    let mut checks = vec![Check::with(
        "omega branch",
        claim::DERIVED,
        json!(null),
        json!({"omega": constants.omega.to_string(), "sqrt_minus3": constants.sqrt_minus3.to_string()}),
        constants.omega == (constants.sqrt_minus3 - params.base.one()) * params.base.from_u64(2).inverse().expect("p > 2"),
    )];
    checks.extend(frobenius_checks(&l1, expected_frobenius_l1(l1.symbol), "4b"));
    checks.extend(frobenius_checks(&l2, expected_frobenius_l2(l2.symbol), "b"));
    Ok(checks)
}

pub fn rank(params: &FamilyParams) -> Result<Vec<Check>> {
    let report = mw_rank_k6(params)?;
    let expected_rank = if params.b_is_cube { 2 } else { 0 };
    let rank_claim = if params.b_is_cube { claim::CUBE_B_RANK_TWO } else { claim::MW_RANK_ZERO };
    let torsion = kummer_mw::kodaira::MwGroup::new(0, report.torsion.clone()).to_string();
    let mut checks = vec![
        Check::equal("rank of MW(K6)", rank_claim, expected_rank, report.rank),
        Check::equal("torsion of MW(K6)", claim::MW_RANK_ZERO, "Z/3", torsion),
        Check::equal("geometric rank of MW(K6)", claim::MW_RANK_ZERO, 6, report.geometric_rank),
    ];
    for r in &report.per_surface {
        let expected = if r.j == 2 && params.b_is_cube { 2 } else { 0 };
        checks.push(
            Check::equal(format!("rank of E_{}", r.j), rank_claim, expected, r.rank)
                .bound(json!({"method": r.method, "geometric": r.geometric.to_string()})),
        );
    }
    checks.push(Check::with(
        "residue symbols",
        claim::DERIVED,
        json!(null),
        json!({"4b": symbol_label(report.symbol_4b), "b": symbol_label(report.symbol_b)}),
        true,
    ));
    Ok(checks)
}

pub fn verify_iso(params: &FamilyParams, n: u32, samples: u32, seed: u64) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    let s = sample_round_trips(params, n, samples, seed);
    let bound = json!({
        "log2_at_most": -s.bound_log2,
        "samples": s.samples,
        "degree_bound": s.degree_bound,
        "field_order": s.field_order.to_string(),
    });
    checks.push(Check::equal(format!("round trips on K{}", 6 * n), claim::ISOMORPHISM, 0, s.failures).bound(bound.clone()));
    checks.push(Check::with("sampling bound below 2^-40", claim::DERIVED, "log2 < -40", -s.bound_log2, s.bound_log2 > 40).bound(bound));

    let iso = IsoConstants::generic(params, n);
    let o = zero_section(params, n);
    let image = iso.phi(&o).ok();
    checks.push(Check::equal("phi(O) is the zero of E", claim::ISOMORPHISM, "O", image.map(|p| p.to_string())));
    let back = iso.phi_inv(&Point::Zero).is_ok_and(|p| p.same_point(&o));
    checks.push(Check::equal("phi_inv(zero of E) is O", claim::ISOMORPHISM, true, back));

    let mut models: Vec<SurfaceId> = vec![SurfaceId::E];
    models.extend((0..6).map(SurfaceId::Ej));
    models.extend((1..=3).map(SurfaceId::K6n));
    for id in models {
        let model = weierstrass_model(params, id);
        let rep = check_global_minimality(&model);
        checks.push(
            Check::equal(format!("{id} globally minimal"), claim::MINIMAL, true, rep.minimal).bound(json!({
                "infinity_twist": rep.infinity_twist,
                "infinity_valuation": rep.infinity_valuation,
                "finite": rep.finite.iter().map(|p| json!({"place": p.place, "degree": p.degree, "valuation": p.valuation})).collect::<Vec<_>>(),
            })),
        );
        if let SurfaceId::K6n(k) = id {
            let fib = fibration(params, id)?;
            checks.push(Check::equal(
                format!("{id} Euler budget and arithmetic genus"),
                claim::MINIMAL,
                json!({"euler_sum": 24 * k, "chi": 2 * k}),
                json!({"euler_sum": fib.euler_sum(), "chi": fib.chi}),
            ));
        }
    }
    for j in 0..6u8 {
        let partner = (4 + 6 - j) % 6;
        let at_inf = weierstrass_model(params, SurfaceId::Ej(j)).infinity_valuation();
        let at_zero = weierstrass_model(params, SurfaceId::Ej(partner)).b().valuation(&Place::at(params.base.zero()));
        checks.push(Check::equal(
            format!("E_{j} at infinity matches E_{partner} at 0"),
            claim::MINIMAL,
            at_zero,
            Some(at_inf),
        ));
    }
    Ok(checks)
}

pub fn relations(params: &FamilyParams) -> Vec<Check> {
    let r = verify_relations(params);
    let ys: Vec<String> = (0..3)
        .map(|k| named_section(params, SectionFamily::P, k).coords().map(|(_, y)| y.to_string()).unwrap_or_default())
        .collect();
    let mut checks = vec![
        Check::equal("P0 + P1 + P2 = O", claim::RELATIONS, true, r.p_sum_zero),
        Check::equal("Q0 + Q1 + Q2 = O", claim::RELATIONS, true, r.q_sum_zero),
        Check::with("P_k share the y-coordinate", claim::RELATIONS, "equal", &ys, ys.iter().all(|y| y == &ys[0])),
    ];
    for (i, order) in r.torsion_orders.iter().enumerate() {
        checks.push(Check::equal(format!("order of T{}", i + 1), claim::TORSION, Some(3), order));
    }
    checks
}

pub fn torsion(params: &FamilyParams) -> Result<Vec<Check>> {
    let e = weierstrass_model(params, SurfaceId::E).curve();
    let iso = IsoConstants::generic(params, 1);
    let sections = torsion_sections(params, 1);
    let images = torsion_images(params);
    let ctx = HeightContext::new(&weierstrass_model(params, SurfaceId::E), params.base, "E")?;
    let mut checks = Vec::new();
    for (i, (s, t)) in sections.iter().zip(&images).enumerate() {
        let label = format!("T{}", i + 1);
        let (x0, x1) = match s {
            kummer_mw::surface::KummerPoint::AtInfinity { x0, x1 } | kummer_mw::surface::KummerPoint::Affine { x0, x1 } => {
                (x0.to_string(), x1.to_string())
            }
        };
        checks.push(Check::with(
            format!("{label} on E"),
            claim::TORSION,
            true,
            json!({"section": format!("({x0} : {x1} : 0)"), "image": t.to_string()}),
            e.contains(t),
        ));
        checks.push(Check::equal(format!("{label} order"), claim::TORSION, Some(3), e.order(t, 12)));
        let (is_torsion, _) = ctx.is_torsion(t)?;
        checks.push(Check::equal(format!("{label} height zero"), claim::TORSION, true, is_torsion));
        let back = iso.phi_inv(t).is_ok_and(|p| p.same_point(s));
        checks.push(Check::equal(format!("phi_inv({label}) returns the section"), claim::ISOMORPHISM, true, back));
    }
    checks.push(Check::equal("T1 = -T2", claim::TORSION, true, e.neg(&images[0]) == images[1]));
    Ok(checks)
}

fn pair_label((x0, x1): &(RatFunc, RatFunc)) -> String {
    format!("({x0}, {x1})")
}

/// Search report; the second value overrides the exit status when the cap refuses the run.
pub fn search(params: &FamilyParams, opts: &Options) -> (Vec<Check>, Option<i32>) {
    let surface = match opts.surface {
        SurfaceArg::K2 => SurfaceId::K2,
        SurfaceArg::K6n => SurfaceId::K6n(opts.n.max(1)),
    };
    let family = if opts.rational { SearchFamily::Rational } else { SearchFamily::Polynomial };
    let query = SearchQuery { surface, max_deg: opts.max_deg, family, cap: opts.cap };
    let result = match search_sections(params, &query) {
        Ok(r) => r,
        Err(SearchError::CapExceeded { space, cap }) => {
            let check = Check::with("search space within cap", claim::DERIVED, format!("<= {cap}"), space.to_string(), false);
            return (vec![check], Some(EXIT_CAP));
        }
        Err(e) => {
            return (vec![Check::with("search", claim::DERIVED, "Kummer surface", e.to_string(), false)], None);
        }
    };
    let found: Vec<String> = result.found.iter().map(pair_label).collect();
    let bound = json!({
        "surface": surface.to_string(),
        "family": family,
        "max_deg": result.max_deg,
        "pair_space": result.pair_space.to_string(),
        "enumerated": result.enumerated,
        "exhausted": result.exhausted,
    });
    let name = format!("affine F_q-sections of {surface}");
    let mut checks = Vec::new();
    if params.b_is_cube {
        // (γω^i, γω^j) with γ³ = b are sections of every member of the family
        let roots = cube_roots(&params.b);
        let mut forced: Vec<String> = roots
            .iter()
            .flat_map(|a| roots.iter().map(move |b| pair_label(&(RatFunc::constant(*a), RatFunc::constant(*b)))))
            .collect();
        forced.sort();
        let present = forced.iter().all(|f| found.contains(f));
        checks.push(Check::with(format!("forced constant sections of {surface}"), claim::DERIVED, &forced, &found, present).bound(bound));
    } else {
        match surface {
            SurfaceId::K2 => checks.push(Check::equal(name, claim::K2_NO_SECTION, Vec::<String>::new(), &found).bound(bound)),
            SurfaceId::K6n(1) => checks.push(Check::equal(name, claim::TORSION, Vec::<String>::new(), &found).bound(bound)),
            _ => checks.push(Check::with(name, claim::K6N_EVIDENCE, json!(null), &found, true).bound(bound)),
        }
    }
    let space_ok = result.pair_space <= BigUint::from(opts.cap);
    checks.push(Check::with("search exhausted within cap", claim::DERIVED, true, result.exhausted, result.exhausted && space_ok));
    (checks, None)
}
