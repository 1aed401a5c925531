//! The eight acceptance criteria, one PASS/FAIL line each.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::time::{Duration, Instant};

use num_traits::{One, Zero};
use qtorsion::coord::Coord;
use qtorsion::corpus::{parse_corpus, CorpusEntry};
use qtorsion::curve::{apply_change, quadratic_twist, Curve, Point, VarChange};
use qtorsion::divpoly::{torsion_over_q, two_division_cubic, DivisionPolynomials, TorsionStructure};
use qtorsion::exact::{ri, rq, Rational, SquarefreeInt};
use qtorsion::galois::*;
use qtorsion::growth::{
    context, quadratic_roots, squarefree_range, two_power_by_division_polynomials, two_power_by_lemmas,
    FourTorsionModel,
};
use qtorsion::numeric::rational_quadratic_factors;
use qtorsion::poly::Poly;
use qtorsion::sieve::verify_growth_theorems;
use qtorsion::tate::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn root() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

fn corpus() -> Vec<CorpusEntry> {
    parse_corpus(&root().join("../../data/curves.csv")).unwrap()
}

fn curve(label: &str) -> Curve {
    corpus().into_iter().find(|e| e.label == label).unwrap().curve()
}

fn sf(d: i64) -> SquarefreeInt {
    SquarefreeInt::from_i64(d).unwrap()
}

fn tk(label: &str, d: i64) -> TorsionStructure {
    context(&curve(label)).unwrap().torsion_over_K(&sf(d)).unwrap().structure
}

fn within(start: Instant, limit: Duration, what: &str) {
    let t = start.elapsed();
    assert!(t < limit, "{what} took {t:?}, limit {limit:?}");
}

fn appendix_regeneration() {
    let start = Instant::now();
    for (label, order) in [("5B.1.4", 20), ("5B.4.1", 40), ("7B.1.6", 42), ("7B.6.1", 84)] {
        let ell = if label.starts_with('5') { 5 } else { 7 };
        let listed: BTreeSet<MatGL2> = appendix_elements(label).unwrap().into_iter().collect();
        let generated: BTreeSet<MatGL2> = named_subgroup(ell, label).unwrap().elements.into_iter().collect();
        assert_eq!(generated.len(), order, "{label}");
        assert_eq!(listed, generated, "{label}");
    }
    within(start, Duration::from_secs(1), "appendix");
}

fn f3_fixed_point_table() {
    let start = Instant::now();
    let names = catalog(3);
    assert_eq!(names.len(), 16);
    let with_fixed: Vec<&str> =
        names.iter().copied().filter(|n| !fixed_vectors(&named_subgroup(3, n).unwrap()).is_empty()).collect();
    assert_eq!(with_fixed, ["H31", "C3", "H11", "id"]);
    let axis: BTreeSet<GF2Vector> = [GF2Vector::new(3, 1, 0), GF2Vector::new(3, 2, 0)].into_iter().collect();
    for n in ["H11", "C3", "H31"] {
        assert_eq!(fixed_vectors(&named_subgroup(3, n).unwrap()), axis, "{n}");
    }
    within(start, Duration::from_secs(1), "F3 table");
}

fn mat(ell: u8, rows: [[i64; 2]; 2]) -> MatGL2 {
    MatGL2::new(ell, rows).unwrap()
}

fn group_claims() {
    let start = Instant::now();
    for ell in [5u8, 7] {
        // (a)
        let h3 = named_subgroup(ell, "H3").unwrap();
        let subs = index2_subgroups(&h3);
        assert!(!subs.is_empty());
        assert!(subs.iter().all(|h| fixed_vectors(h).is_empty()), "H3 over F{ell}");
        // (e)
        let c = named_subgroup(ell, "nonsplit_cartan").unwrap();
        assert_eq!(c.order(), (ell as usize).pow(2) - 1);
        for m in c.elements.iter().filter(|m| !m.is_identity()) {
            assert!(GF2Vector::nonzero(ell).all(|v| !m.fixes(&v)), "{m}");
        }
    }
    // (b)
    for (ell, name) in [(5u8, "5Cs.1.3"), (7, "7B.1.6")] {
        let g = named_subgroup(ell, name).unwrap();
        let h1 = named_subgroup(ell, "H1").unwrap();
        assert!(conjugate_into(&h1, &g).is_none(), "{name}");
        assert!(contains_split_torus_conjugate(&g, ell).is_none(), "{name}");
    }
    // (c)
    for (ell, name, order) in [(5u8, "5B.4.1", 20usize), (7, "7B.6.1", 42)] {
        let g = named_subgroup(ell, name).unwrap();
        let ul1: Vec<MatGL2> = g.elements.iter().copied().filter(|m| m.entries[0] == 1).collect();
        assert_eq!(ul1.len(), order);
        let stabs: Vec<SubgroupGL2> =
            GF2Vector::nonzero(ell).map(|v| vector_stabilizer(&g, &v)).filter(|s| s.order() == order).collect();
        assert!(!stabs.is_empty(), "{name}");
        assert!(stabs.iter().all(|s| s.elements == ul1), "{name}");
    }
    // (d)
    for (g, m, r) in [
        ([[1, 1], [0, 1]], [[1, 0], [0, 2]], [[1, 1], [0, 2]]),
        ([[1, 1], [0, 2]], [[1, 0], [0, 3]], [[1, 1], [0, 3]]),
        ([[1, 2], [0, 1]], [[1, 0], [0, 2]], [[1, 2], [0, 2]]),
        ([[1, 3], [0, 2]], [[1, 0], [0, 3]], [[1, 3], [0, 3]]),
    ] {
        assert_eq!(mat(5, m).conjugate_by(&mat(5, g)), mat(5, r));
    }
    within(start, Duration::from_secs(5), "group claims");
}

fn example_table() {
    let start = Instant::now();
    let c = TorsionStructure::cyclic;
    let nc = TorsionStructure::new;
    assert_eq!(tk("15.a3", -5), nc(2, 2));
    assert_eq!(tk("17.a3", -1), nc(2, 4));
    assert_eq!(tk("15.a8", -1), nc(2, 8));
    assert_eq!(tk("15.a4", 3), c(8));
    assert_eq!(tk("19.a2", -3), nc(3, 3));
    assert_eq!(tk("80.b1", 3), c(6));
    assert_eq!(tk("50.b1", -15), c(3));
    let tq = torsion_over_q(&curve("175.b3")).unwrap().structure;
    assert!(tk("175.b3", -15).count_dividing(3) > tq.count_dividing(3));

    // growth over Q(i) with 2 ramified, 2 not dividing d and good reduction at 2
    let e17 = corpus().into_iter().find(|e| e.label == "17.a2").unwrap();
    let rec = context(&e17.curve()).unwrap().record("17.a2", &sf(-1)).unwrap();
    assert!(rec.grows());
    assert!(rec.ramifies(2) && !rec.d_divisible_by(2) && !rec.is_bad_at(2));
    let report = verify_growth_theorems(&[e17], 1, Some(1));
    assert!(report.indeterminate.is_empty());
    assert_eq!(report.violation_count(), 0);
    assert_eq!(report.records.len(), 1);
    within(start, Duration::from_secs(30), "example table");
}

fn theorem_scan() {
    let start = Instant::now();
    let small: Vec<CorpusEntry> = corpus().into_iter().filter(|e| e.conductor().unwrap() <= 100).collect();
    assert!(small.len() > 100);
    let report = verify_growth_theorems(&small, 30, None);
    assert!(report.indeterminate.is_empty(), "{:?}", report.indeterminate);
    for t in &report.theorems {
        assert!(t.violations.is_empty(), "{}: {:?}", t.name, t.violations);
    }
    let checked: Vec<String> = report.theorems.iter().map(|t| format!("{}={}", t.name, t.checked)).collect();
    println!("  scan: {} curves, {} pairs; checked {}", small.len(), report.parameters.pairs, checked.join(" "));
    within(start, Duration::from_secs(120), "theorem scan");
}

fn fixture_rows() -> Vec<(String, i64, TorsionStructure, TorsionStructure)> {
    let parse = |s: &str| match s.split_once('x') {
        Some((n, m)) => TorsionStructure::new(m.parse().unwrap(), n.parse().unwrap()),
        None => TorsionStructure::cyclic(s.parse().unwrap()),
    };
    std::fs::read_to_string(root().join("tests/data/growth.txt"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap(), parse(f[2]), parse(f[3]))
        })
        .collect()
}

fn oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let entries = corpus();
    let by_label = |l: &str| entries.iter().find(|e| e.label == l).unwrap().curve();
    let mut pairs: Vec<(String, Curve, SquarefreeInt)> = Vec::new();

    let mut growing: Vec<_> =
        fixture_rows().into_iter().filter(|(_, _, q, k)| k.count_dividing(16) > q.count_dividing(16)).collect();
    growing.shuffle(&mut rng);
    for (label, d, _, _) in growing.into_iter().take(25) {
        pairs.push((label.clone(), by_label(&label), sf(d)));
    }
    let with_two: Vec<&CorpusEntry> =
        entries.iter().filter(|e| !two_division_cubic(&e.curve()).rational_roots().is_empty()).collect();
    let ds = squarefree_range(30);
    while pairs.len() < 50 {
        let e = with_two.choose(&mut rng).unwrap();
        pairs.push((e.label.clone(), e.curve(), ds.choose(&mut rng).unwrap().clone()));
    }
    for (label, e, d) in &pairs {
        let fast = two_power_by_lemmas(e, d).unwrap();
        let slow = two_power_by_division_polynomials(e, d).unwrap();
        assert_eq!(fast, slow, "{label} d={d}");
    }
}

fn random_t(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let t = rq(rng.gen_range(-60..60), rng.gen_range(1..40));
        if !t.is_zero() && !t.is_one() && t != rq(1, 2) {
            return t;
        }
    }
}

fn random_change(rng: &mut ChaCha8Rng) -> VarChange {
    let r = rq(rng.gen_range(-6..6), rng.gen_range(1..4));
    let s = ri(rng.gen_range(-6..6));
    let t = rq(rng.gen_range(-6..6), rng.gen_range(1..4));
    VarChange::new(rq(1, rng.gen_range(1..5)), r, s, t).unwrap()
}

fn all_hold(checks: &[IdentityCheck]) {
    for c in checks {
        assert!(c.holds, "{}", c.name);
    }
}

fn tate_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let o = TateForm::origin();
    let ds = [-1, 2, -3, 5, -7, 10, -15, 13];
    for _ in 0..50 {
        let t = random_t(&mut rng);

        let nine = tate_curve_for_order(9, &t).unwrap();
        assert_eq!(nine.discriminant(), order9_discriminant(&t), "t={t}");
        assert_eq!(nine.curve().order_of(&o, 20), Some(9), "t={t}");
        assert_eq!(order9_parameter(&nine), Some(t.clone()));

        let eight = tate_curve_for_order(8, &t).unwrap();
        assert_eq!(eight.discriminant(), order8_discriminant(&t), "t={t}");
        assert_eq!(eight.curve().order_of(&o, 20), Some(8), "t={t}");

        // disguised order 9: the pipeline recovers (b, c) and every identity holds
        let ch = random_change(&mut rng);
        let e = apply_change(&nine.curve(), &ch).unwrap();
        let p = ch.map_point(&o);
        let (back, trace) = to_tate_normal_form(&e, &p).unwrap();
        assert_eq!(back, nine);
        let checks = verify_discriminant_identities(&trace, None);
        assert!(checks.iter().any(|c| c.name.starts_with("2^12 delta1 d^6 q^7")));
        all_hold(&checks);

        // disguised order 8 with a four-torsion model of the same curve
        let ch = random_change(&mut rng);
        let e = apply_change(&eight.curve(), &ch).unwrap();
        let p4 = e.double(&ch.map_point(&o));
        let (form4, trace) = to_tate_normal_form(&e, &p4).unwrap();
        assert!(form4.c.is_zero());
        let root = two_division_cubic(&e).rational_roots()[0].clone();
        let m = FourTorsionModel::from_root(&e, &(ri(4) * root)).unwrap();
        let checks = verify_discriminant_identities(&trace, Some(&m));
        assert!(checks.iter().any(|c| c.name.starts_with("2^12 delta1 = 16")));
        all_hold(&checks);

        // twisted order 9: the point lives on the twist of E_d by d
        let d = sf(*ds.choose(&mut rng).unwrap());
        let ed = quadratic_twist(&nine.curve(), &d);
        let back = quadratic_twist(&ed, &d);
        let g = torsion_over_q(&back).unwrap();
        let p9 = g.points.iter().find(|p| back.order_of(p, 10) == Some(9)).unwrap();
        let Point::Affine(x1, y1) = p9 else { unreachable!() };
        let (tf, trace) = to_tate_normal_form_twisted(&ed, &d, x1, y1).unwrap();
        all_hold(&verify_discriminant_identities(&trace, None));
        assert_eq!(tf.curve().order_of(&o, 20), Some(9));
    }
}

fn nonzero_delta(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let q = rq(rng.gen_range(-9..10), rng.gen_range(1..7));
        if !q.is_zero() {
            return q;
        }
    }
}

fn numeric_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut entries = corpus();
    entries.shuffle(&mut rng);
    let mut cases = 0;
    'outer: for entry in &entries {
        let e = entry.curve();
        let mut polys = DivisionPolynomials::new(&e);
        for n in [2, 3, 4, 5, 7, 8] {
            let p = polys.primitive(n);
            let (_, rest) = p.split_rational_roots();
            let factors = rational_quadratic_factors(&rest).unwrap();
            for (s, q) in &factors {
                assert!(Poly::quadratic(s, q).divides(&rest));
                // a shift landing on another true factor is not a corruption
                let bad = loop {
                    let delta = nonzero_delta(&mut rng);
                    let c = if rng.gen_bool(0.5) { (s + &delta, q.clone()) } else { (s.clone(), q + &delta) };
                    if !factors.contains(&c) {
                        break c;
                    }
                };
                assert!(
                    !Poly::quadratic(&bad.0, &bad.1).divides(&rest),
                    "{} n={n} factor ({s}, {q}) -> {bad:?}",
                    entry.label
                );
                cases += 1;
            }
            let (_, roots) = quadratic_roots(&p).unwrap();
            let genuine: Vec<_> = roots.iter().map(|(_, z)| z.clone()).collect();
            for z in &genuine {
                assert!(p.eval_at(z).vanishes());
                let bad = loop {
                    let delta = nonzero_delta(&mut rng);
                    let mut c = z.clone();
                    if rng.gen_bool(0.5) {
                        c.a += &delta;
                    } else {
                        c.b += &delta;
                    }
                    if !genuine.contains(&c) {
                        break c;
                    }
                };
                assert!(!p.eval_at(&bad).vanishes(), "{} n={n} root {z} -> {bad}", entry.label);
                cases += 1;
            }
            if cases >= 100 {
                break 'outer;
            }
        }
    }
    assert!(cases >= 100, "only {cases} corrupted candidates");
}

fn main() {
    let criteria: [(&str, fn()); 8] = [
        ("1 appendix regeneration", appendix_regeneration),
        ("2 F3 fixed-point table", f3_fixed_point_table),
        ("3 group-theoretic claims", group_claims),
        ("4 example table", example_table),
        ("5 theorem scan", theorem_scan),
        ("6 oracle equivalence", oracle_equivalence),
        ("7 Tate identities", tate_identities),
        ("8 numerical-assist soundness", numeric_soundness),
    ];
    let mut failed = Vec::new();
    for (name, f) in criteria {
        let start = Instant::now();
        let ok = catch_unwind(AssertUnwindSafe(f)).is_ok();
        println!("{} criterion {name} ({:.2?})", if ok { "PASS" } else { "FAIL" }, start.elapsed());
        if !ok {
            failed.push(name);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed: {failed:?}");
        std::process::exit(1);
    }
}
