//! Full corpus scan against torsion groups computed independently with PARI.

use std::collections::BTreeSet;
use std::path::Path;

use qtorsion::corpus::parse_corpus;
use qtorsion::divpoly::TorsionStructure;
use qtorsion::sieve::verify_growth_theorems;

fn structure(s: &str) -> TorsionStructure {
    match s.split_once('x') {
        Some((n, m)) => TorsionStructure::new(m.parse().unwrap(), n.parse().unwrap()),
        None => TorsionStructure::cyclic(s.parse().unwrap()),
    }
}

#[test]
fn scan_matches_pari_fixture() {
    let root = Path::new(env!("CARGO_MANIFEST_DIR"));
    let corpus = parse_corpus(&root.join("../../data/curves.csv")).unwrap();
    let fixture = std::fs::read_to_string(root.join("tests/data/growth.txt")).unwrap();
    let want: BTreeSet<(String, i64, TorsionStructure, TorsionStructure)> = fixture
        .lines()
        .filter(|l| !l.starts_with('#') && !l.is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].to_string(), f[1].parse().unwrap(), structure(f[2]), structure(f[3]))
        })
        .collect();
    let t = std::time::Instant::now();
    let report = verify_growth_theorems(&corpus, 30, None);
    println!("scan {:?}", t.elapsed());
    assert!(report.indeterminate.is_empty(), "{:?}", report.indeterminate);
    let got: BTreeSet<_> =
        report.records.iter().map(|r| (r.curve.clone(), r.d.to_i64().unwrap(), r.t_q, r.t_k)).collect();
    let missing: Vec<_> = want.difference(&got).collect();
    let extra: Vec<_> = got.difference(&want).collect();
    assert!(missing.is_empty() && extra.is_empty(), "missing {missing:?}\nextra {extra:?}");
    assert_eq!(report.violation_count(), 0, "{:#?}", report.theorems);
}
