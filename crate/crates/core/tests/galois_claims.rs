use std::collections::BTreeSet;

use qtorsion::galois::*;

fn mat(ell: u8, rows: [[i64; 2]; 2]) -> MatGL2 {
    MatGL2::new(ell, rows).unwrap()
}

#[test]
fn tabulated_lists_match_generated_groups() {
    for label in APPENDIX_LABELS {
        let ell = if label.starts_with('5') { 5 } else { 7 };
        let listed: BTreeSet<MatGL2> = appendix_elements(label).unwrap().into_iter().collect();
        let generated = named_subgroup(ell, label).unwrap();
        let generated: BTreeSet<MatGL2> = generated.elements.into_iter().collect();
        assert_eq!(listed, generated, "{label}");
    }
}

#[test]
fn f3_lattice_inclusions_hold_up_to_conjugacy() {
    for (small, big, dotted) in F3_LATTICE_EDGES {
        let a = named_subgroup(3, small).unwrap();
        let b = named_subgroup(3, big).unwrap();
        assert!(conjugate_into(&a, &b).is_some(), "{small} -> {big}");
        assert_eq!(sl2_membership(&b), dotted, "{small} -> {big}");
    }
}

#[test]
fn f3_fixed_point_table() {
    let with_fixed: Vec<&str> =
        catalog(3).iter().copied().filter(|n| !fixed_vectors(&named_subgroup(3, n).unwrap()).is_empty()).collect();
    assert_eq!(with_fixed, vec!["H31", "C3", "H11", "id"]);
}

#[test]
fn h3_and_index2_are_fixed_point_free() {
    for ell in [5, 7] {
        let h3 = named_subgroup(ell, "H3").unwrap();
        assert_eq!(h3.order(), ell as usize * (ell as usize - 1));
        assert!(fixed_vectors(&h3).is_empty());
        let subs = index2_subgroups(&h3);
        assert!(!subs.is_empty());
        assert!(subs.iter().all(|h| fixed_vectors(h).is_empty()));
    }
}

#[test]
fn inertia_groups() {
    for ell in [5u8, 7] {
        let l = ell as usize;
        let h1 = named_subgroup(ell, "H1").unwrap();
        let h2 = named_subgroup(ell, "H2").unwrap();
        assert_eq!(h1.order(), l - 1);
        assert_eq!(cyclic_subgroups(&h1, l - 1).len(), 1);
        assert_eq!(h2.order(), l);
        assert!(h1.is_subset_of(&named_subgroup(ell, "H3").unwrap()));
        assert_eq!(fixed_vectors(&h1).len(), l - 1);
    }
}

#[test]
fn nonsplit_cartan_is_free_off_identity() {
    for ell in [5u8, 7] {
        let c = named_subgroup(ell, "nonsplit_cartan").unwrap();
        assert!(c.is_closed());
        assert_eq!(c.order(), (ell as usize).pow(2) - 1);
        for m in c.elements.iter().filter(|m| !m.is_identity()) {
            assert!(GF2Vector::nonzero(ell).all(|v| !m.fixes(&v)), "{m}");
        }
        assert!(index2_subgroups(&c).iter().all(|h| fixed_vectors(h).is_empty()));
    }
}

#[test]
fn borel_5b41_order4_subgroups() {
    let g = named_subgroup(5, "5B.4.1").unwrap();
    let diag = generate(5, &[mat(5, [[1, 0], [0, 2]])]).unwrap();
    let fixing: Vec<_> = cyclic_subgroups(&g, 4).into_iter().filter(|c| !fixed_vectors(c).is_empty()).collect();
    assert_eq!(fixing.len(), 5);
    for c in &fixing {
        assert!(conjugate_in(&diag, c, &g).is_some());
    }
    let displays = [
        ([[1, 1], [0, 1]], [[1, 0], [0, 2]], [[1, 1], [0, 2]]),
        ([[1, 1], [0, 2]], [[1, 0], [0, 3]], [[1, 1], [0, 3]]),
        ([[1, 2], [0, 1]], [[1, 0], [0, 2]], [[1, 2], [0, 2]]),
        ([[1, 3], [0, 2]], [[1, 0], [0, 3]], [[1, 3], [0, 3]]),
    ];
    for (gg, m, r) in displays {
        assert_eq!(mat(5, m).conjugate_by(&mat(5, gg)), mat(5, r));
    }
}

fn stabilizer_is_upper_left_one(g: &SubgroupGL2, order: usize) {
    let ul1: Vec<MatGL2> = g.elements.iter().copied().filter(|m| m.entries[0] == 1).collect();
    assert_eq!(ul1.len(), order);
    let mut hits = 0;
    for v in GF2Vector::nonzero(g.ell) {
        let s = vector_stabilizer(g, &v);
        if s.order() == order {
            assert_eq!(s.elements, ul1, "{v}");
            hits += 1;
        }
    }
    assert!(hits > 0);
}

#[test]
fn borel_stabilizers() {
    stabilizer_is_upper_left_one(&named_subgroup(5, "5B.4.1").unwrap(), 20);
    stabilizer_is_upper_left_one(&named_subgroup(7, "7B.6.1").unwrap(), 42);
}

#[test]
fn borel_7b61_order6_subgroups() {
    let g = named_subgroup(7, "7B.6.1").unwrap();
    let fixing: Vec<_> = cyclic_subgroups(&g, 6).into_iter().filter(|c| !fixed_vectors(c).is_empty()).collect();
    assert_eq!(fixing.len(), 7);
    for a in &fixing {
        for b in &fixing {
            assert!(conjugate_in(a, b, &g).is_some());
        }
    }
}

#[test]
fn borel_without_split_torus() {
    let g = named_subgroup(7, "7B.1.6").unwrap();
    assert!(cyclic_subgroups(&g, 6).iter().all(|c| fixed_vectors(c).is_empty()));
    let g = named_subgroup(5, "5Cs.1.3").unwrap();
    assert!(fixed_vectors(&g).is_empty());
}
