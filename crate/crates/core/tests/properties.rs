use std::collections::BTreeSet;

use hilb2_core::catalog::{catalog, lookup};
use hilb2_core::fpgroup::{
    abelianization, parse_presentation, subgroups_of_abelian, AbelianInvariants,
};
use hilb2_core::groups;
use hilb2_core::hilbcover::{construction_for, Quotient};
use hilb2_core::hodge::{symmetric_square_hodge, HodgeVector};
use hilb2_core::monodromy::{
    classify_hilb_covers, cover_from_subgroup, quasietale_correspondence, CoverDescriptor,
    SurfaceDescriptor,
};
use hilb2_core::permgroup::DEFAULT_GROUP_CAP;
use hilb2_core::{Group, Permutation};
use proptest::prelude::*;

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<usize>>())
        .prop_shuffle()
        .prop_map(|v| Permutation::from_images(v).unwrap())
}

fn small_abelian() -> impl Strategy<Value = Vec<u64>> {
    prop::sample::select(vec![
        vec![],
        vec![2],
        vec![3],
        vec![4],
        vec![2, 2],
        vec![5],
        vec![6],
        vec![2, 4],
        vec![3, 3],
    ])
}

proptest! {
    #[test]
    fn composition_is_associative(a in permutation(7), b in permutation(7), c in permutation(7)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert!(a.compose(&a.inverse()).is_identity());
        prop_assert_eq!(a.pow(a.order() as i64), Permutation::identity(7));
    }

    #[test]
    fn generated_group_order_divides_symmetric(a in permutation(5), b in permutation(5)) {
        let g = Group::generate(5, vec![a, b], DEFAULT_GROUP_CAP).unwrap();
        prop_assert_eq!(120 % g.order(), 0);
        for h in [g.stabilizer(0), g.derived_subgroup(DEFAULT_GROUP_CAP).unwrap()] {
            prop_assert_eq!(g.order() % h.order(), 0);
        }
    }

    #[test]
    fn square_fibers_for_abelian_groups(inv in small_abelian(), b in 1usize..=3) {
        let g = groups::abelian(&inv);
        let d = g.order();
        let c = construction_for(&g, b, DEFAULT_GROUP_CAP).unwrap();
        let total: usize = (0..c.sym.len()).map(|p| c.preimage(p).unwrap().len()).sum();
        prop_assert_eq!(total, c.square_count());
        let sizes = c.quotient_fibers(Quotient::Antidiagonal).fiber_sizes();
        prop_assert!(sizes.iter().all(|&s| s == d));
        prop_assert!(c.k_is_normal());
        prop_assert_eq!(c.j.order() / c.k.order(), d);
    }

    #[test]
    fn square_hodge_is_palindromic(a in 0u64..6, b in 0u64..6) {
        let out = symmetric_square_hodge(&HodgeVector::new(vec![a, b, a])).unwrap().dims;
        for p in 0..=4 {
            prop_assert_eq!(out[p], out[4 - p]);
        }
    }

    #[test]
    fn abelian_subgroup_quotients(inv in small_abelian()) {
        let a = AbelianInvariants::finite(inv.clone());
        let subs = subgroups_of_abelian(&a).unwrap();
        let brute = groups::abelian(&inv).subgroups().unwrap();
        prop_assert_eq!(subs.len(), brute.len());
        for s in &subs {
            prop_assert_eq!(s.order * s.quotient.torsion_order(), a.torsion_order());
        }
    }
}

#[test]
fn deck_group_matches_normalizer_quotient() {
    for g in [
        groups::symmetric(4),
        groups::sl2_3(),
        groups::dihedral(6),
        groups::quaternion(),
    ] {
        for h in g.subgroups().unwrap() {
            let c = cover_from_subgroup(&g, &h).unwrap();
            let n = g.normalizer(&h).unwrap();
            assert_eq!(c.deck_group.order(), n.order() / h.order());
            assert_eq!(c.degree, g.order() / h.order());
        }
    }
}

#[test]
fn catalog_abelianizations() {
    let expect = |key: &str| abelianization(&lookup(key).unwrap().surface.pi1_smooth).to_string();
    assert_eq!(expect("simply-connected"), "1");
    assert_eq!(expect("quaternion"), "Z/2 x Z/2");
    assert_eq!(expect("s3"), "Z/2");
    assert_eq!(expect("a4"), "Z/3");
    assert_eq!(expect("cyclic-6"), "Z/6");
}

#[test]
fn restriction_never_changes_etaleness() {
    for entry in catalog() {
        let rows = classify_hilb_covers(&entry.surface, DEFAULT_GROUP_CAP).unwrap();
        for r in rows {
            let c = &r.surface_cover;
            let labels: Vec<String> = c.ramification_labels.iter().cloned().collect();
            // removing unmarked labels keeps the flag
            let unrelated = BTreeSet::from(["elsewhere".to_string()]);
            assert_eq!(c.restrict(&unrelated).is_etale(), c.is_etale());
            for (i, l) in labels.iter().enumerate() {
                let removed = BTreeSet::from([l.clone()]);
                let rest = c.restrict(&removed);
                assert_eq!(rest.is_etale(), labels.len() == 1, "after removing {i}");
            }
            assert!(r.hilb_cover.restrict(&unrelated).is_etale());
        }
    }
}

#[test]
fn descriptors_round_trip_through_json() {
    let s = lookup("a4").unwrap().surface;
    let text = serde_json::to_string(&s).unwrap();
    assert_eq!(serde_json::from_str::<SurfaceDescriptor>(&text).unwrap(), s);
    let rows = classify_hilb_covers(&s, DEFAULT_GROUP_CAP).unwrap();
    for r in &rows {
        for c in [&r.surface_cover, &r.hilb_cover] {
            let text = serde_json::to_string(c).unwrap();
            assert_eq!(&serde_json::from_str::<CoverDescriptor>(&text).unwrap(), c);
        }
    }
    assert_eq!(
        rows[1].surface_cover.ramification_labels,
        BTreeSet::from(["p1".to_string()])
    );
}

#[test]
fn quasietale_extension_uses_local_loops() {
    let mut s = lookup("enriques-type").unwrap().surface;
    let rows = classify_hilb_covers(&s, DEFAULT_GROUP_CAP).unwrap();
    let double = rows[1].surface_cover.clone();
    assert_eq!(double.ramification_labels.len(), 1);
    // a local loop that is a relator acts trivially: the point is unbranched
    s.singular_points[0].local_loops = Some(vec!["a^2".into()]);
    let mut smooth = double.clone();
    smooth.ramification_labels.clear();
    assert!(quasietale_correspondence(&s, &smooth).unwrap().is_etale());
    s.singular_points[0].local_loops = None;
    assert!(!quasietale_correspondence(&s, &smooth).unwrap().is_etale());
}

#[test]
fn large_presentation_enumerates() {
    let p = parse_presentation("< a b | a^2, b^3, (a b)^5 >").unwrap();
    assert_eq!(abelianization(&p).to_string(), "1");
    let s = SurfaceDescriptor {
        name: "icosahedral".into(),
        pi1_smooth: p,
        singular_points: vec![],
        hodge: HodgeVector::new(vec![1, 0, 1]),
    };
    assert_eq!(
        classify_hilb_covers(&s, DEFAULT_GROUP_CAP).unwrap().len(),
        1
    );
}
