use std::cmp::Ordering;

use exptree_core::analysis::tree_equivalent;
use exptree_core::export::{from_json, to_json};
use exptree_core::triods::middle_point_of;
use exptree_core::{build_tree, EventuallyPeriodic, ExtAddress, Itinerary, Partition, SectorResult};
use proptest::prelude::*;

fn small_seq() -> impl Strategy<Value = (Vec<i64>, Vec<i64>)> {
    (
        prop::collection::vec(-3i64..=3, 0..4),
        prop::collection::vec(-3i64..=3, 1..5),
    )
}

fn address() -> impl Strategy<Value = ExtAddress> {
    small_seq().prop_map(|(pre, per)| ExtAddress::new(pre, per).unwrap())
}

fn base() -> impl Strategy<Value = ExtAddress> {
    (prop::collection::vec(-3i64..=3, 0..3), prop::collection::vec(-3i64..=3, 1..5))
        .prop_map(|(mut pre, per)| {
            pre.insert(0, 0);
            ExtAddress::new(pre, per).unwrap()
        })
        .prop_filter("strictly preperiodic", |s| !s.is_periodic())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn canonical_form_is_idempotent((pre, per) in small_seq()) {
        let a = EventuallyPeriodic::new(pre.clone(), per.clone()).unwrap();
        let b = EventuallyPeriodic::new(a.preperiod().to_vec(), a.period().to_vec()).unwrap();
        prop_assert_eq!(&a, &b);
        // same infinite sequence
        let raw = |i: usize| if i <= pre.len() { pre[i - 1] } else { per[(i - pre.len() - 1) % per.len()] };
        for i in 1..=40 {
            prop_assert_eq!(a.entry(i), raw(i));
        }
    }

    #[test]
    fn lex_order_matches_long_prefixes(a in address(), b in address()) {
        let expected = a.prefix(64).cmp(&b.prefix(64));
        prop_assert_eq!(a.compare_lex(&b), expected);
        prop_assert_eq!(a.compare_lex(&b), b.compare_lex(&a).reverse());
    }

    #[test]
    fn shift_undoes_prepend(a in address(), k in -5i64..=5) {
        let b = a.prepend(k).unwrap();
        prop_assert_eq!(b.first(), k);
        prop_assert_eq!(b.shift(), a);
    }

    #[test]
    fn text_round_trip(a in address()) {
        let back: ExtAddress = a.to_string().parse().unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn itinerary_is_shift_equivariant(s in base(), t in address()) {
        let p = Partition::new(s).unwrap();
        if let Itinerary::Plain(_) = p.itinerary(&t) {
            let nu = p.kneading();
            prop_assert_eq!(p.itinerary(&t.shift()), p.itinerary(&t).shift(nu));
        }
    }

    #[test]
    fn boundary_addresses_hit_the_boundary(s in base(), m in -6i64..=6) {
        let p = Partition::new(s.clone()).unwrap();
        prop_assert_eq!(p.sector_of(&s.prepend(m).unwrap()), SectorResult::Boundary(m));
    }

    #[test]
    fn inverse_branches_are_right_inverses(s in base(), u in address(), k in -2i64..=2) {
        let p = Partition::new(s).unwrap();
        let x = p.inverse_branch(k, &u).unwrap();
        prop_assert_eq!(x.shift(), u);
        prop_assert!(p.in_half_open_sector(k, &x));
    }

    #[test]
    fn middle_point_is_symmetric(s in base(), a in address(), b in address(), c in address()) {
        let p = Partition::new(s).unwrap();
        let nu = p.kneading();
        let [x, y, z] = [a, b, c].map(|t| p.itinerary(&t));
        let m = middle_point_of(nu, &x, &y, &z);
        prop_assert_eq!(&m, &middle_point_of(nu, &y, &z, &x));
        prop_assert_eq!(&m, &middle_point_of(nu, &z, &y, &x));
    }

    #[test]
    fn trees_verify_and_round_trip(s in base()) {
        let p = Partition::new(s).unwrap();
        let tree = build_tree(&p).unwrap();
        prop_assert!(tree.verify().is_ok());
        prop_assert_eq!(tree.edges().len() + 1, tree.len());
        let back = from_json(&to_json(&tree)).unwrap();
        prop_assert!(tree_equivalent(&tree, &back));
    }

    #[test]
    fn cyclic_order_is_rotation_invariant(a in address(), b in address(), c in address()) {
        use exptree_core::sequences::cyclic_between;
        if a != b && b != c && a != c {
            let r = cyclic_between(&a, &b, &c).unwrap();
            prop_assert_eq!(r, cyclic_between(&b, &c, &a).unwrap());
            prop_assert_eq!(!r, cyclic_between(&a, &c, &b).unwrap());
            let sorted_ok = matches!((a.cmp(&b), b.cmp(&c)), (Ordering::Less, Ordering::Less));
            if sorted_ok {
                prop_assert!(r);
            }
        }
    }
}
