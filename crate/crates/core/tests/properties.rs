use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;
use tourhom_core::format::{parse_digraph, write_digraph};
use tourhom_core::gadget::{build_f_dagger, build_f_i};
use tourhom_core::hom::count_hom_pinned;
use tourhom_core::region::{elementary_from_power, in_region, power_from_elementary, NonnegVector};
use tourhom_core::spectral::xy_from_spectrum;
use tourhom_core::*;

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * n).prop_map(move |bits| {
            let arcs = (0..n * n).filter(|&i| bits[i] && i / n != i % n).map(|i| (i / n, i % n));
            Digraph::from_arcs(n, arcs).unwrap()
        })
    })
}

fn tournament(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| random_tournament(n, seed).into_digraph())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn search_agrees_with_brute_force(f in digraph(4), t in digraph(5)) {
        prop_assert_eq!(count_hom(&f, &t).0, count_hom_bruteforce(&f, &t, 1 << 20).unwrap().0);
    }

    #[test]
    fn density_is_multiplicative(a in digraph(3), b in digraph(3), t in tournament(6)) {
        let u = density(&a.disjoint_union(&b), &t).unwrap().0;
        prop_assert_eq!(u, density(&a, &t).unwrap().0 * density(&b, &t).unwrap().0);
    }

    #[test]
    fn rooted_counts_sum_to_total(f in digraph(4), t in digraph(4)) {
        prop_assume!(f.n() >= 2);
        let rooted = RootedDigraph::new(f.clone(), 0, 1).unwrap();
        let mut total = BigUint::zero();
        for x in 0..t.n() {
            for y in 0..t.n() {
                total += count_hom_rooted(&rooted, &t, x, y).unwrap().0;
            }
        }
        prop_assert_eq!(total, count_hom(&f, &t).0);
    }

    #[test]
    fn pins_restrict_brute_force(f in digraph(4), t in digraph(4), x in 0usize..4) {
        let x = x % t.n();
        let pinned = count_hom_pinned(&f, &t, &[(0, x)], None).unwrap().0;
        prop_assert_eq!(pinned, tourhom_core::hom::count_hom_pinned_bruteforce(&f, &t, &[(0, x)], 1 << 20).unwrap().0);
    }

    #[test]
    fn f_dagger_is_symmetric(seed in any::<u64>(), n in 3usize..=7, k in 1usize..=2) {
        let f0 = random_tournament(3, seed ^ 0x5eed);
        let f = build_f_i(&f0, k).unwrap();
        let fd = build_f_dagger(&f).rooted;
        let t = random_tournament(n, seed).into_digraph();
        for x in 0..n {
            for y in x..n {
                let a = count_hom_rooted(&fd, &t, x, y).unwrap().0;
                prop_assert_eq!(&a, &count_hom_rooted(&fd, &t, y, x).unwrap().0);
                let prod = count_hom_rooted(&f, &t, x, y).unwrap().0 * count_hom_rooted(&f, &t, y, x).unwrap().0;
                prop_assert_eq!(a, prod);
            }
        }
    }

    #[test]
    fn newton_round_trip(v in proptest::collection::vec(0.0f64..1.0, 1..8)) {
        let x = NonnegVector::new(v).unwrap();
        let (e1, e2, e3) = x.elementary();
        let (p1, p2, p3) = power_from_elementary(e1, e2, e3);
        prop_assert!((p1 - x.power_sum(1)).abs() < 1e-12);
        prop_assert!((p2 - x.power_sum(2)).abs() < 1e-12);
        prop_assert!((p3 - x.power_sum(3)).abs() < 1e-12);
        let (f1, f2, f3) = elementary_from_power(p1, p2, p3);
        prop_assert!((f1 - e1).abs() < 1e-12 && (f2 - e2).abs() < 1e-12 && (f3 - e3).abs() < 1e-12);
    }

    #[test]
    fn spectral_points_lie_in_region(ev in proptest::collection::vec(-1.0f64..1.0, 1..12)) {
        if let Some((x, y)) = xy_from_spectrum(&ev) {
            prop_assert!(in_region(x, y, 1e-9).unwrap(), "({}, {}) outside", x, y);
        }
    }

    #[test]
    fn digraph_text_round_trip(g in digraph(6), roots in any::<bool>()) {
        let r = (roots && g.n() >= 2).then_some((0, g.n() - 1));
        let parsed = parse_digraph(&write_digraph(&g, r)).unwrap();
        prop_assert_eq!(parsed.graph, g);
        prop_assert_eq!(parsed.roots, r);
    }
}
