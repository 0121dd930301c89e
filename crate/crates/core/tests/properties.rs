mod common;

use proptest::prelude::*;

use spectra_core::exchange::{rauzy_step, singularity_data};
use spectra_core::polygons::{
    birkhoff_decompose, birkhoff_reconstruct, dominates, polygon_above, polygon_of, valuation_polygon, TypeVector,
};
use spectra_core::{DoublyStochastic, Iet};

fn decreasing_ints(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0i32..8, n).prop_map(|mut v| {
        v.sort_unstable_by(|a, b| b.cmp(a));
        v.into_iter().map(f64::from).collect()
    })
}

/// Two decreasing integer vectors of the same length and total.
fn balanced_pair() -> impl Strategy<Value = (Vec<f64>, Vec<f64>)> {
    (1usize..7)
        .prop_flat_map(|n| (decreasing_ints(n), decreasing_ints(n)))
        .prop_map(|(a, mut b)| {
            let diff = a.iter().sum::<f64>() - b.iter().sum::<f64>();
            b[0] += diff;
            b.sort_by(|x, y| y.total_cmp(x));
            (a, b)
        })
}

fn holds(a: &[f64], b: &[f64]) -> bool {
    dominates(a, b, 0.0).unwrap().holds()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn polygon_order_is_dominance((a, b) in balanced_pair()) {
        let pa = polygon_of(&TypeVector::new(a.clone()).unwrap());
        let pb = polygon_of(&TypeVector::new(b.clone()).unwrap());
        prop_assert_eq!(polygon_above(&pa, &pb, 0.0).unwrap(), holds(&a, &b));
        prop_assert!(pa.is_concave());
    }

    #[test]
    fn dominance_is_a_partial_order((a, b) in balanced_pair(), shift in 0usize..3) {
        prop_assert!(holds(&a, &a));
        if holds(&a, &b) && holds(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        // The flattest vector with the same total sits below both.
        let n = a.len();
        let flat = vec![a.iter().sum::<f64>() / n as f64; n];
        prop_assert!(dominates(&a, &flat, 1e-12).unwrap().holds());
        if holds(&a, &b) {
            prop_assert!(dominates(&b, &flat, 1e-12).unwrap().holds());
            // Transitivity through a third vector built from b by a T-transform.
            if n >= 2 && b[0] > b[n - 1] {
                let mut c = b.clone();
                let d = (c[0] - c[n - 1]) / (2.0 + shift as f64);
                c[0] -= d;
                c[n - 1] += d;
                c.sort_by(|x, y| y.total_cmp(x));
                prop_assert!(dominates(&a, &c, 1e-12).unwrap().holds());
            }
        }
    }

    #[test]
    fn newton_polygon_is_concave(vals in prop::collection::vec(prop::option::of(0u32..9), 1..10)) {
        let mut pts: Vec<(usize, Option<u32>)> = vals.into_iter().enumerate().map(|(j, v)| (j + 1, v)).collect();
        pts.insert(0, (0, Some(0)));
        let poly = valuation_polygon(&pts).unwrap();
        prop_assert!(poly.is_concave());
        prop_assert_eq!(poly.heights()[0], 0.into());
    }

    #[test]
    fn birkhoff_mixtures_of_five_permutations(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let m = common::random_doubly_stochastic(&mut rng, 6, 5);
        let p = DoublyStochastic::new(m).unwrap();
        let terms = birkhoff_decompose(&p).unwrap();
        prop_assert!(terms.len() <= 26);
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        prop_assert!((total - 1.0).abs() < 1e-9);
        let rebuilt = birkhoff_reconstruct(&terms, 6);
        for (i, row) in rebuilt.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                prop_assert!((x - p.get(i, j)).abs() < 1e-9);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(20))]

    #[test]
    fn singularity_pattern_is_invariant_along_the_class(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        for (name, perm) in common::representatives(4) {
            let expected = singularity_data(&perm).sorted_orders();
            let n = perm.len();
            let mut iet = Iet::new(perm, common::random_lengths(&mut rng, n)).unwrap();
            for _ in 0..200 {
                let Ok(r) = rauzy_step(&iet) else {
                    iet = Iet::new(iet.permutation().clone(), common::random_lengths(&mut rng, n)).unwrap();
                    continue;
                };
                prop_assert_eq!(singularity_data(r.iet.permutation()).sorted_orders(), expected.clone(), "{}", name);
                iet = r.iet.normalized().0;
            }
        }
    }
}

#[test]
fn seeded_suites_smoke() {
    for s in [
        common::majorization_suite(200, 11),
        common::schur_suite(100, 12),
        common::symmetric_form_suite(500, 13),
        common::cocycle_suite(200, 5, 14),
        common::acceleration_suite(20, 5, 15),
    ] {
        assert!(s.passed(), "{s:?}");
    }
}
