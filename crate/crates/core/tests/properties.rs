use std::f64::consts::SQRT_2;

use ndwu_core::boxes::{extremal_boxes, mix, noisy_family, uniform_box, FamilyPoint};
use ndwu_core::criteria::{ndwu_family_boundary, npa_tlm};
use ndwu_core::ndwu::{c_interval, criterion};
use ndwu_core::{Behavior, Party};
use proptest::prelude::*;

fn weights(n: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..1.0_f64, n).prop_filter_map("zero weight", |w| {
        let total: f64 = w.iter().sum();
        (total > 1e-6).then(|| w.iter().map(|x| x / total).collect())
    })
}

fn ns_behavior() -> impl Strategy<Value = Behavior> {
    weights(24).prop_map(|w| mix(&extremal_boxes(), &w).unwrap())
}

fn local_behavior() -> impl Strategy<Value = Behavior> {
    weights(16).prop_map(|w| mix(&extremal_boxes()[8..], &w).unwrap())
}

fn family_point() -> impl Strategy<Value = FamilyPoint> {
    (0.0..1.0_f64, 0.0..1.0_f64, 0.0..1.0_f64)
        .prop_filter_map("outside simplex", |(a, b, t)| FamilyPoint::new(a, b, t).ok())
}

proptest! {
    #[test]
    fn table_reconstructs_from_expectations(b in ns_behavior()) {
        let alice = [0, 1].map(|s| b.marginal_expectation(Party::Alice, s));
        let bob = [0, 1].map(|s| b.marginal_expectation(Party::Bob, s));
        let mut corr = [[0.0; 2]; 2];
        for (nu, row) in corr.iter_mut().enumerate() {
            for (mu, c) in row.iter_mut().enumerate() {
                *c = b.correlator(nu, mu);
            }
        }
        let r = Behavior::from_expectations(alice, bob, corr, b.tol()).unwrap();
        for (x, y) in b.to_raw().iter().zip(r.to_raw()) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn chsh_bounds(b in ns_behavior(), l in local_behavior()) {
        prop_assert!(b.chsh().abs() <= 4.0 + 1e-12);
        prop_assert!(l.max_chsh_over_relabelings() <= 2.0 + 1e-12);
    }

    #[test]
    fn relabeling_permutes_chsh_variants(b in ns_behavior()) {
        // flipping outcomes of one setting only permutes the relabeled functionals
        let mut t = *b.table();
        for block in t[0].iter_mut() {
            block.swap(0, 1);
        }
        let flipped = Behavior::from_table(t, b.tol()).unwrap();
        prop_assert!((flipped.max_chsh_over_relabelings() - b.max_chsh_over_relabelings()).abs() < 1e-12);
    }

    #[test]
    fn conditional_expectations_average_to_marginals(b in ns_behavior()) {
        // dropped branches carry weight at most tol each
        for side in [Party::Alice, Party::Bob] {
            for measured in 0..2 {
                for cond_setting in 0..2 {
                    let avg: f64 = b
                        .conditional_states(side)
                        .iter()
                        .filter(|s| s.setting as usize == cond_setting)
                        .map(|s| s.weight * b.local_expectations(s).unwrap()[measured])
                        .sum();
                    prop_assert!((avg - b.marginal_expectation(side, measured)).abs() <= 2.0 * b.tol());
                }
            }
        }
    }

    #[test]
    fn c_interval_width(e0 in -1.0..1.0_f64, e1 in -1.0..1.0_f64) {
        let iv = c_interval(e0, e1);
        let expected = 2.0 * (1.0 - e0 * e0).sqrt() * (1.0 - e1 * e1).sqrt();
        prop_assert!(iv.lo <= iv.hi);
        prop_assert!(iv.lo >= -1.0 && iv.hi <= 1.0);
        if iv.lo > -1.0 && iv.hi < 1.0 {
            prop_assert!((iv.width() - expected).abs() < 1e-12);
        }
        prop_assert!(iv.contains(e0 * e1, 1e-12));
    }

    #[test]
    fn noisy_family_is_a_mixture(p in family_point()) {
        let direct = noisy_family(p).unwrap();
        let gens = [
            ndwu_core::boxes::pr_box(),
            ndwu_core::boxes::nonlocal_box(0, 1, 0),
            ndwu_core::boxes::local_box(0, 0, 0, 0),
            uniform_box(),
        ];
        let m = mix(&gens, &[p.alpha, p.beta, p.tau, p.noise().max(0.0)]).unwrap();
        for (x, y) in direct.to_raw().iter().zip(m.to_raw()) {
            prop_assert!((x - y).abs() <= 1e-15);
        }
    }

    #[test]
    fn family_chsh_values(p in family_point()) {
        let b = noisy_family(p).unwrap();
        prop_assert!((b.chsh() - (4.0 * p.alpha + 2.0 * p.tau)).abs() < 1e-12);
        let best = b.max_chsh_over_relabelings();
        prop_assert!((best - (4.0 * p.alpha.max(p.beta) + 2.0 * p.tau)).abs() < 1e-12);
    }

    #[test]
    fn family_verdicts_are_symmetric(p in family_point()) {
        let q = FamilyPoint::new(p.beta, p.alpha, p.tau).unwrap();
        prop_assert_eq!(ndwu_family_boundary(p), ndwu_family_boundary(q));
        let (bp, bq) = (noisy_family(p).unwrap(), noisy_family(q).unwrap());
        prop_assert_eq!(criterion(&bp).overall, criterion(&bq).overall);
        prop_assert_eq!(npa_tlm(&bp), npa_tlm(&bq));
    }

    #[test]
    fn mixing_with_uniform_preserves_acceptance(b in ns_behavior(), lambda in 0.0..1.0_f64) {
        if criterion(&b).overall {
            let m = mix(&[b, uniform_box()], &[1.0 - lambda, lambda]).unwrap();
            prop_assert!(criterion(&m).overall);
        }
    }

    #[test]
    fn accepted_behaviors_obey_tsirelson(b in ns_behavior()) {
        if criterion(&b).overall {
            prop_assert!(b.max_chsh_over_relabelings() <= 2.0 * SQRT_2 + 1e-6);
        }
    }
}
