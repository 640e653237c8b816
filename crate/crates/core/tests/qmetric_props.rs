use indist_core::qmetric::generate::{line_space, random_sound_space};
use indist_core::qmetric::{
    degree, degree_relation_holds, from_pid_table, verify_qm_axioms, verify_qm_axioms_with,
    HeytingValue,
};
use indist_core::quasiset::enumerate::{atoms_universe, species_profiles};
use indist_core::quasiset::{indist, Term};
use indist_core::report::all_hold;
use indist_core::ANALYTIC_TOL;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn h(v: f64) -> HeytingValue {
    HeytingValue::new(v).unwrap()
}

fn unit() -> impl Strategy<Value = f64> {
    prop_oneof![Just(0.0), Just(0.5), Just(1.0), 0.0..=1.0f64]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1024))]

    #[test]
    fn heyting_laws(a in unit(), b in unit(), c in unit()) {
        let (a, b, c) = (h(a), h(b), h(c));
        prop_assert!(a.meet(b) <= a && a.meet(b) <= b);
        prop_assert!(a <= a.join(b) && b <= a.join(b));
        prop_assert_eq!(c <= a.implies(b), c.meet(a) <= b);
        prop_assert_eq!(a.implies(a), HeytingValue::TOP);
        prop_assert_eq!(a.meet(a), a);
        prop_assert_eq!(a.join(a), a);
        prop_assert_eq!(a.meet(a.join(b)), a);
        prop_assert_eq!(a.join(a.meet(b)), a);
        prop_assert_eq!(!a, a.implies(HeytingValue::BOTTOM));
        prop_assert!(a <= !!a);
        prop_assert_eq!(!!!a, !a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn degree_one_iff_indistinguishable(seed in any::<u64>()) {
        let (u, space) = random_sound_space(&mut ChaCha8Rng::seed_from_u64(seed), 8);
        prop_assert!(space.is_sound(), "{:?}", space.report());
        let carrier = space.base().carrier().to_vec();
        for &a in &carrier {
            for &b in &carrier {
                let r = degree(&space, a, b).unwrap();
                let same = indist(&u, a, b).unwrap();
                prop_assert_eq!((r - 1.0).abs() <= ANALYTIC_TOL, same);
                if (r - 1.0).abs() > ANALYTIC_TOL {
                    prop_assert!(!same);
                }
                prop_assert!(degree_relation_holds(&space, a, b, r).unwrap());
                prop_assert_eq!(degree_relation_holds(&space, a, b, 1.0).unwrap(), same);
            }
        }
    }

    #[test]
    fn bridge_round_trip(seed in any::<u64>(), n in 1usize..7) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        // sources grouped into classes on a line, P_ID = 1 - distance
        let classes = rng.gen_range(1..=n);
        let pos: Vec<f64> = (0..classes).map(|i| (i as f64 + rng.gen_range(0.0..0.9)) / classes as f64).collect();
        let class: Vec<usize> = (0..n).map(|i| if i < classes { i } else { rng.gen_range(0..classes) }).collect();
        let sources: Vec<String> = (0..n).map(|i| format!("s{i}")).collect();
        let pid: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| 1.0 - (pos[class[i]] - pos[class[j]]).abs()).collect())
            .collect();
        let bridge = from_pid_table(&sources, &pid, ANALYTIC_TOL).unwrap();
        prop_assert!(all_hold(bridge.reports()), "{:?}", bridge.reports());
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (bridge.term(&sources[i]).unwrap(), bridge.term(&sources[j]).unwrap());
                prop_assert!((degree(bridge.space(), a, b).unwrap() - pid[i][j]).abs() <= 1e-12);
                prop_assert_eq!(bridge.species_of(&sources[i]) == bridge.species_of(&sources[j]), class[i] == class[j]);
            }
        }
    }

    #[test]
    fn all_distinguishable_spaces_are_metric(seed in any::<u64>(), n in 1usize..8) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = atoms_universe(&vec![1; n], 0);
        let pos: Vec<f64> = (0..n).map(|i| (i as f64 + rng.gen_range(0.0..0.9)) / n as f64).collect();
        let space = line_space(&u, |i| pos[i]);
        let by_uid = verify_qm_axioms_with(space.base(), ANALYTIC_TOL, |a: Term, b: Term| a == b).unwrap();
        let by_indist = verify_qm_axioms(space.base(), &u, ANALYTIC_TOL).unwrap();
        prop_assert_eq!(&by_uid, &by_indist);
        prop_assert!(all_hold(&by_uid));
    }
}

#[test]
fn degree_relations_on_every_small_profile() {
    let mut spaces = 0;
    for profile in species_profiles(8, 8) {
        for macros in 0..=(8 - profile.iter().sum::<usize>()).min(2) {
            let u = atoms_universe(&profile, macros);
            if u.atoms().count() == 0 {
                continue;
            }
            let classes = profile.len() + macros;
            let space = line_space(&u, |i| i as f64 / classes as f64);
            assert!(space.is_sound(), "{profile:?} + {macros}");
            spaces += 1;
            let carrier = space.base().carrier().to_vec();
            for &a in &carrier {
                for &b in &carrier {
                    let r = degree(&space, a, b).unwrap();
                    assert_eq!(r == 1.0, indist(&u, a, b).unwrap());
                }
            }
        }
    }
    assert!(spaces > 200);
}
