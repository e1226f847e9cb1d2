use proptest::prelude::*;

use liechief::chieffactors::{descends_to, is_m_crossing, l_connected, descent_check, m_related, swap_crossing};
use liechief::corpus::random_solvable;
use liechief::ideals::{enumerate_chief_series, ChiefSeries};
use liechief::jordanholder::{all_pairs, check_series_translation, cut_and_paste, sigma};
use liechief::{oracle, Analysis, LieAlgebra};

fn series(l: &LieAlgebra) -> Vec<ChiefSeries> {
    enumerate_chief_series(l, &l.zero_subspace(), &l.whole(), 60).unwrap().series
}

fn shapes() -> impl Strategy<Value = (usize, u8, u64)> {
    prop_oneof![
        (Just(3usize), Just(2u8), 0u64..1000),
        (Just(4usize), Just(2u8), 0u64..1000),
        (Just(3usize), Just(3u8), 0u64..1000),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 40, ..ProptestConfig::default() })]

    #[test]
    fn sigma_holds_on_every_pair((dim, p, seed) in shapes()) {
        let l = random_solvable(dim, p, seed).unwrap();
        let an = Analysis::new(l.clone());
        let all = series(&l);
        for (_, _, r) in all_pairs(&an, &all) {
            let r = r.unwrap();
            prop_assert_eq!(r.uniqueness.unwrap().m_related_permutations.len(), 1);
        }
    }

    #[test]
    fn identical_series_give_the_identity((dim, p, seed) in shapes()) {
        let l = random_solvable(dim, p, seed).unwrap();
        let an = Analysis::new(l.clone());
        for s in series(&l).iter().take(5) {
            prop_assert!(sigma(&an, s, s).unwrap().sigma.is_identity());
        }
    }

    #[test]
    fn factor_pair_relations((dim, p, seed) in shapes()) {
        let l = random_solvable(dim, p, seed).unwrap();
        let an = Analysis::new(l.clone());
        let factors = an.all_factors().unwrap();
        for f in &factors {
            prop_assert_eq!(f.frattini, !f.complemented);
            for g in &factors {
                if descends_to(f, g) {
                    let report = descent_check(&an, f, g).unwrap();
                    prop_assert!(report.passed(), "{:?}", report.failures());
                }
                if let Some(x) = is_m_crossing(f, g).unwrap() {
                    swap_crossing(&an, &x).unwrap();
                }
                if m_related(&an, f, g).unwrap().is_some() {
                    prop_assert_eq!(f.frattini, g.frattini);
                    prop_assert!(l_connected(&an, f, g).unwrap().is_some());
                }
            }
        }
    }

    #[test]
    fn series_translation((dim, p, seed) in shapes()) {
        let l = random_solvable(dim, p, seed).unwrap();
        let an = Analysis::new(l.clone());
        let all = series(&l);
        for f in an.all_factors().unwrap() {
            for y in &all {
                check_series_translation(&an, &f, y).unwrap();
            }
        }
    }

    #[test]
    fn cut_and_paste_over_supplements((dim, p, seed) in shapes()) {
        let l = random_solvable(dim, p, seed).unwrap();
        let an = Analysis::new(l.clone());
        for b in an.ideals().to_vec() {
            for m in an.maximal().unwrap() {
                if b.sum(&m.subalgebra).is_full() {
                    cut_and_paste(&an, &b, &m.subalgebra, None).unwrap();
                }
            }
        }
    }

    #[test]
    fn frattini_and_minimal_ideals_match_oracle((dim, p, seed) in shapes()) {
        let l = random_solvable(dim, p, seed).unwrap();
        let an = Analysis::new(l.clone());
        prop_assert_eq!(an.frattini().unwrap(), oracle::frattini(&l).unwrap());
        let ids = oracle::ideals(&l).unwrap();
        prop_assert_eq!(an.ideals(), ids.as_slice());
        for b in &ids {
            let mut fast = (*an.minimal_ideals_over(b).unwrap()).clone();
            fast.sort();
            prop_assert_eq!(fast, oracle::minimal_ideals_over(&l, b).unwrap());
        }
    }
}

#[test]
fn random_algebras_produce_crossings() {
    let mut found = 0;
    for seed in 0..50 {
        let l = random_solvable(4, 2, seed).unwrap();
        let an = Analysis::new(l);
        let factors = an.all_factors().unwrap();
        for f in &factors {
            for g in &factors {
                if let Some(x) = is_m_crossing(f, g).unwrap() {
                    swap_crossing(&an, &x).unwrap();
                    found += 1;
                }
            }
        }
    }
    assert!(found > 0);
}
