use insuperable::catalog;
use insuperable::moran::{
    critical_sizes, fixation_probabilities, relative_fitness, transition_probabilities, weak_selection_scan,
    weak_selection_scan_with, SelectionIntensity, TwoByTwoPayoff,
};
use insuperable::rational::rat;
use insuperable::Rational;
use proptest::prelude::*;

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=8).prop_map(|(p, q)| rat(p, q))
}

fn positive_payoff() -> impl Strategy<Value = TwoByTwoPayoff> {
    (positive(), positive(), positive(), positive()).prop_map(|(a, b, c, d)| TwoByTwoPayoff::new(a, b, c, d))
}

/// Payoffs with `d > b > c > a > 0`, built from positive increments.
fn ordered_payoff() -> impl Strategy<Value = TwoByTwoPayoff> {
    (positive(), positive(), positive(), positive()).prop_map(|(a, s1, s2, s3)| {
        let c = &a + &s1;
        let b = &c + &s2;
        let d = &b + &s3;
        TwoByTwoPayoff::new(a, b, c, d)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn two_player_closed_form(p in positive_payoff()) {
        let f = fixation_probabilities(&p, 2).unwrap();
        prop_assert_eq!(&f.f[1], &(&p.b / &(&p.b + &p.c)));
    }

    #[test]
    fn monotone_with_fixed_endpoints(p in positive_payoff(), n in 2usize..=12) {
        let f = fixation_probabilities(&p, n).unwrap();
        prop_assert_eq!(&f.f[0], &Rational::ZERO);
        prop_assert_eq!(&f.f[n], &Rational::ONE);
        for i in 0..n {
            prop_assert!(f.f[i + 1] > f.f[i]);
        }
    }

    #[test]
    fn satisfies_birth_death_recurrence(p in positive_payoff(), n in 2usize..=10) {
        let f = fixation_probabilities(&p, n).unwrap();
        for i in 1..n {
            let (up, down) = transition_probabilities(&p, i, n);
            let stay = &(&Rational::ONE - &up) - &down;
            let rhs = &(&(&up * &f.f[i + 1]) + &(&stay * &f.f[i])) + &(&down * &f.f[i - 1]);
            prop_assert_eq!(&f.f[i], &rhs);
            // The ratio of transition rates is the inverse relative fitness.
            prop_assert_eq!(&down / &up, relative_fitness(&p, i, n).unwrap().recip());
        }
    }

    #[test]
    fn invariant_under_positive_scaling(p in positive_payoff(), n in 2usize..=9, l in positive()) {
        let q = p.scaled(&l);
        for k in 1..n {
            prop_assert_eq!(relative_fitness(&p, k, n).unwrap(), relative_fitness(&q, k, n).unwrap());
        }
        prop_assert_eq!(fixation_probabilities(&p, n).unwrap(), fixation_probabilities(&q, n).unwrap());
    }

    #[test]
    fn critical_size_theorem(p in ordered_payoff()) {
        let cs = critical_sizes(&p).unwrap();
        prop_assert!(cs.n_inf <= cs.n_sup);
        prop_assume!(cs.n_sup <= Rational::from(40));
        let upper = (cs.n_sup.to_f64().floor() as usize) + 4;
        for n in 2..=upper {
            let nr = Rational::from(n);
            let f = fixation_probabilities(&p, n).unwrap();
            for i in 1..n {
                let neutral = rat(i as i64, n as i64);
                if nr < cs.n_inf {
                    prop_assert!(f.f[i] > neutral, "N={} i={}", n, i);
                }
                if nr > cs.n_sup {
                    prop_assert!(f.f[i] < neutral, "N={} i={}", n, i);
                }
            }
        }
    }
}

fn hawk_dove_base() -> TwoByTwoPayoff {
    TwoByTwoPayoff::from_game(&catalog::hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap()).unwrap()
}

/// Sign pattern of `F_1(N) − 1/N` for N = 2..=30 is a single crossover.
fn assert_single_crossover(scan: &insuperable::moran::WeakSelectionScan, last_positive: usize) {
    assert_eq!(scan.n_c, Some(last_positive));
    for row in &scan.rows {
        let expected = if row.n <= last_positive { 1 } else { -1 };
        assert_eq!(row.delta_sign, Some(expected), "N = {}", row.n);
    }
}

#[test]
fn hawk_dove_crossover_with_intensity_one_over_n() {
    let scan = weak_selection_scan(&hawk_dove_base(), 30).unwrap();
    assert_single_crossover(&scan, 8);
    let r8 = &scan.rows[6];
    let delta = r8.f1.as_ref().unwrap() - &r8.neutral;
    assert!(delta > rat(1, 1000) && delta < rat(1, 100));
}

#[test]
fn hawk_dove_crossover_with_fixed_intensity() {
    let scan = weak_selection_scan_with(&hawk_dove_base(), 30, &SelectionIntensity::Fixed(rat(1, 30))).unwrap();
    assert_single_crossover(&scan, 13);
    let r13 = &scan.rows[11];
    assert_eq!(r13.n, 13);
    let delta = r13.f1.as_ref().unwrap() - &r13.neutral;
    assert!(delta.is_positive() && delta < rat(1, 100));
    // Only the single mutant beats neutral at this size.
    let f = fixation_probabilities(&hawk_dove_base().with_intensity(&rat(1, 30)), 13).unwrap();
    for i in 2..13 {
        assert!(f.f[i] < rat(i as i64, 13));
    }
}

#[test]
fn weak_selection_catalog_matches_payoff_transform() {
    let g = catalog::hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap();
    let base = TwoByTwoPayoff::from_game(&g).unwrap();
    for n in [2, 5, 13] {
        let via_catalog = TwoByTwoPayoff::from_game(&catalog::weak_selection(&g, n).unwrap()).unwrap();
        assert_eq!(via_catalog, base.weak_selection(n));
    }
}

#[test]
fn critical_sizes_cross_checked_by_fixation() {
    let p = TwoByTwoPayoff::from_ints(1, 3, 2, 4);
    let f2 = fixation_probabilities(&p, 2).unwrap();
    assert!(f2.f[1] > rat(1, 2));
    let f4 = fixation_probabilities(&p, 4).unwrap();
    for i in 1..4 {
        assert!(f4.f[i] < rat(i as i64, 4));
    }
}
