use insuperable::catalog;
use insuperable::insuperability::{
    brute_force_classify, check_insuperable, classify, report_is_sound, ValueSign, Verdict,
};
use insuperable::rational::rat;
use insuperable::{BimatrixGame, Matrix, MixedStrategy, Player, Rational};
use proptest::prelude::*;

fn rational_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
    proptest::collection::vec((-12i64..=12, 1i64..=5), rows * cols)
        .prop_map(move |v| Matrix::from_fn(rows, cols, |i, j| rat(v[i * cols + j].0, v[i * cols + j].1)))
}

fn rational_game(max_dim: usize) -> impl Strategy<Value = BimatrixGame> {
    (1..=max_dim, 1..=max_dim).prop_flat_map(|(n, m)| {
        (rational_matrix(n, m), rational_matrix(m, n)).prop_map(|(a, b)| BimatrixGame::new(a, b).unwrap())
    })
}

/// Game whose net payoff is `l`: `A = Lᵀ`, `B = 0`.
fn from_net(l: Matrix) -> BimatrixGame {
    let (m, n) = l.shape();
    BimatrixGame::new(l.transpose(), Matrix::zeros(m, n)).unwrap()
}

fn small_int_nets(rows: usize, cols: usize) -> impl Iterator<Item = Matrix> {
    let cells = rows * cols;
    (0..9usize.pow(cells as u32)).map(move |mut code| {
        Matrix::from_fn(rows, cols, |_, _| {
            let v = (code % 9) as i64 - 4;
            code /= 9;
            Rational::from(v)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn trichotomy_and_witness_soundness(g in rational_game(5)) {
        let r = classify(&g);
        prop_assert!(report_is_sound(&g, &r));
        let v = r.value.clone().unwrap();
        match r.value_sign {
            ValueSign::Positive => prop_assert!(r.a_strict && r.b_insuperable.is_none() && v.is_positive()),
            ValueSign::Negative => prop_assert!(r.b_strict && r.a_insuperable.is_none() && v.is_negative()),
            ValueSign::Zero => prop_assert!(r.pair_exists && !r.a_strict && !r.b_strict && v.is_zero()),
        }
    }

    #[test]
    fn symmetric_games_have_a_symmetric_insuperable_pair(a in (1usize..=6).prop_flat_map(|k| rational_matrix(k, k))) {
        let g = BimatrixGame::symmetric(a).unwrap();
        let r = classify(&g);
        prop_assert_eq!(r.value_sign, ValueSign::Zero);
        let x = r.a_insuperable.clone().unwrap();
        // The same mixture is insuperable for both roles.
        prop_assert!(check_insuperable(&g, Player::A, &x).unwrap().is_insuperable());
        prop_assert!(check_insuperable(&g, Player::B, &x).unwrap().is_insuperable());
    }

    #[test]
    fn classification_is_invariant_under_positive_scaling(g in rational_game(4), p in 1i64..=20, q in 1i64..=20) {
        let lambda = rat(p, q);
        let r = classify(&g);
        let s = classify(&g.scaled(&lambda));
        prop_assert_eq!(r.value_sign, s.value_sign);
        prop_assert_eq!((r.a_strict, r.b_strict, r.pair_exists), (s.a_strict, s.b_strict, s.pair_exists));
        prop_assert_eq!(s.value.unwrap(), &r.value.unwrap() * &lambda);
    }

    #[test]
    fn grid_witnesses_are_genuine(g in rational_game(3), res in 1u32..=8) {
        let r = brute_force_classify(&g, res).unwrap();
        for (p, s) in [(Player::A, &r.a_insuperable), (Player::B, &r.b_insuperable)] {
            if let Some(s) = s {
                prop_assert!(check_insuperable(&g, p, s).unwrap().is_insuperable());
            }
        }
    }
}

#[test]
fn grid_oracle_agrees_on_all_small_2x2_nets() {
    for l in small_int_nets(2, 2) {
        let g = from_net(l);
        let bf = brute_force_classify(&g, 12).unwrap();
        assert!(report_is_sound(&g, &bf), "{:?}", g.net_payoff());
        assert_eq!(bf.value_sign, classify(&g).value_sign, "{:?}", g.net_payoff());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(3000))]

    #[test]
    fn grid_oracle_agrees_on_small_3x3_games(a in proptest::collection::vec(-2i64..=2, 9), b in proptest::collection::vec(-2i64..=2, 9)) {
        let a = Matrix::from_fn(3, 3, |i, j| Rational::from(a[3 * i + j]));
        let b = Matrix::from_fn(3, 3, |i, j| Rational::from(b[3 * i + j]));
        let g = BimatrixGame::new(a, b).unwrap();
        let bf = brute_force_classify(&g, 12).unwrap();
        prop_assert!(report_is_sound(&g, &bf));
        prop_assert_eq!(bf.value_sign, classify(&g).value_sign);
    }
}

#[test]
fn pure_witness_grid_soundness_on_catalog() {
    let hd = catalog::hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap();
    let r = brute_force_classify(&hd, 10).unwrap();
    assert_eq!(r.a_insuperable, Some(MixedStrategy::pure(2, 0)));
    assert_eq!(check_insuperable(&hd, Player::A, &MixedStrategy::pure(2, 0)).unwrap(), Verdict::Insuperable);
}
