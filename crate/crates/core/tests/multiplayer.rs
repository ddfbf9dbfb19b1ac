use insuperable::game::Player;
use insuperable::insuperability::check_insuperable;
use insuperable::multiplayer::{
    extend_to_n, is_reducible, n_player_classify, normalize_extremes, pgg, propagation_check, zerinho_modified,
    zerinho_original, NPlayerTwoStrategyGame,
};
use insuperable::rational::rat;
use insuperable::{BimatrixGame, Matrix, MixedStrategy, Rational};
use proptest::prelude::*;

fn small_rational() -> impl Strategy<Value = Rational> {
    (-12i64..=12, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn positive() -> impl Strategy<Value = Rational> {
    (1i64..=30, 1i64..=6).prop_map(|(p, q)| rat(p, q))
}

fn affine(start: &Rational, step: &Rational, n: usize) -> Vec<Rational> {
    (0..n).map(|k| start + &(step * &Rational::from(k))).collect()
}

fn reducible_game() -> impl Strategy<Value = NPlayerTwoStrategyGame> {
    (2usize..=9, small_rational(), small_rational(), small_rational(), small_rational()).prop_map(
        |(n, a0, da, b0, db)| NPlayerTwoStrategyGame::new(n, affine(&a0, &da, n), affine(&b0, &db, n)).unwrap(),
    )
}

fn any_game() -> impl Strategy<Value = NPlayerTwoStrategyGame> {
    (2usize..=7).prop_flat_map(|n| {
        (proptest::collection::vec(small_rational(), n), proptest::collection::vec(small_rational(), n))
            .prop_map(move |(a, b)| NPlayerTwoStrategyGame::new(n, a, b).unwrap())
    })
}

/// Three-player reducible games with `b₂ ≥ a₂` and A insuperable, built
/// from nonnegative slacks: `a₂ = b₂ − s₁`, `a₁ = b₂ + s₂`, then `a₀` from
/// affinity and `b₁ ≤ a₀` with `b₀` from affinity.
fn hypothesis_game() -> impl Strategy<Value = NPlayerTwoStrategyGame> {
    (small_rational(), 0i64..=8, 0i64..=8, 0i64..=8, 1i64..=4).prop_map(|(b2, s1, s2, s3, q)| {
        let a2 = &b2 - &rat(s1, q);
        let a1 = &b2 + &rat(s2, q);
        let a0 = &(&a1 + &a1) - &a2;
        let b1 = &a0 - &rat(s3, q);
        let b0 = &(&b1 + &b1) - &b2;
        NPlayerTwoStrategyGame::new(3, vec![a0, a1, a2], vec![b0, b1, b2]).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn extension_inverts_reduction(g in reducible_game()) {
        let r = is_reducible(&g);
        prop_assert!(r.reducible);
        prop_assert_eq!(extend_to_n(r.two_player.as_ref().unwrap(), g.players()).unwrap(), g);
    }

    #[test]
    fn reduction_inverts_extension(m in proptest::collection::vec(small_rational(), 4), n in 2usize..=9) {
        let two = BimatrixGame::symmetric(Matrix::from_rows(vec![m[..2].to_vec(), m[2..].to_vec()]).unwrap()).unwrap();
        let g = extend_to_n(&two, n).unwrap();
        let back = is_reducible(&g).two_player.unwrap();
        prop_assert_eq!(back.a(), two.a());
    }

    #[test]
    fn reduction_preserves_dominance(g in reducible_game()) {
        let c = n_player_classify(&g);
        let two = is_reducible(&g).two_player.unwrap();
        let m = two.a();
        prop_assert_eq!(c.a_dominates, m[(0, 0)] >= m[(1, 0)] && m[(0, 1)] >= m[(1, 1)]);
        prop_assert_eq!(c.b_dominates, m[(1, 0)] >= m[(0, 0)] && m[(1, 1)] >= m[(0, 1)]);
    }

    #[test]
    fn classification_is_scale_invariant(g in any_game(), l in positive()) {
        prop_assert_eq!(n_player_classify(&g), n_player_classify(&g.scaled(&l)));
    }

    #[test]
    fn normalization_keeps_insuperability(g in any_game()) {
        prop_assume!(g.players() >= 3);
        let (c, d) = (n_player_classify(&g), n_player_classify(&normalize_extremes(&g).unwrap()));
        prop_assert_eq!((c.a_insuperable, c.b_insuperable), (d.a_insuperable, d.b_insuperable));
        prop_assert_eq!((c.a_strictly_insuperable, c.b_strictly_insuperable), (d.a_strictly_insuperable, d.b_strictly_insuperable));
        let h = normalize_extremes(&g).unwrap();
        if g.players() == 3 {
            prop_assert!(is_reducible(&h).reducible);
        }
    }

    #[test]
    fn propagation_holds_under_hypotheses(g in hypothesis_game()) {
        let r = propagation_check(&g);
        prop_assert!(r.applicable, "{:?}", r.reason);
        prop_assert!(r.holds(), "{:?}", r);
        let two = is_reducible(&g).two_player.unwrap();
        prop_assert!(check_insuperable(&two, Player::A, &MixedStrategy::pure(2, 0)).unwrap().is_insuperable());
    }

    #[test]
    fn pgg_properties(r in positive(), n in 2usize..=12) {
        let g = pgg(&r, n).unwrap();
        let c = n_player_classify(&g);
        let nr = Rational::from(n);
        prop_assert!(c.b_insuperable);
        prop_assert_eq!(c.a_dominates, r >= nr);
        prop_assert_eq!(c.b_dominates, r <= nr);
        let two = is_reducible(&g).two_player.unwrap();
        let share = &r / &nr;
        let expected = Matrix::from_rows(vec![
            vec![&r - &Rational::ONE, &share - &Rational::ONE],
            vec![&share * &Rational::from(n - 1), Rational::ZERO],
        ]).unwrap();
        prop_assert_eq!(two.a(), &expected);
    }
}

#[test]
fn pgg_boundary_is_mutual_weak_dominance() {
    let c = n_player_classify(&pgg(&Rational::from(4), 4).unwrap());
    assert!(c.a_dominates && c.b_dominates);
    assert!(!c.a_strictly_dominates && !c.b_strictly_dominates);
}

#[test]
fn zerinho_examples() {
    let c = n_player_classify(&zerinho_original());
    assert!(!(c.a_insuperable || c.b_insuperable || c.a_dominates || c.b_dominates));
    assert!(!is_reducible(&zerinho_original()).reducible);
    for alpha in [rat(1, 1), rat(7, 3)] {
        let two = is_reducible(&zerinho_modified(&alpha)).two_player.unwrap();
        let z = Rational::ZERO;
        assert_eq!(two.a(), &Matrix::from_rows(vec![vec![alpha.clone(), z.clone()], vec![z, alpha.clone()]]).unwrap());
    }
}

#[test]
fn json_round_trip() {
    let g = pgg(&rat(7, 2), 4).unwrap();
    let s = serde_json::to_string(&g).unwrap();
    assert!(s.contains("\"N\":4"));
    let back: NPlayerTwoStrategyGame = serde_json::from_str(&s).unwrap();
    assert_eq!(back, g);
}
