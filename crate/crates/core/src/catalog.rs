//! Named example games.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::matrix::Matrix;
use crate::rational::{rat, Rational};

/// Names accepted by [`catalog`].
pub const CATALOG_NAMES: &[&str] =
    &["hawk_dove", "symmetric_2x2", "three_strategy_cycle", "only_b_insuperable", "chain_store", "ultimatum"];

pub type CatalogParams = BTreeMap<String, Rational>;

fn param<'a>(params: &'a CatalogParams, key: &str, entry: &str) -> Result<&'a Rational> {
    params.get(key).ok_or_else(|| Error::InvalidParameter(format!("{entry} requires parameter {key}")))
}

/// Looks up a catalog game by name.
///
/// Parameters: `hawk_dove` takes `G`, `C`; `symmetric_2x2` takes `a`..`d`;
/// `ultimatum` takes `M`. The remaining entries take none.
pub fn catalog(name: &str, params: &CatalogParams) -> Result<BimatrixGame> {
    match name {
        "hawk_dove" => hawk_dove(param(params, "G", name)?, param(params, "C", name)?),
        "symmetric_2x2" => Ok(symmetric_2x2(
            param(params, "a", name)?.clone(),
            param(params, "b", name)?.clone(),
            param(params, "c", name)?.clone(),
            param(params, "d", name)?.clone(),
        )),
        "three_strategy_cycle" => Ok(three_strategy_cycle()),
        "only_b_insuperable" => Ok(only_b_insuperable()),
        "chain_store" => Ok(chain_store()),
        "ultimatum" => {
            let m = param(params, "M", name)?;
            if !m.is_integer() || m.is_negative() {
                return Err(Error::InvalidParameter(format!("ultimatum needs an integer M >= 0, got {m}")));
            }
            let m = m.to_f64() as usize;
            ultimatum(m)
        }
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

/// Symmetric hawk-dove game with prize `G > 0` and fight cost `C > 0`:
/// `A = B = [[(G−C)/2, G], [0, G/2]]`.
pub fn hawk_dove(g: &Rational, c: &Rational) -> Result<BimatrixGame> {
    if !g.is_positive() || !c.is_positive() {
        return Err(Error::InvalidParameter(format!("hawk_dove needs G > 0 and C > 0, got G={g}, C={c}")));
    }
    let half = rat(1, 2);
    let a = Matrix::from_rows(vec![vec![&(g - c) * &half, g.clone()], vec![Rational::ZERO, g * &half]])?;
    BimatrixGame::symmetric(a)?.with_labels(labels(&["Hawk", "Dove"]), labels(&["Hawk", "Dove"]))
}

/// `A = B = [[a, b], [c, d]]`.
pub fn symmetric_2x2(a: Rational, b: Rational, c: Rational, d: Rational) -> BimatrixGame {
    let m = Matrix::from_rows(vec![vec![a, b], vec![c, d]]).expect("2x2 literal");
    BimatrixGame::symmetric(m).expect("square")
}

/// Symmetric 3×3 game whose net payoff is the rock-paper-scissors cycle.
pub fn three_strategy_cycle() -> BimatrixGame {
    BimatrixGame::symmetric(Matrix::from_ints(&[[1, 1, 4], [2, 1, 1], [3, 2, 5]])).expect("square")
}

/// A game with `L = [[1, −10], [−10, 1]]`, realized as `A = L`, `B = 0`.
pub fn only_b_insuperable() -> BimatrixGame {
    BimatrixGame::new(Matrix::from_ints(&[[1, -10], [-10, 1]]), Matrix::zeros(2, 2)).expect("2x2")
}

/// Normal form of the two-player chain-store game. The monopolist (A)
/// chooses cooperate or dispute; the competitor (B) chooses out or in.
pub fn chain_store() -> BimatrixGame {
    BimatrixGame::new(Matrix::from_ints(&[[5, 2], [5, 0]]), Matrix::from_ints(&[[1, 1], [2, 0]]))
        .and_then(|g| g.with_labels(labels(&["C", "D"]), labels(&["OUT", "IN"])))
        .expect("2x2")
}

/// Ultimatum game over integer offers `0..=M`. The donor (A) offers `m`;
/// the receiver (B) plays a threshold `≥ m'` for `m' ∈ 0..=M+1`. An
/// accepted offer pays the donor `M − m` and the receiver `m`; a rejected
/// one pays nothing.
pub fn ultimatum(max_offer: usize) -> Result<BimatrixGame> {
    let big_m = max_offer as i64;
    let offers = max_offer + 1;
    let thresholds = max_offer + 2;
    let a = Matrix::from_fn(
        offers,
        thresholds,
        |m, t| {
            if t <= m {
                Rational::from(big_m - m as i64)
            } else {
                Rational::ZERO
            }
        },
    );
    let b = Matrix::from_fn(thresholds, offers, |t, m| if t <= m { Rational::from(m) } else { Rational::ZERO });
    BimatrixGame::new(a, b)?
        .with_labels((0..offers).map(|m| m.to_string()).collect(), (0..thresholds).map(|t| format!(">={t}")).collect())
}

/// Weak-selection rescaling `1 + payoff / N` applied to both players.
pub fn weak_selection(base: &BimatrixGame, population: usize) -> Result<BimatrixGame> {
    if population == 0 {
        return Err(Error::InvalidParameter("weak selection needs N >= 1".into()));
    }
    let inv = Rational::from(population).recip();
    let f = |v: &Rational| &Rational::ONE + &(v * &inv);
    let g = BimatrixGame::new(base.a().map(f), base.b().map(f))?;
    match (base.labels(crate::game::Player::A), base.labels(crate::game::Player::B)) {
        (Some(la), Some(lb)) => g.with_labels(la.to_vec(), lb.to_vec()),
        _ => Ok(g),
    }
}

fn labels(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::Player;

    #[test]
    fn hawk_dove_matrix_and_net_payoff() {
        let g = hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap();
        assert!(g.is_symmetric());
        assert_eq!(g.a()[(0, 0)], rat(-7, 2));
        assert_eq!(g.a()[(0, 1)], Rational::from(3));
        assert_eq!(g.a()[(1, 1)], rat(3, 2));
        assert_eq!(*g.net_payoff().matrix(), Matrix::from_ints(&[[0, -3], [3, 0]]));
        assert!(hawk_dove(&Rational::ZERO, &Rational::ONE).is_err());
    }

    #[test]
    fn chain_store_net_payoff() {
        assert_eq!(*chain_store().net_payoff().matrix(), Matrix::from_ints(&[[4, 4], [0, 0]]));
    }

    #[test]
    fn three_strategy_cycle_net_payoff() {
        let g = three_strategy_cycle();
        assert_eq!(*g.net_payoff().matrix(), Matrix::from_ints(&[[0, 1, -1], [-1, 0, 1], [1, -1, 0]]));
    }

    #[test]
    fn only_b_net_payoff() {
        assert_eq!(*only_b_insuperable().net_payoff().matrix(), Matrix::from_ints(&[[1, -10], [-10, 1]]));
    }

    #[test]
    fn ultimatum_four_table() {
        let g = ultimatum(4).unwrap();
        assert_eq!((g.n(), g.m()), (5, 6));
        // (a_{m,m'}, b_{m',m}) read off the bi-matrix table row by row.
        let table: [[(i64, i64); 6]; 5] = [
            [(4, 0), (0, 0), (0, 0), (0, 0), (0, 0), (0, 0)],
            [(3, 1), (3, 1), (0, 0), (0, 0), (0, 0), (0, 0)],
            [(2, 2), (2, 2), (2, 2), (0, 0), (0, 0), (0, 0)],
            [(1, 3), (1, 3), (1, 3), (1, 3), (0, 0), (0, 0)],
            [(0, 4), (0, 4), (0, 4), (0, 4), (0, 4), (0, 0)],
        ];
        for (m, row) in table.iter().enumerate() {
            for (t, &(pa, pb)) in row.iter().enumerate() {
                assert_eq!(g.a()[(m, t)], Rational::from(pa), "a[{m}][{t}]");
                assert_eq!(g.b()[(t, m)], Rational::from(pb), "b[{t}][{m}]");
            }
        }
        assert_eq!(g.label(Player::B, 5), ">=5");
    }

    #[test]
    fn weak_selection_entries() {
        let base = hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap();
        let w = weak_selection(&base, 13).unwrap();
        assert_eq!(w.a()[(0, 0)], &Rational::ONE + &(&rat(-7, 2) / &Rational::from(13)));
        assert_eq!(w.a()[(1, 0)], Rational::ONE);
        assert_eq!(w.a()[(0, 1)], rat(16, 13));
        assert!(w.is_symmetric());
    }

    #[test]
    fn catalog_lookup_and_errors() {
        let mut p = CatalogParams::new();
        p.insert("G".into(), Rational::from(3));
        p.insert("C".into(), Rational::from(10));
        assert_eq!(catalog("hawk_dove", &p).unwrap(), hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap());
        assert!(matches!(catalog("nope", &p), Err(Error::UnknownCatalog(_))));
        assert!(matches!(catalog("ultimatum", &p), Err(Error::InvalidParameter(_))));
        p.insert("M".into(), Rational::from(-1));
        assert!(matches!(catalog("ultimatum", &p), Err(Error::InvalidParameter(_))));
        p.insert("M".into(), rat(5, 2));
        assert!(catalog("ultimatum", &p).is_err());
        p.insert("M".into(), Rational::from(4));
        assert_eq!(catalog("ultimatum", &p).unwrap().n(), 5);
        for name in ["three_strategy_cycle", "only_b_insuperable", "chain_store"] {
            assert!(catalog(name, &CatalogParams::new()).is_ok());
        }
    }
}
