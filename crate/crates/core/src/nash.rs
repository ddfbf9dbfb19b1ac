//! Nash equilibria of bimatrix games by exact support enumeration.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, MixedStrategy, Player};
use crate::insuperability::{check_insuperable, classify, insuperable_vertices, InsuperableReport};
use crate::linalg::{Combinations, Polytope};
use crate::matrix::Matrix;
use crate::rational::Rational;

/// Default dimension cap for [`mixed_nash_support_enumeration`].
pub const NASH_CAP: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EquilibriumKind {
    Pure,
    Mixed,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquilibriumProfile {
    pub x: MixedStrategy,
    pub y: MixedStrategy,
    #[serde(rename = "payoff_A")]
    pub payoff_a: Rational,
    #[serde(rename = "payoff_B")]
    pub payoff_b: Rational,
    pub kind: EquilibriumKind,
    /// Every unilateral deviation strictly loses (only possible for pure profiles).
    pub strict: bool,
    /// Supports of unequal size, or the profile is a vertex of a
    /// non-isolated equilibrium set.
    pub degenerate: bool,
}

impl EquilibriumProfile {
    fn build(game: &BimatrixGame, x: MixedStrategy, y: MixedStrategy, degenerate: bool) -> Self {
        let (payoff_a, payoff_b) = game.payoffs(&x, &y).expect("dimensions match");
        let kind =
            if x.as_pure().is_some() && y.as_pure().is_some() { EquilibriumKind::Pure } else { EquilibriumKind::Mixed };
        let strict = match (x.as_pure(), y.as_pure()) {
            (Some(i), Some(j)) => strict_pure(game, i, j),
            _ => false,
        };
        let degenerate = degenerate || x.support().len() != y.support().len();
        EquilibriumProfile { x, y, payoff_a, payoff_b, kind, strict, degenerate }
    }
}

fn strict_pure(game: &BimatrixGame, i: usize, j: usize) -> bool {
    let (a, b) = (game.a(), game.b());
    (0..game.n()).all(|k| k == i || a[(k, j)] < a[(i, j)]) && (0..game.m()).all(|l| l == j || b[(l, i)] < b[(j, i)])
}

/// Exact best-response check: no pure deviation improves either player.
pub fn is_nash(game: &BimatrixGame, x: &MixedStrategy, y: &MixedStrategy) -> bool {
    let Ok((pa, pb)) = game.payoffs(x, y) else { return false };
    let ay = game.a().mul_vec(y.weights()).expect("dims");
    let bx = game.b().mul_vec(x.weights()).expect("dims");
    ay.iter().all(|v| *v <= pa) && bx.iter().all(|v| *v <= pb)
}

/// All pure-strategy equilibria, in row-major order of `(i, j)`.
pub fn pure_nash(game: &BimatrixGame) -> Vec<EquilibriumProfile> {
    let (a, b) = (game.a(), game.b());
    let mut out = Vec::new();
    for i in 0..game.n() {
        for j in 0..game.m() {
            let a_best = (0..game.n()).all(|k| a[(k, j)] <= a[(i, j)]);
            let b_best = (0..game.m()).all(|l| b[(l, i)] <= b[(j, i)]);
            if a_best && b_best {
                out.push(EquilibriumProfile::build(
                    game,
                    MixedStrategy::pure(game.n(), i),
                    MixedStrategy::pure(game.m(), j),
                    false,
                ));
            }
        }
    }
    out
}

/// Vertices of `{ (s, u) : s ∈ Δ, supp s ⊆ own, (M s)_k = u for k ∈ reply,
/// (M s)_k ≤ u otherwise }`, where `M` is the opponent's payoff matrix
/// (rows = opponent strategies). Returns only the `s` parts.
fn indifference_vertices(opp: &Matrix, own: &[usize], reply: &[usize]) -> Vec<Vec<Rational>> {
    let dim = opp.cols();
    let mut poly = Polytope::new(dim + 1);
    let unit = |i: usize| {
        let mut e = vec![Rational::ZERO; dim + 1];
        e[i] = Rational::ONE;
        e
    };
    let mut sum = vec![Rational::ONE; dim];
    sum.push(Rational::ZERO);
    poly.equal(sum, Rational::ONE);
    for i in 0..dim {
        if own.contains(&i) {
            poly.at_least(unit(i), Rational::ZERO);
        } else {
            poly.equal(unit(i), Rational::ZERO);
        }
    }
    for (k, row) in opp.iter_rows().enumerate() {
        // u − (M s)_k, zero on the reply set and nonnegative elsewhere.
        let mut r: Vec<Rational> = row.iter().map(|v| -v).collect();
        r.push(Rational::ONE);
        if reply.contains(&k) {
            poly.equal(r, Rational::ZERO);
        } else {
            poly.at_least(r, Rational::ZERO);
        }
    }
    poly.vertices()
        .into_iter()
        .map(|mut v| {
            v.pop();
            v
        })
        .collect()
}

fn nonempty_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=n).flat_map(move |k| Combinations::new(n, k))
}

/// Support enumeration with the default cap.
pub fn mixed_nash_support_enumeration(game: &BimatrixGame) -> Result<Vec<EquilibriumProfile>> {
    mixed_nash_with_cap(game, NASH_CAP)
}

/// For every support pair `(I, J)`, solves the exact indifference
/// conditions (each player mixing over its support makes the opponent's
/// support a set of best replies) and keeps the simplex solutions. When a
/// support pair admits a continuum of solutions its vertices are reported
/// and flagged degenerate. Results are deduplicated and sorted.
pub fn mixed_nash_with_cap(game: &BimatrixGame, cap: usize) -> Result<Vec<EquilibriumProfile>> {
    let (n, m) = (game.n(), game.m());
    if n.max(m) > cap {
        return Err(Error::Cap { what: "player", got: n.max(m), cap });
    }
    let mut found: BTreeMap<(MixedStrategy, MixedStrategy), bool> = BTreeMap::new();
    for supp_x in nonempty_subsets(n) {
        for supp_y in nonempty_subsets(m) {
            // x makes B indifferent over supp_y; y makes A indifferent over supp_x.
            let xs = indifference_vertices(game.b(), &supp_x, &supp_y);
            if xs.is_empty() {
                continue;
            }
            let ys = indifference_vertices(game.a(), &supp_y, &supp_x);
            let continuum = xs.len() > 1 || ys.len() > 1;
            for x in &xs {
                for y in &ys {
                    let x = MixedStrategy::new(x.clone()).expect("vertex on the simplex");
                    let y = MixedStrategy::new(y.clone()).expect("vertex on the simplex");
                    let flag = found.entry((x, y)).or_insert(continuum);
                    *flag |= continuum;
                }
            }
        }
    }
    Ok(found.into_iter().map(|((x, y), continuum)| EquilibriumProfile::build(game, x, y, continuum)).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StrategyStatus {
    pub insuperable_for_a: bool,
    pub insuperable_for_b: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ComparisonReport {
    pub insuperable: InsuperableReport,
    pub nash: Vec<EquilibriumProfile>,
    /// Per equilibrium: is each player's equilibrium strategy insuperable?
    pub nash_status: Vec<StrategyStatus>,
    pub insuperable_vertices_a: Vec<MixedStrategy>,
    pub insuperable_vertices_b: Vec<MixedStrategy>,
    pub any_nash_strategy_insuperable: bool,
    /// Some insuperable vertex is also an equilibrium strategy of its player.
    pub any_insuperable_vertex_in_nash: bool,
    pub degenerate: bool,
}

/// Pairs the equilibrium list with the insuperability analysis.
pub fn nash_vs_insuperable(game: &BimatrixGame) -> Result<ComparisonReport> {
    let nash = mixed_nash_support_enumeration(game)?;
    let insuperable = classify(game);
    let va = insuperable_vertices(game, Player::A)?;
    let vb = insuperable_vertices(game, Player::B)?;
    let nash_status: Vec<StrategyStatus> = nash
        .iter()
        .map(|e| StrategyStatus {
            insuperable_for_a: check_insuperable(game, Player::A, &e.x).map(|v| v.is_insuperable()).unwrap_or(false),
            insuperable_for_b: check_insuperable(game, Player::B, &e.y).map(|v| v.is_insuperable()).unwrap_or(false),
        })
        .collect();
    let any_insuperable_vertex_in_nash =
        va.iter().any(|x| nash.iter().any(|e| &e.x == x)) || vb.iter().any(|y| nash.iter().any(|e| &e.y == y));
    Ok(ComparisonReport {
        any_nash_strategy_insuperable: nash_status.iter().any(|s| s.insuperable_for_a || s.insuperable_for_b),
        degenerate: nash.iter().any(|e| e.degenerate),
        insuperable,
        nash,
        nash_status,
        insuperable_vertices_a: va,
        insuperable_vertices_b: vb,
        any_insuperable_vertex_in_nash,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::rat;

    #[test]
    fn chain_store_pure() {
        let eq = pure_nash(&catalog::chain_store());
        let pairs: Vec<_> = eq.iter().map(|e| (e.x.as_pure().unwrap(), e.y.as_pure().unwrap())).collect();
        // (D, OUT) and (C, IN).
        assert!(pairs.contains(&(1, 0)));
        assert!(pairs.contains(&(0, 1)));
    }

    #[test]
    fn cycle_strict_e3() {
        let eq = pure_nash(&catalog::three_strategy_cycle());
        assert_eq!(eq.len(), 1);
        assert_eq!(eq[0].x, MixedStrategy::pure(3, 2));
        assert!(eq[0].strict);
    }

    #[test]
    fn hawk_dove_mixed() {
        let g = catalog::hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap();
        let eq = mixed_nash_support_enumeration(&g).unwrap();
        let sym: Vec<_> = eq.iter().filter(|e| e.x == e.y).collect();
        assert_eq!(sym.len(), 1);
        assert_eq!(sym[0].x.weights(), &[rat(3, 10), rat(7, 10)]);
        assert_eq!(eq.len(), 3);
        assert!(eq.iter().all(|e| !e.degenerate));
    }

    #[test]
    fn coordination_three() {
        let g = catalog::symmetric_2x2(Rational::from(2), Rational::ZERO, Rational::ZERO, Rational::from(2));
        let eq = mixed_nash_support_enumeration(&g).unwrap();
        assert_eq!(eq.len(), 3);
        assert!(eq.iter().any(|e| e.x.weights() == [rat(1, 2), rat(1, 2)]));
    }

    #[test]
    fn zero_game_degenerate() {
        let g = BimatrixGame::new(Matrix::zeros(2, 2), Matrix::zeros(2, 2)).unwrap();
        let eq = mixed_nash_support_enumeration(&g).unwrap();
        assert!(eq.iter().any(|e| e.degenerate));
        assert_eq!(eq.len(), 4);
        assert!(eq.iter().all(|e| is_nash(&g, &e.x, &e.y)));
    }

    #[test]
    fn cap() {
        let g = catalog::ultimatum(6).unwrap();
        assert!(matches!(mixed_nash_support_enumeration(&g), Err(Error::Cap { .. })));
    }

    #[test]
    fn cycle_comparison() {
        let r = nash_vs_insuperable(&catalog::three_strategy_cycle()).unwrap();
        assert_eq!(r.nash.len(), 1);
        assert!(!r.any_nash_strategy_insuperable);
        assert!(!r.any_insuperable_vertex_in_nash);
        assert_eq!(r.insuperable_vertices_a, vec![MixedStrategy::uniform(3)]);
    }
}
