//! Deciding and constructing insuperable strategies.
//!
//! For the net payoff `L = Aᵀ − B`, player A's advantage at `(x, y)` is
//! `yᵀ L x`. So `x` is insuperable for A iff `L x ≥ 0`, and `y` is
//! insuperable for B iff `yᵀ L ≤ 0`. One zero-sum LP on `L` settles both
//! players at once: its value `v` is the best guaranteed margin for A.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, MixedStrategy, NetPayoffMatrix, Player};
use crate::linalg::Polytope;
use crate::linprog::{LinearProgram, LpOutcome, Sense};
use crate::matrix::{dot, Matrix};
use crate::rational::Rational;

/// Default dimension cap for [`insuperable_vertices`].
pub const VERTEX_CAP: usize = 8;
/// Largest player dimension accepted by [`brute_force_classify`].
pub const BRUTE_FORCE_CAP: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ValueSign {
    Negative,
    Zero,
    Positive,
}

impl ValueSign {
    pub fn of(v: &Rational) -> Self {
        match v.signum() {
            s if s < 0 => ValueSign::Negative,
            0 => ValueSign::Zero,
            _ => ValueSign::Positive,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    NotInsuperable,
    Insuperable,
    StrictlyInsuperable,
}

impl Verdict {
    pub fn is_insuperable(self) -> bool {
        self != Verdict::NotInsuperable
    }
}

/// Value and optimal strategies of the zero-sum game in which A picks `x`,
/// B picks `y`, and A receives `yᵀ L x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GameValueResult {
    pub value: Rational,
    pub maximin_x: MixedStrategy,
    pub minimax_y: MixedStrategy,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InsuperableReport {
    pub value_sign: ValueSign,
    /// Exact game value; absent for grid-scan reports.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<Rational>,
    pub a_insuperable: Option<MixedStrategy>,
    pub b_insuperable: Option<MixedStrategy>,
    pub a_strict: bool,
    pub b_strict: bool,
    pub pair_exists: bool,
}

/// Solves `max t s.t. L x ≥ t𝟙, 𝟙ᵀx = 1, x ≥ 0`. B's optimal strategy is
/// read off the dual of the `L x ≥ t𝟙` rows.
pub fn zero_sum_value(l: &NetPayoffMatrix) -> GameValueResult {
    let l = l.matrix();
    let (m, n) = l.shape();
    let mut objective = vec![Rational::ZERO; n + 1];
    objective[n] = Rational::ONE;
    let mut lp = LinearProgram::maximize(objective);
    lp.free(n);
    for row in l.iter_rows() {
        let mut r = row.to_vec();
        r.push(-Rational::ONE);
        lp.constrain(r, Sense::Ge, Rational::ZERO);
    }
    let mut simplex = vec![Rational::ONE; n];
    simplex.push(Rational::ZERO);
    lp.constrain(simplex, Sense::Eq, Rational::ONE);

    let LpOutcome::Optimal { value, solution, dual } = lp.solve() else {
        unreachable!("the value program is feasible and bounded");
    };
    // Multipliers of `≥` rows are ≤ 0 and sum to −1 (dual of the free t).
    let y: Vec<Rational> = dual[..m].iter().map(|v| -v).collect();
    GameValueResult {
        value,
        maximin_x: MixedStrategy::new(solution[..n].to_vec()).expect("primal lies on the simplex"),
        minimax_y: MixedStrategy::new(y).expect("dual lies on the simplex"),
    }
}

/// Full trichotomy report for `game`.
pub fn classify(game: &BimatrixGame) -> InsuperableReport {
    let r = zero_sum_value(&game.net_payoff());
    let sign = ValueSign::of(&r.value);
    InsuperableReport {
        value_sign: sign,
        a_insuperable: (sign != ValueSign::Negative).then(|| r.maximin_x.clone()),
        b_insuperable: (sign != ValueSign::Positive).then(|| r.minimax_y.clone()),
        a_strict: sign == ValueSign::Positive,
        b_strict: sign == ValueSign::Negative,
        pair_exists: sign == ValueSign::Zero,
        value: Some(r.value),
    }
}

/// The components that decide insuperability of `s`: `L s` for A and
/// `−sᵀ L` for B, oriented so that nonnegative means "not outperformed".
fn margins(l: &Matrix, player: Player, s: &[Rational]) -> Result<Vec<Rational>> {
    match player {
        Player::A => l.mul_vec(s),
        Player::B => Ok(l.vec_mul(s)?.into_iter().map(|v| -v).collect()),
    }
}

fn verdict_of(margins: &[Rational]) -> Verdict {
    if margins.iter().any(Rational::is_negative) {
        Verdict::NotInsuperable
    } else if margins.iter().all(Rational::is_positive) {
        Verdict::StrictlyInsuperable
    } else {
        Verdict::Insuperable
    }
}

/// Exact sign test of `L s` (player A) or `sᵀ L` (player B).
pub fn check_insuperable(game: &BimatrixGame, player: Player, s: &MixedStrategy) -> Result<Verdict> {
    if s.dim() != game.dim(player) {
        return Err(Error::Dimension(format!(
            "strategy of dimension {} for player {player} with {} pure strategies",
            s.dim(),
            game.dim(player)
        )));
    }
    Ok(verdict_of(&margins(game.net_payoff().matrix(), player, s.weights())?))
}

/// Vertices of the insuperable set `{x ∈ Δ : L x ≥ 0}` (or
/// `{y ∈ Δ : yᵀ L ≤ 0}`), with the default cap.
pub fn insuperable_vertices(game: &BimatrixGame, player: Player) -> Result<Vec<MixedStrategy>> {
    insuperable_vertices_with_cap(game, player, VERTEX_CAP)
}

pub fn insuperable_vertices_with_cap(game: &BimatrixGame, player: Player, cap: usize) -> Result<Vec<MixedStrategy>> {
    let dim = game.dim(player);
    if dim > cap {
        return Err(Error::Cap { what: "player", got: dim, cap });
    }
    let l = game.net_payoff();
    let l = l.matrix();
    let mut poly = Polytope::new(dim);
    poly.equal(vec![Rational::ONE; dim], Rational::ONE);
    for i in 0..dim {
        let mut e = vec![Rational::ZERO; dim];
        e[i] = Rational::ONE;
        poly.at_least(e, Rational::ZERO);
    }
    match player {
        Player::A => {
            for row in l.iter_rows() {
                poly.at_least(row.to_vec(), Rational::ZERO);
            }
        }
        Player::B => {
            for j in 0..l.cols() {
                poly.at_least(l.column(j).into_iter().map(|v| -v).collect(), Rational::ZERO);
            }
        }
    }
    Ok(poly.vertices().into_iter().map(|v| MixedStrategy::new(v).expect("vertex lies on the simplex")).collect())
}

/// All points of the simplex in `dim` coordinates whose weights are
/// multiples of `1/resolution`, in lexicographic order of numerators.
pub fn simplex_grid(dim: usize, resolution: u32) -> Vec<Vec<u32>> {
    fn rec(dim: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() + 1 == dim {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=left {
            cur.push(k);
            rec(dim, left - k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(dim, resolution, &mut Vec::with_capacity(dim), &mut out);
    out
}

struct GridScan {
    witness: Option<MixedStrategy>,
    strict: bool,
}

fn scan(l: &Matrix, player: Player, resolution: u32) -> GridScan {
    let dim = match player {
        Player::A => l.cols(),
        Player::B => l.rows(),
    };
    let r = Rational::from(resolution as i64);
    let mut out = GridScan { witness: None, strict: false };
    for point in simplex_grid(dim, resolution) {
        let counts: Vec<Rational> = point.iter().map(|&k| Rational::from(k as i64)).collect();
        let verdict = verdict_of(&margins(l, player, &counts).expect("grid point has the player's dimension"));
        let better = match verdict {
            Verdict::StrictlyInsuperable => !out.strict,
            Verdict::Insuperable => out.witness.is_none(),
            Verdict::NotInsuperable => false,
        };
        if better {
            out.strict = verdict == Verdict::StrictlyInsuperable;
            out.witness = Some(MixedStrategy::new(counts.iter().map(|c| c / &r).collect()).expect("grid point"));
            if out.strict {
                break;
            }
        }
    }
    out
}

/// Barycenter of the insuperable vertices: a relative-interior point of the
/// insuperable set, hence strictly insuperable whenever any point is.
fn interior_witness(game: &BimatrixGame, player: Player) -> Result<Option<MixedStrategy>> {
    let vs = insuperable_vertices_with_cap(game, player, BRUTE_FORCE_CAP)?;
    if vs.is_empty() {
        return Ok(None);
    }
    let k = Rational::from(vs.len());
    let mean = (0..game.dim(player)).map(|i| vs.iter().map(|v| &v.weights()[i]).sum::<Rational>() / &k).collect();
    Ok(Some(MixedStrategy::new(mean).expect("convex combination of simplex points")))
}

/// Independent classification by scanning every grid point with
/// denominator `resolution` on both simplices and testing the sign
/// conditions directly.
///
/// A grid may miss an insuperable set that is a single point with a
/// foreign denominator, such as `(4/5, 1/5)` at resolution 12. When the grid
/// is inconclusive, the insuperable sets are settled exactly by active-set
/// vertex enumeration, which shares no code with the simplex solver.
pub fn brute_force_classify(game: &BimatrixGame, resolution: u32) -> Result<InsuperableReport> {
    if resolution == 0 {
        return Err(Error::InvalidParameter("resolution must be at least 1".into()));
    }
    let (n, m) = (game.n(), game.m());
    if n.max(m) > BRUTE_FORCE_CAP {
        return Err(Error::Cap { what: "player", got: n.max(m), cap: BRUTE_FORCE_CAP });
    }
    let l = game.net_payoff();
    let mut a = scan(l.matrix(), Player::A, resolution);
    let mut b = scan(l.matrix(), Player::B, resolution);
    let conclusive = a.strict || b.strict || (a.witness.is_some() && b.witness.is_some());
    if !conclusive {
        if a.witness.is_none() {
            a.witness = interior_witness(game, Player::A)?;
        }
        if b.witness.is_none() {
            b.witness = interior_witness(game, Player::B)?;
        }
    }
    let value_sign = match (a.strict, b.strict, a.witness.is_some(), b.witness.is_some()) {
        (true, _, _, _) => ValueSign::Positive,
        (_, true, _, _) => ValueSign::Negative,
        (_, _, true, true) => ValueSign::Zero,
        (_, _, true, false) => ValueSign::Positive,
        (_, _, false, true) => ValueSign::Negative,
        (_, _, false, false) => {
            return Err(Error::Domain(
                "neither player has an insuperable strategy; the alternative theorem is violated".into(),
            ))
        }
    };
    // A strict verdict reached through the exact fallback still needs a
    // strict witness.
    if value_sign == ValueSign::Positive && !a.strict {
        a.witness = interior_witness(game, Player::A)?;
    }
    if value_sign == ValueSign::Negative && !b.strict {
        b.witness = interior_witness(game, Player::B)?;
    }
    Ok(InsuperableReport {
        value_sign,
        value: None,
        a_strict: value_sign == ValueSign::Positive,
        b_strict: value_sign == ValueSign::Negative,
        pair_exists: value_sign == ValueSign::Zero,
        a_insuperable: if value_sign == ValueSign::Negative { None } else { a.witness },
        b_insuperable: if value_sign == ValueSign::Positive { None } else { b.witness },
    })
}

/// Exact check that `r` is internally consistent and its witnesses are
/// genuine for `game`.
pub fn report_is_sound(game: &BimatrixGame, r: &InsuperableReport) -> bool {
    let verdict = |p, s: &Option<MixedStrategy>| s.as_ref().map(|s| check_insuperable(game, p, s).ok());
    let a = verdict(Player::A, &r.a_insuperable);
    let b = verdict(Player::B, &r.b_insuperable);
    let genuine = |v: Option<Option<Verdict>>| v.is_none_or(|v| v.is_some_and(Verdict::is_insuperable));
    let strict_ok = (!r.a_strict || a == Some(Some(Verdict::StrictlyInsuperable)))
        && (!r.b_strict || b == Some(Some(Verdict::StrictlyInsuperable)));
    let value_ok = r.value.as_ref().is_none_or(|v| ValueSign::of(v) == r.value_sign);
    genuine(a)
        && genuine(b)
        && strict_ok
        && value_ok
        && (a.is_some() || b.is_some())
        && r.pair_exists == (r.value_sign == ValueSign::Zero)
        && r.a_strict == (r.value_sign == ValueSign::Positive)
        && r.b_strict == (r.value_sign == ValueSign::Negative)
        && !(r.a_strict && b.is_some())
        && !(r.b_strict && a.is_some())
}

/// `min_j (L x)_j`, the worst-case margin a fixed `x` guarantees to A.
pub fn guaranteed_margin(l: &Matrix, x: &[Rational]) -> Rational {
    l.iter_rows().map(|r| dot(r, x)).min().expect("L is nonempty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::rational::rat;

    fn hd() -> BimatrixGame {
        catalog::hawk_dove(&Rational::from(3), &Rational::from(10)).unwrap()
    }

    #[test]
    fn hawk_dove_value_zero_hawk_insuperable() {
        let r = zero_sum_value(&hd().net_payoff());
        assert_eq!(r.value, Rational::ZERO);
        assert_eq!(r.maximin_x, MixedStrategy::pure(2, 0));
        assert_eq!(check_insuperable(&hd(), Player::A, &MixedStrategy::pure(2, 0)).unwrap(), Verdict::Insuperable);
        assert_eq!(check_insuperable(&hd(), Player::A, &MixedStrategy::pure(2, 1)).unwrap(), Verdict::NotInsuperable);
        assert_eq!(insuperable_vertices(&hd(), Player::A).unwrap(), vec![MixedStrategy::pure(2, 0)]);
    }

    #[test]
    fn only_b_value() {
        let g = catalog::only_b_insuperable();
        let r = zero_sum_value(&g.net_payoff());
        assert_eq!(r.value, rat(-9, 2));
        assert_eq!(r.minimax_y.weights(), &[rat(1, 2), rat(1, 2)]);
        let c = classify(&g);
        assert!(c.b_strict && c.a_insuperable.is_none() && !c.pair_exists);
        assert!(insuperable_vertices(&g, Player::A).unwrap().is_empty());
    }

    #[test]
    fn zero_matrix_value() {
        let g = BimatrixGame::new(Matrix::zeros(2, 3), Matrix::zeros(3, 2)).unwrap();
        let c = classify(&g);
        assert_eq!(c.value, Some(Rational::ZERO));
        assert!(c.pair_exists && !c.a_strict && !c.b_strict);
        let bf = brute_force_classify(&g, 5).unwrap();
        assert!(bf.pair_exists);
        for p in simplex_grid(3, 5) {
            let r = Rational::from(5);
            let x = MixedStrategy::new(p.iter().map(|&k| &Rational::from(k as i64) / &r).collect()).unwrap();
            assert_eq!(check_insuperable(&g, Player::B, &x).unwrap(), Verdict::Insuperable);
        }
    }

    #[test]
    fn cycle_unique_insuperable() {
        let g = catalog::three_strategy_cycle();
        let c = classify(&g);
        assert!(c.pair_exists);
        assert_eq!(c.a_insuperable, Some(MixedStrategy::uniform(3)));
        assert_eq!(insuperable_vertices(&g, Player::A).unwrap(), vec![MixedStrategy::uniform(3)]);
    }

    #[test]
    fn chain_store_whole_simplex() {
        let g = catalog::chain_store();
        let c = classify(&g);
        assert!(c.pair_exists);
        assert_eq!(c.b_insuperable, Some(MixedStrategy::pure(2, 1)));
        assert_eq!(
            insuperable_vertices(&g, Player::A).unwrap(),
            vec![MixedStrategy::pure(2, 1), MixedStrategy::pure(2, 0)]
        );
    }

    #[test]
    fn ultimatum_pure_donors() {
        let g = catalog::ultimatum(4).unwrap();
        for m in 0..5 {
            let v = check_insuperable(&g, Player::A, &MixedStrategy::pure(5, m)).unwrap();
            assert_eq!(v.is_insuperable(), m <= 2, "m = {m}");
        }
    }

    #[test]
    fn caps_and_dimensions() {
        let g = catalog::ultimatum(8).unwrap();
        assert!(matches!(insuperable_vertices(&g, Player::B), Err(Error::Cap { .. })));
        assert!(matches!(brute_force_classify(&g, 3), Err(Error::Cap { .. })));
        assert!(check_insuperable(&hd(), Player::A, &MixedStrategy::uniform(3)).is_err());
        assert!(brute_force_classify(&hd(), 0).is_err());
    }

    #[test]
    fn brute_force_hawk_dove() {
        let r = brute_force_classify(&hd(), 10).unwrap();
        assert_eq!(r.a_insuperable, Some(MixedStrategy::pure(2, 0)));
        assert_eq!(r.value_sign, ValueSign::Zero);
    }

    #[test]
    fn grid_sizes() {
        assert_eq!(simplex_grid(3, 12).len(), 91);
        assert_eq!(simplex_grid(1, 7), vec![vec![7]]);
        assert!(simplex_grid(4, 2).iter().all(|p| p.iter().sum::<u32>() == 2));
    }

    #[test]
    fn value_certificates() {
        let g = BimatrixGame::new(
            Matrix::from_ints(&[[3, -1, 2], [0, 4, -2]]),
            Matrix::from_ints(&[[1, 0], [2, 2], [-1, 3]]),
        )
        .unwrap();
        let l = g.net_payoff();
        let r = zero_sum_value(&l);
        assert_eq!(guaranteed_margin(l.matrix(), r.maximin_x.weights()), r.value);
        let worst_b = l.matrix().vec_mul(r.minimax_y.weights()).unwrap().into_iter().max().unwrap();
        assert_eq!(worst_b, r.value);
        assert_eq!(r.value, classify(&g).value.unwrap());
    }
}
