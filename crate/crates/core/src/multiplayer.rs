//! Symmetric two-strategy N-player games and their reduction to pairwise
//! (two-player) interactions.
//!
//! `a[k]` (`b[k]`) is the payoff of an A (B) player facing `k` A-players
//! and `N−k−1` B-players among its co-players.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::{BimatrixGame, MixedStrategy, Player};
use crate::insuperability::check_insuperable;
use crate::matrix::Matrix;
use crate::rational::{rat, Rational};

/// Names accepted by [`n_catalog`].
pub const N_CATALOG_NAMES: &[&str] = &["pgg", "zerinho_original", "zerinho_modified", "zerinho_n"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NPlayerTwoStrategyGame {
    #[serde(rename = "N")]
    n: usize,
    a: Vec<Rational>,
    b: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct NPlayerFile {
    #[serde(rename = "N")]
    n: usize,
    a: Vec<Rational>,
    b: Vec<Rational>,
}

impl<'de> Deserialize<'de> for NPlayerTwoStrategyGame {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let f = NPlayerFile::deserialize(d)?;
        NPlayerTwoStrategyGame::new(f.n, f.a, f.b).map_err(serde::de::Error::custom)
    }
}

impl NPlayerTwoStrategyGame {
    pub fn new(n: usize, a: Vec<Rational>, b: Vec<Rational>) -> Result<Self> {
        if n < 2 {
            return Err(Error::InvalidParameter(format!("an N-player game needs N >= 2, got {n}")));
        }
        if a.len() != n || b.len() != n {
            return Err(Error::Dimension(format!(
                "payoff vectors must have length N = {n}, got {} and {}",
                a.len(),
                b.len()
            )));
        }
        Ok(NPlayerTwoStrategyGame { n, a, b })
    }

    pub fn players(&self) -> usize {
        self.n
    }

    pub fn a(&self) -> &[Rational] {
        &self.a
    }

    pub fn b(&self) -> &[Rational] {
        &self.b
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        NPlayerTwoStrategyGame {
            n: self.n,
            a: self.a.iter().map(|v| v * factor).collect(),
            b: self.b.iter().map(|v| v * factor).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NPlayerReport {
    #[serde(rename = "A_insuperable")]
    pub a_insuperable: bool,
    #[serde(rename = "B_insuperable")]
    pub b_insuperable: bool,
    #[serde(rename = "A_dominates")]
    pub a_dominates: bool,
    #[serde(rename = "B_dominates")]
    pub b_dominates: bool,
    #[serde(rename = "A_strictly_insuperable")]
    pub a_strictly_insuperable: bool,
    #[serde(rename = "B_strictly_insuperable")]
    pub b_strictly_insuperable: bool,
    #[serde(rename = "A_strictly_dominates")]
    pub a_strictly_dominates: bool,
    #[serde(rename = "B_strictly_dominates")]
    pub b_strictly_dominates: bool,
}

/// Insuperability compares `a[k]` with `b[k+1]` (an A-player against the
/// B-player who would face the same co-players); dominance compares `a[k]`
/// with `b[k]`.
pub fn n_player_classify(g: &NPlayerTwoStrategyGame) -> NPlayerReport {
    let diag = || g.a.iter().zip(&g.b[1..]);
    let col = || g.a.iter().zip(&g.b);
    NPlayerReport {
        a_insuperable: diag().all(|(a, b)| a >= b),
        b_insuperable: diag().all(|(a, b)| a <= b),
        a_dominates: col().all(|(a, b)| a >= b),
        b_dominates: col().all(|(a, b)| a <= b),
        a_strictly_insuperable: diag().all(|(a, b)| a > b),
        b_strictly_insuperable: diag().all(|(a, b)| a < b),
        a_strictly_dominates: col().all(|(a, b)| a > b),
        b_strictly_dominates: col().all(|(a, b)| a < b),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionResult {
    pub reducible: bool,
    /// Symmetric game `[[a₁, a₀], [b₁, b₀]]` of the pairwise interaction.
    pub two_player: Option<BimatrixGame>,
}

fn is_affine(v: &[Rational]) -> bool {
    v.windows(3).all(|w| (&w[0] + &w[2]) == (&w[1] + &w[1]))
}

/// Exact test for the averaged pairwise form
/// `a[k] = (k a₁ + (N−k−1) a₀) / (N−1)` (and likewise for `b`), which holds
/// iff both vectors are affine in `k`; then `a₀ = a[0]`, `a₁ = a[N−1]`.
pub fn is_reducible(g: &NPlayerTwoStrategyGame) -> ReductionResult {
    if !is_affine(&g.a) || !is_affine(&g.b) {
        return ReductionResult { reducible: false, two_player: None };
    }
    let last = g.n - 1;
    let m = Matrix::from_rows(vec![vec![g.a[last].clone(), g.a[0].clone()], vec![g.b[last].clone(), g.b[0].clone()]])
        .expect("2x2");
    let two = BimatrixGame::symmetric(m)
        .and_then(|t| t.with_labels(vec!["A".into(), "B".into()], vec!["A".into(), "B".into()]))
        .expect("square");
    ReductionResult { reducible: true, two_player: Some(two) }
}

/// Averages the symmetric 2×2 game `[[a₁, a₀], [b₁, b₀]]` over `N−1`
/// pairwise rounds.
pub fn extend_to_n(two: &BimatrixGame, n: usize) -> Result<NPlayerTwoStrategyGame> {
    if two.n() != 2 || two.m() != 2 || !two.is_symmetric() {
        return Err(Error::Domain("extension needs a symmetric 2x2 game".into()));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("N must be at least 2, got {n}")));
    }
    let m = two.a();
    let rounds = Rational::from(n - 1);
    let avg = |vs_a: &Rational, vs_b: &Rational| -> Vec<Rational> {
        (0..n).map(|k| &(&(vs_a * &Rational::from(k)) + &(vs_b * &Rational::from(n - 1 - k))) / &rounds).collect()
    };
    NPlayerTwoStrategyGame::new(n, avg(&m[(0, 0)], &m[(0, 1)]), avg(&m[(1, 0)], &m[(1, 1)]))
}

/// Replaces the homogeneous-population payoffs `a[N−1]` and `b[0]` by the
/// affine extrapolation of their neighbours. These two entries never enter
/// an insuperability comparison, so both insuperability flags are unchanged
/// (dominance may change); for `N = 3` the result is always reducible.
pub fn normalize_extremes(g: &NPlayerTwoStrategyGame) -> Result<NPlayerTwoStrategyGame> {
    if g.n < 3 {
        return Err(Error::InvalidParameter("normalization needs N >= 3".into()));
    }
    let n = g.n;
    let mut a = g.a.clone();
    let mut b = g.b.clone();
    a[n - 1] = &(&a[n - 2] + &a[n - 2]) - &a[n - 3];
    b[0] = &(&b[1] + &b[1]) - &b[2];
    NPlayerTwoStrategyGame::new(n, a, b)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ChainStep {
    pub relation: String,
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
}

impl ChainStep {
    fn new(relation: &str, lhs: Rational, rhs: Rational, cmp: impl Fn(&Rational, &Rational) -> bool) -> Self {
        let holds = cmp(&lhs, &rhs);
        ChainStep { relation: relation.to_string(), lhs, rhs, holds }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PropagationReport {
    pub applicable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub chain: Vec<ChainStep>,
    /// Whether strategy A is insuperable in the reduced two-player game.
    pub reduced_a_insuperable: Option<bool>,
}

impl PropagationReport {
    fn inapplicable(reason: &str) -> Self {
        PropagationReport {
            applicable: false,
            reason: Some(reason.into()),
            chain: Vec::new(),
            reduced_a_insuperable: None,
        }
    }

    /// Every step holds and the conclusion was confirmed on the reduced game.
    pub fn holds(&self) -> bool {
        !self.applicable || (self.chain.iter().all(|s| s.holds) && self.reduced_a_insuperable == Some(true))
    }
}

/// For a reducible three-player game with `b[2] ≥ a[2]` in which A is
/// insuperable, evaluates
/// `b₂ ≤ a₁ = (a₀ + a₂)/2 ⇒ a₀ ≥ 2b₂ − a₂ ≥ b₂`, whose end points are the
/// reduced game's `a₀⁽²⁾ ≥ b₁⁽²⁾`, and confirms A's insuperability on the
/// reduced game directly.
pub fn propagation_check(g3: &NPlayerTwoStrategyGame) -> PropagationReport {
    if g3.n != 3 {
        return PropagationReport::inapplicable("needs a three-player game");
    }
    let red = is_reducible(g3);
    let Some(two) = red.two_player else {
        return PropagationReport::inapplicable("game is not reducible");
    };
    let (a, b) = (&g3.a, &g3.b);
    if b[2] < a[2] {
        return PropagationReport::inapplicable("hypothesis b_2 >= a_2 fails");
    }
    if !n_player_classify(g3).a_insuperable {
        return PropagationReport::inapplicable("A is not insuperable in the three-player game");
    }
    let two_b2_minus_a2 = &(&b[2] + &b[2]) - &a[2];
    let chain = vec![
        ChainStep::new("b_2 <= a_1", b[2].clone(), a[1].clone(), |l, r| l <= r),
        ChainStep::new("a_1 == (a_0 + a_2)/2", a[1].clone(), &(&a[0] + &a[2]) * &rat(1, 2), |l, r| l == r),
        ChainStep::new("a_0 >= 2 b_2 - a_2", a[0].clone(), two_b2_minus_a2.clone(), |l, r| l >= r),
        ChainStep::new("2 b_2 - a_2 >= b_2", two_b2_minus_a2, b[2].clone(), |l, r| l >= r),
        ChainStep::new("a0_reduced == a_0", two.a()[(0, 1)].clone(), a[0].clone(), |l, r| l == r),
        ChainStep::new("b1_reduced == b_2", two.a()[(1, 0)].clone(), b[2].clone(), |l, r| l == r),
    ];
    let reduced = check_insuperable(&two, Player::A, &MixedStrategy::pure(2, 0)).expect("2x2").is_insuperable();
    PropagationReport { applicable: true, reason: None, chain, reduced_a_insuperable: Some(reduced) }
}

fn positive_param(params: &crate::catalog::CatalogParams, key: &str, entry: &str) -> Result<Rational> {
    let v = params.get(key).ok_or_else(|| Error::InvalidParameter(format!("{entry} requires parameter {key}")))?;
    if !v.is_positive() {
        return Err(Error::InvalidParameter(format!("{entry} needs {key} > 0, got {v}")));
    }
    Ok(v.clone())
}

fn population_param(params: &crate::catalog::CatalogParams, entry: &str) -> Result<usize> {
    let v = params.get("N").ok_or_else(|| Error::InvalidParameter(format!("{entry} requires parameter N")))?;
    if !v.is_integer() || *v < Rational::from(2) || *v > Rational::from(1_000_000) {
        return Err(Error::InvalidParameter(format!("{entry} needs an integer N >= 2, got {v}")));
    }
    Ok(v.to_f64() as usize)
}

/// Named N-player games: `pgg` (`r`, `N`), `zerinho_original`,
/// `zerinho_modified` (`alpha`), `zerinho_n` (`alpha`, `N`).
pub fn n_catalog(name: &str, params: &crate::catalog::CatalogParams) -> Result<NPlayerTwoStrategyGame> {
    match name {
        "pgg" => pgg(&positive_param(params, "r", name)?, population_param(params, name)?),
        "zerinho_original" => Ok(zerinho_original()),
        "zerinho_modified" => Ok(zerinho_modified(&positive_param(params, "alpha", name)?)),
        "zerinho_n" => zerinho_n(&positive_param(params, "alpha", name)?, population_param(params, name)?),
        other => Err(Error::UnknownCatalog(other.to_string())),
    }
}

/// Public good game: `a[k] = (k+1)r/N − 1` for a contributor,
/// `b[k] = kr/N` for a defector.
pub fn pgg(r: &Rational, n: usize) -> Result<NPlayerTwoStrategyGame> {
    if !r.is_positive() {
        return Err(Error::InvalidParameter(format!("pgg needs r > 0, got {r}")));
    }
    if n < 2 {
        return Err(Error::InvalidParameter(format!("pgg needs N >= 2, got {n}")));
    }
    let share = r / &Rational::from(n);
    let a = (0..n).map(|k| &(&share * &Rational::from(k + 1)) - &Rational::ONE).collect();
    let b = (0..n).map(|k| &share * &Rational::from(k)).collect();
    NPlayerTwoStrategyGame::new(n, a, b)
}

/// Three-player matching game: 2 for the pair that matches, 0 for the odd
/// one out, 1 when all three match and the round is replayed.
pub fn zerinho_original() -> NPlayerTwoStrategyGame {
    NPlayerTwoStrategyGame::new(3, crate::rational::ints(&[0, 2, 1]), crate::rational::ints(&[1, 2, 0])).expect("N = 3")
}

/// Pairwise-scored variant: `α` per matching pair, averaged.
pub fn zerinho_modified(alpha: &Rational) -> NPlayerTwoStrategyGame {
    let half = alpha * &rat(1, 2);
    NPlayerTwoStrategyGame::new(
        3,
        vec![Rational::ZERO, half.clone(), alpha.clone()],
        vec![alpha.clone(), half, Rational::ZERO],
    )
    .expect("N = 3")
}

/// Unaveraged N-player extension `a[k] = kα`, `b[k] = (N−1−k)α`.
pub fn zerinho_n(alpha: &Rational, n: usize) -> Result<NPlayerTwoStrategyGame> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("zerinho_n needs N >= 2, got {n}")));
    }
    let a = (0..n).map(|k| alpha * &Rational::from(k)).collect();
    let b = (0..n).map(|k| alpha * &Rational::from(n - 1 - k)).collect();
    NPlayerTwoStrategyGame::new(n, a, b)
}
