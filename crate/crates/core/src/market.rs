//! One-period conical markets: `m` assets, `n` states, cash flows `D`
//! (m×n) paid at time 1 and prices `p` at time 0. Portfolios are long-only.
//!
//! As a game the trader (A) picks a portfolio over assets and the market
//! (B) picks a state, so the net payoff matrix is `L = Dᵀ` and `L θ` is the
//! portfolio's payoff in each state.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::NetPayoffMatrix;
use crate::insuperability::{zero_sum_value, ValueSign};
use crate::linprog::{LinearProgram, LpOutcome, Sense};
use crate::matrix::{dot, Matrix};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OnePeriodMarket {
    #[serde(rename = "D")]
    d: Matrix,
    p: Vec<Rational>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct MarketFile {
    #[serde(rename = "D")]
    d: Vec<Vec<Rational>>,
    p: Vec<Rational>,
}

impl<'de> Deserialize<'de> for OnePeriodMarket {
    fn deserialize<De: serde::Deserializer<'de>>(de: De) -> std::result::Result<Self, De::Error> {
        let f = MarketFile::deserialize(de)?;
        let d = Matrix::from_rows(f.d).map_err(serde::de::Error::custom)?;
        OnePeriodMarket::new(d, f.p).map_err(serde::de::Error::custom)
    }
}

impl OnePeriodMarket {
    pub fn new(d: Matrix, p: Vec<Rational>) -> Result<Self> {
        if d.rows() == 0 || d.cols() == 0 {
            return Err(Error::Dimension("a market needs at least one asset and one state".into()));
        }
        if p.len() != d.rows() {
            return Err(Error::Dimension(format!("{} prices for {} assets", p.len(), d.rows())));
        }
        Ok(OnePeriodMarket { d, p })
    }

    pub fn cash_flows(&self) -> &Matrix {
        &self.d
    }

    pub fn prices(&self) -> &[Rational] {
        &self.p
    }

    pub fn assets(&self) -> usize {
        self.d.rows()
    }

    pub fn states(&self) -> usize {
        self.d.cols()
    }

    /// `θᵀD`, the portfolio's payoff in each state.
    pub fn payoff(&self, theta: &[Rational]) -> Vec<Rational> {
        self.d.vec_mul(theta).expect("portfolio length")
    }

    pub fn cost(&self, theta: &[Rational]) -> Rational {
        dot(theta, &self.p)
    }

    pub fn net_payoff(&self) -> NetPayoffMatrix {
        NetPayoffMatrix::new(self.d.transpose())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Portfolio {
    pub theta: Vec<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StatePriceVector {
    pub pi: Vec<Rational>,
}

impl StatePriceVector {
    /// `π ≫ 0` and `Dπ = p`, exactly.
    pub fn verify(&self, mkt: &OnePeriodMarket) -> bool {
        self.pi.len() == mkt.states()
            && self.pi.iter().all(Rational::is_positive)
            && mkt.d.mul_vec(&self.pi).map(|v| v == mkt.p).unwrap_or(false)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ArbitrageKind {
    GainAtZeroCost,
    NegativeCostNoDownside,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Arbitrage {
    pub portfolio: Portfolio,
    pub kind: ArbitrageKind,
    pub payoff: Vec<Rational>,
    pub cost: Rational,
}

impl Arbitrage {
    /// Re-checks the defining inequalities of `kind` on the market.
    pub fn verify(&self, mkt: &OnePeriodMarket) -> bool {
        let theta = &self.portfolio.theta;
        if theta.len() != mkt.assets() || theta.iter().any(Rational::is_negative) {
            return false;
        }
        let pay = mkt.payoff(theta);
        let cost = mkt.cost(theta);
        let no_downside = pay.iter().all(|v| !v.is_negative());
        no_downside
            && pay == self.payoff
            && cost == self.cost
            && match self.kind {
                ArbitrageKind::GainAtZeroCost => pay.iter().any(Rational::is_positive) && !cost.is_positive(),
                ArbitrageKind::NegativeCostNoDownside => cost.is_negative(),
            }
    }
}

/// Portfolio simplex plus `θᵀD ≥ 0`; variables are `θ`.
fn no_downside_program(mkt: &OnePeriodMarket, objective: Vec<Rational>, minimize: bool) -> LinearProgram {
    let mut lp = if minimize { LinearProgram::minimize(objective) } else { LinearProgram::maximize(objective) };
    for j in 0..mkt.states() {
        lp.constrain(mkt.d.column(j), Sense::Ge, Rational::ZERO);
    }
    lp.constrain(vec![Rational::ONE; mkt.assets()], Sense::Eq, Rational::ONE);
    lp
}

/// Max-min state prices: `max t` s.t. `Dπ = p`, `π ≥ t𝟙`, `π ≥ 0`.
/// When `t` is unbounded the program is re-solved with `t ≤ 1`.
pub fn find_state_price_vector(mkt: &OnePeriodMarket) -> Option<StatePriceVector> {
    let n = mkt.states();
    let build = |cap: bool| {
        let mut obj = vec![Rational::ZERO; n + 1];
        obj[n] = Rational::ONE;
        let mut lp = LinearProgram::maximize(obj);
        lp.free(n);
        for (i, row) in mkt.d.iter_rows().enumerate() {
            let mut r = row.to_vec();
            r.push(Rational::ZERO);
            lp.constrain(r, Sense::Eq, mkt.p[i].clone());
        }
        for j in 0..n {
            let mut r = vec![Rational::ZERO; n + 1];
            r[j] = Rational::ONE;
            r[n] = -Rational::ONE;
            lp.constrain(r, Sense::Ge, Rational::ZERO);
        }
        if cap {
            let mut r = vec![Rational::ZERO; n + 1];
            r[n] = Rational::ONE;
            lp.constrain(r, Sense::Le, Rational::ONE);
        }
        lp
    };
    let outcome = match build(false).solve() {
        LpOutcome::Unbounded { .. } => build(true).solve(),
        other => other,
    };
    match outcome {
        LpOutcome::Optimal { value, solution, .. } if value.is_positive() => {
            Some(StatePriceVector { pi: solution[..n].to_vec() })
        }
        _ => None,
    }
}

/// Searches the long-only cone (normalized to `Σθ = 1`) for a negative-cost
/// portfolio without downside, then for a free gain at nonpositive cost.
pub fn find_arbitrage(mkt: &OnePeriodMarket) -> Option<Arbitrage> {
    let make = |theta: Vec<Rational>, kind| Arbitrage {
        payoff: mkt.payoff(&theta),
        cost: mkt.cost(&theta),
        portfolio: Portfolio { theta },
        kind,
    };
    if let LpOutcome::Optimal { value, solution, .. } = no_downside_program(mkt, mkt.p.clone(), true).solve() {
        // `value` is the maximum of −θ·p.
        if value.is_positive() {
            return Some(make(solution, ArbitrageKind::NegativeCostNoDownside));
        }
    }
    let total: Vec<Rational> = mkt.d.iter_rows().map(|r| r.iter().sum()).collect();
    let mut lp = no_downside_program(mkt, total, false);
    lp.constrain(mkt.p.clone(), Sense::Le, Rational::ZERO);
    match lp.solve() {
        LpOutcome::Optimal { value, solution, .. } if value.is_positive() => {
            Some(make(solution, ArbitrageKind::GainAtZeroCost))
        }
        _ => None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrivialOutcomeReport {
    pub value: Rational,
    pub value_sign: ValueSign,
    pub no_strict_insuperable: bool,
    pub all_insuperable_trivial: bool,
    pub verdict_no_arbitrage: bool,
    /// An insuperable portfolio with a nonzero payoff, when one exists.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nontrivial_witness: Option<Portfolio>,
    /// Whether `p = −D y` for some `y ≥ 0`, the price form under which the
    /// market player is a relaxed state price vector.
    pub price_structured: bool,
}

/// Decides whether every insuperable trader portfolio has `Dᵀθ = 0`: by the
/// value sign, and at value zero by maximizing each state's payoff over the
/// insuperable portfolios.
pub fn trivial_outcome_check(mkt: &OnePeriodMarket) -> TrivialOutcomeReport {
    let game = zero_sum_value(&mkt.net_payoff());
    let sign = ValueSign::of(&game.value);
    let witness = match sign {
        ValueSign::Negative => None,
        ValueSign::Positive => Some(game.maximin_x.weights().to_vec()),
        ValueSign::Zero => {
            (0..mkt.states()).find_map(|j| match no_downside_program(mkt, mkt.d.column(j), false).solve() {
                LpOutcome::Optimal { value, solution, .. } if value.is_positive() => Some(solution),
                _ => None,
            })
        }
    };
    let trivial = witness.is_none();
    TrivialOutcomeReport {
        value: game.value,
        value_sign: sign,
        no_strict_insuperable: sign != ValueSign::Positive,
        all_insuperable_trivial: trivial,
        verdict_no_arbitrage: trivial,
        nontrivial_witness: witness.map(|theta| Portfolio { theta }),
        price_structured: price_is_structured(mkt),
    }
}

/// Feasibility of `D y = −p`, `y ≥ 0`.
pub fn price_is_structured(mkt: &OnePeriodMarket) -> bool {
    let mut lp = LinearProgram::maximize(vec![Rational::ZERO; mkt.states()]);
    for (i, row) in mkt.d.iter_rows().enumerate() {
        lp.constrain(row.to_vec(), Sense::Eq, -&mkt.p[i]);
    }
    !matches!(lp.solve(), LpOutcome::Infeasible { .. })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MarketAnalysis {
    pub state_price_vector: Option<StatePriceVector>,
    pub arbitrage: Option<Arbitrage>,
    pub theorem: TrivialOutcomeReport,
    /// `verdict_no_arbitrage` agrees with the arbitrage search.
    pub theorem_agrees: bool,
}

pub fn analyze_market(mkt: &OnePeriodMarket) -> MarketAnalysis {
    let arbitrage = find_arbitrage(mkt);
    let theorem = trivial_outcome_check(mkt);
    MarketAnalysis {
        state_price_vector: find_state_price_vector(mkt),
        theorem_agrees: theorem.verdict_no_arbitrage == arbitrage.is_none(),
        arbitrage,
        theorem,
    }
}
