//! Seeded stochastic engines: the ultimatum tournament and Monte-Carlo runs
//! of the Moran process.
//!
//! Randomness comes from ChaCha8 (a counter-based stream cipher generator):
//! a `u64` seed is expanded to the 256-bit key by `SeedableRng::seed_from_u64`
//! and independent replicates use distinct stream numbers, so results do not
//! depend on the order in which replicates are run.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::moran::{fitness, fixation_probabilities, TwoByTwoPayoff};

/// How the two drawn individuals play each encounter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoleMode {
    /// The first-drawn individual donates, the second receives.
    #[default]
    SingleRole,
    /// Both orderings are played and payoffs summed.
    BothRoles,
}

/// Range of acceptance thresholds `m'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThresholdRange {
    /// `m' ∈ 0..=M+1`, including "accept everything" and "reject everything".
    #[default]
    Full,
    /// `m' ∈ 1..=M`.
    Interior,
}

impl ThresholdRange {
    pub fn thresholds(self, max_offer: usize) -> std::ops::RangeInclusive<usize> {
        match self {
            ThresholdRange::Full => 0..=max_offer + 1,
            ThresholdRange::Interior => 1..=max_offer,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UltimatumConfig {
    #[serde(rename = "M")]
    pub max_offer: usize,
    pub copies_per_strategy: usize,
    pub steps: u64,
    pub seed: u64,
    /// Snapshot interval in steps; 0 records only the first and last state.
    pub snapshot_every: u64,
    #[serde(default)]
    pub role_mode: RoleMode,
    #[serde(default)]
    pub thresholds: ThresholdRange,
}

impl UltimatumConfig {
    pub fn new(max_offer: usize, copies_per_strategy: usize, steps: u64, seed: u64) -> Self {
        UltimatumConfig {
            max_offer,
            copies_per_strategy,
            steps,
            seed,
            snapshot_every: 0,
            role_mode: RoleMode::default(),
            thresholds: ThresholdRange::default(),
        }
    }

    pub fn offers(&self) -> usize {
        self.max_offer + 1
    }

    pub fn threshold_values(&self) -> Vec<usize> {
        self.thresholds.thresholds(self.max_offer).collect()
    }

    pub fn population(&self) -> usize {
        self.offers() * self.threshold_values().len() * self.copies_per_strategy
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Snapshot {
    pub step: u64,
    /// `counts[m][t]` for offer `m` and the `t`-th threshold value.
    pub counts: Vec<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    /// Every encounter between the remaining strategies is a tie, so no
    /// strategist can be beaten any more.
    NoBeatableStrategist,
    StepBudget,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TournamentTrace {
    pub config: UltimatumConfig,
    pub rng_seed: u64,
    pub thresholds: Vec<usize>,
    pub snapshots: Vec<Snapshot>,
    pub stop_reason: StopReason,
    pub steps_run: u64,
}

impl TournamentTrace {
    pub fn last(&self) -> &Snapshot {
        self.snapshots.last().expect("at least the initial snapshot")
    }

    /// Strategies `(m, m')` present in the final snapshot.
    pub fn survivors(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (m, row) in self.last().counts.iter().enumerate() {
            for (t, &c) in row.iter().enumerate() {
                if c > 0 {
                    out.push((m, self.thresholds[t]));
                }
            }
        }
        out
    }

    /// Every survivor satisfies `m ≤ M/2 ≤ m'`.
    pub fn survivors_within_bounds(&self) -> bool {
        let big_m = self.config.max_offer;
        self.survivors().iter().all(|&(m, t)| 2 * m <= big_m && big_m <= 2 * t)
    }

    /// CSV with header `step,m,m_prime,count`, one row per class per snapshot.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,m,m_prime,count\n");
        for snap in &self.snapshots {
            for (m, row) in snap.counts.iter().enumerate() {
                for (t, c) in row.iter().enumerate() {
                    writeln!(s, "{},{},{},{}", snap.step, m, self.thresholds[t], c).expect("string write");
                }
            }
        }
        s
    }
}

/// Payoffs `(donor, receiver)` of one ultimatum encounter.
fn encounter(max_offer: usize, offer: usize, threshold: usize) -> (u64, u64) {
    if offer >= threshold {
        ((max_offer - offer) as u64, offer as u64)
    } else {
        (0, 0)
    }
}

/// Payoffs of the first and second drawn strategist.
fn play(cfg: &UltimatumConfig, first: (usize, usize), second: (usize, usize)) -> (u64, u64) {
    let (d1, r1) = encounter(cfg.max_offer, first.0, second.1);
    match cfg.role_mode {
        RoleMode::SingleRole => (d1, r1),
        RoleMode::BothRoles => {
            let (d2, r2) = encounter(cfg.max_offer, second.0, first.1);
            (d1 + r2, r1 + d2)
        }
    }
}

/// Runs the tournament: each step draws two distinct individuals, the
/// higher earner's strategy overwrites the other's, and ties go to a fair
/// coin.
pub fn ultimatum_tournament(cfg: &UltimatumConfig) -> Result<TournamentTrace> {
    if cfg.max_offer < 1 {
        return Err(Error::InvalidParameter("M must be at least 1".into()));
    }
    let thresholds = cfg.threshold_values();
    let nt = thresholds.len();
    let classes: Vec<(usize, usize)> =
        (0..cfg.offers()).flat_map(|m| thresholds.iter().map(move |&t| (m, t))).collect();
    let population = cfg.population();
    if population < 2 {
        return Err(Error::InvalidParameter(format!("population must be at least 2, got {population}")));
    }
    let mut agents: Vec<usize> =
        (0..classes.len()).flat_map(|c| std::iter::repeat_n(c, cfg.copies_per_strategy)).collect();
    let mut counts = vec![cfg.copies_per_strategy as u64; classes.len()];
    let snapshot =
        |step: u64, counts: &[u64]| Snapshot { step, counts: counts.chunks(nt).map(<[u64]>::to_vec).collect() };

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut snapshots = vec![snapshot(0, &counts)];
    let check_every = population as u64;
    let mut step = 0;
    let mut stop_reason = StopReason::StepBudget;
    while step < cfg.steps {
        if step % check_every == 0 && quiescent(cfg, &classes, &counts) {
            stop_reason = StopReason::NoBeatableStrategist;
            break;
        }
        let i = rng.random_range(0..population);
        let mut j = rng.random_range(0..population - 1);
        if j >= i {
            j += 1;
        }
        let (pi, pj) = play(cfg, classes[agents[i]], classes[agents[j]]);
        let (winner, loser) = match pi.cmp(&pj) {
            std::cmp::Ordering::Greater => (i, j),
            std::cmp::Ordering::Less => (j, i),
            std::cmp::Ordering::Equal => {
                if rng.random_bool(0.5) {
                    (i, j)
                } else {
                    (j, i)
                }
            }
        };
        counts[agents[loser]] -= 1;
        counts[agents[winner]] += 1;
        agents[loser] = agents[winner];
        step += 1;
        if cfg.snapshot_every > 0 && step % cfg.snapshot_every == 0 {
            snapshots.push(snapshot(step, &counts));
        }
    }
    if stop_reason == StopReason::StepBudget && step > 0 && quiescent(cfg, &classes, &counts) {
        stop_reason = StopReason::NoBeatableStrategist;
    }
    if snapshots.last().map(|s| s.step) != Some(step) {
        snapshots.push(snapshot(step, &counts));
    }
    Ok(TournamentTrace { config: cfg.clone(), rng_seed: cfg.seed, thresholds, snapshots, stop_reason, steps_run: step })
}

/// Whether every ordered encounter between present classes (including a
/// class with itself when it has two members) is a tie.
fn quiescent(cfg: &UltimatumConfig, classes: &[(usize, usize)], counts: &[u64]) -> bool {
    let present: Vec<usize> = (0..classes.len()).filter(|&c| counts[c] > 0).collect();
    present.iter().all(|&x| {
        present.iter().all(|&y| {
            if x == y && counts[x] < 2 {
                return true;
            }
            let (p, q) = play(cfg, classes[x], classes[y]);
            p == q
        })
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MonteCarloEstimate {
    pub rate: f64,
    pub se: f64,
    pub replicates: u64,
    pub seed: u64,
}

/// Fraction of `replicates` independent Moran runs from `i0` A-players that
/// end with A fixed, with the binomial standard error. Replicate `r` draws
/// from stream `r` of the seeded generator.
pub fn moran_monte_carlo(
    p: &TwoByTwoPayoff,
    n: usize,
    i0: usize,
    replicates: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    if i0 > n {
        return Err(Error::InvalidParameter(format!("i0 = {i0} exceeds N = {n}")));
    }
    if replicates == 0 {
        return Err(Error::InvalidParameter("at least one replicate is needed".into()));
    }
    // Rejects non-positive fitness with the same rule as the exact solver.
    fixation_probabilities(p, n)?;
    let fit: Vec<(f64, f64)> = (0..=n)
        .map(|k| {
            if k == 0 || k == n {
                (0.0, 0.0)
            } else {
                let (fa, fb) = fitness(p, k, n);
                (fa.to_f64(), fb.to_f64())
            }
        })
        .collect();
    let nf = n as f64;
    let mut fixed = 0u64;
    for r in 0..replicates {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(r);
        let mut k = i0;
        while k != 0 && k != n {
            let (fa, fb) = fit[k];
            let kf = k as f64;
            let total = kf * fa + (nf - kf) * fb;
            let a_reproduces = rng.random::<f64>() * total < kf * fa;
            let a_dies = rng.random_range(0..n) < k;
            match (a_reproduces, a_dies) {
                (true, false) => k += 1,
                (false, true) => k -= 1,
                _ => {}
            }
        }
        if k == n {
            fixed += 1;
        }
    }
    let rate = fixed as f64 / replicates as f64;
    let se = (rate * (1.0 - rate) / replicates as f64).sqrt();
    Ok(MonteCarloEstimate { rate, se, replicates, seed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_steps_is_homogeneous() {
        let cfg = UltimatumConfig::new(6, 3, 0, 1);
        let t = ultimatum_tournament(&cfg).unwrap();
        assert_eq!(t.snapshots.len(), 1);
        assert!(t.last().counts.iter().flatten().all(|&c| c == 3));
        assert_eq!(t.last().counts.len(), 7);
        assert_eq!(t.last().counts[0].len(), 8);
        assert_eq!(t.stop_reason, StopReason::StepBudget);
    }

    #[test]
    fn interior_thresholds_match_caption_grid() {
        let mut cfg = UltimatumConfig::new(20, 100, 0, 1);
        cfg.thresholds = ThresholdRange::Interior;
        assert_eq!(cfg.population(), 21 * 20 * 100);
    }

    #[test]
    fn encounter_payoffs() {
        assert_eq!(encounter(10, 3, 3), (7, 3));
        assert_eq!(encounter(10, 3, 4), (0, 0));
        let mut cfg = UltimatumConfig::new(10, 1, 0, 0);
        cfg.role_mode = RoleMode::BothRoles;
        assert_eq!(play(&cfg, (3, 0), (6, 11)), (6, 4));
        assert_eq!(play(&cfg, (3, 0), (6, 3)), (7 + 6, 3 + 4));
    }

    #[test]
    fn errors() {
        assert!(ultimatum_tournament(&UltimatumConfig::new(0, 5, 10, 1)).is_err());
        assert!(ultimatum_tournament(&UltimatumConfig::new(2, 0, 10, 1)).is_err());
        let p = TwoByTwoPayoff::from_ints(1, 1, 1, 1);
        assert!(moran_monte_carlo(&p, 4, 5, 10, 0).is_err());
        assert!(moran_monte_carlo(&p, 4, 1, 0, 0).is_err());
        assert!(moran_monte_carlo(&TwoByTwoPayoff::from_ints(-1, -1, 1, 1), 4, 1, 10, 0).is_err());
    }

    #[test]
    fn absorbing_starts() {
        let p = TwoByTwoPayoff::from_ints(1, 3, 2, 4);
        assert_eq!(moran_monte_carlo(&p, 5, 0, 50, 3).unwrap().rate, 0.0);
        assert_eq!(moran_monte_carlo(&p, 5, 5, 50, 3).unwrap().rate, 1.0);
    }
}
