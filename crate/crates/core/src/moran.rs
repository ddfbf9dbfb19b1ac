//! Frequency-dependent Moran process for symmetric 2×2 games.
//!
//! With `k` A-players in a population of `N`, an A-player meets the other
//! `N−1` individuals and collects `a(k−1) + b(N−k)`; a B-player collects
//! `ck + d(N−k−1)`. The common factor `1/(N−1)` cancels in every ratio, so
//! it is dropped throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::game::BimatrixGame;
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoByTwoPayoff {
    pub a: Rational,
    pub b: Rational,
    pub c: Rational,
    pub d: Rational,
}

impl TwoByTwoPayoff {
    pub fn new(a: Rational, b: Rational, c: Rational, d: Rational) -> Self {
        TwoByTwoPayoff { a, b, c, d }
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Self::new(a.into(), b.into(), c.into(), d.into())
    }

    /// Reads `[[a, b], [c, d]]` off a symmetric 2×2 game.
    pub fn from_game(game: &BimatrixGame) -> Result<Self> {
        if game.n() != 2 || game.m() != 2 || !game.is_symmetric() {
            return Err(Error::Domain("Moran analysis needs a symmetric 2x2 game".into()));
        }
        let a = game.a();
        Ok(Self::new(a[(0, 0)].clone(), a[(0, 1)].clone(), a[(1, 0)].clone(), a[(1, 1)].clone()))
    }

    pub fn scaled(&self, factor: &Rational) -> Self {
        Self::new(&self.a * factor, &self.b * factor, &self.c * factor, &self.d * factor)
    }

    /// Weak-selection payoffs `1 + entry / N`.
    pub fn weak_selection(&self, population: usize) -> Self {
        self.with_intensity(&Rational::from(population).recip())
    }

    /// Payoffs `1 + w · entry`.
    pub fn with_intensity(&self, w: &Rational) -> Self {
        let f = |v: &Rational| &Rational::ONE + &(v * w);
        Self::new(f(&self.a), f(&self.b), f(&self.c), f(&self.d))
    }
}

fn check_population(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!("population size must be at least 2, got {n}")));
    }
    Ok(())
}

/// Total payoffs `(f_A, f_B)` at A-count `k`.
pub fn fitness(p: &TwoByTwoPayoff, k: usize, n: usize) -> (Rational, Rational) {
    let (k_, n_) = (Rational::from(k), Rational::from(n));
    let fa = &(&p.a * &(&k_ - &Rational::ONE)) + &(&p.b * &(&n_ - &k_));
    let fb = &(&p.c * &k_) + &(&p.d * &(&(&n_ - &k_) - &Rational::ONE));
    (fa, fb)
}

/// `ρ_k = (a(k−1) + b(N−k)) / (ck + d(N−k−1))`.
pub fn relative_fitness(p: &TwoByTwoPayoff, k: usize, n: usize) -> Result<Rational> {
    check_population(n)?;
    if k == 0 || k >= n {
        return Err(Error::InvalidParameter(format!("k must lie in 1..={}, got {k}", n - 1)));
    }
    let (fa, fb) = fitness(p, k, n);
    if fb.is_zero() {
        return Err(Error::Domain(format!("relative fitness undefined at k={k}, N={n}: ck + d(N-k-1) = 0")));
    }
    Ok(&fa / &fb)
}

/// `Ψ_N(k) = [(d−b) − (c−a)]k − (d−b)N + d − a`, which equals `f_A − f_B`.
pub fn psi(p: &TwoByTwoPayoff, k: usize, n: usize) -> Rational {
    let (k_, n_) = (Rational::from(k), Rational::from(n));
    let db = &p.d - &p.b;
    let ca = &p.c - &p.a;
    &(&(&(&db - &ca) * &k_) - &(&db * &n_)) + &(&p.d - &p.a)
}

/// Whether an A-player out-earns a B-player at A-count `k` (`ρ_k > 1`).
pub fn exceeds_neutral(p: &TwoByTwoPayoff, k: usize, n: usize) -> bool {
    psi(p, k, n).is_positive()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FixationVector {
    #[serde(rename = "N")]
    pub n: usize,
    /// `F[i]` for initial A-count `i = 0..=N`.
    #[serde(rename = "F")]
    pub f: Vec<Rational>,
}

/// Checks that every interior state has `f_A > 0` and `f_B ≥ 0`, and
/// returns the backward ratios `γ_k = f_B / f_A = 1/ρ_k` for `k = 1..N−1`.
fn backward_ratios(p: &TwoByTwoPayoff, n: usize) -> Result<Vec<Rational>> {
    (1..n)
        .map(|k| {
            let (fa, fb) = fitness(p, k, n);
            if !fa.is_positive() {
                return Err(Error::Domain(format!("A fitness a(k-1) + b(N-k) = {fa} is not positive at k={k}, N={n}")));
            }
            if fb.is_negative() {
                return Err(Error::Domain(format!("B fitness ck + d(N-k-1) = {fb} is negative at k={k}, N={n}")));
            }
            Ok(&fb / &fa)
        })
        .collect()
}

/// Exact fixation probabilities
/// `F_i = Σ_{j=1}^{i} Π_{k=1}^{j−1} ρ_k⁻¹ / Σ_{j=1}^{N} Π_{k=1}^{j−1} ρ_k⁻¹`.
///
/// The `j = 1` term is the empty product. A B fitness of zero is allowed
/// (`ρ_k⁻¹ = 0`); the A fitness must be positive.
pub fn fixation_probabilities(p: &TwoByTwoPayoff, n: usize) -> Result<FixationVector> {
    check_population(n)?;
    let gammas = backward_ratios(p, n)?;
    let mut terms = Vec::with_capacity(n);
    let mut prod = Rational::ONE;
    terms.push(prod.clone());
    for g in &gammas {
        prod *= g;
        terms.push(prod.clone());
    }
    let total: Rational = terms.iter().sum();
    let mut f = Vec::with_capacity(n + 1);
    let mut acc = Rational::ZERO;
    f.push(Rational::ZERO);
    for t in &terms {
        acc += t;
        f.push(&acc / &total);
    }
    Ok(FixationVector { n, f })
}

/// Birth-death transition probabilities `(T⁺, T⁻)` at A-count `k`:
/// one uniformly chosen individual dies and is replaced by the offspring of
/// an individual chosen with probability proportional to fitness.
pub fn transition_probabilities(p: &TwoByTwoPayoff, k: usize, n: usize) -> (Rational, Rational) {
    let (fa, fb) = fitness(p, k, n);
    let (k_, n_) = (Rational::from(k), Rational::from(n));
    let nk = &n_ - &k_;
    let total = &(&k_ * &fa) + &(&nk * &fb);
    let up = &(&(&k_ * &fa) / &total) * &(&nk / &n_);
    let down = &(&(&nk * &fb) / &total) * &(&k_ / &n_);
    (up, down)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CriticalSizes {
    #[serde(rename = "N_inf")]
    pub n_inf: Rational,
    #[serde(rename = "N_sup")]
    pub n_sup: Rational,
}

/// Population sizes below which A beats neutral fixation from every start,
/// and above which it loses: the min and max of `(d−a)/(d−b)` and
/// `(d−a)/(c−a)`. Requires `a, b, c, d > 0` and `d > b > c > a`.
pub fn critical_sizes(p: &TwoByTwoPayoff) -> Result<CriticalSizes> {
    for (name, v) in [("a", &p.a), ("b", &p.b), ("c", &p.c), ("d", &p.d)] {
        if !v.is_positive() {
            return Err(Error::Domain(format!("{name} > 0 fails ({name} = {v})")));
        }
    }
    if p.c <= p.a {
        return Err(Error::Domain(format!("c > a fails (B must dominate A): c = {}, a = {}", p.c, p.a)));
    }
    if p.d <= p.b {
        return Err(Error::Domain(format!("d > b fails (B must dominate A): d = {}, b = {}", p.d, p.b)));
    }
    if p.b <= p.c {
        return Err(Error::Domain(format!("b > c fails (A must be strictly insuperable): b = {}, c = {}", p.b, p.c)));
    }
    let da = &p.d - &p.a;
    let x = &da / &(&p.d - &p.b);
    let y = &da / &(&p.c - &p.a);
    Ok(CriticalSizes { n_inf: x.clone().min(y.clone()), n_sup: x.max(y) })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "F1")]
    pub f1: Option<Rational>,
    pub neutral: Rational,
    /// Sign of `F_1 − 1/N`.
    pub delta_sign: Option<i32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeakSelectionScan {
    pub rows: Vec<ScanRow>,
    /// Last `N` of the initial run with `F_1(N) > 1/N`.
    #[serde(rename = "N_c")]
    pub n_c: Option<usize>,
}

/// How strongly the game payoffs enter fitness `1 + w · payoff` in a scan.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SelectionIntensity {
    /// `w = 1/N` at each population size.
    PerPopulation,
    /// The same `w` at every population size.
    Fixed(Rational),
}

impl SelectionIntensity {
    pub fn at(&self, n: usize) -> Rational {
        match self {
            SelectionIntensity::PerPopulation => Rational::from(n).recip(),
            SelectionIntensity::Fixed(w) => w.clone(),
        }
    }
}

/// Invasion probability of a single A-mutant under the weak-selection
/// payoffs `1 + base/N`, for `N = 2..=n_max`.
pub fn weak_selection_scan(base: &TwoByTwoPayoff, n_max: usize) -> Result<WeakSelectionScan> {
    weak_selection_scan_with(base, n_max, &SelectionIntensity::PerPopulation)
}

pub fn weak_selection_scan_with(
    base: &TwoByTwoPayoff,
    n_max: usize,
    intensity: &SelectionIntensity,
) -> Result<WeakSelectionScan> {
    check_population(n_max)?;
    let mut rows = Vec::with_capacity(n_max - 1);
    for n in 2..=n_max {
        let neutral = Rational::from(n).recip();
        let row = match fixation_probabilities(&base.with_intensity(&intensity.at(n)), n) {
            Ok(fv) => {
                let f1 = fv.f[1].clone();
                ScanRow { n, delta_sign: Some((&f1 - &neutral).signum()), f1: Some(f1), neutral, error: None }
            }
            Err(e) => ScanRow { n, f1: None, neutral, delta_sign: None, error: Some(e.to_string()) },
        };
        rows.push(row);
    }
    let n_c = rows.iter().take_while(|r| r.delta_sign == Some(1)).last().map(|r| r.n);
    Ok(WeakSelectionScan { rows, n_c })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;

    #[test]
    fn relative_fitness_examples() {
        let neutral = TwoByTwoPayoff::from_ints(1, 1, 1, 1);
        for n in 2..8 {
            for k in 1..n {
                assert_eq!(relative_fitness(&neutral, k, n).unwrap(), Rational::ONE);
            }
        }
        assert_eq!(relative_fitness(&TwoByTwoPayoff::from_ints(1, 3, 2, 4), 1, 2).unwrap(), rat(3, 2));
        assert!(relative_fitness(&TwoByTwoPayoff::from_ints(1, 1, 0, 0), 1, 2).is_err());
        assert!(relative_fitness(&neutral, 0, 4).is_err());
    }

    #[test]
    fn psi_matches_fitness_difference() {
        let p = TwoByTwoPayoff::new(rat(1, 3), Rational::from(5), rat(-2, 7), Rational::from(4));
        for n in 2..9 {
            for k in 1..n {
                let (fa, fb) = fitness(&p, k, n);
                assert_eq!(psi(&p, k, n), &fa - &fb);
            }
        }
    }

    #[test]
    fn n2_closed_form_and_hawk_dove() {
        let p = TwoByTwoPayoff::from_ints(7, 2, 5, -1);
        assert_eq!(fixation_probabilities(&p, 2).unwrap().f[1], rat(2, 7));
        let hd = TwoByTwoPayoff::new(rat(-7, 2), Rational::from(3), Rational::ZERO, rat(3, 2));
        assert_eq!(fixation_probabilities(&hd, 2).unwrap().f[1], Rational::ONE);
    }

    #[test]
    fn neutral_is_linear() {
        let fv = fixation_probabilities(&TwoByTwoPayoff::from_ints(2, 2, 2, 2), 10).unwrap();
        for i in 0..=10 {
            assert_eq!(fv.f[i], rat(i as i64, 10));
        }
    }

    #[test]
    fn critical_examples() {
        let c = critical_sizes(&TwoByTwoPayoff::from_ints(1, 3, 2, 4)).unwrap();
        assert_eq!((c.n_inf, c.n_sup), (Rational::from(3), Rational::from(3)));
        let c = critical_sizes(&TwoByTwoPayoff::from_ints(1, 3, 2, 6)).unwrap();
        assert_eq!((c.n_inf, c.n_sup), (rat(5, 3), Rational::from(5)));
        let e = critical_sizes(&TwoByTwoPayoff::from_ints(1, 2, 3, 4)).unwrap_err();
        assert!(e.to_string().contains("b > c"));
    }

    #[test]
    fn nonpositive_fitness_rejected() {
        assert!(fixation_probabilities(&TwoByTwoPayoff::from_ints(0, 0, 1, 1), 3).is_err());
        assert!(fixation_probabilities(&TwoByTwoPayoff::from_ints(1, 1, -5, 1), 3).is_err());
        assert!(fixation_probabilities(&TwoByTwoPayoff::from_ints(1, 1, 1, 1), 1).is_err());
    }

    #[test]
    fn zero_base_scan_is_neutral() {
        let s = weak_selection_scan(&TwoByTwoPayoff::from_ints(0, 0, 0, 0), 12).unwrap();
        assert!(s.rows.iter().all(|r| r.f1.as_ref() == Some(&r.neutral) && r.delta_sign == Some(0)));
        assert_eq!(s.n_c, None);
    }
}
