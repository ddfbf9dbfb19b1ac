//! Two-player normal-form games with exact payoffs.
//!
//! Player A has `n` pure strategies and payoff matrix `A` (n×m); player B
//! has `m` pure strategies and payoff matrix `B` (m×n). Both matrices are
//! indexed by the owner's strategy first.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{dot, Matrix};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Player {
    A,
    B,
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::A => write!(f, "A"),
            Player::B => write!(f, "B"),
        }
    }
}

/// A point of the probability simplex.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct MixedStrategy(Vec<Rational>);

impl MixedStrategy {
    pub fn new(weights: Vec<Rational>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::Dimension("empty strategy".into()));
        }
        if let Some(w) = weights.iter().find(|w| w.is_negative()) {
            return Err(Error::Domain(format!("negative strategy weight {w}")));
        }
        let total: Rational = weights.iter().sum();
        if total != Rational::ONE {
            return Err(Error::Domain(format!("strategy weights sum to {total}, not 1")));
        }
        Ok(MixedStrategy(weights))
    }

    /// Rescales a nonnegative, nonzero vector onto the simplex.
    pub fn normalized(weights: Vec<Rational>) -> Result<Self> {
        let total: Rational = weights.iter().sum();
        if !total.is_positive() || weights.iter().any(Rational::is_negative) {
            return Err(Error::Domain("cannot normalize a vector that is not > 0".into()));
        }
        Ok(MixedStrategy(weights.iter().map(|w| w / &total).collect()))
    }

    /// The pure strategy `e_i` in dimension `dim`.
    pub fn pure(dim: usize, i: usize) -> Self {
        assert!(i < dim, "pure strategy {i} out of range for dimension {dim}");
        let mut w = vec![Rational::ZERO; dim];
        w[i] = Rational::ONE;
        MixedStrategy(w)
    }

    pub fn uniform(dim: usize) -> Self {
        assert!(dim > 0);
        MixedStrategy(vec![Rational::new(1, dim as i64); dim])
    }

    pub fn weights(&self) -> &[Rational] {
        &self.0
    }

    pub fn into_weights(self) -> Vec<Rational> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn support(&self) -> Vec<usize> {
        (0..self.0.len()).filter(|&i| !self.0[i].is_zero()).collect()
    }

    /// `Some(i)` when this is the pure strategy `e_i`.
    pub fn as_pure(&self) -> Option<usize> {
        match self.support().as_slice() {
            [i] => Some(*i),
            _ => None,
        }
    }
}

impl<'de> Deserialize<'de> for MixedStrategy {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let w = Vec::<Rational>::deserialize(d)?;
        MixedStrategy::new(w).map_err(serde::de::Error::custom)
    }
}

impl fmt::Display for MixedStrategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, w) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{w}")?;
        }
        write!(f, ")")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BimatrixGame {
    #[serde(rename = "A")]
    a: Matrix,
    #[serde(rename = "B")]
    b: Matrix,
    #[serde(rename = "labels_A", skip_serializing_if = "Option::is_none")]
    labels_a: Option<Vec<String>>,
    #[serde(rename = "labels_B", skip_serializing_if = "Option::is_none")]
    labels_b: Option<Vec<String>>,
    #[serde(skip)]
    symmetric: bool,
}

impl BimatrixGame {
    /// Validates shapes (`A` is n×m, `B` is m×n) and records symmetry.
    pub fn new(a: Matrix, b: Matrix) -> Result<Self> {
        if b.shape() != (a.cols(), a.rows()) {
            return Err(Error::Dimension(format!(
                "A is {}x{} so B must be {}x{}, got {}x{}",
                a.rows(),
                a.cols(),
                a.cols(),
                a.rows(),
                b.rows(),
                b.cols()
            )));
        }
        let symmetric = a.rows() == a.cols() && a == b;
        Ok(BimatrixGame { a, b, labels_a: None, labels_b: None, symmetric })
    }

    pub fn symmetric(a: Matrix) -> Result<Self> {
        Self::new(a.clone(), a)
    }

    pub fn with_labels(mut self, labels_a: Vec<String>, labels_b: Vec<String>) -> Result<Self> {
        if labels_a.len() != self.n() || labels_b.len() != self.m() {
            return Err(Error::Dimension(format!(
                "expected {} and {} labels, got {} and {}",
                self.n(),
                self.m(),
                labels_a.len(),
                labels_b.len()
            )));
        }
        self.labels_a = Some(labels_a);
        self.labels_b = Some(labels_b);
        Ok(self)
    }

    pub fn a(&self) -> &Matrix {
        &self.a
    }

    pub fn b(&self) -> &Matrix {
        &self.b
    }

    /// Number of pure strategies of player A.
    pub fn n(&self) -> usize {
        self.a.rows()
    }

    /// Number of pure strategies of player B.
    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub fn dim(&self, player: Player) -> usize {
        match player {
            Player::A => self.n(),
            Player::B => self.m(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn labels(&self, player: Player) -> Option<&[String]> {
        match player {
            Player::A => self.labels_a.as_deref(),
            Player::B => self.labels_b.as_deref(),
        }
    }

    /// Name of pure strategy `i`, falling back to `e{i+1}`.
    pub fn label(&self, player: Player, i: usize) -> String {
        self.labels(player).and_then(|l| l.get(i).cloned()).unwrap_or_else(|| format!("e{}", i + 1))
    }

    /// `L = Aᵀ − B`.
    pub fn net_payoff(&self) -> NetPayoffMatrix {
        NetPayoffMatrix(self.a.transpose().sub(&self.b).expect("shapes validated at construction"))
    }

    /// `(xᵀ A y, yᵀ B x)`.
    pub fn payoffs(&self, x: &MixedStrategy, y: &MixedStrategy) -> Result<(Rational, Rational)> {
        if x.dim() != self.n() || y.dim() != self.m() {
            return Err(Error::Dimension(format!(
                "strategies of length {} and {} for a {}x{} game",
                x.dim(),
                y.dim(),
                self.n(),
                self.m()
            )));
        }
        let pa = dot(x.weights(), &self.a.mul_vec(y.weights())?);
        let pb = dot(y.weights(), &self.b.mul_vec(x.weights())?);
        Ok((pa, pb))
    }

    /// Multiplies both payoff matrices by `factor`.
    pub fn scaled(&self, factor: &Rational) -> BimatrixGame {
        let mut g = BimatrixGame::new(self.a.map(|v| v * factor), self.b.map(|v| v * factor))
            .expect("scaling preserves shapes");
        g.labels_a = self.labels_a.clone();
        g.labels_b = self.labels_b.clone();
        g
    }
}

/// The on-disk JSON form of a game.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GameFile {
    #[serde(rename = "A")]
    pub a: Matrix,
    #[serde(rename = "B")]
    pub b: Matrix,
    #[serde(rename = "labels_A", default, skip_serializing_if = "Option::is_none")]
    pub labels_a: Option<Vec<String>>,
    #[serde(rename = "labels_B", default, skip_serializing_if = "Option::is_none")]
    pub labels_b: Option<Vec<String>>,
}

impl TryFrom<GameFile> for BimatrixGame {
    type Error = Error;
    fn try_from(f: GameFile) -> Result<Self> {
        let g = BimatrixGame::new(f.a, f.b)?;
        match (f.labels_a, f.labels_b) {
            (None, None) => Ok(g),
            (la, lb) => {
                let la = la.unwrap_or_else(|| (0..g.n()).map(|i| format!("e{}", i + 1)).collect());
                let lb = lb.unwrap_or_else(|| (0..g.m()).map(|i| format!("e{}", i + 1)).collect());
                g.with_labels(la, lb)
            }
        }
    }
}

impl From<&BimatrixGame> for GameFile {
    fn from(g: &BimatrixGame) -> Self {
        GameFile { a: g.a.clone(), b: g.b.clone(), labels_a: g.labels_a.clone(), labels_b: g.labels_b.clone() }
    }
}

/// `L = Aᵀ − B` (m×n). For A's strategy `x`, `(L x)_j` is A's payoff minus
/// B's payoff when B answers with pure strategy `j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NetPayoffMatrix(Matrix);

impl NetPayoffMatrix {
    pub fn new(l: Matrix) -> Self {
        NetPayoffMatrix(l)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    /// Number of rows: B's pure strategies.
    pub fn rows(&self) -> usize {
        self.0.rows()
    }

    /// Number of columns: A's pure strategies.
    pub fn cols(&self) -> usize {
        self.0.cols()
    }

    pub fn is_antisymmetric(&self) -> bool {
        self.0.rows() == self.0.cols() && self.0.transpose() == self.0.map(|v| -v)
    }
}
