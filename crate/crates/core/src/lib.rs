//! Insuperable strategies in bimatrix games, computed exactly.
//!
//! A strategy is insuperable when it guarantees its player at least the
//! opponent's payoff against every reply. Everything reduces to sign
//! questions about the net payoff matrix `L = Aᵀ − B`, which are answered
//! by an exact rational simplex solver. Around that core sit Nash
//! enumeration, Moran fixation probabilities, N-player game reduction, a
//! one-period conical market model and seeded simulations.

pub mod catalog;
pub mod error;
pub mod game;
pub mod insuperability;
pub mod linalg;
pub mod linprog;
pub mod market;
pub mod matrix;
pub mod moran;
pub mod multiplayer;
pub mod nash;
pub mod rational;
pub mod sim;

pub use error::{Error, Result};
pub use game::{BimatrixGame, MixedStrategy, NetPayoffMatrix, Player};
pub use matrix::Matrix;
pub use rational::Rational;
