//! Exact and simulated analysis of matchplay tournaments with fixed pairwise
//! win probabilities.
//!
//! * [`matrix`]: match matrices, win vectors, permutations.
//! * [`engine`]: tournaments as transition systems, exact evaluation,
//!   Monte Carlo play, mixtures and the rounds adapter.
//! * [`zoo`]: concrete tournaments and tournament maps.
//! * [`polytope`]: graph vectors, corners and LP membership tests.
//! * [`analysis`]: symmetry, honesty, fairness and futility checkers, and the
//!   discrete map polytope.

pub mod analysis;
pub mod engine;
pub mod error;
pub mod matrix;
pub mod polytope;
pub mod rational;
pub mod zoo;

pub use engine::{Decision, State, Tournament};
pub use error::{Error, Result};
pub use matrix::{DoublyMonotonic, MatchMatrix, Permutation, WinVector};
pub use rational::{parse_rational, Rational};
