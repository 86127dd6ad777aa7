//! Tournaments as finite-depth transition systems.
//!
//! A tournament is a deterministic function from [`State`] to [`Decision`].
//! The state is whatever the rules need to remember (match results so far,
//! internal coin flips) and is the object honesty is conditioned on.

mod combinators;
mod eval;
mod rounds;
mod sim;

use std::fmt;

use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::Result;
use crate::rational::Rational;

pub use combinators::{induced_map, mixture, InducedMap, Mixture};
pub use eval::{
    conditional_pair, exact_win_vector, exact_win_vector_unmemoized, max_states_from_env, ConditionalPair,
    EvalReport, Expander, Expansion, MatchExpander, Solver, DEFAULT_MAX_STATES,
};
pub use rounds::{
    exact_rounds_win_vector, sequentialize, RoundDecision, RoundExpander, RoundsTournament, Sequentialized,
};
pub use sim::{simulate, SimReport};

/// Canonical encoding of a tournament's internal state.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Serialize, Deserialize)]
pub struct State(SmallVec<[u32; 12]>);

impl State {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_slice(values: &[u32]) -> Self {
        Self(SmallVec::from_slice(values))
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn push(&mut self, v: u32) {
        self.0.push(v);
    }

    /// `[tag, inner...]`, used by combinators to namespace sub-tournaments.
    pub fn tagged(tag: u32, inner: &State) -> Self {
        let mut v = SmallVec::with_capacity(inner.len() + 1);
        v.push(tag);
        v.extend_from_slice(&inner.0);
        Self(v)
    }

    /// Drops the first `k` entries.
    pub fn tail(&self, k: usize) -> Self {
        Self(SmallVec::from_slice(&self.0[k.min(self.0.len())..]))
    }

    pub fn head(&self) -> Option<u32> {
        self.0.first().copied()
    }
}

impl FromIterator<u32> for State {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

impl fmt::Debug for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.as_slice())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// What the rules do at a state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Play `pair.0` against `pair.1`; continue at `first_wins` or
    /// `second_wins` depending on the result.
    Match { pair: (usize, usize), first_wins: State, second_wins: State },
    /// Internal randomness with rational branch weights summing to 1.
    Chance(Vec<(Rational, State)>),
    Winner(usize),
}

/// A matchplay tournament on `players()` players.
pub trait Tournament: Send + Sync {
    fn players(&self) -> usize;

    fn initial_state(&self) -> State;

    /// Must be deterministic in `state`.
    fn step(&self, state: &State) -> Result<Decision>;

    /// Upper bound on the number of matches along any play.
    fn max_matches(&self) -> usize;

    fn name(&self) -> String {
        "tournament".to_string()
    }
}

impl<T: Tournament + ?Sized> Tournament for std::sync::Arc<T> {
    fn players(&self) -> usize {
        (**self).players()
    }
    fn initial_state(&self) -> State {
        (**self).initial_state()
    }
    fn step(&self, state: &State) -> Result<Decision> {
        (**self).step(state)
    }
    fn max_matches(&self) -> usize {
        (**self).max_matches()
    }
    fn name(&self) -> String {
        (**self).name()
    }
}
