use std::sync::Arc;

use num_traits::{One, Zero};

use super::{exact_win_vector, Decision, State, Tournament};
use crate::analysis::TournamentMap;
use crate::error::{Error, Result};
use crate::matrix::{MatchMatrix, WinVector};
use crate::rational::Rational;

const ROOT: u32 = 0;
const LEFT: u32 = 1;
const RIGHT: u32 = 2;

/// With probability `weight` play `first`, otherwise `second`.
pub struct Mixture {
    first: Arc<dyn Tournament>,
    second: Arc<dyn Tournament>,
    weight: Rational,
}

/// Builds the mixture tournament. Its win vector is
/// `weight * wv(first) + (1 - weight) * wv(second)`.
pub fn mixture(first: Arc<dyn Tournament>, second: Arc<dyn Tournament>, weight: Rational) -> Result<Mixture> {
    if first.players() != second.players() {
        return Err(Error::SizeMismatch { expected: first.players(), actual: second.players() });
    }
    if weight < Rational::zero() || weight > Rational::one() {
        return Err(Error::InvalidArgument(format!("mixture weight {weight} outside [0, 1]")));
    }
    Ok(Mixture { first, second, weight })
}

impl Tournament for Mixture {
    fn players(&self) -> usize {
        self.first.players()
    }

    fn initial_state(&self) -> State {
        State::from_slice(&[ROOT])
    }

    fn step(&self, state: &State) -> Result<Decision> {
        let (inner, tag): (&dyn Tournament, u32) = match state.head() {
            Some(ROOT) => {
                let mut branches = Vec::with_capacity(2);
                if !self.weight.is_zero() {
                    branches.push((self.weight.clone(), State::tagged(LEFT, &self.first.initial_state())));
                }
                let rest = Rational::one() - &self.weight;
                if !rest.is_zero() {
                    branches.push((rest, State::tagged(RIGHT, &self.second.initial_state())));
                }
                return Ok(Decision::Chance(branches));
            }
            Some(LEFT) => (self.first.as_ref(), LEFT),
            Some(RIGHT) => (self.second.as_ref(), RIGHT),
            _ => return Err(Error::InvalidArgument(format!("foreign state {state}"))),
        };
        Ok(retag(inner.step(&state.tail(1))?, tag))
    }

    fn max_matches(&self) -> usize {
        self.first.max_matches().max(self.second.max_matches())
    }

    fn name(&self) -> String {
        format!("mixture({}, {}, {})", self.first.name(), self.second.name(), self.weight)
    }
}

fn retag(decision: Decision, tag: u32) -> Decision {
    match decision {
        Decision::Winner(k) => Decision::Winner(k),
        Decision::Match { pair, first_wins, second_wins } => Decision::Match {
            pair,
            first_wins: State::tagged(tag, &first_wins),
            second_wins: State::tagged(tag, &second_wins),
        },
        Decision::Chance(branches) => {
            Decision::Chance(branches.into_iter().map(|(w, s)| (w, State::tagged(tag, &s))).collect())
        }
    }
}

/// The tournament map `P -> wv(T, P)`.
#[derive(Clone)]
pub struct InducedMap(pub Arc<dyn Tournament>);

impl TournamentMap for InducedMap {
    fn players(&self) -> usize {
        self.0.players()
    }

    fn eval(&self, matrix: &MatchMatrix) -> Result<WinVector> {
        Ok(exact_win_vector(self.0.as_ref(), matrix)?.win_vector)
    }

    fn name(&self) -> String {
        format!("induced({})", self.0.name())
    }
}

pub fn induced_map(t: Arc<dyn Tournament>) -> InducedMap {
    InducedMap(t)
}
