//! Tournaments whose matches come in rounds of simultaneous, vertex-disjoint
//! pairs, and the adapter that plays each round in a random order.

use std::sync::Arc;

use itertools::Itertools;
use num_traits::One;

use super::eval::{Expander, Expansion, Solver};
use super::{Decision, EvalReport, State, Tournament};
use crate::error::{Error, Result};
use crate::matrix::{MatchMatrix, WinVector};
use crate::rational::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RoundDecision {
    /// Play every pair at once. `outcomes[mask]` is the next state, where bit
    /// `k` of `mask` is set iff `pairs[k].0` won its match.
    Round { pairs: Vec<(usize, usize)>, outcomes: Vec<State> },
    Chance(Vec<(Rational, State)>),
    Winner(usize),
}

pub trait RoundsTournament: Send + Sync {
    fn players(&self) -> usize;
    fn initial_state(&self) -> State;
    fn step(&self, state: &State) -> Result<RoundDecision>;
    fn max_rounds(&self) -> usize;
    fn name(&self) -> String {
        "rounds tournament".to_string()
    }
}

fn validate_round(n: usize, pairs: &[(usize, usize)], outcomes: &[State], state: &State) -> Result<()> {
    let mut busy = vec![false; n];
    for &(a, b) in pairs {
        if a >= n || b >= n || a == b || busy[a] || busy[b] {
            return Err(Error::InvalidArgument(format!("round at {state} is not a set of disjoint pairs")));
        }
        busy[a] = true;
        busy[b] = true;
    }
    if outcomes.len() != 1 << pairs.len() {
        return Err(Error::InvalidArgument(format!(
            "round at {state} has {} outcomes for {} pairs",
            outcomes.len(),
            pairs.len()
        )));
    }
    Ok(())
}

/// A rounds tournament specialized at a matrix.
pub struct RoundExpander<'a> {
    pub tournament: &'a dyn RoundsTournament,
    pub matrix: &'a MatchMatrix,
}

impl Expander for RoundExpander<'_> {
    fn players(&self) -> usize {
        self.tournament.players()
    }

    fn bound(&self) -> usize {
        self.tournament.max_rounds() * (self.players() / 2)
    }

    fn expand(&self, state: &State) -> Result<Expansion> {
        Ok(match self.tournament.step(state)? {
            RoundDecision::Winner(k) => Expansion::Winner(k),
            RoundDecision::Chance(branches) => Expansion::Branches { matches: 0, branches },
            RoundDecision::Round { pairs, outcomes } => {
                validate_round(self.players(), &pairs, &outcomes, state)?;
                let branches = outcomes
                    .into_iter()
                    .enumerate()
                    .map(|(mask, next)| (outcome_weight(self.matrix, &pairs, mask), next))
                    .collect();
                Expansion::Branches { matches: pairs.len(), branches }
            }
        })
    }
}

/// Probability of the joint result `mask` of a round.
pub(crate) fn outcome_weight(p: &MatchMatrix, pairs: &[(usize, usize)], mask: usize) -> Rational {
    pairs.iter().enumerate().fold(Rational::one(), |acc, (k, &(a, b))| {
        if mask >> k & 1 == 1 {
            acc * p.get(a, b)
        } else {
            acc * p.get(b, a)
        }
    })
}

pub fn exact_rounds_win_vector(r: &dyn RoundsTournament, p: &MatchMatrix) -> Result<EvalReport> {
    if r.players() != p.n() {
        return Err(Error::SizeMismatch { expected: r.players(), actual: p.n() });
    }
    let mut solver = Solver::new(RoundExpander { tournament: r, matrix: p });
    let win = solver.solve(&r.initial_state())?;
    Ok(EvalReport {
        win_vector: WinVector::new(win)?,
        states_visited: solver.states_visited(),
        leaf_count: solver.leaf_count(),
    })
}

const AT_ROUND: u32 = 0;
const MID_ROUND: u32 = 1;

/// Plays each round's matches one at a time in a uniformly random order.
pub struct Sequentialized(Arc<dyn RoundsTournament>);

pub fn sequentialize(r: Arc<dyn RoundsTournament>) -> Sequentialized {
    Sequentialized(r)
}

impl Sequentialized {
    fn round_at(&self, inner: &State) -> Result<(Vec<(usize, usize)>, Vec<State>)> {
        match self.0.step(inner)? {
            RoundDecision::Round { pairs, outcomes } => {
                validate_round(self.0.players(), &pairs, &outcomes, inner)?;
                Ok((pairs, outcomes))
            }
            _ => Err(Error::InvalidArgument(format!("state {inner} is not a round"))),
        }
    }
}

fn factorial(k: usize) -> usize {
    (1..=k).product()
}

impl Tournament for Sequentialized {
    fn players(&self) -> usize {
        self.0.players()
    }

    fn initial_state(&self) -> State {
        State::tagged(AT_ROUND, &self.0.initial_state())
    }

    fn step(&self, state: &State) -> Result<Decision> {
        let wrap = |s: &State| State::tagged(AT_ROUND, s);
        match state.as_slice() {
            [AT_ROUND, ..] => {
                let inner = state.tail(1);
                match self.0.step(&inner)? {
                    RoundDecision::Winner(k) => Ok(Decision::Winner(k)),
                    RoundDecision::Chance(b) => Ok(Decision::Chance(b.into_iter().map(|(w, s)| (w, wrap(&s))).collect())),
                    RoundDecision::Round { pairs, outcomes } => {
                        validate_round(self.0.players(), &pairs, &outcomes, &inner)?;
                        if pairs.is_empty() {
                            return Ok(Decision::Chance(vec![(Rational::one(), wrap(&outcomes[0]))]));
                        }
                        let orders = factorial(pairs.len());
                        let w = Rational::new(1.into(), orders.into());
                        Ok(Decision::Chance(
                            (0..orders)
                                .map(|idx| {
                                    let mut s = State::from_slice(&[MID_ROUND, idx as u32, 0, 0]);
                                    inner.as_slice().iter().for_each(|&x| s.push(x));
                                    (w.clone(), s)
                                })
                                .collect(),
                        ))
                    }
                }
            }
            [MID_ROUND, idx, decided, bits, ..] => {
                let inner = state.tail(4);
                let (pairs, outcomes) = self.round_at(&inner)?;
                let k = pairs.len();
                let order = (0..k)
                    .permutations(k)
                    .nth(*idx as usize)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad ordering in {state}")))?;
                let d = *decided as usize;
                let q = order[d];
                let won = *bits | (1 << q);
                let next = |mask: u32| -> State {
                    if d + 1 == k {
                        wrap(&outcomes[mask as usize])
                    } else {
                        let mut s = State::from_slice(&[MID_ROUND, *idx, *decided + 1, mask]);
                        inner.as_slice().iter().for_each(|&x| s.push(x));
                        s
                    }
                };
                Ok(Decision::Match { pair: pairs[q], first_wins: next(won), second_wins: next(*bits) })
            }
            _ => Err(Error::InvalidArgument(format!("foreign state {state}"))),
        }
    }

    fn max_matches(&self) -> usize {
        self.0.max_rounds() * (self.0.players() / 2)
    }

    fn name(&self) -> String {
        format!("sequential({})", self.0.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::exact_win_vector;
    use crate::rational::rat;

    /// One round with pairs (1,2) and (3,4); player 1 wins if both first
    /// players win, else player 4.
    struct TwoPairs;

    impl RoundsTournament for TwoPairs {
        fn players(&self) -> usize {
            4
        }
        fn initial_state(&self) -> State {
            State::from_slice(&[0])
        }
        fn step(&self, s: &State) -> Result<RoundDecision> {
            Ok(match s.as_slice() {
                [0] => RoundDecision::Round {
                    pairs: vec![(0, 1), (2, 3)],
                    outcomes: (0..4).map(|m| State::from_slice(&[1, m])).collect(),
                },
                [1, 3] => RoundDecision::Winner(0),
                [1, _] => RoundDecision::Winner(3),
                _ => unreachable!(),
            })
        }
        fn max_rounds(&self) -> usize {
            1
        }
    }

    #[test]
    fn two_pair_round_has_two_orderings() {
        let t = sequentialize(Arc::new(TwoPairs));
        match t.step(&t.initial_state()).unwrap() {
            Decision::Chance(b) => {
                assert_eq!(b.len(), 2);
                assert!(b.iter().all(|(w, _)| *w == rat(1, 2)));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sequential_agrees_with_rounds() {
        let p = MatchMatrix::from_upper(4, |i, j| rat((i + 2 * j + 3) as i64, 12)).unwrap();
        let direct = exact_rounds_win_vector(&TwoPairs, &p).unwrap().win_vector;
        let seq = exact_win_vector(&sequentialize(Arc::new(TwoPairs)), &p).unwrap().win_vector;
        assert_eq!(direct, seq);
        assert_eq!(direct.get(0), &(p.get(0, 1) * p.get(2, 3)));
    }
}
