//! A four-player tournament with rounds that is honest as a rounds
//! tournament but stops being honest once each round is played in a random
//! sequential order.
//!
//! Pair the players off uniformly, play the same two matches twice, then toss
//! a coin to pick a "scoring" pair. If the other pair split its two matches,
//! the loser of the scoring pair's first match wins; otherwise its winner does.

use crate::engine::{RoundDecision, RoundsTournament, State};
use crate::error::Result;
use crate::rational::half;

use super::simple::{foreign, leaf, LEAF};

const PAIRINGS: [[(usize, usize); 2]; 3] = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];

#[derive(Clone, Copy, Debug, Default)]
pub struct PairedRounds;

pub fn make_rounds_example() -> PairedRounds {
    PairedRounds
}

fn won_first(mask: u32, pair: usize) -> bool {
    mask >> pair & 1 == 1
}

impl PairedRounds {
    /// Winner when pair `scoring` is scored and the other pair is watched.
    fn scored(pairing: usize, scoring: usize, first: u32, second: u32) -> usize {
        let (a, b) = PAIRINGS[pairing][scoring];
        let other = 1 - scoring;
        let split = won_first(first, other) != won_first(second, other);
        let a_won = won_first(first, scoring);
        if a_won != split {
            a
        } else {
            b
        }
    }
}

impl RoundsTournament for PairedRounds {
    fn players(&self) -> usize {
        4
    }

    fn initial_state(&self) -> State {
        State::from_slice(&[0])
    }

    fn step(&self, state: &State) -> Result<RoundDecision> {
        let third = crate::rational::rat(1, 3);
        match *state.as_slice() {
            [0] => Ok(RoundDecision::Chance((0..3).map(|q| (third.clone(), State::from_slice(&[1, q]))).collect())),
            [1, q] if q < 3 => Ok(RoundDecision::Round {
                pairs: PAIRINGS[q as usize].to_vec(),
                outcomes: (0..4).map(|m| State::from_slice(&[2, q, m])).collect(),
            }),
            [2, q, first] if q < 3 => Ok(RoundDecision::Round {
                pairs: PAIRINGS[q as usize].to_vec(),
                outcomes: (0..4).map(|m| State::from_slice(&[3, q, first, m])).collect(),
            }),
            [3, q, first, second] if q < 3 => {
                let q = q as usize;
                Ok(RoundDecision::Chance(vec![
                    (half(), leaf(Self::scored(q, 0, first, second))),
                    (half(), leaf(Self::scored(q, 1, first, second))),
                ]))
            }
            [LEAF, k] => Ok(RoundDecision::Winner(k as usize)),
            _ => Err(foreign(state)),
        }
    }

    fn max_rounds(&self) -> usize {
        2
    }

    fn name(&self) -> String {
        "rounds-example".into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoring_rule() {
        // pairing 0: (0,1) and (2,3); 0 wins first, 2 wins then loses
        assert_eq!(PairedRounds::scored(0, 0, 0b11, 0b01), 1);
        // 2 wins both: no split, first-match winner 0 takes it
        assert_eq!(PairedRounds::scored(0, 0, 0b11, 0b11), 0);
        // scoring (2,3); (0,1) split, 2 won first, so 3 wins
        assert_eq!(PairedRounds::scored(0, 1, 0b11, 0b10), 3);
    }
}
