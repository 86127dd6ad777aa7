//! Small hand-written tournaments: the uniform lottery, a rigged one, the
//! two coin-after-or-before variants, and a futile one.

use crate::engine::{Decision, State, Tournament};
use crate::error::{Error, Result};
use crate::rational::{rat, Rational};

pub(crate) const LEAF: u32 = u32::MAX;

pub(crate) fn leaf(k: usize) -> State {
    State::from_slice(&[LEAF, k as u32])
}

pub(crate) fn uniform_over(players: &[usize]) -> Decision {
    if let [only] = players {
        return Decision::Winner(*only);
    }
    let w = Rational::new(1.into(), players.len().into());
    Decision::Chance(players.iter().map(|&k| (w.clone(), leaf(k))).collect())
}

pub(crate) fn foreign(state: &State) -> Error {
    Error::InvalidArgument(format!("state {state} does not belong to this tournament"))
}

/// Picks the winner uniformly at random; plays no matches.
#[derive(Clone, Debug)]
pub struct UniformWinner {
    n: usize,
}

pub fn make_uniform_winner(n: usize) -> Result<UniformWinner> {
    if n == 0 {
        return Err(Error::InvalidArgument("need at least one player".into()));
    }
    Ok(UniformWinner { n })
}

impl Tournament for UniformWinner {
    fn players(&self) -> usize {
        self.n
    }
    fn initial_state(&self) -> State {
        State::from_slice(&[0])
    }
    fn step(&self, state: &State) -> Result<Decision> {
        match state.as_slice() {
            [0] => Ok(uniform_over(&(0..self.n).collect::<Vec<_>>())),
            [LEAF, k] => Ok(Decision::Winner(*k as usize)),
            _ => Err(foreign(state)),
        }
    }
    fn max_matches(&self) -> usize {
        0
    }
    fn name(&self) -> String {
        format!("uniform(n={})", self.n)
    }
}

/// Player 1 wins regardless. Not symmetric.
#[derive(Clone, Debug)]
pub struct FirstPlayerWins {
    pub n: usize,
}

impl Tournament for FirstPlayerWins {
    fn players(&self) -> usize {
        self.n
    }
    fn initial_state(&self) -> State {
        State::new()
    }
    fn step(&self, _: &State) -> Result<Decision> {
        Ok(Decision::Winner(0))
    }
    fn max_matches(&self) -> usize {
        0
    }
    fn name(&self) -> String {
        "first-player-wins".into()
    }
}

/// When the coin deciding between match winner and match loser is tossed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CoinTiming {
    AfterMatch,
    BeforeMatch,
}

/// Two players play once; the match winner takes the tournament with
/// probability 9/10 and the loser with 1/10.
#[derive(Clone, Debug)]
pub struct LoserLottery {
    pub timing: CoinTiming,
}

impl Tournament for LoserLottery {
    fn players(&self) -> usize {
        2
    }

    fn initial_state(&self) -> State {
        State::from_slice(&[0])
    }

    fn step(&self, state: &State) -> Result<Decision> {
        let winner_odds = rat(9, 10);
        let loser_odds = rat(1, 10);
        match (self.timing, state.as_slice()) {
            (CoinTiming::AfterMatch, [0]) => Ok(Decision::Match {
                pair: (0, 1),
                first_wins: State::from_slice(&[1, 0]),
                second_wins: State::from_slice(&[1, 1]),
            }),
            (CoinTiming::AfterMatch, [1, w]) => {
                let w = *w as usize;
                Ok(Decision::Chance(vec![(winner_odds, leaf(w)), (loser_odds, leaf(1 - w))]))
            }
            // mode 0 rewards the match winner, mode 1 the loser
            (CoinTiming::BeforeMatch, [0]) => Ok(Decision::Chance(vec![
                (winner_odds, State::from_slice(&[1, 0])),
                (loser_odds, State::from_slice(&[1, 1])),
            ])),
            (CoinTiming::BeforeMatch, [1, mode]) => Ok(Decision::Match {
                pair: (0, 1),
                first_wins: leaf(*mode as usize),
                second_wins: leaf(1 - *mode as usize),
            }),
            (_, [LEAF, k]) => Ok(Decision::Winner(*k as usize)),
            _ => Err(foreign(state)),
        }
    }

    fn max_matches(&self) -> usize {
        1
    }

    fn name(&self) -> String {
        match self.timing {
            CoinTiming::AfterMatch => "loser-lottery-after".into(),
            CoinTiming::BeforeMatch => "loser-lottery-before".into(),
        }
    }
}

/// Plays one round-robin whose results are then ignored; the winner is
/// drawn uniformly.
#[derive(Clone, Debug)]
pub struct IgnoredRoundRobin {
    n: usize,
    schedule: Vec<(usize, usize)>,
}

pub fn make_ignored_round_robin(n: usize) -> Result<IgnoredRoundRobin> {
    if n < 2 {
        return Err(Error::InvalidArgument("need at least two players".into()));
    }
    Ok(IgnoredRoundRobin { n, schedule: super::round_robin_schedule(&(0..n).collect::<Vec<_>>()) })
}

impl Tournament for IgnoredRoundRobin {
    fn players(&self) -> usize {
        self.n
    }
    fn initial_state(&self) -> State {
        State::from_slice(&[0])
    }
    fn step(&self, state: &State) -> Result<Decision> {
        match state.as_slice() {
            [m] if (*m as usize) < self.schedule.len() => {
                let next = State::from_slice(&[m + 1]);
                Ok(Decision::Match { pair: self.schedule[*m as usize], first_wins: next.clone(), second_wins: next })
            }
            [_] => Ok(uniform_over(&(0..self.n).collect::<Vec<_>>())),
            [LEAF, k] => Ok(Decision::Winner(*k as usize)),
            _ => Err(foreign(state)),
        }
    }
    fn max_matches(&self) -> usize {
        self.schedule.len()
    }
    fn name(&self) -> String {
        format!("ignored-round-robin(n={})", self.n)
    }
}
