//! Three-player tournaments with a uniformly excluded player, and repeated
//! round-robins with a tie-breaking lottery.

use num_traits::One;

use crate::engine::{Decision, State, Tournament};
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::simple::{foreign, leaf, uniform_over, LEAF};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum UnfairVariant {
    /// A dominant player tosses a coin with the excluded player; otherwise
    /// the two players who met toss.
    CoinWithExcluded,
    /// A dominant player wins outright; otherwise the excluded player does.
    DominantOrExcluded,
}

/// Exclude one of three players uniformly, let the other two play `N`
/// matches, then reward whoever won at least three quarters of them.
#[derive(Clone, Debug)]
pub struct Unfair3 {
    variant: UnfairVariant,
    matches: u32,
    threshold: u32,
}

pub fn make_unfair3(variant: UnfairVariant, matches: usize) -> Result<Unfair3> {
    if matches < 2 {
        return Err(Error::InvalidArgument(format!("need at least 2 matches, got {matches}")));
    }
    let matches = u32::try_from(matches).map_err(|_| Error::InvalidArgument("too many matches".into()))?;
    Ok(Unfair3 { variant, matches, threshold: (3 * matches).div_ceil(4) })
}

impl Tournament for Unfair3 {
    fn players(&self) -> usize {
        3
    }

    fn initial_state(&self) -> State {
        State::from_slice(&[0])
    }

    fn step(&self, state: &State) -> Result<Decision> {
        match *state.as_slice() {
            [0] => {
                let third = Rational::new(1.into(), 3.into());
                Ok(Decision::Chance((0..3).map(|e| (third.clone(), State::from_slice(&[1, e, 0, 0]))).collect()))
            }
            [1, excluded, played, low_wins] => {
                let e = excluded as usize;
                let (low, high) = match e {
                    0 => (1, 2),
                    1 => (0, 2),
                    _ => (0, 1),
                };
                if played < self.matches {
                    return Ok(Decision::Match {
                        pair: (low, high),
                        first_wins: State::from_slice(&[1, excluded, played + 1, low_wins + 1]),
                        second_wins: State::from_slice(&[1, excluded, played + 1, low_wins]),
                    });
                }
                let dominant = if low_wins >= self.threshold {
                    Some(low)
                } else if self.matches - low_wins >= self.threshold {
                    Some(high)
                } else {
                    None
                };
                Ok(match (self.variant, dominant) {
                    (UnfairVariant::CoinWithExcluded, Some(d)) => uniform_over(&[d, e]),
                    (UnfairVariant::CoinWithExcluded, None) => uniform_over(&[low, high]),
                    (UnfairVariant::DominantOrExcluded, Some(d)) => Decision::Winner(d),
                    (UnfairVariant::DominantOrExcluded, None) => Decision::Winner(e),
                })
            }
            [LEAF, k] => Ok(Decision::Winner(k as usize)),
            _ => Err(foreign(state)),
        }
    }

    fn max_matches(&self) -> usize {
        self.matches as usize
    }

    fn name(&self) -> String {
        match self.variant {
            UnfairVariant::CoinWithExcluded => format!("t1(N={})", self.matches),
            UnfairVariant::DominantOrExcluded => format!("t2(N={})", self.matches),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TieBreak {
    /// Uniform among the players with the most wins.
    MaxUniform,
    /// Exclude one of the players with the fewest wins uniformly, then toss
    /// a fair coin between the other two. Three players only.
    MinOutThenCoin,
}

/// `N` iterations of a full round-robin followed by a tie-breaking lottery.
#[derive(Clone, Debug)]
pub struct RoundRobinRepeat {
    n: usize,
    iterations: usize,
    tiebreak: TieBreak,
    schedule: Vec<(usize, usize)>,
}

pub fn make_roundrobin_repeat(n: usize, iterations: usize, tiebreak: TieBreak) -> Result<RoundRobinRepeat> {
    if n < 2 || iterations < 1 {
        return Err(Error::InvalidArgument(format!("need n >= 2 and N >= 1, got n = {n}, N = {iterations}")));
    }
    if tiebreak == TieBreak::MinOutThenCoin && n != 3 {
        return Err(Error::InvalidArgument(format!("min-out-then-coin is defined for 3 players, got {n}")));
    }
    Ok(RoundRobinRepeat { n, iterations, tiebreak, schedule: super::round_robin_schedule(&(0..n).collect::<Vec<_>>()) })
}

impl RoundRobinRepeat {
    fn finish(&self, wins: &[u32]) -> Decision {
        match self.tiebreak {
            TieBreak::MaxUniform => {
                let top = *wins.iter().max().expect("n >= 2");
                let best: Vec<usize> = (0..self.n).filter(|&k| wins[k] == top).collect();
                uniform_over(&best)
            }
            TieBreak::MinOutThenCoin => {
                let bottom = *wins.iter().min().expect("n >= 2");
                let worst: Vec<usize> = (0..self.n).filter(|&k| wins[k] == bottom).collect();
                let denom = Rational::from_integer((2 * worst.len()).into());
                let branches: Vec<(Rational, State)> = (0..self.n)
                    .filter_map(|k| {
                        let excluded_others = worst.iter().filter(|&&x| x != k).count();
                        (excluded_others > 0)
                            .then(|| (Rational::from_integer(excluded_others.into()) / &denom, leaf(k)))
                    })
                    .collect();
                debug_assert!(branches.iter().map(|(w, _)| w).sum::<Rational>() == Rational::one());
                Decision::Chance(branches)
            }
        }
    }
}

impl Tournament for RoundRobinRepeat {
    fn players(&self) -> usize {
        self.n
    }

    fn initial_state(&self) -> State {
        std::iter::once(0).chain(std::iter::repeat_n(0, self.n)).collect()
    }

    fn step(&self, state: &State) -> Result<Decision> {
        let s = state.as_slice();
        match s {
            [LEAF, k] => Ok(Decision::Winner(*k as usize)),
            [m, wins @ ..] if wins.len() == self.n => {
                let m = *m as usize;
                if m == self.max_matches() {
                    return Ok(self.finish(wins));
                }
                let (a, b) = self.schedule[m % self.schedule.len()];
                let bump = |k: usize| {
                    let mut v = s.to_vec();
                    v[0] += 1;
                    v[1 + k] += 1;
                    State::from_slice(&v)
                };
                Ok(Decision::Match { pair: (a, b), first_wins: bump(a), second_wins: bump(b) })
            }
            _ => Err(foreign(state)),
        }
    }

    fn max_matches(&self) -> usize {
        self.iterations * self.schedule.len()
    }

    fn name(&self) -> String {
        match self.tiebreak {
            TieBreak::MaxUniform => format!("rr-max(n={}, N={})", self.n, self.iterations),
            TieBreak::MinOutThenCoin => format!("rr-min-coin(N={})", self.iterations),
        }
    }
}
