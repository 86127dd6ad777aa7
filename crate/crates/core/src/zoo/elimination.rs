//! Single elimination with a uniformly random bracket.

use std::collections::BTreeMap;

use itertools::Itertools;

use crate::engine::{Decision, State, Tournament};
use crate::error::{Error, Result};
use crate::rational::Rational;

use super::simple::{foreign, LEAF};

pub const MAX_BRACKET_PLAYERS: usize = 8;

/// Knockout on `n = 2^k` players. The opening Chance node ranges over all
/// `n!` seedings, merged into canonical brackets (sub-brackets ordered by
/// their smallest player), so equivalent draws share one state.
#[derive(Clone, Debug)]
pub struct SingleElimination {
    n: usize,
    draws: Vec<(Rational, State)>,
}

const PLAYING: u32 = 1;

pub fn make_single_elim_random(n: usize) -> Result<SingleElimination> {
    if n < 2 || !n.is_power_of_two() {
        return Err(Error::InvalidArgument(format!("bracket size must be a power of two >= 2, got {n}")));
    }
    if n > MAX_BRACKET_PLAYERS {
        return Err(Error::Guard(format!("random brackets support up to {MAX_BRACKET_PLAYERS} players, got {n}")));
    }
    let mut counts: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for seeding in (0..n).permutations(n) {
        *counts.entry(canonical(&seeding)).or_default() += 1;
    }
    let total: usize = counts.values().sum();
    let draws = counts
        .into_iter()
        .map(|(bracket, c)| (Rational::new(c.into(), total.into()), encode(&bracket, &[])))
        .collect();
    Ok(SingleElimination { n, draws })
}

/// Orders each pair of sibling sub-brackets by smallest player.
fn canonical(seeding: &[usize]) -> Vec<usize> {
    if seeding.len() == 1 {
        return seeding.to_vec();
    }
    let (a, b) = seeding.split_at(seeding.len() / 2);
    let (a, b) = (canonical(a), canonical(b));
    if a[0] < b[0] {
        [a, b].concat()
    } else {
        [b, a].concat()
    }
}

/// `[PLAYING, |current|, current..., advanced...]`: `current` still has to
/// play in this round (in adjacent pairs), `advanced` already won.
fn encode(current: &[usize], advanced: &[usize]) -> State {
    std::iter::once(PLAYING)
        .chain(std::iter::once(current.len() as u32))
        .chain(current.iter().chain(advanced).map(|&p| p as u32))
        .collect()
}

impl SingleElimination {
    fn after(&self, current: &[usize], advanced: &[usize], winner: usize) -> State {
        let mut advanced = advanced.to_vec();
        advanced.push(winner);
        let rest = &current[2..];
        if !rest.is_empty() {
            return encode(rest, &advanced);
        }
        if advanced.len() == 1 {
            return State::from_slice(&[LEAF, winner as u32]);
        }
        encode(&advanced, &[])
    }
}

impl Tournament for SingleElimination {
    fn players(&self) -> usize {
        self.n
    }

    fn initial_state(&self) -> State {
        State::from_slice(&[0])
    }

    fn step(&self, state: &State) -> Result<Decision> {
        match state.as_slice() {
            [0] => Ok(Decision::Chance(self.draws.clone())),
            [LEAF, k] => Ok(Decision::Winner(*k as usize)),
            [PLAYING, len, rest @ ..] if (*len as usize) >= 2 && (*len as usize) <= rest.len() => {
                let players: Vec<usize> = rest.iter().map(|&p| p as usize).collect();
                let (current, advanced) = players.split_at(*len as usize);
                let (a, b) = (current[0], current[1]);
                Ok(Decision::Match {
                    pair: (a, b),
                    first_wins: self.after(current, advanced, a),
                    second_wins: self.after(current, advanced, b),
                })
            }
            _ => Err(foreign(state)),
        }
    }

    fn max_matches(&self) -> usize {
        self.n - 1
    }

    fn name(&self) -> String {
        format!("single-elim(n={})", self.n)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_brackets() {
        assert_eq!(canonical(&[3, 1, 2, 0]), vec![0, 2, 1, 3]);
        let t = make_single_elim_random(8).unwrap();
        assert_eq!(t.draws.len(), 315);
        assert_eq!(make_single_elim_random(4).unwrap().draws.len(), 3);
        assert!(make_single_elim_random(6).is_err());
        assert!(make_single_elim_random(16).is_err());
    }
}
