//! Tournaments that realize a tournament map, plus the strictly honest map
//! `h` and the strictification mixture built from it.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_traits::{One, Zero};

use crate::analysis::TournamentMap;
use crate::engine::{Decision, State, Tournament};
use crate::error::{Error, Result};
use crate::matrix::{MatchMatrix, WinVector};
use crate::rational::{half, Rational};

use super::simple::{foreign, leaf, LEAF};

/// Plays `N` round-robins, forms the empirical matrix of win fractions and
/// draws the winner from `f` evaluated there.
pub struct MapTournament {
    map: Arc<dyn TournamentMap>,
    n: usize,
    iterations: usize,
    schedule: Vec<(usize, usize)>,
    lotteries: Mutex<HashMap<Vec<u32>, Vec<(Rational, State)>>>,
}

pub fn make_map_tournament(map: Arc<dyn TournamentMap>, n: usize, iterations: usize) -> Result<MapTournament> {
    if map.players() != n {
        return Err(Error::SizeMismatch { expected: n, actual: map.players() });
    }
    if n < 2 || iterations < 1 {
        return Err(Error::InvalidArgument(format!("need n >= 2 and N >= 1, got n = {n}, N = {iterations}")));
    }
    let schedule = super::round_robin_schedule(&(0..n).collect::<Vec<_>>());
    Ok(MapTournament { map, n, iterations, schedule, lotteries: Mutex::new(HashMap::new()) })
}

impl MapTournament {
    /// Empirical matrix from per-pair win counts (`counts[k]` is the number of
    /// wins of `schedule[k].0` over `schedule[k].1`).
    pub fn empirical_matrix(&self, counts: &[u32]) -> Result<MatchMatrix> {
        let total = Rational::from_integer(self.iterations.into());
        let by_pair: HashMap<(usize, usize), Rational> = self
            .schedule
            .iter()
            .zip(counts)
            .map(|(&pair, &c)| (pair, Rational::from_integer(c.into()) / &total))
            .collect();
        MatchMatrix::from_upper(self.n, |i, j| by_pair[&(i, j)].clone())
    }

    fn lottery(&self, counts: &[u32]) -> Result<Vec<(Rational, State)>> {
        if let Some(hit) = self.lotteries.lock().expect("lottery cache poisoned").get(counts) {
            return Ok(hit.clone());
        }
        let p_hat = self.empirical_matrix(counts)?;
        let f = self.map.eval(&p_hat)?;
        if f.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, actual: f.n() });
        }
        let branches: Vec<(Rational, State)> = f
            .into_components()
            .into_iter()
            .enumerate()
            .filter(|(_, w)| !w.is_zero())
            .map(|(k, w)| (w, leaf(k)))
            .collect();
        self.lotteries.lock().expect("lottery cache poisoned").insert(counts.to_vec(), branches.clone());
        Ok(branches)
    }
}

impl Tournament for MapTournament {
    fn players(&self) -> usize {
        self.n
    }

    /// `[m, counts...]` with one count per scheduled pair.
    fn initial_state(&self) -> State {
        std::iter::repeat_n(0, 1 + self.schedule.len()).collect()
    }

    fn step(&self, state: &State) -> Result<Decision> {
        let s = state.as_slice();
        match s {
            [LEAF, k] => Ok(Decision::Winner(*k as usize)),
            [m, counts @ ..] if counts.len() == self.schedule.len() => {
                let m = *m as usize;
                if m == self.max_matches() {
                    return Ok(Decision::Chance(self.lottery(counts)?));
                }
                let k = m % self.schedule.len();
                let mut next = s.to_vec();
                next[0] += 1;
                let second_wins = State::from_slice(&next);
                next[1 + k] += 1;
                Ok(Decision::Match { pair: self.schedule[k], first_wins: State::from_slice(&next), second_wins })
            }
            _ => Err(foreign(state)),
        }
    }

    fn max_matches(&self) -> usize {
        self.iterations * self.schedule.len()
    }

    fn name(&self) -> String {
        format!("map({}, N={})", self.map.name(), self.iterations)
    }
}

/// `h_i(M) = sum_{j != i} m_ij / C(n, 2)`: strictly increasing in each of a
/// player's own entries.
#[derive(Clone, Copy, Debug)]
pub struct UniformStrictMap {
    n: usize,
}

pub fn uniform_strict_map(n: usize) -> Result<UniformStrictMap> {
    if n < 2 {
        return Err(Error::InvalidArgument("h needs at least two players".into()));
    }
    Ok(UniformStrictMap { n })
}

impl TournamentMap for UniformStrictMap {
    fn players(&self) -> usize {
        self.n
    }

    fn eval(&self, matrix: &MatchMatrix) -> Result<WinVector> {
        if matrix.n() != self.n {
            return Err(Error::SizeMismatch { expected: self.n, actual: matrix.n() });
        }
        let pairs = Rational::from_integer((self.n * (self.n - 1) / 2).into());
        WinVector::new(
            (0..self.n)
                .map(|i| (matrix.row(i).iter().sum::<Rational>() - half()) / &pairs)
                .collect(),
        )
    }

    fn name(&self) -> String {
        "h".into()
    }
}

/// `(1 - eps/2) g + (eps/2) h`.
pub struct StrictifiedMap {
    inner: Arc<dyn TournamentMap>,
    h: UniformStrictMap,
    eps: Rational,
}

pub fn strictify_map(inner: Arc<dyn TournamentMap>, eps: Rational, n: usize) -> Result<StrictifiedMap> {
    if eps <= Rational::zero() || eps > Rational::one() {
        return Err(Error::InvalidArgument(format!("strictification weight {eps} outside (0, 1]")));
    }
    if inner.players() != n {
        return Err(Error::SizeMismatch { expected: n, actual: inner.players() });
    }
    Ok(StrictifiedMap { inner, h: uniform_strict_map(n)?, eps })
}

impl TournamentMap for StrictifiedMap {
    fn players(&self) -> usize {
        self.h.n
    }

    fn eval(&self, matrix: &MatchMatrix) -> Result<WinVector> {
        let g = self.inner.eval(matrix)?;
        let h = self.h.eval(matrix)?;
        Ok(g.mix(&h, &(Rational::one() - &self.eps / Rational::from_integer(2.into()))))
    }

    fn name(&self) -> String {
        format!("strict({}, {})", self.inner.name(), self.eps)
    }
}
