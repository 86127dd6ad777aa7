//! Seed-deterministic Monte Carlo play.
//!
//! Trial `t` draws from a ChaCha stream keyed by `(seed, t)`, so the report
//! does not depend on how rayon splits the work.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{Decision, Tournament};
use crate::error::{Error, Result};
use crate::matrix::MatchMatrix;
use crate::rational::{threshold_u64_scale, Rational};

/// Empirical winner frequencies over independent plays.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SimReport {
    pub trials: u64,
    pub seed: u64,
    pub counts: Vec<u64>,
    pub empirical: Vec<f64>,
    pub standard_errors: Vec<f64>,
}

impl SimReport {
    fn from_counts(counts: Vec<u64>, trials: u64, seed: u64) -> Self {
        let t = trials as f64;
        let empirical: Vec<f64> = counts.iter().map(|&c| c as f64 / t).collect();
        let standard_errors = empirical.iter().map(|f| (f * (1.0 - f) / t).sqrt()).collect();
        Self { trials, seed, counts, empirical, standard_errors }
    }

    /// Largest componentwise gap to an exact vector.
    pub fn linf_to(&self, exact: &[f64]) -> f64 {
        self.empirical.iter().zip(exact).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

/// Plays `(t, p)` `trials` times.
pub fn simulate(t: &dyn Tournament, p: &MatchMatrix, trials: u64, seed: u64) -> Result<SimReport> {
    let n = t.players();
    if n != p.n() {
        return Err(Error::SizeMismatch { expected: n, actual: p.n() });
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("trials must be at least 1".into()));
    }
    let thresholds: Vec<u128> = (0..n * n).map(|k| threshold_u64_scale(p.get(k / n, k % n))).collect();
    let counts = (0..trials)
        .into_par_iter()
        .map(|trial| play_once(t, &thresholds, n, seed, trial))
        .try_fold(
            || vec![0u64; n],
            |mut acc, winner| {
                acc[winner?] += 1;
                Ok::<_, Error>(acc)
            },
        )
        .try_reduce(
            || vec![0u64; n],
            |mut a, b| {
                a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;
    Ok(SimReport::from_counts(counts, trials, seed))
}

fn play_once(t: &dyn Tournament, thresholds: &[u128], n: usize, seed: u64, trial: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    let bound = t.max_matches();
    let mut played = 0usize;
    let mut state = t.initial_state();
    loop {
        match t.step(&state)? {
            Decision::Winner(k) if k < n => return Ok(k),
            Decision::Winner(k) => return Err(Error::InvalidArgument(format!("winner {} out of range", k + 1))),
            Decision::Match { pair: (i, j), first_wins, second_wins } => {
                played += 1;
                if played > bound {
                    return Err(Error::DepthExceeded { bound });
                }
                let draw = rng.next_u64() as u128;
                state = if draw < thresholds[i * n + j] { first_wins } else { second_wins };
            }
            Decision::Chance(branches) => {
                state = sample_branch(&mut rng, branches)?;
            }
        }
    }
}

fn sample_branch<T>(rng: &mut ChaCha8Rng, branches: Vec<(Rational, T)>) -> Result<T> {
    let draw = rng.next_u64() as u128;
    let mut cumulative = Rational::from_integer(0.into());
    let last = branches.len().checked_sub(1).ok_or_else(|| Error::NotDistribution("empty chance node".into()))?;
    for (k, (w, next)) in branches.into_iter().enumerate() {
        cumulative += w;
        if k == last || draw < threshold_u64_scale(&cumulative) {
            return Ok(next);
        }
    }
    unreachable!("last branch always returns")
}
