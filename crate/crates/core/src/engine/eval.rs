//! Exact win-vector evaluation by memoized traversal of the state graph.

use std::collections::{HashMap, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;

use super::{Decision, State, Tournament};
use crate::error::{Error, Result};
use crate::matrix::{MatchMatrix, WinVector};
use crate::rational::Rational;

pub const DEFAULT_MAX_STATES: usize = 5_000_000;

/// Reads `TOURNEY_MAX_STATES`, falling back to [`DEFAULT_MAX_STATES`].
pub fn max_states_from_env() -> usize {
    std::env::var("TOURNEY_MAX_STATES")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_STATES)
}

/// One node of an evaluable state graph.
pub enum Expansion {
    Winner(usize),
    /// Weighted successors. `matches` is how many matches this node plays.
    Branches { matches: usize, branches: Vec<(Rational, State)> },
}

/// Anything that unfolds into weighted branches: a tournament specialized
/// at a matrix, or a tournament with rounds.
pub trait Expander {
    fn players(&self) -> usize;
    fn bound(&self) -> usize;
    fn expand(&self, state: &State) -> Result<Expansion>;
}

/// A tournament specialized at a fixed match matrix.
pub struct MatchExpander<'a> {
    pub tournament: &'a dyn Tournament,
    pub matrix: &'a MatchMatrix,
}

impl Expander for MatchExpander<'_> {
    fn players(&self) -> usize {
        self.tournament.players()
    }

    fn bound(&self) -> usize {
        self.tournament.max_matches()
    }

    fn expand(&self, state: &State) -> Result<Expansion> {
        Ok(match self.tournament.step(state)? {
            Decision::Winner(k) => Expansion::Winner(k),
            Decision::Chance(branches) => Expansion::Branches { matches: 0, branches },
            Decision::Match { pair: (i, j), first_wins, second_wins } => {
                let n = self.players();
                if i >= n || j >= n || i == j {
                    return Err(Error::InvalidArgument(format!("match ({}, {}) at state {state}", i + 1, j + 1)));
                }
                let p = self.matrix.get(i, j).clone();
                let q = self.matrix.get(j, i).clone();
                Expansion::Branches { matches: 1, branches: vec![(p, first_wins), (q, second_wins)] }
            }
        })
    }
}

struct Solved {
    win: Vec<Rational>,
    height: usize,
}

enum Frame {
    Enter(State, usize),
    Exit(State, usize, Vec<(Rational, State)>),
}

/// Memoized exact evaluator. Every solved state keeps its win vector so
/// that checkers can compare siblings afterwards.
pub struct Solver<E> {
    expander: E,
    table: HashMap<State, Solved>,
    limit: usize,
    leaves: usize,
}

impl<E: Expander> Solver<E> {
    pub fn new(expander: E) -> Self {
        Self { expander, table: HashMap::new(), limit: max_states_from_env(), leaves: 0 }
    }

    pub fn with_limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }

    pub fn expander(&self) -> &E {
        &self.expander
    }

    pub fn states_visited(&self) -> usize {
        self.table.len()
    }

    pub fn leaf_count(&self) -> usize {
        self.leaves
    }

    /// Win vector of an already-solved state.
    pub fn win(&self, state: &State) -> Option<&[Rational]> {
        self.table.get(state).map(|s| s.win.as_slice())
    }

    /// Solves `root` and everything below it.
    pub fn solve(&mut self, root: &State) -> Result<Vec<Rational>> {
        let n = self.expander.players();
        let bound = self.expander.bound();
        let mut on_path: HashSet<State> = HashSet::new();
        let mut stack = vec![Frame::Enter(root.clone(), 0)];
        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Enter(state, depth) => {
                    if self.table.contains_key(&state) {
                        continue;
                    }
                    if on_path.contains(&state) {
                        return Err(Error::DepthExceeded { bound });
                    }
                    match self.expander.expand(&state)? {
                        Expansion::Winner(k) => {
                            if k >= n {
                                return Err(Error::InvalidArgument(format!("winner {} out of range", k + 1)));
                            }
                            let mut win = vec![Rational::zero(); n];
                            win[k] = Rational::one();
                            self.insert(state, Solved { win, height: 0 })?;
                            self.leaves += 1;
                        }
                        Expansion::Branches { matches, branches } => {
                            check_weights(&state, &branches)?;
                            let depth = depth + matches;
                            if depth > bound {
                                return Err(Error::DepthExceeded { bound });
                            }
                            on_path.insert(state.clone());
                            let children: Vec<State> = branches.iter().map(|(_, c)| c.clone()).collect();
                            stack.push(Frame::Exit(state, matches, branches));
                            for c in children.into_iter().rev() {
                                if !self.table.contains_key(&c) {
                                    stack.push(Frame::Enter(c, depth));
                                }
                            }
                        }
                    }
                }
                Frame::Exit(state, matches, branches) => {
                    on_path.remove(&state);
                    let mut win = vec![Rational::zero(); n];
                    let mut height = 0;
                    for (w, c) in &branches {
                        let child = self.table.get(c).expect("children solved before parent");
                        height = height.max(child.height);
                        if w.is_zero() {
                            continue;
                        }
                        for (acc, x) in win.iter_mut().zip(&child.win) {
                            if !x.is_zero() {
                                *acc += w * x;
                            }
                        }
                    }
                    let height = height + matches;
                    if height > bound {
                        return Err(Error::DepthExceeded { bound });
                    }
                    self.insert(state, Solved { win, height })?;
                }
            }
        }
        Ok(self.table[root].win.clone())
    }

    fn insert(&mut self, state: State, solved: Solved) -> Result<()> {
        if self.table.len() >= self.limit {
            return Err(Error::StateLimit { limit: self.limit });
        }
        self.table.insert(state, solved);
        Ok(())
    }
}

fn check_weights(state: &State, branches: &[(Rational, State)]) -> Result<()> {
    if branches.is_empty() {
        return Err(Error::NotDistribution(format!("no branches at state {state}")));
    }
    if branches.iter().any(|(w, _)| *w < Rational::zero()) {
        return Err(Error::NotDistribution(format!("negative branch weight at state {state}")));
    }
    let total: Rational = branches.iter().map(|(w, _)| w).sum();
    if !total.is_one() {
        return Err(Error::NotDistribution(format!("branch weights sum to {total} at state {state}")));
    }
    Ok(())
}

/// Result of an exact evaluation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EvalReport {
    pub win_vector: WinVector,
    pub states_visited: usize,
    pub leaf_count: usize,
}

fn check_size(t: &dyn Tournament, p: &MatchMatrix) -> Result<()> {
    if t.players() != p.n() {
        return Err(Error::SizeMismatch { expected: t.players(), actual: p.n() });
    }
    Ok(())
}

/// Exact win vector of the specialization `(t, p)`.
pub fn exact_win_vector(t: &dyn Tournament, p: &MatchMatrix) -> Result<EvalReport> {
    check_size(t, p)?;
    let mut solver = Solver::new(MatchExpander { tournament: t, matrix: p });
    let win = solver.solve(&t.initial_state())?;
    Ok(EvalReport {
        win_vector: WinVector::new(win)?,
        states_visited: solver.states_visited(),
        leaf_count: solver.leaf_count(),
    })
}

/// Plain recursive evaluation without a memo table. Exponential in general;
/// meant as an independent cross-check on small tournaments.
pub fn exact_win_vector_unmemoized(t: &dyn Tournament, p: &MatchMatrix) -> Result<EvalReport> {
    check_size(t, p)?;
    let ex = MatchExpander { tournament: t, matrix: p };
    let mut visited = 0;
    let mut leaves = 0;
    let win = recurse(&ex, &t.initial_state(), 0, &mut visited, &mut leaves)?;
    Ok(EvalReport { win_vector: WinVector::new(win)?, states_visited: visited, leaf_count: leaves })
}

fn recurse(
    ex: &MatchExpander<'_>,
    state: &State,
    depth: usize,
    visited: &mut usize,
    leaves: &mut usize,
) -> Result<Vec<Rational>> {
    *visited += 1;
    let n = ex.players();
    match ex.expand(state)? {
        Expansion::Winner(k) => {
            *leaves += 1;
            let mut v = vec![Rational::zero(); n];
            *v.get_mut(k).ok_or_else(|| Error::InvalidArgument(format!("winner {} out of range", k + 1)))? =
                Rational::one();
            Ok(v)
        }
        Expansion::Branches { matches, branches } => {
            check_weights(state, &branches)?;
            let depth = depth + matches;
            if depth > ex.bound() {
                return Err(Error::DepthExceeded { bound: ex.bound() });
            }
            let mut acc = vec![Rational::zero(); n];
            for (w, c) in &branches {
                let child = recurse(ex, c, depth, visited, leaves)?;
                for (a, x) in acc.iter_mut().zip(child) {
                    *a += w * x;
                }
            }
            Ok(acc)
        }
    }
}

/// Win probabilities of both players of a match, conditioned on its result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConditionalPair {
    pub pair: (usize, usize),
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub first_plus: Rational,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub first_minus: Rational,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub second_plus: Rational,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub second_minus: Rational,
}

/// `(pi_i^+, pi_i^-, pi_j^+, pi_j^-)` at a state whose decision is a match
/// between `i` and `j`.
pub fn conditional_pair(t: &dyn Tournament, p: &MatchMatrix, state: &State) -> Result<ConditionalPair> {
    check_size(t, p)?;
    let Decision::Match { pair: (i, j), first_wins, second_wins } = t.step(state)? else {
        return Err(Error::NotMatchState { state: state.to_string() });
    };
    let mut solver = Solver::new(MatchExpander { tournament: t, matrix: p });
    let after_first = solver.solve(&first_wins)?;
    let after_second = solver.solve(&second_wins)?;
    Ok(ConditionalPair {
        pair: (i, j),
        first_plus: after_first[i].clone(),
        first_minus: after_second[i].clone(),
        second_plus: after_second[j].clone(),
        second_minus: after_first[j].clone(),
    })
}
