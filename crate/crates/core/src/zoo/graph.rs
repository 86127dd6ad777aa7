//! The frugal tournament `T_{G,N}` whose win vector at its own parameter
//! matrix tends to the graph vector `v(G)`.
//!
//! One player is excluded uniformly, the rest play `N` round-robins. Each
//! remainer then tries to recognise the other remainers as rows of the
//! parameter matrix from the results of matches it did not play in, and
//! claims a token if it outperformed the lower of the two unidentified rows.
//! The excluded player receives whatever token weight is left.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::engine::{Decision, State, Tournament};
use crate::error::{Error, Result};
use crate::matrix::{DoublyMonotonic, MatchMatrix};
use crate::polytope::{enumerate_digraphs, Digraph};
use crate::rational::{format_rational, half, Rational};

use super::simple::{foreign, leaf, LEAF};

#[derive(Clone, Debug)]
pub struct GraphTournamentSpec {
    pub digraph: Digraph,
    /// The matrix the rules are written against.
    pub parameter: MatchMatrix,
    pub iterations: usize,
}

/// A remainer that succeeded in identifying the others and outperformed
/// label `low` against every identified opponent. Its token weighs
/// `count(high -> low) / 2` in the digraph.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct TokenClaim {
    pub player: usize,
    pub low: usize,
    pub high: usize,
}

impl TokenClaim {
    pub fn weight(&self, g: &Digraph) -> Rational {
        Rational::new(g.count(self.high, self.low).into(), 2.into())
    }
}

/// Integer forms of the identification and token tests for a fixed
/// parameter matrix and number of iterations.
#[derive(Clone, Debug)]
pub struct Identifier {
    n: usize,
    iterations: usize,
    eps: Rational,
    /// `window[a * n + b] = (lo, hi)`: win counts `w` of label `a` over label
    /// `b` with `|w/N - p_ab| < eps`.
    window: Vec<(i64, i64)>,
    /// `threshold[i * n + l]`: fewest wins with `w/N > p_il - eps`.
    threshold: Vec<i64>,
}

fn floor_i64(r: &Rational) -> i64 {
    r.floor().to_integer().to_i64().expect("win counts fit in i64")
}

fn ceil_i64(r: &Rational) -> i64 {
    r.ceil().to_integer().to_i64().expect("win counts fit in i64")
}

impl Identifier {
    /// Checks the parameter preconditions and tabulates the integer tests.
    pub fn new(parameter: &MatchMatrix, iterations: usize) -> Result<Self> {
        let n = parameter.n();
        if n < 4 {
            return Err(Error::InvalidArgument(format!("graph tournaments need n >= 4, got {n}")));
        }
        if iterations < 1 {
            return Err(Error::InvalidArgument("need at least one round-robin".into()));
        }
        DoublyMonotonic::new(parameter.clone())?;
        let eps = parameter.epsilon()?;
        if n == 4 && !four_player_chain(parameter) {
            return Err(Error::InvalidArgument(
                "4-player parameter must satisfy p14 > p24 > p34 > p13 > p12 > p23".into(),
            ));
        }
        let big_n = Rational::from_integer(BigInt::from(iterations));
        let mut window = Vec::with_capacity(n * n);
        let mut threshold = Vec::with_capacity(n * n);
        for a in 0..n {
            for b in 0..n {
                let p = parameter.get(a, b);
                let low = &big_n * (p - &eps);
                let high = &big_n * (p + &eps);
                window.push((floor_i64(&low) + 1, ceil_i64(&high) - 1));
                threshold.push(floor_i64(&low) + 1);
            }
        }
        Ok(Self { n, iterations, eps, window, threshold })
    }

    pub fn epsilon(&self) -> &Rational {
        &self.eps
    }

    fn fits(&self, wins: u32, a: usize, b: usize) -> bool {
        let (lo, hi) = self.window[a * self.n + b];
        (lo..=hi).contains(&i64::from(wins))
    }

    /// All consistent labellings of `others` given the pairwise win table.
    fn labellings(&self, others: &[usize], wins: &[Vec<u32>]) -> Vec<Vec<usize>> {
        let mut found = Vec::new();
        let mut labels = Vec::with_capacity(others.len());
        let mut used = vec![false; self.n];
        self.extend(others, wins, &mut labels, &mut used, &mut found);
        found
    }

    fn extend(
        &self,
        others: &[usize],
        wins: &[Vec<u32>],
        labels: &mut Vec<usize>,
        used: &mut [bool],
        found: &mut Vec<Vec<usize>>,
    ) {
        let k = labels.len();
        if k == others.len() {
            found.push(labels.clone());
            return;
        }
        let me = others[k];
        for label in 0..self.n {
            if used[label] {
                continue;
            }
            let consistent = (0..k).all(|t| self.fits(wins[me][others[t]], label, labels[t]));
            if consistent {
                used[label] = true;
                labels.push(label);
                self.extend(others, wins, labels, used, found);
                labels.pop();
                used[label] = false;
            }
        }
    }

    /// Token claims of the remainers after all matches. `wins[a][b]` is the
    /// number of matches `a` won against `b`; the row of `excluded` is unused.
    pub fn claims(&self, excluded: usize, wins: &[Vec<u32>]) -> Result<Vec<TokenClaim>> {
        let remainers: Vec<usize> = (0..self.n).filter(|&p| p != excluded).collect();
        let mut out = Vec::new();
        for &me in &remainers {
            let others: Vec<usize> = remainers.iter().copied().filter(|&p| p != me).collect();
            let found = self.labellings(&others, wins);
            let labels = match found.as_slice() {
                [] => continue,
                [only] => only,
                _ => {
                    return Err(Error::AmbiguousIdentification(format!(
                        "player {} with player {} excluded finds {} labellings",
                        me + 1,
                        excluded + 1,
                        found.len()
                    )))
                }
            };
            let mut free = (0..self.n).filter(|l| !labels.contains(l));
            let (low, high) = (free.next().expect("two free labels"), free.next().expect("two free labels"));
            let outperformed = others
                .iter()
                .zip(labels)
                .all(|(&opp, &l)| i64::from(wins[me][opp]) >= self.threshold[low * self.n + l]);
            if outperformed {
                out.push(TokenClaim { player: me, low, high });
            }
        }
        Ok(out)
    }
}

fn four_player_chain(p: &MatchMatrix) -> bool {
    let chain = [(0, 3), (1, 3), (2, 3), (0, 2), (0, 1), (1, 2)];
    chain.windows(2).all(|w| p.get(w[0].0, w[0].1) > p.get(w[1].0, w[1].1))
}

pub struct GraphTournament {
    digraph: Digraph,
    parameter: MatchMatrix,
    identifier: Identifier,
    /// Per excluded player, the round-robin schedule of the remainers.
    schedules: Vec<Vec<(usize, usize)>>,
}

pub fn make_graph_tournament(spec: GraphTournamentSpec) -> Result<GraphTournament> {
    let GraphTournamentSpec { digraph, parameter, iterations } = spec;
    if digraph.n() != parameter.n() {
        return Err(Error::SizeMismatch { expected: parameter.n(), actual: digraph.n() });
    }
    let identifier = Identifier::new(&parameter, iterations)?;
    let n = parameter.n();
    let schedules = (0..n)
        .map(|e| super::round_robin_schedule(&(0..n).filter(|&p| p != e).collect::<Vec<_>>()))
        .collect();
    Ok(GraphTournament { digraph, parameter, identifier, schedules })
}

const PLAYING: u32 = 1;

impl GraphTournament {
    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    pub fn parameter(&self) -> &MatchMatrix {
        &self.parameter
    }

    pub fn identifier(&self) -> &Identifier {
        &self.identifier
    }

    fn win_table(&self, excluded: usize, counts: &[u32]) -> Vec<Vec<u32>> {
        let n = self.parameter.n();
        let per_pair = self.identifier.iterations as u32;
        let mut wins = vec![vec![0; n]; n];
        for (&(a, b), &c) in self.schedules[excluded].iter().zip(counts) {
            wins[a][b] = c;
            wins[b][a] = per_pair - c;
        }
        wins
    }

    /// The final lottery. Errors if the claimed token weight exceeds 1.
    pub fn lottery(&self, excluded: usize, counts: &[u32]) -> Result<Vec<(Rational, State)>> {
        let claims = self.identifier.claims(excluded, &self.win_table(excluded, counts))?;
        let mut branches = Vec::with_capacity(claims.len() + 1);
        let mut total = Rational::zero();
        for c in &claims {
            let w = c.weight(&self.digraph);
            total += &w;
            if !w.is_zero() {
                branches.push((w, leaf(c.player)));
            }
        }
        if total > Rational::one() {
            return Err(Error::TokenBudget {
                total: format_rational(&total),
                context: format!("excluded player {}, counts {counts:?}, digraph {:?}", excluded + 1, self.digraph),
            });
        }
        let rest = Rational::one() - total;
        if !rest.is_zero() {
            branches.push((rest, leaf(excluded)));
        }
        Ok(branches)
    }
}

impl Tournament for GraphTournament {
    fn players(&self) -> usize {
        self.parameter.n()
    }

    fn initial_state(&self) -> State {
        State::from_slice(&[0])
    }

    /// `[0]` draws the excluded player; `[PLAYING, e, m, counts...]` plays
    /// match `m` of the remainers' schedule.
    fn step(&self, state: &State) -> Result<Decision> {
        let n = self.players();
        let s = state.as_slice();
        match s {
            [0] => {
                let w = Rational::new(1.into(), n.into());
                let per_pair = self.schedules[0].len();
                Ok(Decision::Chance(
                    (0..n)
                        .map(|e| {
                            let start: State =
                                [PLAYING, e as u32, 0].into_iter().chain(std::iter::repeat_n(0, per_pair)).collect();
                            (w.clone(), start)
                        })
                        .collect(),
                ))
            }
            [LEAF, k] => Ok(Decision::Winner(*k as usize)),
            [PLAYING, e, m, counts @ ..] if (*e as usize) < n && counts.len() == self.schedules[0].len() => {
                let (e, m) = (*e as usize, *m as usize);
                if m == self.max_matches() {
                    return Ok(Decision::Chance(self.lottery(e, counts)?));
                }
                let k = m % counts.len();
                let mut next = s.to_vec();
                next[2] += 1;
                let second_wins = State::from_slice(&next);
                next[3 + k] += 1;
                Ok(Decision::Match { pair: self.schedules[e][k], first_wins: State::from_slice(&next), second_wins })
            }
            _ => Err(foreign(state)),
        }
    }

    fn max_matches(&self) -> usize {
        self.identifier.iterations * self.schedules[0].len()
    }

    fn name(&self) -> String {
        format!("graph({:?}, N={})", self.digraph, self.identifier.iterations)
    }
}

/// Result of checking the token budget over every outcome and digraph.
#[derive(Clone, Debug, Serialize)]
pub struct TokenAudit {
    pub n: usize,
    pub iterations: usize,
    pub digraphs: usize,
    pub outcomes: usize,
    #[serde(serialize_with = "crate::rational::serialize_rational")]
    pub max_total: Rational,
    pub violations: usize,
}

/// Exhausts every excluded player and every vector of per-pair win counts
/// (the token rule only sees counts, so this covers all match sequences),
/// and sums claimed token weights for every digraph on `n` vertices.
pub fn audit_token_budget(parameter: &MatchMatrix, iterations: usize) -> Result<TokenAudit> {
    let identifier = Identifier::new(parameter, iterations)?;
    let n = parameter.n();
    let digraphs = enumerate_digraphs(n)?;
    let mut audit = TokenAudit {
        n,
        iterations,
        digraphs: digraphs.len(),
        outcomes: 0,
        max_total: Rational::zero(),
        violations: 0,
    };
    let per_pair = iterations as u32;
    for e in 0..n {
        let remainers: Vec<usize> = (0..n).filter(|&p| p != e).collect();
        let schedule = super::round_robin_schedule(&remainers);
        let mut counts = vec![0u32; schedule.len()];
        loop {
            let mut wins = vec![vec![0; n]; n];
            for (&(a, b), &c) in schedule.iter().zip(&counts) {
                wins[a][b] = c;
                wins[b][a] = per_pair - c;
            }
            let claims = identifier.claims(e, &wins)?;
            audit.outcomes += 1;
            if !claims.is_empty() {
                for g in &digraphs {
                    let total: Rational = claims.iter().map(|c| c.weight(g)).sum();
                    if total > Rational::one() {
                        audit.violations += 1;
                    }
                    if total > audit.max_total {
                        audit.max_total = total;
                    }
                }
            }
            // odometer over counts in 0..=N
            let Some(k) = counts.iter().rposition(|&c| c < per_pair) else { break };
            counts[k] += 1;
            counts[k + 1..].iter_mut().for_each(|c| *c = 0);
        }
    }
    Ok(audit)
}

/// Builds a parameter matrix from pairs `(i, j)`, `i < j`, listed by
/// increasing value: the `r`-th pair (from 1) gets `1/2 + r / (2m)`.
fn from_ranking(n: usize, ascending: &[(usize, usize)]) -> Result<MatchMatrix> {
    let m = ascending.len();
    let mut value = vec![vec![half(); n]; n];
    for (r, &(i, j)) in ascending.iter().enumerate() {
        value[i][j] = half() + Rational::new((r + 1).into(), (2 * m).into());
    }
    MatchMatrix::from_upper(n, |i, j| value[i][j].clone())
}

/// The default parameter matrix. For four players it is the chain
/// `p23 < p12 < p13 < p34 < p24 < p14` on `7/12, ..., 1`; for more it ranks
/// pairs by distance `j - i` and then by `j`, giving steps of `1/(2m)`.
pub fn default_parameter(n: usize) -> Result<MatchMatrix> {
    if n < 4 {
        return Err(Error::InvalidArgument(format!("graph tournaments need n >= 4, got {n}")));
    }
    if n == 4 {
        return from_ranking(4, &[(1, 2), (0, 1), (0, 2), (2, 3), (1, 3), (0, 3)]);
    }
    let mut pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    pairs.sort_by_key(|&(i, j)| ((j - i) * (n + 1) + j, i));
    from_ranking(n, &pairs)
}

/// A random doubly monotonic parameter: a uniformly chosen next minimal
/// pair at every step of a linear extension of the monotonicity order.
/// Four players always get the default chain.
pub fn seeded_parameter(n: usize, seed: u64) -> Result<MatchMatrix> {
    if n <= 4 {
        return default_parameter(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut left: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
    let mut ascending = Vec::with_capacity(left.len());
    while !left.is_empty() {
        // (i, j) is minimal when no remaining (k, l) sits below it, i.e. k >= i, l <= j
        let minimal: Vec<usize> = (0..left.len())
            .filter(|&a| {
                let (i, j) = left[a];
                !left.iter().any(|&(k, l)| (k, l) != (i, j) && k >= i && l <= j)
            })
            .collect();
        let pick = minimal[rng.random_range(0..minimal.len())];
        ascending.push(left.remove(pick));
    }
    from_ranking(n, &ascending)
}
