//! Sample-based checks of symmetry, honesty, futility and fairness.
//!
//! Each check verifies its inequality exactly at every sample matrix. None of
//! them can prove a property for all matrices, so a clean run is reported as
//! `pass-on-samples`. The one exception is a tournament that plays no match
//! on any path at all: honesty and futility then hold vacuously and the
//! verdict is `pass`.

use std::collections::{BTreeSet, HashSet, VecDeque};

use num_traits::Zero;
use serde::Serialize;

use super::samples::Sample;
use crate::engine::{
    exact_win_vector, Decision, Expander, Expansion, MatchExpander, RoundDecision, RoundExpander, RoundsTournament,
    Solver, State, Tournament,
};
use crate::error::{Error, Result};
use crate::matrix::{DoublyMonotonic, MatchMatrix, MatrixJson, Permutation};
use crate::rational::{format_rational, Rational};

/// Reports keep at most this many witnesses.
pub const MAX_WITNESSES: usize = 16;

/// Symmetry is checked against all of `S_n` up to this size and against the
/// generating transpositions `(1 k)` beyond it.
pub const FULL_SYMMETRY_N: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    PassOnSamples,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub sample: String,
    pub matrix: MatrixJson,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub state: Option<String>,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyReport {
    pub property: String,
    pub subject: String,
    pub verdict: Verdict,
    pub samples_checked: usize,
    pub states_checked: usize,
    pub witnesses: Vec<Witness>,
    /// Failures beyond the kept witnesses are only counted.
    pub violations: usize,
}

impl PropertyReport {
    fn new(property: &str, subject: String) -> Self {
        Self {
            property: property.into(),
            subject,
            verdict: Verdict::PassOnSamples,
            samples_checked: 0,
            states_checked: 0,
            witnesses: Vec::new(),
            violations: 0,
        }
    }

    fn record(&mut self, sample: &Sample, state: Option<&State>, detail: String) {
        self.violations += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(Witness {
                sample: sample.label.clone(),
                matrix: sample.matrix.to_json(),
                state: state.map(|s| s.to_string()),
                detail,
            });
        }
    }

    fn finish(mut self, vacuous: bool) -> Self {
        self.verdict = if self.violations > 0 {
            Verdict::Fail
        } else if vacuous {
            Verdict::Pass
        } else {
            Verdict::PassOnSamples
        };
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

fn nonempty(samples: &[Sample]) -> Result<()> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("property checks need at least one sample".into()));
    }
    Ok(())
}

fn check_size(n: usize, samples: &[Sample]) -> Result<()> {
    match samples.iter().find(|s| s.matrix.n() != n) {
        Some(s) => Err(Error::SizeMismatch { expected: n, actual: s.matrix.n() }),
        None => Ok(()),
    }
}

fn one_based(sigma: &Permutation) -> String {
    let parts: Vec<String> = sigma.images().iter().map(|v| (v + 1).to_string()).collect();
    format!("({})", parts.join(" "))
}

fn symmetry_group(n: usize) -> Vec<Permutation> {
    if n <= FULL_SYMMETRY_N {
        Permutation::all(n).filter(|s| *s != Permutation::identity(n)).collect()
    } else {
        (1..n).map(|k| Permutation::transposition(n, 0, k)).collect()
    }
}

/// `wv(T, P)_i = wv(T, sigma P)_{sigma(i)}` for every sample and every
/// renaming `sigma`.
pub fn check_symmetry(t: &dyn Tournament, samples: &[Sample]) -> Result<PropertyReport> {
    nonempty(samples)?;
    check_size(t.players(), samples)?;
    let mut report = PropertyReport::new("symmetry", t.name());
    let group = symmetry_group(t.players());
    for sample in samples {
        let base = exact_win_vector(t, &sample.matrix)?.win_vector;
        for sigma in &group {
            let renamed = exact_win_vector(t, &sample.matrix.permute(sigma)?)?.win_vector;
            for i in 0..t.players() {
                let (a, b) = (base.get(i), renamed.get(sigma.apply(i)));
                if a != b {
                    report.record(
                        sample,
                        None,
                        format!(
                            "sigma = {}: pi_{}(P) = {} but pi_{}(sigma P) = {}",
                            one_based(sigma),
                            i + 1,
                            format_rational(a),
                            sigma.apply(i) + 1,
                            format_rational(b)
                        ),
                    );
                }
            }
        }
        report.samples_checked += 1;
    }
    Ok(report.finish(false))
}

/// States reachable from `root` along branches of positive weight.
pub fn reachable<E: Expander>(ex: &E, root: &State) -> Result<Vec<State>> {
    let mut seen: HashSet<State> = HashSet::new();
    let mut order = Vec::new();
    let mut queue = VecDeque::from([root.clone()]);
    seen.insert(root.clone());
    while let Some(s) = queue.pop_front() {
        if let Expansion::Branches { branches, .. } = ex.expand(&s)? {
            for (w, next) in branches {
                if !w.is_zero() && seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
        order.push(s);
    }
    Ok(order)
}

/// Does any path, under any matrix, reach a match? Chance branches of
/// weight zero are skipped; both results of every match are followed.
pub fn plays_any_match(t: &dyn Tournament) -> Result<bool> {
    let mut seen: HashSet<State> = HashSet::new();
    let mut queue = VecDeque::from([t.initial_state()]);
    while let Some(s) = queue.pop_front() {
        if !seen.insert(s.clone()) {
            continue;
        }
        match t.step(&s)? {
            Decision::Match { .. } => return Ok(true),
            Decision::Chance(branches) => queue.extend(branches.into_iter().filter(|(w, _)| !w.is_zero()).map(|(_, c)| c)),
            Decision::Winner(_) => {}
        }
    }
    Ok(false)
}

/// A reachable match with both players' conditional win probabilities.
struct Announced {
    state: State,
    pair: (usize, usize),
    /// `[pi_i^+, pi_i^-, pi_j^+, pi_j^-]`
    values: [Rational; 4],
}

fn announced_matches(t: &dyn Tournament, p: &MatchMatrix) -> Result<Vec<Announced>> {
    let mut solver = Solver::new(MatchExpander { tournament: t, matrix: p });
    let root = t.initial_state();
    solver.solve(&root)?;
    let mut out = Vec::new();
    for state in reachable(solver.expander(), &root)? {
        if let Decision::Match { pair: (i, j), first_wins, second_wins } = t.step(&state)? {
            let first = solver.win(&first_wins).expect("solved with the root");
            let second = solver.win(&second_wins).expect("solved with the root");
            let values = [first[i].clone(), second[i].clone(), second[j].clone(), first[j].clone()];
            out.push(Announced { state, pair: (i, j), values });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Comparison {
    AtLeast,
    Greater,
    Equal,
}

impl Comparison {
    fn holds(self, plus: &Rational, minus: &Rational) -> bool {
        match self {
            Self::AtLeast => plus >= minus,
            Self::Greater => plus > minus,
            Self::Equal => plus == minus,
        }
    }

    fn symbol(self) -> &'static str {
        match self {
            Self::AtLeast => ">=",
            Self::Greater => ">",
            Self::Equal => "=",
        }
    }
}

fn conditional_check(
    property: &str,
    t: &dyn Tournament,
    samples: &[Sample],
    compare: impl Fn(&MatchMatrix) -> Comparison,
    require_meetings: impl Fn(&MatchMatrix) -> bool,
) -> Result<PropertyReport> {
    nonempty(samples)?;
    let n = t.players();
    check_size(n, samples)?;
    let mut report = PropertyReport::new(property, t.name());
    for sample in samples {
        let cmp = compare(&sample.matrix);
        let announced = announced_matches(t, &sample.matrix)?;
        let mut met = BTreeSet::new();
        for a in &announced {
            let (i, j) = a.pair;
            met.insert((i.min(j), i.max(j)));
            let [ip, im, jp, jm] = &a.values;
            for (k, plus, minus) in [(i, ip, im), (j, jp, jm)] {
                if !cmp.holds(plus, minus) {
                    report.record(
                        sample,
                        Some(&a.state),
                        format!(
                            "match {}-{}: player {} has pi+ = {} and pi- = {}, wanted pi+ {} pi-",
                            i + 1,
                            j + 1,
                            k + 1,
                            format_rational(plus),
                            format_rational(minus),
                            cmp.symbol()
                        ),
                    );
                }
            }
        }
        report.states_checked += announced.len();
        if require_meetings(&sample.matrix) {
            for a in 0..n {
                for b in a + 1..n {
                    if !met.contains(&(a, b)) {
                        report.record(sample, None, format!("players {} and {} never meet", a + 1, b + 1));
                    }
                }
            }
        }
        report.samples_checked += 1;
    }
    let vacuous = report.states_checked == 0 && !plays_any_match(t)?;
    Ok(report.finish(vacuous))
}

/// `pi_i^+ >= pi_i^-` for both players at every reachable match. In strict
/// mode, at interior samples the inequality must be strict and every pair
/// of players must meet with positive probability.
pub fn check_honesty(t: &dyn Tournament, samples: &[Sample], strict: bool) -> Result<PropertyReport> {
    let name = if strict { "strict honesty" } else { "honesty" };
    conditional_check(
        name,
        t,
        samples,
        |p| if strict && p.is_interior() { Comparison::Greater } else { Comparison::AtLeast },
        |p| strict && p.is_interior(),
    )
}

/// `pi_i^+ = pi_i^-` at every reachable match.
pub fn check_futility(t: &dyn Tournament, samples: &[Sample]) -> Result<PropertyReport> {
    conditional_check("futility", t, samples, |_| Comparison::Equal, |_| false)
}

/// Honesty for tournaments with rounds: condition on earlier rounds and the
/// current pairings, vary a player's own match and let the other matches of
/// the round follow the matrix.
pub fn check_rounds_honesty(r: &dyn RoundsTournament, samples: &[Sample]) -> Result<PropertyReport> {
    nonempty(samples)?;
    check_size(r.players(), samples)?;
    let mut report = PropertyReport::new("rounds honesty", r.name());
    for sample in samples {
        let p = &sample.matrix;
        let mut solver = Solver::new(RoundExpander { tournament: r, matrix: p });
        let root = r.initial_state();
        solver.solve(&root)?;
        for state in reachable(solver.expander(), &root)? {
            let RoundDecision::Round { pairs, outcomes } = r.step(&state)? else { continue };
            report.states_checked += 1;
            for (k, &(a, b)) in pairs.iter().enumerate() {
                // [a wins, b wins] conditional vectors
                let mut given = [vec![Rational::zero(); r.players()], vec![Rational::zero(); r.players()]];
                for (mask, next) in outcomes.iter().enumerate() {
                    let weight = pairs.iter().enumerate().filter(|&(o, _)| o != k).fold(
                        Rational::from_integer(1.into()),
                        |acc, (o, &(x, y))| if mask >> o & 1 == 1 { acc * p.get(x, y) } else { acc * p.get(y, x) },
                    );
                    let side = usize::from(mask >> k & 1 == 0);
                    let win = solver.win(next).expect("solved with the root");
                    for (acc, w) in given[side].iter_mut().zip(win) {
                        *acc += &weight * w;
                    }
                }
                for (player, plus, minus) in [(a, &given[0][a], &given[1][a]), (b, &given[1][b], &given[0][b])] {
                    if plus < minus {
                        report.record(
                            sample,
                            Some(&state),
                            format!(
                                "round match {}-{}: player {} has pi+ = {} < pi- = {}",
                                a + 1,
                                b + 1,
                                player + 1,
                                format_rational(plus),
                                format_rational(minus)
                            ),
                        );
                    }
                }
            }
        }
        report.samples_checked += 1;
    }
    Ok(report.finish(false))
}

/// `pi_1 >= pi_2 >= ... >= pi_n` at every doubly monotonic sample.
pub fn check_fairness(t: &dyn Tournament, samples: &[DoublyMonotonic]) -> Result<PropertyReport> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("property checks need at least one sample".into()));
    }
    let mut report = PropertyReport::new("fairness", t.name());
    for (k, d) in samples.iter().enumerate() {
        let sample = Sample::new(format!("monotonic-sample-{k}"), d.matrix().clone());
        if sample.matrix.n() != t.players() {
            return Err(Error::SizeMismatch { expected: t.players(), actual: sample.matrix.n() });
        }
        let v = exact_win_vector(t, &sample.matrix)?.win_vector;
        for i in 1..v.n() {
            if v.get(i) > v.get(i - 1) {
                report.record(
                    &sample,
                    None,
                    format!(
                        "pi_{} = {} > pi_{} = {}",
                        i + 1,
                        format_rational(v.get(i)),
                        i,
                        format_rational(v.get(i - 1))
                    ),
                );
            }
        }
        report.samples_checked += 1;
    }
    Ok(report.finish(false))
}

/// Largest exact gap `|pi_i(T1, P) - pi_i(T2, P)|` over samples and players.
pub fn epsilon_distance(a: &dyn Tournament, b: &dyn Tournament, samples: &[Sample]) -> Result<Rational> {
    if a.players() != b.players() {
        return Err(Error::SizeMismatch { expected: a.players(), actual: b.players() });
    }
    let mut worst = Rational::zero();
    for s in samples {
        let gap = exact_win_vector(a, &s.matrix)?.win_vector.linf_distance(&exact_win_vector(b, &s.matrix)?.win_vector);
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// Like [`epsilon_distance`], with `simulated` estimated by Monte Carlo.
/// Sample `k` uses seed `seed + k`.
pub fn epsilon_distance_simulated(
    simulated: &dyn Tournament,
    exact: &dyn Tournament,
    samples: &[Sample],
    trials: u64,
    seed: u64,
) -> Result<f64> {
    if simulated.players() != exact.players() {
        return Err(Error::SizeMismatch { expected: exact.players(), actual: simulated.players() });
    }
    let mut worst = 0.0f64;
    for (k, s) in samples.iter().enumerate() {
        let reference = exact_win_vector(exact, &s.matrix)?.win_vector.to_f64();
        let sim = crate::engine::simulate(simulated, &s.matrix, trials, seed.wrapping_add(k as u64))?;
        worst = worst.max(sim.linf_to(&reference));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::samples::{monotonic_samples, standard_samples, STANDARD_SEED};
    use crate::zoo::{make_uniform_winner, make_unfair3, CoinTiming, FirstPlayerWins, LoserLottery, UnfairVariant};

    #[test]
    fn uniform_winner_is_vacuously_honest() {
        let t = make_uniform_winner(3).unwrap();
        let s = standard_samples(3, STANDARD_SEED).unwrap();
        assert_eq!(check_honesty(&t, &s, false).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_futility(&t, &s).unwrap().verdict, Verdict::Pass);
        assert_eq!(check_symmetry(&t, &s).unwrap().verdict, Verdict::PassOnSamples);
        assert_eq!(check_honesty(&t, &s, true).unwrap().verdict, Verdict::Fail);
    }

    #[test]
    fn rigged_tournament_is_not_symmetric() {
        let s = standard_samples(3, STANDARD_SEED).unwrap();
        let r = check_symmetry(&FirstPlayerWins { n: 3 }, &s).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(!r.witnesses.is_empty());
    }

    #[test]
    fn pre_drawn_lottery_is_dishonest() {
        let s = standard_samples(2, STANDARD_SEED).unwrap();
        let after = check_honesty(&LoserLottery { timing: CoinTiming::AfterMatch }, &s, false).unwrap();
        assert_eq!(after.verdict, Verdict::PassOnSamples);
        let before = check_honesty(&LoserLottery { timing: CoinTiming::BeforeMatch }, &s, false).unwrap();
        assert_eq!(before.verdict, Verdict::Fail);
        assert_eq!(before.witnesses[0].state.as_deref(), Some("[1, 1]"));
    }

    #[test]
    fn unfair_tournaments_fail_fairness_only() {
        let s = standard_samples(3, STANDARD_SEED).unwrap();
        let d = monotonic_samples(3, STANDARD_SEED).unwrap();
        for v in [UnfairVariant::CoinWithExcluded, UnfairVariant::DominantOrExcluded] {
            let t = make_unfair3(v, 2).unwrap();
            assert!(check_honesty(&t, &s, false).unwrap().passed());
            assert!(!check_honesty(&t, &s, true).unwrap().passed());
            assert!(!check_fairness(&t, &d).unwrap().passed());
        }
        let t1 = make_unfair3(UnfairVariant::CoinWithExcluded, 2).unwrap();
        assert_eq!(check_futility(&t1, &s).unwrap().verdict, Verdict::Fail);
    }
}
