//! Turns command-line arguments into tournaments and matrices.

use std::fs;
use std::path::Path;
use std::sync::Arc;

use serde_json::{json, Value};
use tourney_core::analysis::{ConstantMap, TournamentMap};
use tourney_core::engine::{induced_map, sequentialize, RoundsTournament};
use tourney_core::polytope::{sigma_to_digraph, Digraph};
use tourney_core::zoo::{
    default_parameter, make_graph_tournament, make_map_tournament, make_rounds_example, make_roundrobin_repeat,
    make_single_elim_random, make_unfair3, make_uniform_winner, strictify_map, uniform_strict_map,
    GraphTournamentSpec, TieBreak, UnfairVariant,
};
use tourney_core::{parse_rational, Error, MatchMatrix, Result, Tournament, WinVector};

use crate::args::{MapName, SubjectArgs, TournamentName};

/// A built tournament together with everything needed to echo its
/// configuration.
pub struct Subject {
    pub tournament: Arc<dyn Tournament>,
    /// Present for tournaments defined round by round.
    pub rounds: Option<Arc<dyn RoundsTournament>>,
    pub n: usize,
    /// Used when no `--matrix` is given.
    pub default_matrix: Option<MatchMatrix>,
    pub config: Value,
}

pub fn read_file(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}

/// `pstar`, `uniform` (needs `n`) or a JSON file path.
pub fn load_matrix(spec: &str, n: Option<usize>) -> Result<MatchMatrix> {
    match spec {
        "pstar" => Ok(MatchMatrix::pstar()),
        "uniform" => {
            let n = n.ok_or_else(|| Error::InvalidArgument("--matrix uniform needs --n".into()))?;
            Ok(MatchMatrix::uniform(n))
        }
        path => MatchMatrix::from_json_str(&read_file(Path::new(path))?),
    }
}

pub fn parse_list(text: &str) -> Result<Vec<tourney_core::Rational>> {
    text.split(',').map(|t| parse_rational(t.trim())).collect()
}

fn expect_n(name: &str, given: Option<usize>, default: usize, allowed: impl Fn(usize) -> bool) -> Result<usize> {
    let n = given.unwrap_or(default);
    if !allowed(n) {
        return Err(Error::InvalidArgument(format!("{name} does not support n = {n}")));
    }
    Ok(n)
}

fn load_digraph(args: &SubjectArgs, n: usize) -> Result<Digraph> {
    if let Some(path) = &args.digraph {
        return serde_json::from_str(&read_file(path)?).map_err(|e| Error::Format(e.to_string()));
    }
    if let Some(sigma) = &args.sigma {
        let order = sigma
            .split(',')
            .map(|t| t.trim().parse::<usize>().map_err(|e| Error::InvalidArgument(format!("sigma entry {t:?}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        if order.contains(&0) {
            return Err(Error::InvalidArgument("sigma is 1-based".into()));
        }
        let zero_based: Vec<usize> = order.iter().map(|v| v - 1).collect();
        return sigma_to_digraph(n, &zero_based);
    }
    Err(Error::InvalidArgument("graph needs --digraph or --sigma".into()))
}

fn build_map(args: &SubjectArgs, n: usize) -> Result<Arc<dyn TournamentMap>> {
    let base: Arc<dyn TournamentMap> = match args.map {
        MapName::H => Arc::new(uniform_strict_map(n)?),
        MapName::Uniform => Arc::new(ConstantMap(WinVector::uniform(n))),
        MapName::T1 | MapName::T2 => {
            if n != 3 {
                return Err(Error::InvalidArgument("induced t1/t2 maps need n = 3".into()));
            }
            let variant =
                if args.map == MapName::T1 { UnfairVariant::CoinWithExcluded } else { UnfairVariant::DominantOrExcluded };
            Arc::new(induced_map(Arc::new(make_unfair3(variant, args.inner_iterations)?)))
        }
    };
    match &args.strictify {
        None => Ok(base),
        Some(eps) => Ok(Arc::new(strictify_map(base, parse_rational(eps)?, n)?)),
    }
}

pub fn build(args: &SubjectArgs) -> Result<Subject> {
    let mut rounds: Option<Arc<dyn RoundsTournament>> = None;
    let mut default_matrix = None;
    let mut config = json!({});
    let (tournament, n): (Arc<dyn Tournament>, usize) = match args.tournament {
        TournamentName::T1 | TournamentName::T2 => {
            expect_n("t1/t2", args.n, 3, |n| n == 3)?;
            let variant = if args.tournament == TournamentName::T1 {
                UnfairVariant::CoinWithExcluded
            } else {
                UnfairVariant::DominantOrExcluded
            };
            (Arc::new(make_unfair3(variant, args.iterations.unwrap_or(2))?), 3)
        }
        TournamentName::RrMax => {
            let n = expect_n("rr-max", args.n, 3, |n| n >= 2)?;
            (Arc::new(make_roundrobin_repeat(n, args.iterations.unwrap_or(1), TieBreak::MaxUniform)?), n)
        }
        TournamentName::RrMinCoin => {
            expect_n("rr-min-coin", args.n, 3, |n| n == 3)?;
            (Arc::new(make_roundrobin_repeat(3, args.iterations.unwrap_or(1), TieBreak::MinOutThenCoin)?), 3)
        }
        TournamentName::Uniform => {
            let n = expect_n("uniform", args.n, 3, |n| n >= 1)?;
            (Arc::new(make_uniform_winner(n)?), n)
        }
        TournamentName::SingleElim => {
            let n = expect_n("single-elim", args.n, 4, |n| n >= 2)?;
            (Arc::new(make_single_elim_random(n)?), n)
        }
        TournamentName::Map => {
            let n = expect_n("map", args.n, 3, |n| n >= 2)?;
            let map = build_map(args, n)?;
            config = json!({ "map": map.name() });
            (Arc::new(make_map_tournament(map, n, args.iterations.unwrap_or(1))?), n)
        }
        TournamentName::Graph => {
            let n = expect_n("graph", args.n, 4, |n| n >= 4)?;
            let parameter = match &args.parameter {
                Some(path) => MatchMatrix::from_json_str(&read_file(path)?)?,
                None => default_parameter(n)?,
            };
            let digraph = load_digraph(args, n)?;
            config = json!({ "digraph": digraph, "parameter": parameter.to_json() });
            let spec = GraphTournamentSpec { digraph, parameter: parameter.clone(), iterations: args.iterations.unwrap_or(1) };
            default_matrix = Some(parameter);
            (Arc::new(make_graph_tournament(spec)?), n)
        }
        TournamentName::RoundsExample => {
            expect_n("rounds-example", args.n, 4, |n| n == 4)?;
            let r: Arc<dyn RoundsTournament> = Arc::new(make_rounds_example());
            rounds = Some(r.clone());
            (Arc::new(sequentialize(r)), 4)
        }
    };
    Ok(Subject { tournament, rounds, n, default_matrix, config })
}

impl Subject {
    /// The matrix named on the command line, or the tournament's default.
    pub fn matrix(&self, spec: Option<&str>) -> Result<Option<MatchMatrix>> {
        match spec {
            Some(s) => {
                let m = load_matrix(s, Some(self.n))?;
                if m.n() != self.n {
                    return Err(Error::SizeMismatch { expected: self.n, actual: m.n() });
                }
                Ok(Some(m))
            }
            None => Ok(self.default_matrix.clone()),
        }
    }

    pub fn require_matrix(&self, spec: Option<&str>) -> Result<MatchMatrix> {
        self.matrix(spec)?.ok_or_else(|| Error::InvalidArgument("--matrix is required".into()))
    }

    pub fn describe(&self) -> Value {
        let mut v = json!({ "name": self.tournament.name(), "n": self.n });
        if let (Value::Object(dst), Value::Object(src)) = (&mut v, &self.config) {
            dst.extend(src.clone());
        }
        v
    }
}
