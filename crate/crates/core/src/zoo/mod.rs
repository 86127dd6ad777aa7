//! Concrete tournaments and tournament maps.

mod classic;
mod elimination;
mod graph;
mod maps;
mod rounds_example;
mod simple;

pub use classic::{make_roundrobin_repeat, make_unfair3, RoundRobinRepeat, TieBreak, Unfair3, UnfairVariant};
pub use elimination::{make_single_elim_random, SingleElimination, MAX_BRACKET_PLAYERS};
pub use graph::{
    audit_token_budget, default_parameter, make_graph_tournament, seeded_parameter, GraphTournament,
    GraphTournamentSpec, Identifier, TokenAudit, TokenClaim,
};
pub use maps::{
    make_map_tournament, strictify_map, uniform_strict_map, MapTournament, StrictifiedMap, UniformStrictMap,
};
pub use rounds_example::{make_rounds_example, PairedRounds};
pub use simple::{
    make_ignored_round_robin, make_uniform_winner, CoinTiming, FirstPlayerWins, IgnoredRoundRobin, LoserLottery,
    UniformWinner,
};

/// Every pair `(a, b)` with `a` before `b` in `players`, in lexicographic
/// order of positions: one round-robin.
pub(crate) fn round_robin_schedule(players: &[usize]) -> Vec<(usize, usize)> {
    players
        .iter()
        .enumerate()
        .flat_map(|(k, &a)| players[k + 1..].iter().map(move |&b| (a, b)))
        .collect()
}
