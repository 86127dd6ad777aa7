//! Shared fixtures for the integration tests.
#![allow(dead_code)]

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tourney_core::analysis::{random_interior, TournamentMap};
use tourney_core::engine::{induced_map, sequentialize};
use tourney_core::polytope::sigma_to_digraph;
use tourney_core::rational::rat;
use tourney_core::zoo::{
    default_parameter, make_graph_tournament, make_map_tournament, make_rounds_example, make_roundrobin_repeat,
    make_single_elim_random, make_unfair3, make_uniform_winner, uniform_strict_map, GraphTournamentSpec, TieBreak,
    UnfairVariant,
};
use tourney_core::{MatchMatrix, Rational, Tournament};

pub type Named = (String, Arc<dyn Tournament>);

fn named(t: impl Tournament + 'static) -> Named {
    (t.name(), Arc::new(t))
}

pub fn t1(n_matches: usize) -> Arc<dyn Tournament> {
    Arc::new(make_unfair3(UnfairVariant::CoinWithExcluded, n_matches).unwrap())
}

pub fn t2(n_matches: usize) -> Arc<dyn Tournament> {
    Arc::new(make_unfair3(UnfairVariant::DominantOrExcluded, n_matches).unwrap())
}

pub fn t5(n: usize) -> Arc<dyn Tournament> {
    Arc::new(make_uniform_winner(n).unwrap())
}

/// `T_{G,N}` on four players for the greedy digraph of a 1-based order.
pub fn graph4(sigma: &[usize], iterations: usize) -> Arc<dyn Tournament> {
    let order: Vec<usize> = sigma.iter().map(|v| v - 1).collect();
    let spec = GraphTournamentSpec {
        digraph: sigma_to_digraph(4, &order).unwrap(),
        parameter: default_parameter(4).unwrap(),
        iterations,
    };
    Arc::new(make_graph_tournament(spec).unwrap())
}

/// Symmetric, honest three-player zoo members.
pub fn honest3() -> Vec<Named> {
    let h: Arc<dyn TournamentMap> = Arc::new(uniform_strict_map(3).unwrap());
    vec![
        named(make_unfair3(UnfairVariant::CoinWithExcluded, 2).unwrap()),
        named(make_unfair3(UnfairVariant::DominantOrExcluded, 2).unwrap()),
        named(make_unfair3(UnfairVariant::CoinWithExcluded, 3).unwrap()),
        named(make_roundrobin_repeat(3, 2, TieBreak::MaxUniform).unwrap()),
        named(make_roundrobin_repeat(3, 2, TieBreak::MinOutThenCoin).unwrap()),
        named(make_uniform_winner(3).unwrap()),
        named(make_map_tournament(h, 3, 1).unwrap()),
        named(make_map_tournament(Arc::new(induced_map(t1(2))), 3, 1).unwrap()),
    ]
}

/// Symmetric, honest four-player zoo members.
pub fn honest4() -> Vec<Named> {
    vec![
        named(make_single_elim_random(4).unwrap()),
        named(make_roundrobin_repeat(4, 1, TieBreak::MaxUniform).unwrap()),
        named(make_uniform_winner(4).unwrap()),
        ("graph(2,3,1,4; N=1)".into(), graph4(&[2, 3, 1, 4], 1)),
        ("graph(4,1,2,3; N=1)".into(), graph4(&[4, 1, 2, 3], 1)),
    ]
}

pub fn rounds_sequential() -> Arc<dyn Tournament> {
    Arc::new(sequentialize(Arc::new(make_rounds_example())))
}

/// Random matrix with entries on a `1/den` grid, including 0 and 1.
pub fn random_matrix(n: usize, den: i64, rng: &mut impl Rng) -> MatchMatrix {
    MatchMatrix::from_upper(n, |_, _| rat(rng.random_range(0..=den), den)).unwrap()
}

pub fn random_interior_matrices(n: usize, count: usize, seed: u64) -> Vec<MatchMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_interior(n, &mut rng)).collect()
}

/// A random point of the simplex on a `1/den` grid.
pub fn random_distribution(n: usize, den: u32, rng: &mut impl Rng) -> Vec<Rational> {
    let mut cuts: Vec<u32> = (0..n - 1).map(|_| rng.random_range(0..=den)).collect();
    cuts.sort_unstable();
    cuts.insert(0, 0);
    cuts.push(den);
    cuts.windows(2).map(|w| rat((w[1] - w[0]).into(), den.into())).collect()
}
