mod common;

use std::sync::Arc;

use num_traits::One;
use tourney_core::analysis::{monotonic_samples, ConstantMap, TournamentMap};
use tourney_core::engine::{exact_win_vector, mixture, simulate, RoundExpander, Solver};
use tourney_core::polytope::{graph_vector, hull_distance_linf, hull_membership, Digraph};
use tourney_core::rational::{half, rat};
use tourney_core::zoo::{
    default_parameter, make_graph_tournament, make_rounds_example, strictify_map, uniform_strict_map,
    GraphTournamentSpec,
};
use tourney_core::{MatchMatrix, Rational, State, WinVector};

use common::*;

#[test]
fn mixtures_hit_convex_combinations() {
    let p = MatchMatrix::pstar();
    let v1 = exact_win_vector(t1(2).as_ref(), &p).unwrap().win_vector;
    let v2 = exact_win_vector(t2(2).as_ref(), &p).unwrap().win_vector;
    for k in 0..=6 {
        let w = rat(k, 6);
        let m = mixture(t1(2), t2(2), w.clone()).unwrap();
        assert_eq!(exact_win_vector(&m, &p).unwrap().win_vector, v1.mix(&v2, &w));
    }
}

#[test]
fn exact_graph_vectors_lie_in_the_hull() {
    let samples = monotonic_samples(4, 5).unwrap();
    for sigma in [[2, 3, 1, 4], [4, 1, 2, 3], [1, 2, 3, 4]] {
        for iterations in [1, 2] {
            let t = graph4(&sigma, iterations);
            for d in &samples {
                let v = exact_win_vector(t.as_ref(), d.matrix()).unwrap().win_vector;
                assert!(hull_membership(&v).unwrap().is_member(), "{sigma:?} N={iterations}: {v}");
            }
        }
    }
}

#[test]
fn simulated_graph_vectors_are_near_the_hull() {
    let t = graph4(&[2, 3, 1, 4], 12);
    for (k, d) in monotonic_samples(4, 8).unwrap().iter().take(4).enumerate() {
        let r = simulate(t.as_ref(), d.matrix(), 20_000, 100 + k as u64).unwrap();
        let x: Vec<Rational> = r.counts.iter().map(|&c| rat(c as i64, r.trials as i64)).collect();
        let gap = hull_distance_linf(&x).unwrap();
        assert!(gap <= rat(3, 100), "sample {k}: {gap}");
    }
}

#[test]
fn all_loops_digraph_is_uniform() {
    for n in 2..=5 {
        let g = Digraph::all_loops(n);
        assert_eq!(graph_vector(&g).unwrap(), WinVector::uniform(n));
        // graph tournaments start at four players; five is too slow here
        if n == 4 {
            let t = make_graph_tournament(GraphTournamentSpec {
                digraph: g,
                parameter: default_parameter(n).unwrap(),
                iterations: 1,
            })
            .unwrap();
            for p in random_interior_matrices(n, 3, n as u64) {
                assert_eq!(exact_win_vector(&t, &p).unwrap().win_vector, WinVector::uniform(n));
            }
        }
    }
}

/// Winning chances of the first player of pairing 0 after round one, given
/// its own result, averaged over the other pair's first result.
#[test]
fn rounds_example_after_round_one() {
    let r = make_rounds_example();
    for p in random_interior_matrices(4, 6, 31) {
        let mut solver = Solver::new(RoundExpander { tournament: &r, matrix: &p });
        solver.solve(&State::from_slice(&[0])).unwrap();
        let q = p.get(2, 3).clone();
        let other = [(Rational::one() - &q, 0u32), (q.clone(), 1u32)];
        let averaged = |own: u32| -> Rational {
            other
                .iter()
                .map(|(w, bit)| w * &solver.win(&State::from_slice(&[2, 0, own | bit << 1])).unwrap()[0])
                .sum()
        };
        let not_q = Rational::one() - &q;
        assert_eq!(averaged(1), half() * (&q * &q + &not_q * &not_q));
        assert_eq!(averaged(0), &q * &not_q);
    }
}

#[test]
fn h_examples() {
    let h = uniform_strict_map(3).unwrap();
    let p = MatchMatrix::pstar();
    assert_eq!(h.eval(&p).unwrap().components(), &[rat(1, 2), rat(1, 3), rat(1, 6)]);
    assert_eq!(h.eval(&MatchMatrix::uniform(3)).unwrap(), WinVector::uniform(3));
    // raising any of a player's entries raises its value
    let up = p.with_raised(1, 2, &rat(1, 4)).unwrap();
    assert!(h.eval(&up).unwrap().get(1) > h.eval(&p).unwrap().get(1));
    assert!(uniform_strict_map(1).is_err());
}

#[test]
fn strictify_examples() {
    let p = MatchMatrix::pstar();
    let flat: Arc<dyn TournamentMap> = Arc::new(ConstantMap(WinVector::uniform(3)));
    let s = strictify_map(flat.clone(), rat(1, 1), 3).unwrap();
    assert_eq!(s.eval(&p).unwrap().components(), &[rat(5, 12), rat(1, 3), rat(1, 4)]);
    let s = strictify_map(flat.clone(), rat(1, 5), 3).unwrap();
    // oracle: (9/10) * 1/3 + (1/10) * h(P*)
    let want: Vec<Rational> = [rat(1, 2), rat(1, 3), rat(1, 6)]
        .iter()
        .map(|h| rat(9, 10) * rat(1, 3) + rat(1, 10) * h)
        .collect();
    assert_eq!(s.eval(&p).unwrap().components(), want.as_slice());
    assert!(strictify_map(flat.clone(), rat(0, 1), 3).is_err());
    assert!(strictify_map(flat.clone(), rat(3, 2), 3).is_err());
    assert!(strictify_map(flat, rat(1, 2), 4).is_err());
}
