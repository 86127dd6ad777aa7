//! The twelve acceptance criteria, one test each. Every test prints a single
//! PASS/FAIL line straight to stderr (so it shows even when output is
//! captured) and enforces its wall-clock limit. A mutex keeps the criteria
//! from running concurrently so the timings are not distorted.

mod common;

use std::io::Write;
use std::sync::{Arc, Mutex};
use std::time::{Duration, Instant};

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourney_core::analysis::{
    check_fairness, check_futility, check_honesty, check_symmetry, discrete_map_polytope,
    epsilon_distance_simulated, standard_samples, Verdict, STANDARD_SEED,
};
use tourney_core::engine::{exact_win_vector, induced_map, simulate};
use tourney_core::polytope::{
    arc_flow_membership, corners, enumerate_digraphs, graph_vector, hull_membership, permutation_classes, Digraph,
    Sense,
};
use tourney_core::rational::{format_rational, rat};
use tourney_core::zoo::{
    audit_token_budget, default_parameter, make_graph_tournament, make_ignored_round_robin, make_map_tournament,
    CoinTiming, FirstPlayerWins, GraphTournamentSpec, LoserLottery,
};
use tourney_core::{DoublyMonotonic, MatchMatrix, Rational, Tournament, WinVector};

use common::*;

static SERIAL: Mutex<()> = Mutex::new(());

/// Fixed seed for every randomized criterion.
const SEED: u64 = 20_240_601;

fn criterion(id: u32, title: &str, limit: Duration, body: impl FnOnce() -> Result<String, String>) {
    let _guard = SERIAL.lock().unwrap_or_else(|e| e.into_inner());
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body))
        .unwrap_or_else(|_| Err("panicked".to_string()));
    let elapsed = start.elapsed();
    let verdict = match &outcome {
        Ok(_) if elapsed <= limit => Ok(()),
        Ok(_) => Err(format!("took {elapsed:.2?}, limit {limit:?}")),
        Err(e) => Err(e.clone()),
    };
    let detail = match &outcome {
        Ok(d) => d.clone(),
        Err(e) => e.clone(),
    };
    let line = format!(
        "acceptance criterion {id:>2} [{}] {title}: {detail} ({elapsed:.2?} / limit {limit:?})\n",
        if verdict.is_ok() { "PASS" } else { "FAIL" }
    );
    let _ = std::io::stderr().write_all(line.as_bytes());
    if let Err(e) = verdict {
        panic!("criterion {id} failed: {e}");
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: tourney_core::Error) -> String {
    e.to_string()
}

fn vector(v: &[(i64, i64)]) -> WinVector {
    WinVector::new(v.iter().map(|&(a, b)| rat(a, b)).collect()).unwrap()
}

#[test]
fn criterion_01_exact_two_match_values() {
    criterion(1, "T1/T2 at N=2 and P* exactly", Duration::from_secs(1), || {
        let p = MatchMatrix::pstar();
        let v1 = exact_win_vector(t1(2).as_ref(), &p).map_err(err)?.win_vector;
        let v2 = exact_win_vector(t2(2).as_ref(), &p).map_err(err)?.win_vector;
        ensure(v1 == vector(&[(3, 8), (5, 12), (5, 24)]), || format!("T1 gave {v1}"))?;
        ensure(v2 == vector(&[(7, 12), (1, 6), (1, 4)]), || format!("T2 gave {v2}"))?;
        Ok(format!("T1 = {v1}, T2 = {v2}"))
    });
}

#[test]
fn criterion_02_large_n_limits() {
    criterion(2, "T1/T2 Monte Carlo at N=1000", Duration::from_secs(60), || {
        let p = MatchMatrix::pstar();
        let r1 = simulate(t1(1000).as_ref(), &p, 100_000, SEED).map_err(err)?;
        let r2 = simulate(t2(1000).as_ref(), &p, 100_000, SEED).map_err(err)?;
        let d1 = r1.linf_to(&[1.0 / 3.0, 0.5, 1.0 / 6.0]);
        let d2 = r2.linf_to(&[2.0 / 3.0, 0.0, 1.0 / 3.0]);
        ensure(d1 <= 0.02 && d2 <= 0.02, || format!("gaps {d1:.4} and {d2:.4} exceed 0.02"))?;
        Ok(format!("l-inf gaps {d1:.4} (T1), {d2:.4} (T2)"))
    });
}

#[test]
fn criterion_03_permutation_table() {
    criterion(3, "permutation table for n = 2, 3", Duration::from_secs(1), || {
        // (sigmas, arcs as (from, to, multiplicity), vector), 1-based
        type Row = (Vec<Vec<usize>>, Vec<(usize, usize, u8)>, Vec<(i64, i64)>);
        let expected: Vec<Row> = vec![
            (vec![vec![1, 2]], vec![(1, 1, 2), (2, 1, 2)], vec![(1, 1), (0, 1)]),
            (vec![vec![2, 1]], vec![(1, 1, 2), (2, 2, 2)], vec![(1, 2), (1, 2)]),
            (vec![vec![1, 2, 3], vec![1, 3, 2]], vec![(1, 1, 2), (2, 1, 2), (3, 1, 2)], vec![(1, 1), (0, 1), (0, 1)]),
            (vec![vec![2, 1, 3]], vec![(1, 1, 2), (2, 2, 2), (3, 1, 1), (3, 2, 1)], vec![(1, 2), (1, 2), (0, 1)]),
            (vec![vec![2, 3, 1]], vec![(1, 1, 2), (2, 2, 2), (3, 2, 1), (3, 3, 1)], vec![(1, 3), (1, 2), (1, 6)]),
            (vec![vec![3, 1, 2]], vec![(1, 1, 2), (2, 1, 2), (3, 3, 2)], vec![(2, 3), (0, 1), (1, 3)]),
            (vec![vec![3, 2, 1]], vec![(1, 1, 2), (2, 2, 2), (3, 3, 2)], vec![(1, 3), (1, 3), (1, 3)]),
        ];
        let mut got = permutation_classes(2).map_err(err)?;
        got.extend(permutation_classes(3).map_err(err)?);
        ensure(got.len() == expected.len(), || format!("{} rows instead of {}", got.len(), expected.len()))?;
        for (row, (sigmas, arcs, v)) in got.iter().zip(&expected) {
            let n = v.len();
            let zero_based: Vec<(usize, usize, u8)> = arcs.iter().map(|&(i, j, m)| (i - 1, j - 1, m)).collect();
            let g = Digraph::from_arcs(n, &zero_based).map_err(err)?;
            ensure(&row.sigmas == sigmas, || format!("sigma class {:?} vs {sigmas:?}", row.sigmas))?;
            ensure(row.digraph == g, || format!("digraph {} vs {g}", row.digraph))?;
            ensure(row.vector == vector(v), || format!("vector {} for {sigmas:?}", row.vector))?;
        }
        Ok("all 7 rows match".into())
    });
}

#[test]
fn criterion_04_counting() {
    criterion(4, "digraph and corner counts", Duration::from_secs(30), || {
        let mut product: usize = 1;
        let mut sizes = Vec::new();
        for n in 1..=6usize {
            if n >= 2 {
                product *= 2 + n * (n - 1) / 2;
            }
            let count = enumerate_digraphs(n).map_err(err)?.len();
            ensure(count == product, || format!("n = {n}: {count} digraphs, formula {product}"))?;
            sizes.push(count);
        }
        ensure(sizes[5] == 24_480, || "n = 6 is not 24480".into())?;
        let mut corner_counts = Vec::new();
        for n in 1..=7u32 {
            let cs = corners(n as usize).map_err(err)?;
            let want = 3usize.pow(n - 1).div_ceil(2);
            ensure(cs.len() == want, || format!("n = {n}: {} corners, formula {want}", cs.len()))?;
            let distinct: std::collections::HashSet<_> = cs.iter().collect();
            ensure(distinct.len() == cs.len(), || format!("n = {n}: repeated corner vectors"))?;
            corner_counts.push(cs.len());
        }
        ensure(corner_counts[6] == 365, || "n = 7 is not 365".into())?;
        Ok(format!("digraphs {sizes:?}, corners {corner_counts:?}"))
    });
}

#[test]
fn criterion_05_membership_equivalence() {
    criterion(5, "arc-flow and hull membership agree", Duration::from_secs(120), || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut summary = Vec::new();
        for n in 3..=5 {
            let mut members = 0;
            for _ in 0..200 {
                let x = WinVector::new(random_distribution(n, 60, &mut rng)).map_err(err)?;
                let a = arc_flow_membership(&x).map_err(err)?.is_member();
                let h = hull_membership(&x).map_err(err)?.is_member();
                ensure(a == h, || format!("disagree at {x}: arc flow {a}, hull {h}"))?;
                members += usize::from(a);
            }
            let graphs = enumerate_digraphs(n).map_err(err)?;
            for g in &graphs {
                let v = graph_vector(g).map_err(err)?;
                ensure(arc_flow_membership(&v).map_err(err)?.is_member(), || format!("arc flow rejects v({g})"))?;
                ensure(hull_membership(&v).map_err(err)?.is_member(), || format!("hull rejects v({g})"))?;
            }
            summary.push(format!("n={n}: {members}/200 members, {} generators", graphs.len()));
        }
        Ok(summary.join("; "))
    });
}

#[test]
fn criterion_06_four_player_extremes() {
    criterion(6, "extremes of the four-player polytope", Duration::from_secs(1), || {
        let cs = corners(4).map_err(err)?;
        let min_first = cs.iter().map(|c| c.get(0).clone()).min().unwrap();
        let max_third = cs.iter().map(|c| c.get(2).clone()).max().unwrap();
        ensure(min_first == rat(1, 4), || format!("min x1 = {min_first}"))?;
        ensure(max_third == rat(3, 8), || format!("max x3 = {max_third}"))?;
        Ok(format!("min x1 = {min_first}, max x3 = {max_third}"))
    });
}

#[test]
fn criterion_07_token_budget() {
    criterion(7, "token weight never exceeds 1", Duration::from_secs(600), || {
        let mut lines = Vec::new();
        for (n, iterations) in [(4, 1), (4, 2), (5, 1)] {
            let audit = audit_token_budget(&default_parameter(n).map_err(err)?, iterations).map_err(err)?;
            ensure(audit.violations == 0 && audit.max_total <= Rational::from_integer(1.into()), || {
                format!("n={n} N={iterations}: {} violations, max {}", audit.violations, audit.max_total)
            })?;
            lines.push(format!(
                "n={n} N={iterations}: {} outcomes x {} digraphs, max total {}",
                audit.outcomes, audit.digraphs, audit.max_total
            ));
        }
        Ok(lines.join("; "))
    });
}

#[test]
fn criterion_08_graph_tournament_convergence() {
    criterion(8, "graph tournaments approach v(G) at N=400", Duration::from_secs(600), || {
        let graphs = enumerate_digraphs(5).map_err(err)?;
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let picks = sample(&mut rng, graphs.len(), 3).into_vec();
        let parameter = default_parameter(5).map_err(err)?;
        let mut gaps = Vec::new();
        for (k, &idx) in picks.iter().enumerate() {
            let g = graphs[idx].clone();
            let target = graph_vector(&g).map_err(err)?;
            let spec = GraphTournamentSpec { digraph: g.clone(), parameter: parameter.clone(), iterations: 400 };
            let t = make_graph_tournament(spec).map_err(err)?;
            let r = simulate(&t, &parameter, 100_000, SEED + k as u64).map_err(err)?;
            gaps.push((g, target.clone(), r.linf_to(&target.to_f64()), r.empirical));
        }
        let detail = gaps
            .iter()
            .map(|(g, v, d, e)| format!("G={g} v={v} empirical={e:.3?} gap={d:.4}"))
            .collect::<Vec<_>>()
            .join("; ");
        ensure(gaps.iter().all(|(_, _, d, _)| *d <= 0.02), || detail.clone())?;
        Ok(detail)
    });
}

#[test]
fn criterion_09_property_suite() {
    criterion(9, "symmetry, honesty and fairness verdicts", Duration::from_secs(300), || {
        let s3 = standard_samples(3, STANDARD_SEED).map_err(err)?;
        let s4 = standard_samples(4, STANDARD_SEED).map_err(err)?;
        let subjects: Vec<(Named, &_)> =
            honest3().into_iter().map(|t| (t, &s3)).chain(honest4().into_iter().map(|t| (t, &s4))).collect();
        let mut checked = 0;
        for ((name, t), samples) in &subjects {
            let sym = check_symmetry(t.as_ref(), samples).map_err(err)?;
            let hon = check_honesty(t.as_ref(), samples, false).map_err(err)?;
            ensure(sym.passed(), || format!("{name} fails symmetry: {:?}", sym.witnesses.first()))?;
            ensure(hon.passed(), || format!("{name} fails honesty: {:?}", hon.witnesses.first()))?;
            checked += 1;
        }
        let pstar = [DoublyMonotonic::new(MatchMatrix::pstar()).map_err(err)?];
        for (label, t, (hi, lo)) in [("T1", t1(2), (1, 0)), ("T2", t2(2), (2, 1))] {
            let r = check_fairness(t.as_ref(), &pstar).map_err(err)?;
            ensure(r.verdict == Verdict::Fail && !r.witnesses.is_empty(), || format!("{label} passes fairness"))?;
            let v = exact_win_vector(t.as_ref(), pstar[0].matrix()).map_err(err)?.win_vector;
            ensure(v.get(hi) > v.get(lo), || format!("{label}: expected pi_{} > pi_{} in {v}", hi + 1, lo + 1))?;
        }
        let before = LoserLottery { timing: CoinTiming::BeforeMatch };
        let two = standard_samples(2, STANDARD_SEED).map_err(err)?;
        let r = check_honesty(&before, &two, false).map_err(err)?;
        ensure(r.verdict == Verdict::Fail && r.witnesses.iter().any(|w| w.state.is_some()), || {
            "pre-drawn lottery passes honesty".into()
        })?;
        let seq = rounds_sequential();
        let r = check_honesty(seq.as_ref(), &s4, false).map_err(err)?;
        ensure(r.verdict == Verdict::Fail && r.witnesses.iter().any(|w| w.state.is_some()), || {
            "sequential rounds example passes honesty".into()
        })?;
        Ok(format!("{checked} tournaments symmetric and honest; 4 expected failures reproduced"))
    });
}

#[test]
fn criterion_10_discrete_map_bounds() {
    criterion(10, "discrete map optima at P*", Duration::from_secs(300), || {
        let polytope = discrete_map_polytope(&MatchMatrix::pstar()).map_err(err)?;
        let unit = |k: usize| (0..3).map(|i| rat(i64::from(i == k), 1)).collect::<Vec<_>>();
        let max2 = polytope.optimize(&unit(1), Sense::Maximize).map_err(err)?.value;
        let max3 = polytope.optimize(&unit(2), Sense::Maximize).map_err(err)?.value;
        let min1 = polytope.optimize(&unit(0), Sense::Minimize).map_err(err)?.value;
        ensure(max2 <= rat(1, 2), || format!("max f2 = {max2}"))?;
        ensure(max3 <= rat(1, 3), || format!("max f3 = {max3}"))?;
        ensure(min1 >= rat(1, 3), || format!("min f1 = {min1}"))?;
        Ok(format!(
            "max f2 = {}, max f3 = {}, min f1 = {} over {} grid matrices",
            format_rational(&max2),
            format_rational(&max3),
            format_rational(&min1),
            polytope.grid_size()
        ))
    });
}

#[test]
fn criterion_11_futile_symmetric_is_uniform() {
    criterion(11, "futile and symmetric means uniform", Duration::from_secs(60), || {
        let mut battery: Vec<Named> = honest3();
        battery.extend(honest4());
        battery.push(("ignored-round-robin(3)".into(), Arc::new(make_ignored_round_robin(3).map_err(err)?)));
        battery.push(("ignored-round-robin(4)".into(), Arc::new(make_ignored_round_robin(4).map_err(err)?)));
        battery.push(("first-player-wins(3)".into(), Arc::new(FirstPlayerWins { n: 3 })));
        battery.push(("loser-lottery-after".into(), Arc::new(LoserLottery { timing: CoinTiming::AfterMatch })));
        battery.push(("sequential rounds example".into(), rounds_sequential()));
        let mut qualifying = Vec::new();
        for (name, t) in &battery {
            let samples = standard_samples(t.players(), STANDARD_SEED).map_err(err)?;
            let sym = check_symmetry(t.as_ref(), &samples).map_err(err)?;
            let fut = check_futility(t.as_ref(), &samples).map_err(err)?;
            if !(sym.passed() && fut.passed()) {
                continue;
            }
            for s in &samples {
                let v = exact_win_vector(t.as_ref(), &s.matrix).map_err(err)?.win_vector;
                ensure(v == WinVector::uniform(t.players()), || format!("{name} gives {v} at {}", s.label))?;
            }
            qualifying.push(name.clone());
        }
        ensure(qualifying.len() >= 3, || format!("only {qualifying:?} qualified"))?;
        Ok(format!("{} of {} qualify, all uniform: {qualifying:?}", qualifying.len(), battery.len()))
    });
}

#[test]
fn criterion_12_map_tournament_closeness() {
    criterion(12, "map tournament of induced T1 is 0.03-close", Duration::from_secs(600), || {
        let inner = t1(2);
        let t = make_map_tournament(Arc::new(induced_map(inner.clone())), 3, 200).map_err(err)?;
        let samples: Vec<_> = standard_samples(3, STANDARD_SEED).map_err(err)?.into_iter().take(5).collect();
        let eps = epsilon_distance_simulated(&t, inner.as_ref(), &samples, 100_000, SEED).map_err(err)?;
        ensure(eps <= 0.03, || format!("estimated distance {eps:.4}"))?;
        Ok(format!("estimated distance {eps:.4} over {}", samples.iter().map(|s| s.label.as_str()).collect::<Vec<_>>().join(", ")))
    });
}
