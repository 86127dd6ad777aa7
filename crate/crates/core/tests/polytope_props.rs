mod common;

use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tourney_core::polytope::{
    arc_flow_max, arc_flow_membership, corners, enumerate_digraphs, graph_vector, graph_vector_by_balance,
    greedy_max, hull_membership, LinearProgram, LpOutcome, Membership, Relation, Sense,
};
use tourney_core::rational::rat;
use tourney_core::{Rational, WinVector};

use common::random_distribution;

#[test]
fn degree_identities_agree() {
    for n in 1..=5 {
        for g in enumerate_digraphs(n).unwrap() {
            let v = graph_vector(&g).unwrap();
            assert_eq!(v.components(), graph_vector_by_balance(&g).as_slice(), "{g}");
            let total: Rational = v.components().iter().sum();
            assert!(total.is_one());
        }
    }
}

fn relation() -> impl Strategy<Value = Relation> {
    prop_oneof![Just(Relation::Le), Just(Relation::Ge), Just(Relation::Eq)]
}

prop_compose! {
    /// A small LP boxed into `0 <= x <= 6` so that it is never unbounded.
    fn boxed_program()(vars in 1usize..=4)(
        rows in prop::collection::vec(
            (prop::collection::vec(-4i64..=4, vars), relation(), -6i64..=12),
            0..=4,
        ),
        objective in prop::collection::vec(-5i64..=5, vars),
        maximize in any::<bool>(),
        vars in Just(vars),
    ) -> LinearProgram {
        let mut lp = LinearProgram::new(vars, if maximize { Sense::Maximize } else { Sense::Minimize });
        for (coeffs, relation, rhs) in rows {
            let coeffs = coeffs.into_iter().enumerate().map(|(j, a)| (j, rat(a, 1))).collect();
            lp.add(coeffs, relation, rat(rhs, 1));
        }
        for j in 0..vars {
            lp.add(vec![(j, Rational::one())], Relation::Le, rat(6, 1));
        }
        lp.set_objective(objective.into_iter().enumerate().map(|(j, c)| (j, rat(c, 1))).collect());
        lp
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn lp_outcomes_carry_valid_certificates(lp in boxed_program()) {
        match lp.solve().unwrap() {
            LpOutcome::Optimal(s) => {
                prop_assert!(lp.is_feasible_point(&s.x));
                prop_assert_eq!(lp.objective_at(&s.x), s.value.clone());
                // strong duality
                let dual_value: Rational = lp.constraints.iter().zip(&s.duals).map(|(c, y)| &c.rhs * y).sum();
                prop_assert_eq!(dual_value, s.value.clone());
                let flip = if lp.sense == Sense::Maximize { 1 } else { -1 };
                for (c, y) in lp.constraints.iter().zip(&s.duals) {
                    let signed = y * rat(flip, 1);
                    match c.relation {
                        Relation::Le => prop_assert!(!signed.is_negative()),
                        Relation::Ge => prop_assert!(!signed.is_positive()),
                        Relation::Eq => {}
                    }
                }
                // no vertex of the box does better
                for mask in 0u32..1 << lp.num_vars {
                    let x: Vec<Rational> = (0..lp.num_vars).map(|j| rat(6 * (mask >> j & 1) as i64, 1)).collect();
                    if lp.is_feasible_point(&x) {
                        let v = lp.objective_at(&x);
                        let no_better = if flip == 1 { v <= s.value } else { v >= s.value };
                        prop_assert!(no_better);
                    }
                }
            }
            LpOutcome::Infeasible(cert) => {
                prop_assert!(lp.certifies_infeasible(&cert));
                prop_assert!(!lp.is_feasible_point(&vec![Rational::zero(); lp.num_vars]));
            }
            LpOutcome::Unbounded(_) => prop_assert!(false, "boxed program reported unbounded"),
        }
    }

    #[test]
    fn greedy_agrees_with_the_lp_and_the_corners(n in 2usize..=5, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u: Vec<Rational> = (0..n).map(|_| rat(rand::Rng::random_range(&mut rng, -9..=9), 3)).collect();
        let (greedy, at) = greedy_max(&u).unwrap();
        prop_assert_eq!(arc_flow_max(&u).unwrap(), greedy.clone());
        let dot = |v: &WinVector| -> Rational { u.iter().zip(v.components()).map(|(a, b)| a * b).sum() };
        let best = corners(n).unwrap().iter().map(dot).max().unwrap();
        prop_assert_eq!(best, greedy.clone());
        prop_assert_eq!(dot(&at), greedy);
    }
}

#[test]
fn sorted_distributions_are_members() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for k in 0..100 {
        let n = 2 + k % 4;
        let mut x = random_distribution(n, 60, &mut rng);
        x.sort_unstable_by(|a, b| b.cmp(a));
        let x = WinVector::new(x).unwrap();
        assert!(arc_flow_membership(&x).unwrap().is_member(), "{x}");
        assert!(hull_membership(&x).unwrap().is_member(), "{x}");
    }
}

/// Each corner is outside the hull of the others.
#[test]
fn corners_are_vertices() {
    for n in 2..=5 {
        let cs = corners(n).unwrap();
        for (k, c) in cs.iter().enumerate() {
            let others: Vec<&WinVector> = cs.iter().enumerate().filter(|&(l, _)| l != k).map(|(_, v)| v).collect();
            let mut lp = LinearProgram::feasibility(others.len());
            lp.add((0..others.len()).map(|l| (l, Rational::one())).collect(), Relation::Eq, Rational::one());
            for j in 0..n {
                lp.add(others.iter().enumerate().map(|(l, v)| (l, v.get(j).clone())).collect(), Relation::Eq, c.get(j).clone());
            }
            match lp.solve().unwrap() {
                LpOutcome::Infeasible(cert) => assert!(lp.certifies_infeasible(&cert)),
                other => panic!("corner {c} is not a vertex: {other:?}"),
            }
        }
    }
}

#[test]
fn membership_examples() {
    let member = |x: &[Rational]| arc_flow_membership(&WinVector::new(x.to_vec()).unwrap()).unwrap();
    match member(&[rat(1, 3), rat(1, 2), rat(1, 6)]) {
        Membership::Member(flow) => {
            flow.validate().unwrap();
            assert_eq!(flow.vector().unwrap().components(), &[rat(1, 3), rat(1, 2), rat(1, 6)]);
        }
        Membership::NonMember(_) => panic!("corner rejected"),
    }
    // player 3 would win half the time
    assert!(!member(&[rat(1, 4), rat(1, 4), rat(1, 2)]).is_member());
    // player 1 below 1/3
    assert!(!member(&[rat(3, 10), rat(2, 5), rat(3, 10)]).is_member());
    assert!(member(&[rat(1, 1), rat(0, 1), rat(0, 1), rat(0, 1)]).is_member());
    assert!(!member(&[rat(0, 1), rat(1, 1)]).is_member());
}
