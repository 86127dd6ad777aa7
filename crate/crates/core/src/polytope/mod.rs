//! Digraphs, graph vectors, corners and LP membership.

mod corners;
mod digraph;
mod lp;
mod membership;

pub use corners::{
    classes_csv, corner_count, corner_sequences, corners, corners_csv, is_corner_sequence, permutation_classes,
    CornerSequence, PermutationClass, MAX_CORNER_N, MAX_PERMUTATION_N,
};
pub use digraph::{
    enumerate_digraphs, enumerate_digraphs_up_to, family_size, graph_vector, graph_vector_by_balance,
    sigma_to_digraph, Digraph, DigraphJson, MAX_ENUMERATE_N,
};
pub use lp::{lp_solve, Constraint, FarkasCertificate, LinearProgram, LpOutcome, LpSolution, Relation, Sense};
pub use membership::{
    arc_flow_max, arc_flow_membership, greedy_max, hull_distance_linf, hull_membership, ArcFlow, HullWitness,
    Membership,
};
