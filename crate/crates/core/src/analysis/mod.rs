//! Executable versions of the defining properties of tournaments, closeness
//! between tournaments, and the polytope of symmetric honest grid maps.

mod discrete;
mod map;
mod properties;
mod samples;

pub use discrete::{
    discrete_map_polytope, extend_discrete_map, isomorphism_phi, levels, DiscreteMap, DiscreteMapPolytope,
    Isomorphism, MapOptimum, OrderViolation, PiecewiseLinear, MAX_GRID_MATRICES,
};
pub use map::{ConstantMap, TournamentMap};
pub use properties::{
    check_fairness, check_futility, check_honesty, check_rounds_honesty, check_symmetry, epsilon_distance,
    epsilon_distance_simulated, plays_any_match, reachable, PropertyReport, Verdict, Witness, FULL_SYMMETRY_N,
    MAX_WITNESSES,
};
pub use samples::{
    deterministic_monotonic, monotonic_samples, random_doubly_monotonic, random_interior, standard_samples, Sample,
    STANDARD_SEED,
};
