//! Pebbling configurations, the move rule and exact reachability search.

mod config;
mod search;

pub use config::{
    apply_move, composition_count, enumerate_configurations, weight, CompositionCursor,
    Compositions, Configuration, Dyadic, Move, MoveSequence,
};
pub use search::{
    can_cover_target, reach_goal, Goal, GoalMode, Outcome, SearchOptions, SolveVerdict, Solver,
    EXACT_PEBBLE_CAP, EXACT_VERTEX_CAP, MAX_SEARCH_PEBBLES, MAX_SEARCH_VERTICES,
};
