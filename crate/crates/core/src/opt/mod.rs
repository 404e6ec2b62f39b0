//! Temporal versions of classical optimization problems: matching, the
//! (1,2)-traveling salesman, and exploration.

mod explore;
mod matching;
mod ttsp;

pub use explore::{explore_exact, explore_greedy, Exploration, EXPLORE_MAX_NODES};
pub use matching::{
    conflict_graph, greedy_independent_set, is_claw_free, is_valid_matching, temporal_matching_approx,
    temporal_matching_exact, ConflictGraph, Pick, TemporalMatching, MATCHING_MAX_LABELS,
};
pub use ttsp::{
    parse_ttsp, to_ttsp, tour_cost, ttsp_approx, ttsp_exact, TemporalTour, TtspInstance, TTSP_MAX_LIFETIME,
    TTSP_MAX_NODES,
};
