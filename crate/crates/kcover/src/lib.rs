//! Simulator and solvers for multi-party one-way vertex-cover protocols on
//! small graphs.
//!
//! The crate models a chain of parties that each hold a slice of a graph's
//! edges and forward a short list of candidate covers to the next party.
//! The pieces are usable on their own:
//!
//! - [`graph`]: bitmask vertex sets and small graphs (≤ 64 vertices).
//! - [`solver`]: exact minimum vertex cover (unweighted, weighted, and with
//!   canonical tie-breaking), minimal-cover enumeration, a greedy baseline.
//! - [`dist`]: finite graph distributions and per-vertex cover
//!   probabilities.
//! - [`game`]: the cover-commitment matrix game, fictitious play, an exact
//!   simplex refinement, and the row-generating solver.
//! - [`lemma`]: the support-function inequality behind the weighted
//!   response, threshold cover bands, and the randomized two-sided cover.
//! - [`protocol`]: the message protocol itself with pluggable per-party
//!   strategies (distribution-oracle or game-solving).
//! - [`instances`]: hard-instance generators — layered greedy traps,
//!   induced-matching families, and the two-party construction built on
//!   them — plus random benchmarks.
//! - [`formats`]: plain-text readers/writers for graphs, distributions,
//!   game specs, and partitioned instances.

pub mod dist;
pub mod error;
pub mod formats;
pub mod game;
pub mod graph;
pub mod instances;
pub mod lemma;
pub mod protocol;
pub mod solver;

pub use dist::{
    cover_probabilities, expected_mvc_size, weights_from_probs, CoverProbabilities,
    GraphDistribution,
};
pub use error::{Error, Result};
pub use game::{
    best_response_cover, build_payoff_matrix, fictitious_play, sample_strategy, solve_game,
    solve_matrix_game_lp, utility, value_bound, FictitiousPlayOutcome, GameSolution,
    MixedStrategy, MvcGameSpec,
};
pub use graph::{Graph, VertexSet, WeightVector, MAX_VERTICES};
pub use instances::{
    find_rs_graph, layered_instance, layered_optimal_cover, random_partitioned_instance,
    rs_lower_bound_instance, RsGraph, RsInstanceFamily, RsLowerBoundInstance,
};
pub use lemma::{
    middle_region_check, random_mirrored_support, random_support, randomized_cover_once,
    threshold_bands, threshold_t, weight_bound_check, MiddleRegionOutcome, SupportFunction,
    ThresholdBands, WeightBoundOutcome,
};
pub use protocol::{
    beta_for_party, final_step, num_guesses, party_step, run_protocol, GameStrategy,
    JointAdversary, Message, OracleStrategy, PartitionedInstance, ProtocolConfig,
    ProtocolMode, ProtocolReport, StrategyProvider, StrategyRequest,
};
pub use solver::{
    enumerate_minimal_vertex_covers, greedy_matching_cover, min_weight_vc, mvc_canonical,
    mvc_size,
};
