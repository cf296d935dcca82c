//! Equilibrium-cycle analysis for finite normal-form games.
//!
//! An equilibrium cycle (EC) is a minimal Cartesian-product set of action
//! profiles that is stable against unilateral deviations to actions outside
//! the set while always leaving at least one player a strictly improving
//! deviation inside it. This crate provides:
//!
//! - exact-rational finite games with JSON loading ([`game`]),
//! - best-/better-response graphs, SCC decomposition and DOT export
//!   ([`graph`]),
//! - curb sets, EC verification/enumeration, dominance checks and a
//!   definitional brute-force oracle ([`analysis`]),
//! - exact mixed-equilibrium search restricted to a product region
//!   ([`mixed`]),
//! - three families of discontinuous two-player games with symbolic EC
//!   predictions and grid discretization ([`family`]),
//! - best-response and epsilon-better-response dynamics ([`dynamics`]),
//! - whole-game consistency audits and seeded random corpora ([`audit`]).

pub mod analysis;
pub mod audit;
pub mod dynamics;
pub mod error;
pub mod family;
pub mod game;
pub mod graph;
pub mod mixed;
pub mod presets;
pub mod rational;

pub use analysis::{
    brute_force_ecs, curb_closure, enumerate_ecs, is_curb, is_dominant_ec, is_non_trivial,
    minimal_curb_sets, verify_ec, EcFailure, EcVerdict,
};
pub use audit::{check_theorems, CheckOutcome, CorpusParams, TheoremReport};
pub use dynamics::{
    check_absorption, limit_set, run_finite, step_finite, AbsorptionReport, DynamicsPolicy,
    PlayerSelection, PolicyKind, TieBreak, Trajectory,
};
pub use error::{Error, Result};
pub use family::{
    solve_b, BertrandParams, DiscretizedGame, FamilyAction, GameFamily, MonotoneConcaveParams,
    PredictedEc, Real, ScalarFn, VisibilityParams,
};
pub use game::{random_game, FiniteGame, Profile, ProductSet};
pub use graph::{
    best_response_sets, build_graph, export_dot, is_rectangular, scc_decompose, sink_sccs,
    BestResponseTable, GraphKind, ResponseGraph, SccDecomposition,
};
pub use mixed::{mixed_ne_in_support, MixedProfile};

/// Default cap on the number of product-set candidates scanned by
/// brute-force enumeration and minimality checks.
pub const DEFAULT_BUDGET: u64 = 1_000_000;
