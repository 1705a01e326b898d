//! Critical-mechanic discovery for 2D grid games.
//!
//! The crate parses a compact game-description language, simulates games
//! deterministically, derives interaction graphs from the rules, discovers
//! the mechanics a player must trigger to win (from playtraces, or from
//! the rules alone as a baseline), and benchmarks MCTS agents whose reward
//! is shaped by the discovered mechanics.
//!
//! Modules follow the pipeline:
//!
//! - [`vgdl`] — description + level parsing and validation
//! - [`engine`] — seeded forward model, playtrace recording and replay
//! - [`graph`] — atomic interaction graph and mechanic graph
//! - [`discovery`] — critical-path search, sibling expansion, match rate
//! - [`agents`] — vanilla and mechanic-augmented MCTS
//! - [`harness`] — bundled fixtures, experiments, reports

pub mod agents;
pub mod discovery;
pub mod engine;
pub mod graph;
pub mod harness;
pub mod vgdl;
