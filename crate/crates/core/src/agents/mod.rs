//! Monte Carlo tree search agents over the forward model.
//!
//! The vanilla evaluator scores a simulation by the end state's game
//! score plus win/loss bonuses. The mechanic evaluator replaces the score
//! term with shaped rewards for critical-mechanic events: each event is
//! worth `1 / (F * base^(T_event - T_root))`, where `F` counts how often
//! that mechanic has fired so far (episode history plus the simulation up
//! to and including the event).

use crate::engine::rng::SplitMix64;
use crate::engine::{clone_state, Action, GameEvent, GameState, Outcome};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Evaluator {
    Vanilla,
    Mechanic {
        #[serde(rename = "criticalSet")]
        critical_set: BTreeSet<String>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgentConfig {
    #[serde(rename = "explorationC")]
    pub exploration_c: f64,
    #[serde(rename = "maxTreeNodes")]
    pub max_tree_nodes: usize,
    #[serde(rename = "rolloutDepth")]
    pub rollout_depth: u32,
    pub seed: u64,
    pub evaluator: Evaluator,
    #[serde(rename = "winBonus")]
    pub win_bonus: f64,
    #[serde(rename = "lossPenalty")]
    pub loss_penalty: f64,
    #[serde(rename = "discountBase")]
    pub discount_base: f64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            exploration_c: 0.125,
            max_tree_nodes: 5000,
            rollout_depth: 50,
            seed: 0,
            evaluator: Evaluator::Vanilla,
            win_bonus: 1000.0,
            loss_penalty: -1000.0,
            discount_base: 1.1,
        }
    }
}

/// Everything a simulation saw: events along the tree path from the root
/// plus the rollout, the terminal outcome, and the tick at the root.
#[derive(Debug, Clone)]
pub struct SimulationRecord {
    pub events: Vec<GameEvent>,
    pub terminal_outcome: Outcome,
    pub root_tick: u32,
}

/// End-state score plus terminal bonuses.
pub fn vanilla_evaluate(sim: &SimulationRecord, end_score: i64, cfg: &AgentConfig) -> f64 {
    end_score as f64 + terminal_bonus(sim.terminal_outcome, cfg)
}

/// Shaped reward over critical-mechanic events; the game score is
/// excluded. `history` is the episode's real event list up to the root.
pub fn mechanic_evaluate(
    sim: &SimulationRecord,
    critical_set: &BTreeSet<String>,
    history: &[GameEvent],
    cfg: &AgentConfig,
) -> f64 {
    let mut occurrences: HashMap<&str, u64> = HashMap::new();
    for e in history {
        if critical_set.contains(&e.mechanic_id) {
            *occurrences.entry(e.mechanic_id.as_str()).or_insert(0) += 1;
        }
    }
    let mut reward = 0.0;
    for e in &sim.events {
        if critical_set.contains(&e.mechanic_id) {
            let count = occurrences.entry(e.mechanic_id.as_str()).or_insert(0);
            *count += 1;
            let delta_t = e.tick.saturating_sub(sim.root_tick);
            reward += 1.0 / (*count as f64 * cfg.discount_base.powi(delta_t as i32));
        }
    }
    reward + terminal_bonus(sim.terminal_outcome, cfg)
}

fn terminal_bonus(outcome: Outcome, cfg: &AgentConfig) -> f64 {
    match outcome {
        Outcome::Win => cfg.win_bonus,
        Outcome::Loss => cfg.loss_penalty,
        Outcome::Ongoing => 0.0,
    }
}

/// UCB1 with value normalization over the observed return bounds:
/// `normalized_mean + C * sqrt(ln(parent_visits) / child_visits)`.
pub fn ucb1(
    parent_visits: f64,
    child_visits: f64,
    child_total: f64,
    exploration_c: f64,
    bounds: (f64, f64),
) -> f64 {
    debug_assert!(child_visits >= 1.0);
    let mean = child_total / child_visits;
    let (lo, hi) = bounds;
    let normalized = if hi > lo { (mean - lo) / (hi - lo) } else { 0.5 };
    normalized + exploration_c * (parent_visits.ln() / child_visits).sqrt()
}

struct Node {
    state: GameState,
    /// Events emitted by the step that created this node.
    edge_events: Vec<GameEvent>,
    /// Legal actions in token-lexicographic order.
    actions: Vec<Action>,
    children: Vec<Option<usize>>,
    visits: u32,
    total: f64,
}

impl Node {
    fn new(state: GameState, edge_events: Vec<GameEvent>) -> Self {
        let mut actions = state.legal_actions();
        actions.sort_by_key(|a| a.lex_rank());
        let children = vec![None; actions.len()];
        Self {
            state,
            edge_events,
            actions,
            children,
            visits: 0,
            total: 0.0,
        }
    }
}

/// One search agent. A fresh agent with the same configuration and seed
/// produces the same action sequence for the same inputs.
pub struct MctsAgent {
    pub cfg: AgentConfig,
    rng: SplitMix64,
}

impl MctsAgent {
    pub fn new(cfg: AgentConfig) -> Self {
        assert!(cfg.exploration_c >= 0.0, "explorationC must be >= 0");
        assert!(cfg.max_tree_nodes >= 1, "maxTreeNodes must be >= 1");
        assert!(cfg.discount_base > 1.0, "discountBase must be > 1");
        let rng = SplitMix64::new(cfg.seed);
        Self { cfg, rng }
    }

    /// Pick an action for `state`. Runs up to `max_tree_nodes` iterations,
    /// each expanding at most one node, and returns the most-visited root
    /// child (ties to the lexicographically first action). The passed
    /// state is never mutated; all simulation happens on clones.
    pub fn decide(&mut self, state: &GameState, history: &[GameEvent]) -> Action {
        self.decide_with_stats(state, history).0
    }

    /// `decide` plus the number of node expansions performed.
    pub fn decide_with_stats(
        &mut self,
        state: &GameState,
        history: &[GameEvent],
    ) -> (Action, usize) {
        assert!(
            state.outcome == Outcome::Ongoing,
            "decide() called on a terminated state"
        );
        let root_tick = state.tick;
        let mut arena: Vec<Node> = vec![Node::new(clone_state(state), Vec::new())];
        let mut bounds = (f64::INFINITY, f64::NEG_INFINITY);
        let mut expansions = 0usize;

        for _ in 0..self.cfg.max_tree_nodes {
            // Selection: descend while fully expanded, then expand one
            // child (the lexicographically first untried action).
            let mut path = vec![0usize];
            let mut cur = 0usize;
            loop {
                if arena[cur].state.outcome != Outcome::Ongoing {
                    break;
                }
                if let Some(slot) = arena[cur].children.iter().position(Option::is_none) {
                    let action = arena[cur].actions[slot];
                    let mut next_state = clone_state(&arena[cur].state);
                    let events = next_state.step(action);
                    let child = arena.len();
                    arena.push(Node::new(next_state, events));
                    arena[cur].children[slot] = Some(child);
                    expansions += 1;
                    path.push(child);
                    cur = child;
                    break;
                }
                let parent_visits = arena[cur].visits;
                let mut best_slot = 0usize;
                let mut best_score = f64::NEG_INFINITY;
                for (slot, child) in arena[cur].children.iter().enumerate() {
                    let child = child.expect("fully expanded");
                    let score = ucb1(
                        f64::from(parent_visits),
                        f64::from(arena[child].visits),
                        arena[child].total,
                        self.cfg.exploration_c,
                        bounds,
                    );
                    if score > best_score {
                        best_score = score;
                        best_slot = slot;
                    }
                }
                cur = arena[cur].children[best_slot].expect("fully expanded");
                path.push(cur);
            }

            // Simulation: uniform-random rollout from the leaf.
            let mut sim_state = clone_state(&arena[cur].state);
            let mut sim_events: Vec<GameEvent> = path
                .iter()
                .flat_map(|&n| arena[n].edge_events.iter().cloned())
                .collect();
            for _ in 0..self.cfg.rollout_depth {
                if sim_state.outcome != Outcome::Ongoing {
                    break;
                }
                let legal = sim_state.legal_actions();
                let action = legal[self.rng.next_below(legal.len())];
                sim_events.extend(sim_state.step(action));
            }
            let record = SimulationRecord {
                events: sim_events,
                terminal_outcome: sim_state.outcome,
                root_tick,
            };
            let reward = match &self.cfg.evaluator {
                Evaluator::Vanilla => vanilla_evaluate(&record, sim_state.score, &self.cfg),
                Evaluator::Mechanic { critical_set } => {
                    mechanic_evaluate(&record, critical_set, history, &self.cfg)
                }
            };
            bounds = (bounds.0.min(reward), bounds.1.max(reward));

            // Backpropagation.
            for &n in &path {
                arena[n].visits += 1;
                arena[n].total += reward;
            }
        }

        // Robust child: most visits, ties to lexicographically first.
        let root = &arena[0];
        let mut best_action = root.actions[0];
        let mut best_visits = 0u32;
        for (slot, child) in root.children.iter().enumerate() {
            if let Some(child) = child {
                if arena[*child].visits > best_visits {
                    best_visits = arena[*child].visits;
                    best_action = root.actions[slot];
                }
            }
        }
        (best_action, expansions)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::GameEvent;

    fn event(id: &str, tick: u32) -> GameEvent {
        GameEvent {
            tick,
            mechanic_id: id.to_owned(),
            participants: vec![],
            score_delta: 0,
        }
    }

    fn record(events: Vec<GameEvent>, outcome: Outcome) -> SimulationRecord {
        SimulationRecord {
            events,
            terminal_outcome: outcome,
            root_tick: 0,
        }
    }

    fn critical(ids: &[&str]) -> BTreeSet<String> {
        ids.iter().map(|s| (*s).to_owned()).collect()
    }

    #[test]
    fn vanilla_scores_plus_bonuses() {
        let cfg = AgentConfig::default();
        assert_eq!(
            vanilla_evaluate(&record(vec![], Outcome::Ongoing), 3, &cfg),
            3.0
        );
        assert_eq!(vanilla_evaluate(&record(vec![], Outcome::Win), 3, &cfg), 1003.0);
        assert_eq!(
            vanilla_evaluate(&record(vec![], Outcome::Loss), 0, &cfg),
            -1000.0
        );
    }

    #[test]
    fn shaped_reward_single_event_at_root_tick_is_one() {
        let cfg = AgentConfig::default();
        let sim = record(vec![event("m", 0)], Outcome::Ongoing);
        let r = mechanic_evaluate(&sim, &critical(&["m"]), &[], &cfg);
        assert_eq!(r, 1.0);
    }

    #[test]
    fn shaped_reward_discounts_by_tick_distance() {
        let cfg = AgentConfig::default();
        let sim = record(vec![event("m", 10)], Outcome::Ongoing);
        let r = mechanic_evaluate(&sim, &critical(&["m"]), &[], &cfg);
        assert!((r - 1.0 / 1.1f64.powi(10)).abs() < 1e-12);
    }

    #[test]
    fn shaped_reward_divides_by_frequency() {
        let cfg = AgentConfig::default();
        let sim = record(vec![event("m", 0), event("m", 0)], Outcome::Ongoing);
        let r = mechanic_evaluate(&sim, &critical(&["m"]), &[], &cfg);
        assert!((r - 1.5).abs() < 1e-12);
    }

    #[test]
    fn history_counts_toward_frequency() {
        let cfg = AgentConfig::default();
        let history = vec![event("m", 0)];
        let sim = record(vec![event("m", 0)], Outcome::Ongoing);
        let r = mechanic_evaluate(&sim, &critical(&["m"]), &history, &cfg);
        assert!((r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_critical_set_reduces_to_bonuses_only() {
        let cfg = AgentConfig::default();
        for (outcome, score) in [
            (Outcome::Ongoing, 5),
            (Outcome::Win, 2),
            (Outcome::Loss, 7),
        ] {
            let sim = record(vec![event("m", 3)], outcome);
            let mech = mechanic_evaluate(&sim, &BTreeSet::new(), &[], &cfg);
            let vanilla = vanilla_evaluate(&sim, score, &cfg);
            assert_eq!(mech, vanilla - score as f64);
        }
    }

    #[test]
    fn shaped_reward_monotone_in_frequency_and_delay() {
        let cfg = AgentConfig::default();
        let single = |tick| {
            mechanic_evaluate(
                &record(vec![event("m", tick)], Outcome::Ongoing),
                &critical(&["m"]),
                &[],
                &cfg,
            )
        };
        assert!(single(0) > single(1));
        assert!(single(5) > single(20));
        let with_history = |n: usize| {
            let history = vec![event("m", 0); n];
            mechanic_evaluate(
                &record(vec![event("m", 0)], Outcome::Ongoing),
                &critical(&["m"]),
                &history,
                &cfg,
            )
        };
        assert!(with_history(0) > with_history(1));
        assert!(with_history(1) > with_history(4));
        assert!(single(0) <= 1.0 && single(100) > 0.0);
    }

    #[test]
    fn ucb1_matches_direct_substitution() {
        // Normalized mean 0.5, parent visits e (ln = 1), child visits 1,
        // C = 0.125: 0.5 + 0.125 * 1.
        let v = ucb1(std::f64::consts::E, 1.0, 0.5, 0.125, (0.0, 1.0));
        assert!((v - 0.625).abs() < 1e-12);
    }

    #[test]
    fn ucb1_zero_c_is_pure_exploitation() {
        let exploit = ucb1(100.0, 5.0, 4.0, 0.0, (0.0, 1.0));
        assert!((exploit - 0.8).abs() < 1e-12);
    }

    #[test]
    fn ucb1_degenerate_bounds_normalize_to_half() {
        let v = ucb1(4.0, 2.0, 6.0, 0.0, (3.0, 3.0));
        assert_eq!(v, 0.5);
    }
}
