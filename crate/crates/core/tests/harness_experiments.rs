//! Harness accounting: row counts, normalization bounds, deterministic
//! CSV output, and config handling.

use critmech::engine::Outcome;
use critmech::harness::{
    render_csv, run_experiment, summarize, AgentSpec, ExperimentConfig, Scale,
};

/// Tiny config for accounting tests: minimal budgets, quick episodes.
fn tiny(game: &str, levels: Vec<usize>, runs: u32) -> ExperimentConfig {
    ExperimentConfig {
        game: game.into(),
        levels,
        runs_per_level: runs,
        agents: vec![
            AgentSpec::Vanilla,
            AgentSpec::MechBaseline,
            AgentSpec::MechPlaytrace,
        ],
        base_seed: 7,
        scale: Scale::Desk,
        max_tree_nodes: 4,
        rollout_depth: 2,
        exploration_c: 0.125,
        max_episode_ticks: 6,
    }
}

#[test]
fn row_accounting_matches_the_matrix() {
    let cfg = tiny("zelda", vec![0, 1, 2], 2);
    let rows = run_experiment(&cfg).unwrap();
    assert_eq!(rows.len(), 3 * 2 * 3);
    // Canonical ordering: by level position, then agent, then run.
    let agents: Vec<&str> = rows.iter().map(|r| r.agent).collect();
    assert_eq!(agents[0], "vanilla");
    assert_eq!(agents[2], "mech-baseline");
    assert_eq!(agents[4], "mech-playtrace");
}

#[test]
fn experiment_is_deterministic_and_csv_is_byte_identical() {
    let cfg = tiny("solarfox", vec![0], 2);
    let a = render_csv(&run_experiment(&cfg).unwrap());
    let b = render_csv(&run_experiment(&cfg).unwrap());
    assert_eq!(a, b);
}

#[test]
fn normalized_scores_stay_in_unit_range() {
    let cfg = tiny("zelda", vec![0, 1], 2);
    for row in run_experiment(&cfg).unwrap() {
        assert!((0.0..=1.0).contains(&row.normalized_score), "{row:?}");
    }
}

#[test]
fn cutoff_episodes_are_recorded_as_losses() {
    // With a 6-tick cap and 4-node trees nobody wins zelda.
    let cfg = tiny("zelda", vec![0], 2);
    let rows = run_experiment(&cfg).unwrap();
    assert!(rows.iter().all(|r| r.outcome == Outcome::Loss));
    assert!(rows.iter().all(|r| r.ticks == 6));
}

#[test]
fn full_scale_config_mirrors_the_published_protocol() {
    let cfg = ExperimentConfig::full("zelda");
    assert_eq!(cfg.levels, vec![0, 1, 2, 3, 4]);
    assert_eq!(cfg.runs_per_level, 20);
    assert_eq!(cfg.max_tree_nodes, 5000);
    assert_eq!(cfg.rollout_depth, 50);
    assert!((cfg.exploration_c - 0.125).abs() < 1e-12);
    // 5 levels x 20 runs = 100 playthroughs per agent.
    assert_eq!(cfg.levels.len() as u32 * cfg.runs_per_level, 100);
}

#[test]
fn config_json_round_trips() {
    let cfg = ExperimentConfig::desk("plants");
    let json = serde_json::to_string_pretty(&cfg).unwrap();
    let back = ExperimentConfig::from_json(&json).unwrap();
    assert_eq!(cfg.game, back.game);
    assert_eq!(cfg.levels, back.levels);
    assert_eq!(cfg.runs_per_level, back.runs_per_level);
    assert_eq!(cfg.agents, back.agents);
    assert_eq!(cfg.max_episode_ticks, back.max_episode_ticks);
}

#[test]
fn summary_covers_every_agent() {
    let cfg = tiny("solarfox", vec![0], 2);
    let rows = run_experiment(&cfg).unwrap();
    let summaries = summarize(&rows);
    assert_eq!(summaries.len(), 3);
    for s in &summaries {
        assert_eq!(s.runs, 2);
        assert!(s.win_rate >= 0.0 && s.win_rate <= 1.0);
    }
}

#[test]
fn rejects_empty_level_list() {
    let cfg = tiny("zelda", vec![], 1);
    assert!(run_experiment(&cfg).is_err());
}

#[test]
fn every_fixture_level_has_a_nondegenerate_score_range() {
    for game in critmech::harness::fixtures::GAMES {
        for level in game.levels {
            assert!(
                level.score_min < level.score_max,
                "{}/{}",
                game.name,
                level.name
            );
        }
    }
}
