//! Experiment orchestration: the discovery pipeline, match-rate reports,
//! and seeded agent-comparison experiments with CSV output.

pub mod fixtures;

use crate::agents::{AgentConfig, Evaluator, MctsAgent};
use crate::discovery::{
    self, CriticalPath, CriticalPathDoc, DiscoveryError, DiscoveryMethod, HumanMechanicTable,
};
use crate::engine::{self, rng, CompiledGame, EngineError, GameEvent, Outcome};
use crate::graph::{self, GraphError, MechanicGraph};
use crate::vgdl::{self, GameDescription, LevelGrid, VgdlError};
use fixtures::{GameFixture, RawScore};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

/// Seed used when replaying bundled solution scripts.
pub const SOLUTION_SEED: u64 = 0;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("unknown game `{0}` (bundled: zelda, solarfox, plants, realportals)")]
    UnknownGame(String),
    #[error("no level {index} for game `{game}`")]
    UnknownLevel { game: String, index: usize },
    #[error("description has diagnostics: {0}")]
    Diagnostics(String),
    #[error(transparent)]
    Vgdl(#[from] VgdlError),
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Discovery(#[from] DiscoveryError),
    #[error("config error: {0}")]
    Config(String),
}

/// Parsed-and-compiled fixture pieces for one game level.
pub struct LoadedGame {
    pub fixture: &'static GameFixture,
    pub desc: GameDescription,
    pub level: LevelGrid,
    pub compiled: Arc<CompiledGame>,
}

/// Parse and compile a bundled game at the given level index.
pub fn load_game(game: &str, level_index: usize) -> Result<LoadedGame, HarnessError> {
    let fixture = fixtures::fixture(game).ok_or_else(|| HarnessError::UnknownGame(game.into()))?;
    let desc = vgdl::parse_game(fixture.description)?;
    let diags = vgdl::validate(&desc);
    if !diags.is_empty() {
        let text = diags
            .iter()
            .map(|d| d.to_string())
            .collect::<Vec<_>>()
            .join("; ");
        return Err(HarnessError::Diagnostics(text));
    }
    let level_fixture = fixture
        .levels
        .get(level_index)
        .ok_or_else(|| HarnessError::UnknownLevel {
            game: game.into(),
            index: level_index,
        })?;
    let level = vgdl::parse_level(level_fixture.source, &desc)?;
    let compiled = CompiledGame::compile(&desc, &level)?;
    Ok(LoadedGame {
        fixture,
        desc,
        level,
        compiled,
    })
}

/// Output of the end-to-end discovery pipeline.
pub struct DiscoverOutput {
    pub path: CriticalPath,
    pub doc: CriticalPathDoc,
    /// Annotated mechanic graph (playtrace method only).
    pub annotated: Option<MechanicGraph>,
}

/// End-to-end discovery: parse, build graphs, and for the playtrace
/// method replay the bundled solution scripts, select the least-noisy
/// winner, annotate, search, and expand siblings.
pub fn discover(game: &str, method: DiscoveryMethod) -> Result<DiscoverOutput, HarnessError> {
    let loaded = load_game(game, 0)?;
    let atomic = graph::build_atomic_graph(&loaded.desc);
    match method {
        DiscoveryMethod::Baseline => {
            let path = discovery::rules_baseline(&atomic)?;
            let doc = CriticalPathDoc::new(game, &path, None);
            Ok(DiscoverOutput {
                path,
                doc,
                annotated: None,
            })
        }
        DiscoveryMethod::Playtrace => {
            let mechanic = graph::build_mechanic_graph(&atomic);
            let mut traces = Vec::new();
            for (name, source) in loaded.fixture.solutions {
                let actions = engine::parse_actions(source)?;
                traces.push(engine::replay(
                    &loaded.compiled,
                    game,
                    name,
                    SOLUTION_SEED,
                    &actions,
                )?);
            }
            let selected = discovery::select_playtrace(&traces)?;
            let annotated = graph::annotate_frames(&mechanic, selected)?;
            let path = discovery::find_critical_path(&annotated)?;
            let path = discovery::expand_siblings(&path, &loaded.desc, &annotated);
            let doc = CriticalPathDoc::new(game, &path, Some(&annotated));
            Ok(DiscoverOutput {
                path,
                doc,
                annotated: Some(annotated),
            })
        }
    }
}

/// Side-by-side match-rate report for one game and method.
#[derive(Debug, Clone, Serialize)]
pub struct MatchRateReport {
    pub game: String,
    pub method: DiscoveryMethod,
    pub discovered: Vec<String>,
    /// Descriptions of survey rows matched by the discovered set.
    pub matched_rows: Vec<String>,
    /// Match rate of the discovered set against the survey table.
    pub computed: f64,
    /// Match rate computed from the published method marks.
    pub computed_from_marks: f64,
    /// The published match rate (percent).
    pub printed: f64,
    /// Set when computed-from-marks differs from the printed value by
    /// more than 0.1 percentage points: the formula is authoritative and
    /// the published number does not reproduce.
    pub discrepancy: bool,
}

pub fn human_table(game: &str) -> Result<HumanMechanicTable, HarnessError> {
    let fixture = fixtures::fixture(game).ok_or_else(|| HarnessError::UnknownGame(game.into()))?;
    HumanMechanicTable::from_json(fixture.human_table)
        .map_err(|e| HarnessError::Config(format!("bad human table fixture: {e}")))
}

pub fn matchrate_report(
    game: &str,
    method: DiscoveryMethod,
) -> Result<MatchRateReport, HarnessError> {
    let table = human_table(game)?;
    let output = discover(game, method)?;
    let discovered: BTreeSet<String> = output.path.id_set();
    let computed = discovery::match_rate(&table, &discovered)?;
    let computed_from_marks = table.marked_rate(method)?;
    let printed = match method {
        DiscoveryMethod::Playtrace => table.printed.playtrace,
        DiscoveryMethod::Baseline => table.printed.baseline,
    };
    let matched_rows = table
        .matched_rows(&discovered)
        .into_iter()
        .map(|i| table.rows[i].description.clone())
        .collect();
    Ok(MatchRateReport {
        game: game.into(),
        method,
        discovered: output.path.mechanics.clone(),
        matched_rows,
        computed,
        computed_from_marks,
        printed,
        discrepancy: (computed_from_marks * 100.0 - printed).abs() > 0.1,
    })
}

pub fn render_matchrate(report: &MatchRateReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "match rate for {} ({} method)",
        report.game,
        report.method.as_str()
    );
    let _ = writeln!(out, "  discovered mechanics:");
    for id in &report.discovered {
        let _ = writeln!(out, "    {id}");
    }
    let _ = writeln!(out, "  matched survey rows:");
    for row in &report.matched_rows {
        let _ = writeln!(out, "    {row}");
    }
    let _ = writeln!(
        out,
        "  computed from discovery: {:.1}%",
        report.computed * 100.0
    );
    let _ = writeln!(
        out,
        "  computed from published marks: {:.1}%",
        report.computed_from_marks * 100.0
    );
    let _ = writeln!(out, "  published value: {:.2}%", report.printed);
    if report.discrepancy {
        let _ = writeln!(
            out,
            "  DISCREPANCY: the published value does not reproduce from the stated \
             formula over the published percentages; the formula is authoritative here."
        );
    }
    out
}

/// Which evaluator an experiment agent uses; critical sets are computed
/// on demand from the bundled solution scripts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AgentSpec {
    Vanilla,
    MechPlaytrace,
    MechBaseline,
}

impl AgentSpec {
    pub fn name(self) -> &'static str {
        match self {
            AgentSpec::Vanilla => "vanilla",
            AgentSpec::MechPlaytrace => "mech-playtrace",
            AgentSpec::MechBaseline => "mech-baseline",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scale {
    Desk,
    Full,
}

/// Experiment configuration; JSON files mirror these fields.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub game: String,
    pub levels: Vec<usize>,
    #[serde(rename = "runsPerLevel")]
    pub runs_per_level: u32,
    pub agents: Vec<AgentSpec>,
    #[serde(rename = "baseSeed")]
    pub base_seed: u64,
    pub scale: Scale,
    #[serde(rename = "maxTreeNodes")]
    pub max_tree_nodes: usize,
    #[serde(rename = "rolloutDepth")]
    pub rollout_depth: u32,
    #[serde(rename = "explorationC")]
    pub exploration_c: f64,
    /// Episodes still ongoing at this tick are cut off and recorded as
    /// losses; keeps games without a timeout finite.
    #[serde(rename = "maxEpisodeTicks")]
    pub max_episode_ticks: u32,
}

impl ExperimentConfig {
    /// Desk scale: 3 levels x 10 runs, 1000-node trees, 20-move rollouts.
    /// Tick caps are sized to each game's level lengths.
    pub fn desk(game: &str) -> Self {
        let max_episode_ticks = match game {
            "zelda" => 80,
            "solarfox" => 150,
            "plants" => 1000,
            _ => 300,
        };
        Self {
            game: game.into(),
            levels: vec![0, 1, 2],
            runs_per_level: 10,
            agents: vec![
                AgentSpec::Vanilla,
                AgentSpec::MechBaseline,
                AgentSpec::MechPlaytrace,
            ],
            base_seed: 20240501,
            scale: Scale::Desk,
            max_tree_nodes: 1000,
            rollout_depth: 20,
            exploration_c: 0.125,
            max_episode_ticks,
        }
    }

    /// Full scale: 5 levels x 20 runs, 5000-node trees, 50-move rollouts.
    pub fn full(game: &str) -> Self {
        Self {
            game: game.into(),
            levels: vec![0, 1, 2, 3, 4],
            runs_per_level: 20,
            agents: vec![
                AgentSpec::Vanilla,
                AgentSpec::MechBaseline,
                AgentSpec::MechPlaytrace,
            ],
            base_seed: 20240501,
            scale: Scale::Full,
            max_tree_nodes: 5000,
            rollout_depth: 50,
            exploration_c: 0.125,
            max_episode_ticks: 2000,
        }
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ResultRow {
    pub game: String,
    pub level: usize,
    pub agent: &'static str,
    pub seed: u64,
    pub outcome: Outcome,
    #[serde(rename = "rawScore")]
    pub raw_score: f64,
    pub ticks: u32,
    #[serde(rename = "normalizedScore")]
    pub normalized_score: f64,
}

/// One finished episode under a given agent.
pub struct EpisodeResult {
    pub outcome: Outcome,
    pub score: i64,
    pub ticks: u32,
}

/// Play one episode: decide, step, accumulate history, stop on termination
/// or at the tick cap.
pub fn run_episode(
    compiled: &Arc<CompiledGame>,
    agent_cfg: AgentConfig,
    seed: u64,
    max_episode_ticks: u32,
) -> EpisodeResult {
    let mut state = engine::init(compiled, seed);
    let mut history: Vec<GameEvent> = Vec::new();
    if let Some(event) = state.resolve_initial() {
        history.push(event);
    }
    let mut agent = MctsAgent::new(agent_cfg);
    while state.outcome == Outcome::Ongoing && state.tick < max_episode_ticks {
        let action = agent.decide(&state, &history);
        history.extend(state.step(action));
    }
    EpisodeResult {
        outcome: state.outcome,
        score: state.score,
        ticks: state.tick,
    }
}

fn critical_set_for(game: &str, method: DiscoveryMethod) -> Result<BTreeSet<String>, HarnessError> {
    Ok(discover(game, method)?.path.id_set())
}

/// Run the full agent-comparison matrix. Rows come back in canonical
/// order (level, agent, run) regardless of worker scheduling, and the
/// whole matrix is a pure function of the config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<ResultRow>, HarnessError> {
    if cfg.levels.is_empty() {
        return Err(HarnessError::Config("level list is empty".into()));
    }
    if cfg.runs_per_level < 1 {
        return Err(HarnessError::Config("runsPerLevel must be >= 1".into()));
    }
    let fixture =
        fixtures::fixture(&cfg.game).ok_or_else(|| HarnessError::UnknownGame(cfg.game.clone()))?;

    let mut critical_sets: Vec<Option<BTreeSet<String>>> = Vec::new();
    for spec in &cfg.agents {
        critical_sets.push(match spec {
            AgentSpec::Vanilla => None,
            AgentSpec::MechPlaytrace => {
                Some(critical_set_for(&cfg.game, DiscoveryMethod::Playtrace)?)
            }
            AgentSpec::MechBaseline => {
                Some(critical_set_for(&cfg.game, DiscoveryMethod::Baseline)?)
            }
        });
    }

    let mut compiled_levels = Vec::new();
    for &level in &cfg.levels {
        compiled_levels.push((level, load_game(&cfg.game, level)?.compiled));
    }

    let mut jobs = Vec::new();
    for (level_pos, (level, compiled)) in compiled_levels.iter().enumerate() {
        for (agent_idx, spec) in cfg.agents.iter().enumerate() {
            for run in 0..cfg.runs_per_level {
                jobs.push((level_pos, *level, compiled.clone(), agent_idx, *spec, run));
            }
        }
    }

    let mut rows: Vec<(usize, usize, u32, ResultRow)> = jobs
        .into_par_iter()
        .map(|(level_pos, level, compiled, agent_idx, spec, run)| {
            let seed = rng::mix_seed(&[
                cfg.base_seed,
                rng::hash_str(&cfg.game),
                level as u64,
                rng::hash_str(spec.name()),
                u64::from(run),
            ]);
            let evaluator = match &critical_sets[agent_idx] {
                None => Evaluator::Vanilla,
                Some(set) => Evaluator::Mechanic {
                    critical_set: set.clone(),
                },
            };
            let agent_cfg = AgentConfig {
                exploration_c: cfg.exploration_c,
                max_tree_nodes: cfg.max_tree_nodes,
                rollout_depth: cfg.rollout_depth,
                seed,
                evaluator,
                ..AgentConfig::default()
            };
            let episode = run_episode(&compiled, agent_cfg, seed, cfg.max_episode_ticks);
            let bounds = &fixture.levels[level];
            let raw = match fixture.raw_score {
                RawScore::GameScore => episode.score as f64,
                RawScore::SurvivalTicks => f64::from(episode.ticks),
            };
            let normalized = ((raw - bounds.score_min)
                / (bounds.score_max - bounds.score_min))
                .clamp(0.0, 1.0);
            let outcome = match episode.outcome {
                Outcome::Ongoing => Outcome::Loss, // cut off at the tick cap
                other => other,
            };
            let row = ResultRow {
                game: cfg.game.clone(),
                level,
                agent: spec.name(),
                seed,
                outcome,
                raw_score: raw,
                ticks: episode.ticks,
                normalized_score: normalized,
            };
            (level_pos, agent_idx, run, row)
        })
        .collect();

    rows.sort_by_key(|(level_pos, agent_idx, run, _)| (*level_pos, *agent_idx, *run));
    Ok(rows.into_iter().map(|(_, _, _, row)| row).collect())
}

/// CSV with one line per result row; byte-stable across repeated runs.
pub fn render_csv(rows: &[ResultRow]) -> String {
    let mut out =
        String::from("game,level,agent,seed,outcome,rawScore,ticks,normalizedScore\n");
    for r in rows {
        let outcome = match r.outcome {
            Outcome::Win => "Win",
            Outcome::Loss => "Loss",
            Outcome::Ongoing => "Ongoing",
        };
        let _ = writeln!(
            out,
            "{},{},{},{},{},{:.6},{},{:.6}",
            r.game, r.level, r.agent, r.seed, outcome, r.raw_score, r.ticks, r.normalized_score
        );
    }
    out
}

#[derive(Debug, Clone)]
pub struct AgentSummary {
    pub agent: &'static str,
    pub runs: usize,
    pub wins: usize,
    pub win_rate: f64,
    pub mean_normalized: f64,
    /// Half-width of the 95% confidence interval (normal approximation).
    pub ci_half_width: f64,
}

pub fn summarize(rows: &[ResultRow]) -> Vec<AgentSummary> {
    let mut agents: Vec<&'static str> = Vec::new();
    for r in rows {
        if !agents.contains(&r.agent) {
            agents.push(r.agent);
        }
    }
    agents
        .into_iter()
        .map(|agent| {
            let scores: Vec<f64> = rows
                .iter()
                .filter(|r| r.agent == agent)
                .map(|r| r.normalized_score)
                .collect();
            let wins = rows
                .iter()
                .filter(|r| r.agent == agent && r.outcome == Outcome::Win)
                .count();
            let n = scores.len();
            let mean = scores.iter().sum::<f64>() / n as f64;
            let var = if n > 1 {
                scores.iter().map(|s| (s - mean).powi(2)).sum::<f64>() / (n - 1) as f64
            } else {
                0.0
            };
            AgentSummary {
                agent,
                runs: n,
                wins,
                win_rate: wins as f64 / n as f64,
                mean_normalized: mean,
                ci_half_width: 1.96 * (var / n as f64).sqrt(),
            }
        })
        .collect()
}

pub fn render_summary(game: &str, summaries: &[AgentSummary]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "results for {game}");
    let _ = writeln!(
        out,
        "{:<16} {:>5} {:>5} {:>9} {:>11} {:>9}",
        "agent", "runs", "wins", "win rate", "mean score", "ci95"
    );
    for s in summaries {
        let _ = writeln!(
            out,
            "{:<16} {:>5} {:>5} {:>8.1}% {:>11.4} {:>9.4}",
            s.agent,
            s.runs,
            s.wins,
            s.win_rate * 100.0,
            s.mean_normalized,
            s.ci_half_width
        );
    }
    out
}
