//! Command-line front end.

use clap::{Parser, Subcommand, ValueEnum};
use critmech::agents::{AgentConfig, Evaluator, MctsAgent};
use critmech::discovery::{CriticalPathDoc, DiscoveryMethod};
use critmech::engine::{self, Outcome};
use critmech::graph;
use critmech::harness::{self, ExperimentConfig};
use critmech::vgdl;
use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "critmech", version, about = "Critical-mechanic discovery for grid games")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Playtrace,
    Baseline,
}

impl From<MethodArg> for DiscoveryMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Playtrace => DiscoveryMethod::Playtrace,
            MethodArg::Baseline => DiscoveryMethod::Baseline,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Parse a bundled game (or a .vgd file) and print a validation report.
    Parse { game: String },
    /// Print a game's interaction graph.
    Graph {
        game: String,
        /// Emit DOT (default).
        #[arg(long)]
        dot: bool,
        /// Emit JSON instead of DOT.
        #[arg(long)]
        json: bool,
        /// Use the mechanic graph (default).
        #[arg(long)]
        mechanic: bool,
        /// Use the atomic graph instead.
        #[arg(long)]
        atomic: bool,
    },
    /// Replay an action script and print the playtrace JSON.
    Replay {
        game: String,
        /// Bundled level index.
        level: usize,
        /// Path to a .acts script, or the name of a bundled solution.
        script: String,
        #[arg(long, default_value_t = harness::SOLUTION_SEED)]
        seed: u64,
    },
    /// Run critical-mechanic discovery and print the result JSON.
    Discover {
        game: String,
        #[arg(long, value_enum)]
        method: MethodArg,
        /// Write the JSON document here as well.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare discovered mechanics against the bundled survey table.
    Matchrate {
        game: String,
        #[arg(long, value_enum)]
        method: MethodArg,
    },
    /// Run an agent-comparison experiment from a JSON config.
    Experiment {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Built-in config: desk or full scale for a bundled game.
        #[arg(long)]
        game: Option<String>,
        #[arg(long, default_value = "desk")]
        scale: String,
        /// Write the CSV here (otherwise printed to stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Play one episode with an agent and print the outcome.
    Play {
        game: String,
        level: usize,
        /// `vanilla` or `mech:<critical-path.json>`.
        #[arg(long, default_value = "vanilla")]
        agent: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        nodes: usize,
        #[arg(long, default_value_t = 20)]
        depth: u32,
        #[arg(long, default_value_t = 400)]
        max_ticks: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<(), Box<dyn std::error::Error>> {
    match command {
        Command::Parse { game } => {
            let source = game_source(&game)?;
            let desc = vgdl::parse_game(&source)?;
            let diags = vgdl::validate(&desc);
            println!(
                "parsed: {} sprites, {} interactions, {} terminations, {} mapping entries",
                desc.sprites.len(),
                desc.interactions.len(),
                desc.terminations.len(),
                desc.level_mapping.len()
            );
            if diags.is_empty() {
                println!("validation: clean");
            } else {
                for d in &diags {
                    println!("validation: {d}");
                }
            }
        }
        Command::Graph {
            game,
            json,
            atomic,
            ..
        } => {
            let source = game_source(&game)?;
            let desc = vgdl::parse_game(&source)?;
            let atomic_graph = graph::build_atomic_graph(&desc);
            if atomic {
                if json {
                    println!("{}", serde_json::to_string_pretty(&atomic_graph)?);
                } else {
                    print!("{}", graph::export_atomic_dot(&atomic_graph));
                }
            } else {
                let mechanic = graph::build_mechanic_graph(&atomic_graph);
                if json {
                    print!("{}", graph::export_json(&mechanic));
                } else {
                    print!("{}", graph::export_dot(&mechanic));
                }
            }
        }
        Command::Replay {
            game,
            level,
            script,
            seed,
        } => {
            let loaded = harness::load_game(&game, level)?;
            let source = match loaded
                .fixture
                .solutions
                .iter()
                .find(|(name, _)| *name == script)
            {
                Some((_, src)) => (*src).to_owned(),
                None => std::fs::read_to_string(&script)?,
            };
            let actions = engine::parse_actions(&source)?;
            let trace = engine::replay(
                &loaded.compiled,
                &game,
                &format!("level_{level}"),
                seed,
                &actions,
            )?;
            println!("{}", trace.to_json());
        }
        Command::Discover { game, method, out } => {
            let output = harness::discover(&game, method.into())?;
            let json = output.doc.to_json();
            if let Some(path) = out {
                std::fs::write(&path, &json)?;
            }
            println!("{json}");
        }
        Command::Matchrate { game, method } => {
            let report = harness::matchrate_report(&game, method.into())?;
            print!("{}", harness::render_matchrate(&report));
        }
        Command::Experiment {
            config,
            game,
            scale,
            out,
        } => {
            let cfg = match (config, game) {
                (Some(path), _) => ExperimentConfig::from_json(&std::fs::read_to_string(path)?)?,
                (None, Some(game)) => match scale.as_str() {
                    "desk" => ExperimentConfig::desk(&game),
                    "full" => ExperimentConfig::full(&game),
                    other => return Err(format!("unknown scale `{other}`").into()),
                },
                (None, None) => {
                    return Err("pass --config <file> or --game <name> [--scale desk|full]".into())
                }
            };
            let rows = harness::run_experiment(&cfg)?;
            let csv = harness::render_csv(&rows);
            let summary = harness::render_summary(&cfg.game, &harness::summarize(&rows));
            match out {
                Some(path) => {
                    std::fs::write(&path, &csv)?;
                    print!("{summary}");
                }
                None => {
                    print!("{csv}");
                    print!("{summary}");
                }
            }
        }
        Command::Play {
            game,
            level,
            agent,
            seed,
            nodes,
            depth,
            max_ticks,
        } => {
            let loaded = harness::load_game(&game, level)?;
            let evaluator = if agent == "vanilla" {
                Evaluator::Vanilla
            } else if let Some(path) = agent.strip_prefix("mech:") {
                let doc = CriticalPathDoc::from_json(&std::fs::read_to_string(path)?)?;
                Evaluator::Mechanic {
                    critical_set: doc.mechanics.into_iter().collect::<BTreeSet<_>>(),
                }
            } else {
                return Err(format!("unknown agent `{agent}`; use vanilla or mech:<file>").into());
            };
            let cfg = AgentConfig {
                max_tree_nodes: nodes,
                rollout_depth: depth,
                seed,
                evaluator,
                ..AgentConfig::default()
            };
            let mut state = engine::init(&loaded.compiled, seed);
            let mut history = Vec::new();
            history.extend(state.resolve_initial());
            let mut agent = MctsAgent::new(cfg);
            while state.outcome == Outcome::Ongoing && state.tick < max_ticks {
                let action = agent.decide(&state, &history);
                history.extend(state.step(action));
            }
            let outcome = match state.outcome {
                Outcome::Win => "Win",
                Outcome::Loss => "Loss",
                Outcome::Ongoing => "Ongoing (tick cap reached)",
            };
            println!(
                "outcome: {outcome}  score: {}  ticks: {}  events: {}",
                state.score,
                state.tick,
                history.len()
            );
        }
    }
    Ok(())
}

fn game_source(game: &str) -> Result<String, Box<dyn std::error::Error>> {
    if let Some(fixture) = harness::fixtures::fixture(game) {
        return Ok(fixture.description.to_owned());
    }
    if game.ends_with(".vgd") {
        return Ok(std::fs::read_to_string(game)?);
    }
    Err(format!("unknown game `{game}` (bundled: zelda, solarfox, plants, realportals)").into())
}
