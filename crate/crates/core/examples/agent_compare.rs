//! Quick win-rate comparison across seeds (dev tool).

use critmech::agents::{AgentConfig, Evaluator};
use critmech::discovery::DiscoveryMethod;
use critmech::engine::Outcome;
use critmech::harness;
use rayon::prelude::*;
use std::collections::BTreeSet;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let game = args.get(1).map(String::as_str).unwrap_or("zelda");
    let level: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(1);
    let runs: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(20);
    let nodes: usize = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let cap: u32 = args.get(5).and_then(|s| s.parse().ok()).unwrap_or(400);

    let critical: BTreeSet<String> = harness::discover(game, DiscoveryMethod::Playtrace)
        .unwrap()
        .path
        .id_set();
    let compiled = harness::load_game(game, level).unwrap().compiled;

    for (name, evaluator) in [
        ("vanilla", Evaluator::Vanilla),
        (
            "mech-playtrace",
            Evaluator::Mechanic {
                critical_set: critical.clone(),
            },
        ),
    ] {
        let results: Vec<(Outcome, i64, u32)> = (1..=runs)
            .into_par_iter()
            .map(|seed| {
                let cfg = AgentConfig {
                    max_tree_nodes: nodes,
                    rollout_depth: 20,
                    seed,
                    evaluator: evaluator.clone(),
                    ..AgentConfig::default()
                };
                let ep = harness::run_episode(&compiled, cfg, seed, cap);
                (ep.outcome, ep.score, ep.ticks)
            })
            .collect();
        let wins = results.iter().filter(|(o, _, _)| *o == Outcome::Win).count();
        let deaths = results
            .iter()
            .filter(|(o, _, _)| *o == Outcome::Loss)
            .count();
        let capouts = results
            .iter()
            .filter(|(o, _, _)| *o == Outcome::Ongoing)
            .count();
        let win_ticks: Vec<f64> = results
            .iter()
            .filter(|(o, _, _)| *o == Outcome::Win)
            .map(|(_, _, t)| f64::from(*t))
            .collect();
        let mwt = if win_ticks.is_empty() {
            0.0
        } else {
            win_ticks.iter().sum::<f64>() / win_ticks.len() as f64
        };
        println!(
            "{game} L{level} {name:>15}: wins {wins}/{runs}  deaths {deaths}  capouts {capouts}  mean win tick {mwt:.0}"
        );
    }
}
