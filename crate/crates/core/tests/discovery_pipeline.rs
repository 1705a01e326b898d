//! End-to-end discovery checks and the greedy-walk reference oracle.

use critmech::discovery::{
    rules_baseline, expand_siblings, find_critical_path, CriticalPath, DiscoveryError,
    DiscoveryMethod,
};
use critmech::engine::rng::SplitMix64;
use critmech::graph::{
    build_atomic_graph, build_mechanic_graph, ConditionKind, MechanicAction, MechanicGraph,
    MechanicNode,
};
use critmech::harness;
use critmech::vgdl::parse_game;
use std::collections::BTreeSet;

fn ids(path: &CriticalPath) -> Vec<&str> {
    path.mechanics.iter().map(String::as_str).collect()
}

#[test]
fn zelda_playtrace_discovery_matches_expected_set() {
    let out = harness::discover("zelda", DiscoveryMethod::Playtrace).unwrap();
    assert_eq!(
        ids(&out.path),
        [
            "collision(nokey,key)->transformTo(withkey,killSecond)+1",
            "collision(goal,withkey)->killSprite(goal)+1",
            "spriteCounter(goal<=0)->win",
        ]
    );
}

#[test]
fn solarfox_playtrace_discovery_matches_expected_set() {
    let out = harness::discover("solarfox", DiscoveryMethod::Playtrace).unwrap();
    assert_eq!(
        ids(&out.path),
        [
            "collision(gem,ship)->killSprite(gem)+1",
            "multiSpriteCounter(gem+powergem<=0)->win",
        ]
    );
}

#[test]
fn plants_playtrace_discovery_matches_expected_set() {
    let out = harness::discover("plants", DiscoveryMethod::Playtrace).unwrap();
    assert_eq!(
        ids(&out.path),
        [
            "input(avatar)->spawn(shovel)",
            "collision(grass,shovel)->transformTo(plant,killSecond)",
            "collision(plant,axe)->killBoth(plant,axe)",
            "timeout(>=1000)->win",
        ]
    );
}

#[test]
fn baseline_matches_published_sets() {
    let zelda = harness::discover("zelda", DiscoveryMethod::Baseline).unwrap();
    assert_eq!(
        ids(&zelda.path),
        [
            "collision(nokey,key)->transformTo(withkey,killSecond)+1",
            "collision(goal,withkey)->killSprite(goal)+1",
            "spriteCounter(goal<=0)->win",
        ]
    );
    let solarfox = harness::discover("solarfox", DiscoveryMethod::Baseline).unwrap();
    assert_eq!(
        ids(&solarfox.path),
        [
            "collision(gem,ship)->killSprite(gem)+1",
            "multiSpriteCounter(gem+powergem<=0)->win",
        ]
    );
    // No player-driven condition reaches the timeout win: fallback.
    let plants = harness::discover("plants", DiscoveryMethod::Baseline).unwrap();
    assert_eq!(ids(&plants.path), ["timeout(>=1000)->win"]);
}

#[test]
fn baseline_path_length_is_the_bfs_distance() {
    // The chosen start's path is its true shortest path, and no other
    // player-driven start has a strictly longer finite one (checked for
    // zelda where pickup's 3-mechanic chain dominates unlock's 2).
    let desc = parse_game(harness::fixtures::ZELDA.description).unwrap();
    let atomic = build_atomic_graph(&desc);
    let path = rules_baseline(&atomic).unwrap();
    assert_eq!(path.mechanics.len(), 3);
    assert_eq!(path.terminal_id.as_deref(), Some("spriteCounter(goal<=0)->win"));
}

#[test]
fn sibling_expansion_adds_the_spider_variant() {
    let desc = parse_game(harness::fixtures::ZELDA.description).unwrap();
    let graph = build_mechanic_graph(&build_atomic_graph(&desc));
    let path = CriticalPath {
        method: DiscoveryMethod::Playtrace,
        mechanics: vec![
            "collision(bat,sword)->killSprite(bat)+1".into(),
            "spriteCounter(goal<=0)->win".into(),
        ],
        terminal_id: Some("spriteCounter(goal<=0)->win".into()),
    };
    let expanded = expand_siblings(&path, &desc, &graph);
    assert_eq!(
        expanded.mechanics,
        [
            "collision(bat,sword)->killSprite(bat)+1",
            "collision(spider,sword)->killSprite(spider)+1",
            "spriteCounter(goal<=0)->win",
        ]
    );
}

#[test]
fn sibling_expansion_ignores_unrelated_parents_and_is_idempotent() {
    let desc = parse_game(harness::fixtures::ZELDA.description).unwrap();
    let graph = build_mechanic_graph(&build_atomic_graph(&desc));
    // Avatar deaths share shape but avatar/wall are not siblings of
    // anything; pickup has no sibling either.
    let path = CriticalPath {
        method: DiscoveryMethod::Playtrace,
        mechanics: vec![
            "collision(nokey,key)->transformTo(withkey,killSecond)+1".into(),
            "spriteCounter(goal<=0)->win".into(),
        ],
        terminal_id: Some("spriteCounter(goal<=0)->win".into()),
    };
    let once = expand_siblings(&path, &desc, &graph);
    assert_eq!(once.mechanics, path.mechanics);
    let twice = expand_siblings(&once, &desc, &graph);
    assert_eq!(once, twice);

    let rp = harness::discover("realportals", DiscoveryMethod::Playtrace).unwrap();
    let desc_rp = parse_game(harness::fixtures::REALPORTALS.description).unwrap();
    let again = expand_siblings(&rp.path, &desc_rp, rp.annotated.as_ref().unwrap());
    assert_eq!(rp.path, again);
}

#[test]
fn same_shape_rules_with_unrelated_sprites_are_not_siblings() {
    // potion/avatar both teleport on the entrance with identical effects,
    // but they are root sprites, not siblings: expansion must not bridge
    // them.
    let desc = parse_game(harness::fixtures::REALPORTALS.description).unwrap();
    let graph = build_mechanic_graph(&build_atomic_graph(&desc));
    let path = CriticalPath {
        method: DiscoveryMethod::Playtrace,
        mechanics: vec!["collision(potion,portalIn)->teleportToExit(potion)".into()],
        terminal_id: None,
    };
    let expanded = expand_siblings(&path, &desc, &graph);
    assert_eq!(expanded.mechanics, path.mechanics);
}

/// Independent shortest-path oracle: recompute every player-driven
/// start's BFS distance to a win action and check the baseline picked the
/// longest finite one (ties to the earliest start) with a path of exactly
/// that length.
#[test]
fn baseline_start_choice_matches_an_independent_bfs() {
    for game in ["zelda", "solarfox", "realportals"] {
        let desc = parse_game(harness::fixtures::fixture(game).unwrap().description).unwrap();
        let atomic = build_atomic_graph(&desc);
        let targets: BTreeSet<usize> = atomic.win_action_nodes().into_iter().collect();

        // Plain BFS distance, no path reconstruction.
        let dist_to_win = |start: usize| -> Option<usize> {
            let mut dist = vec![usize::MAX; atomic.nodes.len()];
            let mut queue = std::collections::VecDeque::from([start]);
            dist[start] = 0;
            while let Some(node) = queue.pop_front() {
                if targets.contains(&node) {
                    return Some(dist[node]);
                }
                for &next in &atomic.adjacency[node] {
                    if dist[next] == usize::MAX {
                        dist[next] = dist[node] + 1;
                        queue.push_back(next);
                    }
                }
            }
            None
        };

        let starts = atomic.player_driven_mechanics();
        let best = starts
            .iter()
            .filter_map(|&m| dist_to_win(atomic.condition_nodes[m]).map(|d| (d, m)))
            .fold(None::<(usize, usize)>, |acc, (d, m)| match acc {
                Some((bd, bm)) if bd >= d => Some((bd, bm)),
                _ => Some((d, m)),
            });

        let path = rules_baseline(&atomic).unwrap();
        match best {
            Some((dist, mech)) => {
                assert_eq!(
                    path.mechanics[0],
                    atomic.mechanic_id(mech),
                    "{game}: start choice"
                );
                // A path from a condition to a win action repeats
                // cond -> act -> obj -> cond; k mechanics span 3k-2 edges,
                // so mechanics = (dist + 2) / 3.
                assert_eq!(path.mechanics.len(), dist.div_ceil(3), "{game}: length");
            }
            None => panic!("{game}: oracle found no finite start but baseline returned {path:?}"),
        }
    }
}

#[test]
fn realportals_covers_eleven_rows_and_skips_water_deaths() {
    let out = harness::discover("realportals", DiscoveryMethod::Playtrace).unwrap();
    let table = harness::human_table("realportals").unwrap();
    let discovered: BTreeSet<String> = out.path.id_set();
    let matched = table.matched_rows(&discovered);
    assert_eq!(matched.len(), 11);
    let water_row = table
        .rows
        .iter()
        .position(|r| r.description.starts_with("Avoid dying"))
        .unwrap();
    assert!(!matched.contains(&water_row));
    // The portal-exit bump is among them.
    assert!(discovered.contains("collision(avatarOut,portalOut)->stepBack(avatarOut)"));
}

// --- Reference interpreter for the greedy walk ---------------------------

/// Literal list-based transcription: sort the frontier ascending by
/// (frame, id), pop the head, record it, stop on a win terminal, then add
/// unvisited annotated neighbours.
fn reference_walk(graph: &MechanicGraph) -> Result<Vec<String>, Vec<String>> {
    let frame = |i: usize| graph.nodes[i].frame.expect("only annotated nodes enter");
    let mut search_list: Vec<usize> = Vec::new();
    let mut seen = vec![false; graph.nodes.len()];
    for (i, n) in graph.nodes.iter().enumerate() {
        if n.player_centric && n.frame.is_some() {
            search_list.push(i);
            seen[i] = true;
        }
    }
    let mut critical_path: Vec<String> = Vec::new();
    while !search_list.is_empty() {
        search_list.sort_by(|&a, &b| {
            (frame(a), graph.nodes[a].id.as_str()).cmp(&(frame(b), graph.nodes[b].id.as_str()))
        });
        let current = search_list.remove(0);
        critical_path.push(graph.nodes[current].id.clone());
        if graph.nodes[current].is_win_terminal() {
            return Ok(critical_path);
        }
        for nb in graph.neighbors(current) {
            if !seen[nb] && graph.nodes[nb].frame.is_some() {
                seen[nb] = true;
                search_list.push(nb);
            }
        }
    }
    Err(critical_path)
}

fn random_annotated_graph(rng: &mut SplitMix64) -> MechanicGraph {
    let n = 2 + rng.next_below(7); // 2..=8 nodes
    let mut nodes = Vec::new();
    for i in 0..n {
        let has_frame = rng.next_below(10) < 7;
        let player_centric = rng.next_below(10) < 4;
        let win = rng.next_below(10) < 2;
        nodes.push(MechanicNode {
            id: format!("m{i:02}"),
            condition_kind: if player_centric {
                ConditionKind::Input
            } else {
                ConditionKind::Collision
            },
            inputs: BTreeSet::new(),
            action: if win {
                MechanicAction::Win
            } else {
                MechanicAction::Effect {
                    effect: critmech::vgdl::Effect::KillSprite,
                    stype: None,
                    kill_second: false,
                    score_change: 0,
                }
            },
            outputs: BTreeSet::new(),
            participants: None,
            frame: has_frame.then(|| rng.next_below(40) as u32),
            terminal: win,
            player_centric,
        });
    }
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && rng.next_below(10) < 3 {
                edges.push((a, b));
            }
        }
    }
    MechanicGraph { nodes, edges }
}

/// The implementation agrees with the literal interpreter on 200 random
/// annotated graphs, successes and failures alike.
#[test]
fn greedy_walk_agrees_with_reference_on_200_random_graphs() {
    let mut rng = SplitMix64::new(0xC0FFEE);
    let mut wins = 0;
    for case in 0..200 {
        let graph = random_annotated_graph(&mut rng);
        let expected = reference_walk(&graph);
        let actual = find_critical_path(&graph);
        match (expected, actual) {
            (Ok(exp), Ok(act)) => {
                assert_eq!(exp, act.mechanics, "case {case}");
                wins += 1;
            }
            (Err(exp), Err(DiscoveryError::NoWinPath { partial })) => {
                assert_eq!(exp, partial, "case {case}");
            }
            (exp, act) => panic!("case {case}: reference {exp:?} vs implementation {act:?}"),
        }
    }
    assert!(wins > 0, "generator never produced a reachable win");
}

/// Each node is popped at most once: the walk halts within |nodes| pops.
#[test]
fn greedy_walk_pops_each_node_at_most_once() {
    let mut rng = SplitMix64::new(0xBEEF);
    for _ in 0..100 {
        let graph = random_annotated_graph(&mut rng);
        let popped = match find_critical_path(&graph) {
            Ok(path) => path.mechanics,
            Err(DiscoveryError::NoWinPath { partial }) => partial,
            Err(other) => panic!("{other}"),
        };
        assert!(popped.len() <= graph.nodes.len());
        let set: BTreeSet<&String> = popped.iter().collect();
        assert_eq!(set.len(), popped.len(), "duplicate pops");
    }
}

#[test]
fn baseline_without_a_win_action_is_an_error() {
    let desc = parse_game(
        "SpriteSet\n    avatar > MovingAvatar\nInteractionSet\nTerminationSet\n    Timeout limit=5 win=False\nLevelMapping\n    A > avatar\n",
    )
    .unwrap();
    let atomic = build_atomic_graph(&desc);
    assert_eq!(
        rules_baseline(&atomic).unwrap_err(),
        DiscoveryError::NoWinCondition
    );
}

#[test]
fn discovery_is_deterministic() {
    for game in ["zelda", "solarfox", "plants", "realportals"] {
        for method in [DiscoveryMethod::Playtrace, DiscoveryMethod::Baseline] {
            let a = harness::discover(game, method).unwrap();
            let b = harness::discover(game, method).unwrap();
            assert_eq!(a.path, b.path, "{game}/{method:?}");
            assert_eq!(a.doc.to_json(), b.doc.to_json());
        }
    }
}
