//! Critical-mechanic discovery.
//!
//! Two methods are implemented. The playtrace method picks the winning
//! trace with the fewest distinct mechanics, stamps the mechanic graph
//! with earliest-occurrence frames, and runs a greedy best-first walk from
//! player-centric mechanics to a win terminal, recording every popped
//! node. The baseline method ignores traces entirely: it breadth-first
//! searches the atomic graph from each player-driven condition to a win
//! action and keeps the start whose shortest path is longest.

use crate::engine::{Outcome, Playtrace};
use crate::graph::{AtomicGraph, MechanicGraph};
use crate::vgdl::GameDescription;
use serde::{Deserialize, Serialize};
use std::cmp::Reverse;
use std::collections::{BTreeMap, BTreeSet, BinaryHeap, VecDeque};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum DiscoveryError {
    #[error("NO_WINNING_TRACE: no winning playtrace available")]
    NoWinningTrace,
    #[error("NO_WIN_PATH: frontier exhausted before a win terminal; partial path {partial:?}")]
    NoWinPath { partial: Vec<String> },
    #[error("NO_WIN_CONDITION: the graph has no win action node")]
    NoWinCondition,
    #[error("degenerate table: percentages sum to zero")]
    DegenerateTable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DiscoveryMethod {
    Playtrace,
    Baseline,
}

impl DiscoveryMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            DiscoveryMethod::Playtrace => "playtrace",
            DiscoveryMethod::Baseline => "baseline",
        }
    }
}

/// Ordered list of discovered mechanic ids, ending with the win terminal
/// when one was reached.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalPath {
    pub method: DiscoveryMethod,
    /// Mechanic ids in pop order (playtrace) or path order (baseline).
    pub mechanics: Vec<String>,
    #[serde(rename = "terminalId")]
    pub terminal_id: Option<String>,
}

impl CriticalPath {
    pub fn id_set(&self) -> BTreeSet<String> {
        self.mechanics.iter().cloned().collect()
    }
}

/// Pick the winning trace with the fewest distinct mechanics. Ties break
/// by smaller final tick, then by the lexicographically smaller
/// (game, level, seed, action-list) tuple.
pub fn select_playtrace<'a>(traces: &'a [Playtrace]) -> Result<&'a Playtrace, DiscoveryError> {
    traces
        .iter()
        .filter(|t| t.outcome == Outcome::Win)
        .min_by(|a, b| {
            let key = |t: &Playtrace| {
                (
                    t.unique_mechanics().len(),
                    t.final_tick,
                )
            };
            key(a).cmp(&key(b)).then_with(|| {
                let tup = |t: &'a Playtrace| {
                    (
                        t.meta.game.clone(),
                        t.meta.level.clone(),
                        t.meta.seed,
                        t.actions.iter().map(|x| x.token()).collect::<Vec<_>>(),
                    )
                };
                tup(a).cmp(&tup(b))
            })
        })
        .ok_or(DiscoveryError::NoWinningTrace)
}

/// Greedy best-first walk over an annotated mechanic graph.
///
/// The frontier starts with every player-centric mechanic that carries a
/// frame. Each iteration pops the smallest (frame, id) entry, records it,
/// stops on a win terminal, and otherwise pushes annotated, not-yet-seen
/// neighbours. Mechanics without frames are never pushed. Every popped
/// node stays in the path, dead ends included.
pub fn find_critical_path(graph: &MechanicGraph) -> Result<CriticalPath, DiscoveryError> {
    let mut heap: BinaryHeap<Reverse<(u32, String, usize)>> = BinaryHeap::new();
    let mut seen = vec![false; graph.nodes.len()];
    for (i, n) in graph.nodes.iter().enumerate() {
        if n.player_centric {
            if let Some(frame) = n.frame {
                seen[i] = true;
                heap.push(Reverse((frame, n.id.clone(), i)));
            }
        }
    }
    let mut path: Vec<String> = Vec::new();
    while let Some(Reverse((_, id, idx))) = heap.pop() {
        path.push(id);
        if graph.nodes[idx].is_win_terminal() {
            return Ok(CriticalPath {
                method: DiscoveryMethod::Playtrace,
                terminal_id: Some(graph.nodes[idx].id.clone()),
                mechanics: path,
            });
        }
        for nb in graph.neighbors(idx) {
            if !seen[nb] {
                if let Some(frame) = graph.nodes[nb].frame {
                    seen[nb] = true;
                    heap.push(Reverse((frame, graph.nodes[nb].id.clone(), nb)));
                }
            }
        }
    }
    Err(DiscoveryError::NoWinPath { partial: path })
}

/// Add sibling mechanics: for each collision mechanic on the path, every
/// graph mechanic with an identical effect (parameters and score
/// included) whose participants differ only by swapping one sprite for a
/// sibling under the same declared parent. Siblings are inserted
/// immediately after their origin mechanic. Idempotent.
pub fn expand_siblings(
    path: &CriticalPath,
    desc: &GameDescription,
    graph: &MechanicGraph,
) -> CriticalPath {
    let mut out: Vec<String> = Vec::new();
    for id in &path.mechanics {
        out.push(id.clone());
        let Some(idx) = graph.node_index(id) else {
            continue;
        };
        let origin = &graph.nodes[idx];
        let Some((of, os)) = &origin.participants else {
            continue;
        };
        for cand in &graph.nodes {
            if cand.id == origin.id
                || out.contains(&cand.id)
                || path.mechanics.contains(&cand.id)
            {
                continue;
            }
            let Some((cf, cs)) = &cand.participants else {
                continue;
            };
            if cand.action != origin.action {
                continue;
            }
            let first_swapped = siblings(desc, of, cf) && os == cs;
            let second_swapped = of == cf && siblings(desc, os, cs);
            if first_swapped || second_swapped {
                out.push(cand.id.clone());
            }
        }
    }
    CriticalPath {
        method: path.method,
        mechanics: out,
        terminal_id: path.terminal_id.clone(),
    }
}

/// Two distinct sprites sharing the same declared parent. Root sprites
/// have no siblings.
fn siblings(desc: &GameDescription, a: &str, b: &str) -> bool {
    if a == b {
        return false;
    }
    match (desc.sprite(a), desc.sprite(b)) {
        (Some(da), Some(db)) => match (&da.parent, &db.parent) {
            (Some(pa), Some(pb)) => pa == pb,
            _ => false,
        },
        _ => false,
    }
}

/// The trace-free baseline: breadth-first search the atomic graph from
/// each player-driven condition node to any win action node (unit edge
/// weights, neighbour order = construction order), keep each start's
/// shortest path, and return the start whose shortest path is longest.
/// Ties break toward earlier description order. When no start reaches a
/// win action, fall back to the bare win-termination mechanic.
pub fn rules_baseline(atomic: &AtomicGraph) -> Result<CriticalPath, DiscoveryError> {
    let win_actions: BTreeSet<usize> = atomic.win_action_nodes().into_iter().collect();
    if win_actions.is_empty() {
        return Err(DiscoveryError::NoWinCondition);
    }
    let mut best: Option<(usize, Vec<usize>)> = None; // (edge length, node path)
    for mech in atomic.player_driven_mechanics() {
        let start = atomic.condition_nodes[mech];
        if let Some(path) = bfs_path(atomic, start, &win_actions) {
            let len = path.len() - 1;
            let better = match &best {
                None => true,
                Some((best_len, _)) => len > *best_len,
            };
            if better {
                best = Some((len, path));
            }
        }
    }
    match best {
        Some((_, node_path)) => {
            let mut mechanics = Vec::new();
            for node in node_path {
                if let Some(m) = atomic.condition_nodes.iter().position(|&c| c == node) {
                    mechanics.push(atomic.mechanic_id(m).to_owned());
                }
            }
            let terminal_id = mechanics.last().cloned();
            Ok(CriticalPath {
                method: DiscoveryMethod::Baseline,
                mechanics,
                terminal_id,
            })
        }
        None => {
            let m = atomic
                .first_win_termination()
                .ok_or(DiscoveryError::NoWinCondition)?;
            let id = atomic.mechanic_id(m).to_owned();
            Ok(CriticalPath {
                method: DiscoveryMethod::Baseline,
                mechanics: vec![id.clone()],
                terminal_id: Some(id),
            })
        }
    }
}

fn bfs_path(atomic: &AtomicGraph, start: usize, targets: &BTreeSet<usize>) -> Option<Vec<usize>> {
    let mut parent: Vec<Option<usize>> = vec![None; atomic.nodes.len()];
    let mut visited = vec![false; atomic.nodes.len()];
    let mut queue = VecDeque::new();
    visited[start] = true;
    queue.push_back(start);
    while let Some(node) = queue.pop_front() {
        if targets.contains(&node) {
            let mut path = vec![node];
            let mut cur = node;
            while let Some(p) = parent[cur] {
                path.push(p);
                cur = p;
            }
            path.reverse();
            return Some(path);
        }
        for &next in &atomic.adjacency[node] {
            if !visited[next] {
                visited[next] = true;
                parent[next] = Some(node);
                queue.push_back(next);
            }
        }
    }
    None
}

/// One aggregated human-survey row: a described mechanic, the mechanic
/// ids it stands for, and the share of participants who mentioned it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HumanMechanicRow {
    pub description: String,
    pub ids: Vec<String>,
    /// Percentage in [0, 100], as given.
    pub percentage: f64,
    /// Method marks as reported: whether each method's published set
    /// included this row.
    #[serde(default)]
    pub playtrace: bool,
    #[serde(default)]
    pub baseline: bool,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PrintedRates {
    pub playtrace: f64,
    pub baseline: f64,
}

/// Survey fixture for one game, including the published per-method marks
/// and match rates for side-by-side reporting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HumanMechanicTable {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    pub game: String,
    pub rows: Vec<HumanMechanicRow>,
    pub printed: PrintedRates,
}

impl HumanMechanicTable {
    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }

    /// Match rate computed from the published method marks instead of a
    /// discovered set.
    pub fn marked_rate(&self, method: DiscoveryMethod) -> Result<f64, DiscoveryError> {
        let total: f64 = self.rows.iter().map(|r| r.percentage).sum();
        if total <= 0.0 {
            return Err(DiscoveryError::DegenerateTable);
        }
        let marked: f64 = self
            .rows
            .iter()
            .filter(|r| match method {
                DiscoveryMethod::Playtrace => r.playtrace,
                DiscoveryMethod::Baseline => r.baseline,
            })
            .map(|r| r.percentage)
            .sum();
        Ok(marked / total)
    }

    /// Rows whose aggregated ids intersect `discovered`.
    pub fn matched_rows(&self, discovered: &BTreeSet<String>) -> Vec<usize> {
        self.rows
            .iter()
            .enumerate()
            .filter(|(_, r)| r.ids.iter().any(|id| discovered.contains(id)))
            .map(|(i, _)| i)
            .collect()
    }
}

/// Percentage-weighted agreement: the summed percentage of rows whose ids
/// intersect `discovered`, normalized by the summed percentage of all
/// rows. Returns a fraction in [0, 1].
pub fn match_rate(
    table: &HumanMechanicTable,
    discovered: &BTreeSet<String>,
) -> Result<f64, DiscoveryError> {
    let total: f64 = table.rows.iter().map(|r| r.percentage).sum();
    if total <= 0.0 {
        return Err(DiscoveryError::DegenerateTable);
    }
    let matched: f64 = table
        .matched_rows(discovered)
        .into_iter()
        .map(|i| table.rows[i].percentage)
        .sum();
    Ok(matched / total)
}

/// Schema-versioned critical-path document written by the discovery
/// pipeline.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CriticalPathDoc {
    #[serde(rename = "schemaVersion")]
    pub schema_version: u32,
    pub game: String,
    pub method: DiscoveryMethod,
    pub mechanics: Vec<String>,
    #[serde(rename = "terminalId")]
    pub terminal_id: Option<String>,
    /// Earliest frames for mechanics annotated by the selected trace.
    pub frames: BTreeMap<String, u32>,
}

impl CriticalPathDoc {
    pub fn new(game: &str, path: &CriticalPath, annotated: Option<&MechanicGraph>) -> Self {
        let mut frames = BTreeMap::new();
        if let Some(graph) = annotated {
            for id in &path.mechanics {
                if let Some(idx) = graph.node_index(id) {
                    if let Some(f) = graph.nodes[idx].frame {
                        frames.insert(id.clone(), f);
                    }
                }
            }
        }
        Self {
            schema_version: 1,
            game: game.to_owned(),
            method: path.method,
            mechanics: path.mechanics.clone(),
            terminal_id: path.terminal_id.clone(),
            frames,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("critical path serializes")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}
