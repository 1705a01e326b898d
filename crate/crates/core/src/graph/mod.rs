//! Interaction graphs.
//!
//! [`build_atomic_graph`] turns a description into object, condition and
//! action nodes wired by directed edges. [`build_mechanic_graph`] abstracts
//! each condition–action pair into a single mechanic node; mechanics that
//! share input/output objects are linked. [`annotate_frames`] stamps each
//! mechanic with the earliest tick it fired in a winning playtrace.
//!
//! All graphs are immutable values: a deterministic function of the
//! description (and, for annotation, of the trace).

pub mod ids;

use crate::engine::Playtrace;
use crate::vgdl::{Effect, GameDescription, SpriteClass, TerminationKind};
use serde::Serialize;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("TRACE_GRAPH_MISMATCH: trace event mechanic `{mechanic_id}` is not in the graph")]
    TraceGraphMismatch { mechanic_id: String },
    #[error("annotation requires a winning trace")]
    NonWinningTrace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AtomicNodeKind {
    Object,
    Condition,
    Action,
}

#[derive(Debug, Clone, Serialize)]
pub struct AtomicNode {
    pub kind: AtomicNodeKind,
    pub label: String,
}

/// Object/condition/action graph. Node and edge order is construction
/// order, which downstream breadth-first traversal relies on.
#[derive(Debug, Clone, Serialize)]
pub struct AtomicGraph {
    pub nodes: Vec<AtomicNode>,
    pub edges: Vec<(usize, usize)>,
    /// Out-neighbours per node, in edge-insertion order.
    pub adjacency: Vec<Vec<usize>>,
    /// Condition node index per mechanic, in mechanic order.
    pub condition_nodes: Vec<usize>,
    /// Action node index per mechanic, in mechanic order.
    pub action_nodes: Vec<usize>,
    /// Sprite names of the avatar hierarchy.
    pub avatar_names: BTreeSet<String>,
    #[serde(skip)]
    seeds: Vec<MechanicSeed>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ConditionKind {
    Collision,
    Input,
    SpriteCounter,
    SpriteCounterMore,
    MultiSpriteCounter,
    Timeout,
}

/// What a mechanic does when its condition fires.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum MechanicAction {
    Effect {
        effect: Effect,
        stype: Option<String>,
        kill_second: bool,
        score_change: i64,
    },
    Spawn {
        stype: String,
    },
    Win,
    Lose,
}

/// Structured source of one mechanic, kept alongside both graphs.
#[derive(Debug, Clone, Serialize)]
struct MechanicSeed {
    id: String,
    kind: ConditionKind,
    inputs: BTreeSet<String>,
    action: MechanicAction,
    outputs: BTreeSet<String>,
    /// Declared collision participants (first, second), when applicable.
    participants: Option<(String, String)>,
    player_centric: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct MechanicNode {
    pub id: String,
    #[serde(rename = "conditionKind")]
    pub condition_kind: ConditionKind,
    pub inputs: BTreeSet<String>,
    pub action: MechanicAction,
    pub outputs: BTreeSet<String>,
    /// Declared collision participants (first, second); `None` for
    /// non-collision mechanics.
    pub participants: Option<(String, String)>,
    /// Earliest tick this mechanic fired in the annotating trace.
    pub frame: Option<u32>,
    pub terminal: bool,
    #[serde(rename = "playerCentric")]
    pub player_centric: bool,
}

impl MechanicNode {
    pub fn is_win_terminal(&self) -> bool {
        matches!(self.action, MechanicAction::Win)
    }
}

/// One node per condition–action pair; edges where outputs meet inputs,
/// plus an edge from every player-centric mechanic to each timeout
/// terminal.
#[derive(Debug, Clone, Serialize)]
pub struct MechanicGraph {
    pub nodes: Vec<MechanicNode>,
    pub edges: Vec<(usize, usize)>,
}

impl MechanicGraph {
    pub fn node_index(&self, id: &str) -> Option<usize> {
        self.nodes.iter().position(|n| n.id == id)
    }

    pub fn neighbors(&self, idx: usize) -> impl Iterator<Item = usize> + '_ {
        self.edges
            .iter()
            .filter(move |(a, _)| *a == idx)
            .map(|(_, b)| *b)
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a, b))
    }
}

/// Names an object reference resolves to: itself when concrete, its
/// concrete subtree when `Abstract`.
fn object_refs<'a>(desc: &'a GameDescription, name: &'a str) -> Vec<&'a str> {
    match desc.sprite(name) {
        Some(s) if s.class == SpriteClass::Abstract => desc.concrete_subtree(name),
        _ => vec![name],
    }
}

fn seed_mechanics(desc: &GameDescription) -> Vec<MechanicSeed> {
    let avatar_names: BTreeSet<String> = desc
        .avatar_root()
        .map(|r| desc.subtree(r).into_iter().map(str::to_owned).collect())
        .unwrap_or_default();
    let is_player = |inputs: &BTreeSet<String>, kind: ConditionKind| {
        kind == ConditionKind::Input || inputs.iter().any(|i| avatar_names.contains(i))
    };
    let refs = |name: &str| -> BTreeSet<String> {
        object_refs(desc, name).into_iter().map(str::to_owned).collect()
    };

    let mut seeds = Vec::new();
    for rule in &desc.interactions {
        let mut inputs = refs(&rule.first);
        inputs.extend(refs(&rule.second));
        let mut outputs = BTreeSet::new();
        match rule.effect {
            Effect::KillSprite => outputs.extend(refs(&rule.first)),
            Effect::KillBoth => {
                outputs.extend(refs(&rule.first));
                outputs.extend(refs(&rule.second));
            }
            Effect::TransformTo => {
                outputs.extend(refs(rule.stype.as_deref().expect("parsed transformTo")));
                if rule.kill_second {
                    outputs.extend(refs(&rule.second));
                }
            }
            Effect::StepBack | Effect::TeleportToExit | Effect::BounceForward => {
                outputs.extend(refs(&rule.first));
            }
        }
        let player_centric = is_player(&inputs, ConditionKind::Collision);
        seeds.push(MechanicSeed {
            id: ids::interaction_id(rule),
            kind: ConditionKind::Collision,
            inputs,
            action: MechanicAction::Effect {
                effect: rule.effect,
                stype: rule.stype.clone(),
                kill_second: rule.kill_second,
                score_change: rule.score_change,
            },
            outputs,
            participants: Some((rule.first.clone(), rule.second.clone())),
            player_centric,
        });
    }
    for s in &desc.sprites {
        if s.class == SpriteClass::ShootAvatar {
            let spawned = s.params.stype.as_deref().expect("validated stype");
            let inputs: BTreeSet<String> = [s.name.clone()].into();
            seeds.push(MechanicSeed {
                id: ids::use_id(&s.name, spawned),
                kind: ConditionKind::Input,
                inputs,
                action: MechanicAction::Spawn {
                    stype: spawned.to_owned(),
                },
                outputs: refs(spawned),
                participants: None,
                player_centric: true,
            });
        }
    }
    for term in &desc.terminations {
        let kind = match term.kind {
            TerminationKind::SpriteCounter => ConditionKind::SpriteCounter,
            TerminationKind::SpriteCounterMore => ConditionKind::SpriteCounterMore,
            TerminationKind::MultiSpriteCounter => ConditionKind::MultiSpriteCounter,
            TerminationKind::Timeout => ConditionKind::Timeout,
        };
        let mut inputs = BTreeSet::new();
        if term.kind == TerminationKind::Timeout {
            // Survival is a player concern: the timer watches the avatar.
            inputs.insert("time".to_owned());
            if let Some(root) = desc.avatar_root() {
                inputs.extend(
                    desc.concrete_subtree(root)
                        .into_iter()
                        .map(str::to_owned),
                );
            }
        } else {
            for s in &term.stypes {
                inputs.extend(refs(s));
            }
        }
        let player_centric = is_player(&inputs, kind);
        seeds.push(MechanicSeed {
            id: ids::termination_id(term),
            kind,
            inputs,
            action: if term.win {
                MechanicAction::Win
            } else {
                MechanicAction::Lose
            },
            outputs: BTreeSet::new(),
            participants: None,
            player_centric,
        });
    }
    seeds
}

/// Build the atomic interaction graph: one object node per concrete sprite
/// (plus the pseudo-object `time`), one condition–action pair per
/// interaction rule, USE capability and termination rule.
pub fn build_atomic_graph(desc: &GameDescription) -> AtomicGraph {
    let seeds = seed_mechanics(desc);
    let mut nodes = Vec::new();
    let mut edges: Vec<(usize, usize)> = Vec::new();
    let mut object_idx: BTreeMap<String, usize> = BTreeMap::new();

    for s in &desc.sprites {
        if s.class != SpriteClass::Abstract {
            object_idx.insert(s.name.clone(), nodes.len());
            nodes.push(AtomicNode {
                kind: AtomicNodeKind::Object,
                label: s.name.clone(),
            });
        }
    }
    object_idx.insert("time".to_owned(), nodes.len());
    nodes.push(AtomicNode {
        kind: AtomicNodeKind::Object,
        label: "time".to_owned(),
    });

    let mut condition_nodes = Vec::new();
    let mut action_nodes = Vec::new();
    for seed in &seeds {
        let (cond_label, action_label) = split_id(&seed.id);
        let cond = nodes.len();
        nodes.push(AtomicNode {
            kind: AtomicNodeKind::Condition,
            label: cond_label.to_owned(),
        });
        let action = nodes.len();
        nodes.push(AtomicNode {
            kind: AtomicNodeKind::Action,
            label: action_label.to_owned(),
        });
        // Inputs and outputs are BTreeSets, so edge order per node is
        // name order; overall construction order is mechanic order.
        for input in &seed.inputs {
            edges.push((object_idx[input], cond));
        }
        edges.push((cond, action));
        for output in &seed.outputs {
            edges.push((action, object_idx[output]));
        }
        condition_nodes.push(cond);
        action_nodes.push(action);
    }

    let mut adjacency = vec![Vec::new(); nodes.len()];
    for &(a, b) in &edges {
        adjacency[a].push(b);
    }
    let avatar_names = desc
        .avatar_root()
        .map(|r| desc.subtree(r).into_iter().map(str::to_owned).collect())
        .unwrap_or_default();
    AtomicGraph {
        nodes,
        edges,
        adjacency,
        condition_nodes,
        action_nodes,
        avatar_names,
        seeds,
    }
}

fn split_id(id: &str) -> (&str, &str) {
    id.split_once("->").unwrap_or((id, ""))
}

impl AtomicGraph {
    pub fn mechanic_count(&self) -> usize {
        self.seeds.len()
    }

    pub fn mechanic_id(&self, idx: usize) -> &str {
        &self.seeds[idx].id
    }

    /// Mechanic indices whose condition is player-driven: an avatar
    /// object among its inputs, or an input (USE) condition.
    pub fn player_driven_mechanics(&self) -> Vec<usize> {
        self.seeds
            .iter()
            .enumerate()
            .filter(|(_, s)| {
                s.kind == ConditionKind::Input
                    || s.inputs.iter().any(|i| self.avatar_names.contains(i))
            })
            .map(|(i, _)| i)
            .collect()
    }

    /// Action node indices that represent a win.
    pub fn win_action_nodes(&self) -> Vec<usize> {
        self.seeds
            .iter()
            .enumerate()
            .filter(|(_, s)| matches!(s.action, MechanicAction::Win))
            .map(|(i, _)| self.action_nodes[i])
            .collect()
    }

    /// Index of the first win-termination mechanic, if any.
    pub fn first_win_termination(&self) -> Option<usize> {
        self.seeds
            .iter()
            .position(|s| matches!(s.action, MechanicAction::Win) && s.kind != ConditionKind::Input)
    }
}

/// Abstract the atomic graph into one node per condition–action pair.
pub fn build_mechanic_graph(atomic: &AtomicGraph) -> MechanicGraph {
    let nodes: Vec<MechanicNode> = atomic
        .seeds
        .iter()
        .map(|s| MechanicNode {
            id: s.id.clone(),
            condition_kind: s.kind,
            inputs: s.inputs.clone(),
            action: s.action.clone(),
            outputs: s.outputs.clone(),
            participants: s.participants.clone(),
            frame: None,
            terminal: matches!(s.action, MechanicAction::Win | MechanicAction::Lose),
            player_centric: s.player_centric,
        })
        .collect();

    let mut edges = Vec::new();
    for (a, na) in nodes.iter().enumerate() {
        for (b, nb) in nodes.iter().enumerate() {
            if a == b {
                continue;
            }
            let shared_io = na.outputs.intersection(&nb.inputs).next().is_some();
            let timeout_rule = na.player_centric
                && nb.terminal
                && nb.condition_kind == ConditionKind::Timeout;
            if shared_io || timeout_rule {
                edges.push((a, b));
            }
        }
    }
    MechanicGraph { nodes, edges }
}

/// Stamp each mechanic with the earliest tick it fired in `trace`,
/// returning an annotated copy. Mechanics that never fired keep
/// `frame = None`. The trace must be winning and every event id must
/// resolve in the graph.
pub fn annotate_frames(
    graph: &MechanicGraph,
    trace: &Playtrace,
) -> Result<MechanicGraph, GraphError> {
    if trace.outcome != crate::engine::Outcome::Win {
        return Err(GraphError::NonWinningTrace);
    }
    let mut out = graph.clone();
    for event in &trace.events {
        let idx = out.node_index(&event.mechanic_id).ok_or_else(|| {
            GraphError::TraceGraphMismatch {
                mechanic_id: event.mechanic_id.clone(),
            }
        })?;
        let frame = out.nodes[idx].frame.get_or_insert(event.tick);
        *frame = (*frame).min(event.tick);
    }
    Ok(out)
}

/// DOT rendering of a mechanic graph. Terminal nodes are double-circled,
/// player-centric nodes are bold, and frames appear in labels when
/// annotated.
pub fn export_dot(graph: &MechanicGraph) -> String {
    if graph.nodes.is_empty() {
        return String::from("digraph {}\n");
    }
    let mut out = String::from("digraph {\n");
    out.push_str("    rankdir=LR;\n");
    for (i, n) in graph.nodes.iter().enumerate() {
        let mut attrs = vec![format!("label=\"{}\"", dot_label(n))];
        if n.terminal {
            attrs.push("shape=doublecircle".to_owned());
        } else {
            attrs.push("shape=box".to_owned());
        }
        if n.player_centric {
            attrs.push("style=bold".to_owned());
        }
        out.push_str(&format!("    n{i} [{}];\n", attrs.join(", ")));
    }
    for (a, b) in &graph.edges {
        out.push_str(&format!("    n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

fn dot_label(node: &MechanicNode) -> String {
    match node.frame {
        Some(f) => format!("{}\\nframe={f}", node.id),
        None => node.id.clone(),
    }
}

/// DOT rendering of an atomic graph: objects as ellipses, conditions as
/// diamonds, actions as boxes.
pub fn export_atomic_dot(graph: &AtomicGraph) -> String {
    if graph.nodes.is_empty() {
        return String::from("digraph {}\n");
    }
    let mut out = String::from("digraph {\n");
    out.push_str("    rankdir=LR;\n");
    for (i, n) in graph.nodes.iter().enumerate() {
        let shape = match n.kind {
            AtomicNodeKind::Object => "ellipse",
            AtomicNodeKind::Condition => "diamond",
            AtomicNodeKind::Action => "box",
        };
        out.push_str(&format!(
            "    n{i} [label=\"{}\", shape={shape}];\n",
            n.label
        ));
    }
    for (a, b) in &graph.edges {
        out.push_str(&format!("    n{a} -> n{b};\n"));
    }
    out.push_str("}\n");
    out
}

/// JSON export mirroring the mechanic-node fields.
pub fn export_json(graph: &MechanicGraph) -> String {
    #[derive(Serialize)]
    struct Doc<'a> {
        #[serde(rename = "schemaVersion")]
        schema_version: u32,
        nodes: &'a [MechanicNode],
        edges: Vec<(&'a str, &'a str)>,
    }
    let doc = Doc {
        schema_version: 1,
        nodes: &graph.nodes,
        edges: graph
            .edges
            .iter()
            .map(|&(a, b)| (graph.nodes[a].id.as_str(), graph.nodes[b].id.as_str()))
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("graph serializes")
}
