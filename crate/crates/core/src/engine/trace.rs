//! Playtrace recording and deterministic replay.

use super::{Action, CompiledGame, EngineError, Outcome};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// One mechanic firing: an interaction-rule application, a USE spawn, or
/// a termination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GameEvent {
    pub tick: u32,
    #[serde(rename = "mechanicId")]
    pub mechanic_id: String,
    /// Sprite-instance ids involved; empty for terminations.
    pub participants: Vec<u32>,
    #[serde(rename = "scoreDelta")]
    pub score_delta: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaytraceMeta {
    pub game: String,
    pub level: String,
    pub seed: u64,
    #[serde(rename = "engineVersion")]
    pub engine_version: String,
}

/// Complete record of one finished playthrough. Replaying
/// `(game, level, seed, actions)` reproduces it byte for byte.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Playtrace {
    pub meta: PlaytraceMeta,
    pub actions: Vec<Action>,
    pub events: Vec<GameEvent>,
    pub outcome: Outcome,
    #[serde(rename = "finalTick")]
    pub final_tick: u32,
    #[serde(rename = "finalScore")]
    pub final_score: i64,
}

impl Playtrace {
    /// Distinct mechanic ids that fired, in first-occurrence order.
    pub fn unique_mechanics(&self) -> Vec<&str> {
        let mut seen = Vec::new();
        for e in &self.events {
            if !seen.contains(&e.mechanic_id.as_str()) {
                seen.push(e.mechanic_id.as_str());
            }
        }
        seen
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("playtrace serializes")
    }
}

/// Run an action script to completion and record the playtrace.
///
/// The script must reach a terminal state; running out of actions while
/// the game is still ongoing is an `INCOMPLETE_TRACE` error. Trailing
/// unused actions are dropped from the record.
pub fn replay(
    game: &Arc<CompiledGame>,
    game_name: &str,
    level_name: &str,
    seed: u64,
    actions: &[Action],
) -> Result<Playtrace, EngineError> {
    let mut state = super::init(game, seed);
    let mut events = Vec::new();
    let mut used = Vec::new();
    events.extend(state.resolve_initial());
    for &action in actions {
        if state.outcome != Outcome::Ongoing {
            break;
        }
        used.push(action);
        events.extend(state.step(action));
    }
    if state.outcome == Outcome::Ongoing {
        return Err(EngineError::IncompleteTrace { tick: state.tick });
    }
    Ok(Playtrace {
        meta: PlaytraceMeta {
            game: game_name.to_owned(),
            level: level_name.to_owned(),
            seed,
            engine_version: env!("CARGO_PKG_VERSION").to_owned(),
        },
        actions: used,
        events,
        outcome: state.outcome,
        final_tick: state.tick,
        final_score: state.score,
    })
}

/// Parse an action script: one token per line, `#` comments and blank
/// lines ignored.
pub fn parse_actions(text: &str) -> Result<Vec<Action>, EngineError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let action = Action::ALL
            .into_iter()
            .find(|a| a.token() == line)
            .ok_or_else(|| EngineError::BadActionToken {
                token: line.to_owned(),
                line: idx + 1,
            })?;
        out.push(action);
    }
    Ok(out)
}
