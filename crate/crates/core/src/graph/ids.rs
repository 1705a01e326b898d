//! Canonical mechanic identifiers.
//!
//! Every mechanic — collision rule, USE capability, termination — has a
//! deterministic, human-readable id, stable across runs and platforms.
//! Engine events and graph nodes share these strings.

use crate::vgdl::{Effect, InteractionRule, TerminationKind, TerminationRule};
use std::fmt::Write;

/// Id for a collision-rule mechanic, e.g.
/// `collision(nokey,key)->transformTo(withkey,killSecond)+1`.
pub fn interaction_id(rule: &InteractionRule) -> String {
    let mut id = format!("collision({},{})->", rule.first, rule.second);
    match rule.effect {
        Effect::KillSprite => {
            let _ = write!(id, "killSprite({})", rule.first);
        }
        Effect::KillBoth => {
            let _ = write!(id, "killBoth({},{})", rule.first, rule.second);
        }
        Effect::TransformTo => {
            let target = rule.stype.as_deref().unwrap_or("?");
            if rule.kill_second {
                let _ = write!(id, "transformTo({target},killSecond)");
            } else {
                let _ = write!(id, "transformTo({target})");
            }
        }
        Effect::StepBack => {
            let _ = write!(id, "stepBack({})", rule.first);
        }
        Effect::TeleportToExit => {
            let _ = write!(id, "teleportToExit({})", rule.first);
        }
        Effect::BounceForward => {
            let _ = write!(id, "bounceForward({})", rule.first);
        }
    }
    if rule.score_change != 0 {
        let _ = write!(id, "{:+}", rule.score_change);
    }
    id
}

/// Id for a USE capability, e.g. `input(nokey)->spawn(sword)`.
pub fn use_id(shooter: &str, spawned: &str) -> String {
    format!("input({shooter})->spawn({spawned})")
}

/// Id for a termination mechanic, e.g. `spriteCounter(goal<=0)->win`
/// or `timeout(>=1000)->win`.
pub fn termination_id(rule: &TerminationRule) -> String {
    let outcome = if rule.win { "win" } else { "lose" };
    match rule.kind {
        TerminationKind::SpriteCounter => {
            format!("spriteCounter({}<={})->{outcome}", rule.stypes[0], rule.limit)
        }
        TerminationKind::SpriteCounterMore => {
            format!(
                "spriteCounterMore({}>={})->{outcome}",
                rule.stypes[0], rule.limit
            )
        }
        TerminationKind::MultiSpriteCounter => {
            format!(
                "multiSpriteCounter({}<={})->{outcome}",
                rule.stypes.join("+"),
                rule.limit
            )
        }
        TerminationKind::Timeout => format!("timeout(>={})->{outcome}", rule.limit),
    }
}
