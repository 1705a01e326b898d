//! Semantic checks over a parsed description.
//!
//! [`validate`] never fails; it returns a list of diagnostics, empty when
//! the description is clean. The engine requires a clean description.

use super::{GameDescription, SpriteClass};
use serde::Serialize;

/// Stable machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum DiagnosticCode {
    /// No termination rule with `win=True`.
    NoWinCondition,
    /// A class-required parameter is absent.
    MissingParam,
    /// A parameter value is out of range.
    BadParamValue,
    /// No avatar-classed sprite.
    NoAvatar,
    /// More than one independent avatar subtree.
    MultipleAvatarRoots,
    /// The level mapping instantiates an `Abstract` sprite.
    AbstractInMapping,
    /// A spawn or transform target is an `Abstract` sprite.
    AbstractInstantiation,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::NoWinCondition => "NO_WIN_CONDITION",
            DiagnosticCode::MissingParam => "MISSING_PARAM",
            DiagnosticCode::BadParamValue => "BAD_PARAM_VALUE",
            DiagnosticCode::NoAvatar => "NO_AVATAR",
            DiagnosticCode::MultipleAvatarRoots => "MULTIPLE_AVATAR_ROOTS",
            DiagnosticCode::AbstractInMapping => "ABSTRACT_IN_MAPPING",
            DiagnosticCode::AbstractInstantiation => "ABSTRACT_INSTANTIATION",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
}

impl std::fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {}", self.code.as_str(), self.message)
    }
}

/// Cross-reference checks beyond what parsing enforces. Returns an empty
/// list iff the description is ready for simulation.
pub fn validate(desc: &GameDescription) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut push = |code: DiagnosticCode, message: String| out.push(Diagnostic { code, message });

    for s in &desc.sprites {
        let missing = |param: &str| {
            format!(
                "sprite `{}` of class {} requires {param}",
                s.name,
                s.class.keyword()
            )
        };
        match s.class {
            SpriteClass::Missile => {
                if s.params.orientation.is_none() {
                    push(DiagnosticCode::MissingParam, missing("orientation"));
                }
            }
            SpriteClass::Bomber => {
                if s.params.orientation.is_none() {
                    push(DiagnosticCode::MissingParam, missing("orientation"));
                }
                if s.params.stype.is_none() {
                    push(DiagnosticCode::MissingParam, missing("stype"));
                }
            }
            SpriteClass::SpawnPoint | SpriteClass::ShootAvatar => {
                if s.params.stype.is_none() {
                    push(DiagnosticCode::MissingParam, missing("stype"));
                }
            }
            SpriteClass::Flicker => {
                if s.params.limit.is_none() {
                    push(DiagnosticCode::MissingParam, missing("limit"));
                }
            }
            SpriteClass::Portal if s.params.exit_name.is_none() => {
                push(DiagnosticCode::MissingParam, missing("exitName"));
            }
            _ => {}
        }
        if let Some(p) = s.params.prob {
            if !(0.0..=1.0).contains(&p) {
                push(
                    DiagnosticCode::BadParamValue,
                    format!("sprite `{}` has prob={p}, expected [0,1]", s.name),
                );
            }
        }
        if s.params.speed_period == Some(0) {
            push(
                DiagnosticCode::BadParamValue,
                format!("sprite `{}` has speedPeriod=0, expected >= 1", s.name),
            );
        }
        if let Some(t) = &s.params.stype {
            if is_abstract(desc, t) {
                push(
                    DiagnosticCode::AbstractInstantiation,
                    format!("sprite `{}` spawns abstract sprite `{t}`", s.name),
                );
            }
        }
    }

    let avatar_roots: Vec<&str> = desc
        .sprites
        .iter()
        .filter(|s| s.class.is_avatar())
        .filter(|s| {
            let mut cur = s.parent.as_deref();
            while let Some(p) = cur {
                match desc.sprite(p) {
                    Some(d) if d.class.is_avatar() => return false,
                    Some(d) => cur = d.parent.as_deref(),
                    None => break,
                }
            }
            true
        })
        .map(|s| s.name.as_str())
        .collect();
    match avatar_roots.len() {
        0 => push(
            DiagnosticCode::NoAvatar,
            "no avatar-classed sprite declared".into(),
        ),
        1 => {}
        _ => push(
            DiagnosticCode::MultipleAvatarRoots,
            format!("multiple avatar subtrees: {}", avatar_roots.join(", ")),
        ),
    }

    if !desc.terminations.iter().any(|t| t.win) {
        push(
            DiagnosticCode::NoWinCondition,
            "no termination rule with win=True".into(),
        );
    }

    for r in &desc.interactions {
        if let Some(t) = &r.stype {
            if is_abstract(desc, t) {
                push(
                    DiagnosticCode::AbstractInstantiation,
                    format!(
                        "rule `{} {}` transforms into abstract sprite `{t}`",
                        r.first, r.second
                    ),
                );
            }
        }
        if r.effect == super::Effect::TeleportToExit {
            for name in desc.concrete_subtree(&r.second) {
                let has_exit = desc
                    .sprite(name)
                    .is_some_and(|s| s.params.exit_name.is_some());
                if !has_exit {
                    push(
                        DiagnosticCode::MissingParam,
                        format!(
                            "teleportToExit rule `{} {}` requires exitName on `{name}`",
                            r.first, r.second
                        ),
                    );
                }
            }
        }
        for name in [&r.first, &r.second] {
            if is_abstract(desc, name) && desc.concrete_subtree(name).is_empty() {
                push(
                    DiagnosticCode::BadParamValue,
                    format!("rule references `{name}`, which has no concrete subtypes"),
                );
            }
        }
    }

    for t in &desc.terminations {
        for name in &t.stypes {
            if is_abstract(desc, name) && desc.concrete_subtree(name).is_empty() {
                push(
                    DiagnosticCode::BadParamValue,
                    format!("termination counts `{name}`, which has no concrete subtypes"),
                );
            }
        }
    }

    for (ch, names) in &desc.level_mapping {
        for n in names {
            if is_abstract(desc, n) {
                push(
                    DiagnosticCode::AbstractInMapping,
                    format!("mapping `{ch}` instantiates abstract sprite `{n}`"),
                );
            }
        }
    }

    out
}

fn is_abstract(desc: &GameDescription, name: &str) -> bool {
    desc.sprite(name)
        .is_some_and(|s| s.class == SpriteClass::Abstract)
}
