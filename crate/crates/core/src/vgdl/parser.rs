//! Line-oriented parser for the description grammar and level grids.

use super::{
    Direction, Effect, GameDescription, InteractionRule, LevelGrid, SpriteClass, SpriteDef,
    SpriteParams, TerminationKind, TerminationRule, VgdlError,
};

/// Parse a game-description source into a [`GameDescription`].
///
/// Structural and reference errors (syntax, unknown keywords, undeclared
/// sprites, duplicates, parent cycles) are reported here; semantic checks
/// such as required class parameters live in [`super::validate`].
pub fn parse_game(text: &str) -> Result<GameDescription, VgdlError> {
    let mut desc = GameDescription {
        sprites: Vec::new(),
        interactions: Vec::new(),
        terminations: Vec::new(),
        level_mapping: Vec::new(),
    };
    let mut seen_blocks: Vec<&str> = Vec::new();
    let mut block: Option<&str> = None;
    // Stack of (indent, sprite name) for the sprite tree.
    let mut sprite_stack: Vec<(usize, String)> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim_end_matches('\r');
        let trimmed = line.trim_start_matches(' ');
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if line.contains('\t') {
            return Err(VgdlError::Syntax {
                line: line_no,
                col: line.find('\t').unwrap() + 1,
                msg: "tab characters are not allowed; indent with spaces".into(),
            });
        }
        let indent = line.len() - trimmed.len();
        let content = trimmed.trim_end();

        if indent == 0 {
            match content {
                "SpriteSet" | "InteractionSet" | "TerminationSet" | "LevelMapping" => {
                    if seen_blocks.contains(&content) {
                        return Err(VgdlError::Syntax {
                            line: line_no,
                            col: 1,
                            msg: format!("duplicate block `{content}`"),
                        });
                    }
                    let owned: &str = match content {
                        "SpriteSet" => "SpriteSet",
                        "InteractionSet" => "InteractionSet",
                        "TerminationSet" => "TerminationSet",
                        _ => "LevelMapping",
                    };
                    seen_blocks.push(owned);
                    block = Some(owned);
                    sprite_stack.clear();
                }
                other => {
                    return Err(VgdlError::Syntax {
                        line: line_no,
                        col: 1,
                        msg: format!(
                            "expected a block header (SpriteSet, InteractionSet, \
                             TerminationSet, LevelMapping), found `{other}`"
                        ),
                    });
                }
            }
            continue;
        }

        match block {
            Some("SpriteSet") => {
                parse_sprite_line(content, indent, line_no, &mut desc, &mut sprite_stack)?
            }
            Some("InteractionSet") => desc.interactions.push(parse_interaction_line(
                content, line_no,
            )?),
            Some("TerminationSet") => desc
                .terminations
                .push(parse_termination_line(content, line_no)?),
            Some("LevelMapping") => parse_mapping_line(content, line_no, &mut desc)?,
            _ => {
                return Err(VgdlError::Syntax {
                    line: line_no,
                    col: indent + 1,
                    msg: "indented line outside of any block".into(),
                });
            }
        }
    }

    for required in ["SpriteSet", "InteractionSet", "TerminationSet", "LevelMapping"] {
        if !seen_blocks.contains(&required) {
            return Err(VgdlError::Syntax {
                line: text.lines().count().max(1),
                col: 1,
                msg: format!("missing block `{required}`"),
            });
        }
    }

    check_references(&desc)?;
    check_parent_cycles(&desc)?;
    Ok(desc)
}

fn parse_sprite_line(
    content: &str,
    indent: usize,
    line: usize,
    desc: &mut GameDescription,
    stack: &mut Vec<(usize, String)>,
) -> Result<(), VgdlError> {
    let (name, rest) = split_arrow(content, line)?;
    let mut parts = rest.split_whitespace();
    let class_word = parts.next().ok_or_else(|| VgdlError::Syntax {
        line,
        col: 1,
        msg: format!("sprite `{name}` is missing a class"),
    })?;
    let class = parse_class(class_word, line)?;
    let mut params = SpriteParams::default();
    for kv in parts {
        let (key, value) = split_kv(kv, line)?;
        match key {
            "orientation" => params.orientation = Some(parse_direction(value, line)?),
            "speedPeriod" => params.speed_period = Some(parse_u32(value, line)?),
            "stype" => params.stype = Some(ident(value, line)?),
            "prob" => params.prob = Some(parse_prob(value, line)?),
            "limit" => params.limit = Some(parse_u32(value, line)?),
            "exitName" => params.exit_name = Some(ident(value, line)?),
            other => {
                return Err(VgdlError::UnknownKeyword {
                    line,
                    col: 1,
                    kind: "sprite parameter",
                    word: other.into(),
                });
            }
        }
    }

    if desc.sprites.iter().any(|s| s.name == name) {
        return Err(VgdlError::DuplicateSprite { line, name });
    }

    // Pop back to the nearest shallower entry; that entry is the parent.
    while stack.last().is_some_and(|(i, _)| *i >= indent) {
        stack.pop();
    }
    let parent = stack.last().map(|(_, n)| n.clone());
    stack.push((indent, name.clone()));

    desc.sprites.push(SpriteDef {
        name,
        parent,
        class,
        params,
    });
    Ok(())
}

fn parse_interaction_line(content: &str, line: usize) -> Result<InteractionRule, VgdlError> {
    let (lhs, rest) = split_on_arrow(content, line)?;
    let mut names = lhs.split_whitespace();
    let first = names.next().map(str::to_owned).ok_or(VgdlError::Syntax {
        line,
        col: 1,
        msg: "interaction needs two sprite names before `>`".into(),
    })?;
    let second = names.next().map(str::to_owned).ok_or(VgdlError::Syntax {
        line,
        col: 1,
        msg: "interaction needs two sprite names before `>`".into(),
    })?;
    if names.next().is_some() {
        return Err(VgdlError::Syntax {
            line,
            col: 1,
            msg: "interaction takes exactly two sprite names".into(),
        });
    }
    let mut parts = rest.split_whitespace();
    let effect_word = parts.next().ok_or(VgdlError::Syntax {
        line,
        col: 1,
        msg: "interaction is missing an effect".into(),
    })?;
    let effect = match effect_word {
        "killSprite" => Effect::KillSprite,
        "killBoth" => Effect::KillBoth,
        "transformTo" => Effect::TransformTo,
        "stepBack" => Effect::StepBack,
        "teleportToExit" => Effect::TeleportToExit,
        "bounceForward" => Effect::BounceForward,
        other => {
            return Err(VgdlError::UnknownKeyword {
                line,
                col: 1,
                kind: "effect",
                word: other.into(),
            });
        }
    };
    let mut rule = InteractionRule {
        first,
        second,
        effect,
        stype: None,
        kill_second: false,
        score_change: 0,
    };
    for kv in parts {
        let (key, value) = split_kv(kv, line)?;
        match key {
            "stype" => rule.stype = Some(ident(value, line)?),
            "killSecond" => rule.kill_second = parse_bool(value, line)?,
            "scoreChange" => {
                rule.score_change = value.parse().map_err(|_| VgdlError::Syntax {
                    line,
                    col: 1,
                    msg: format!("invalid scoreChange `{value}`"),
                })?;
            }
            other => {
                return Err(VgdlError::UnknownKeyword {
                    line,
                    col: 1,
                    kind: "interaction parameter",
                    word: other.into(),
                });
            }
        }
    }
    if rule.effect == Effect::TransformTo && rule.stype.is_none() {
        return Err(VgdlError::Syntax {
            line,
            col: 1,
            msg: "transformTo requires stype=<sprite>".into(),
        });
    }
    Ok(rule)
}

fn parse_termination_line(content: &str, line: usize) -> Result<TerminationRule, VgdlError> {
    let mut parts = content.split_whitespace();
    let kind_word = parts.next().unwrap();
    let kind = match kind_word {
        "SpriteCounter" => TerminationKind::SpriteCounter,
        "SpriteCounterMore" => TerminationKind::SpriteCounterMore,
        "MultiSpriteCounter" => TerminationKind::MultiSpriteCounter,
        "Timeout" => TerminationKind::Timeout,
        other => {
            return Err(VgdlError::UnknownKeyword {
                line,
                col: 1,
                kind: "termination",
                word: other.into(),
            });
        }
    };
    let mut stypes: Vec<(u32, String)> = Vec::new();
    let mut limit = None;
    let mut win = None;
    for kv in parts {
        let (key, value) = split_kv(kv, line)?;
        match key {
            "stype" => stypes.push((0, ident(value, line)?)),
            "limit" => limit = Some(parse_u32(value, line)?),
            "win" => win = Some(parse_bool(value, line)?),
            k if k.starts_with("stype") => {
                let n: u32 = k[5..].parse().map_err(|_| VgdlError::UnknownKeyword {
                    line,
                    col: 1,
                    kind: "termination parameter",
                    word: k.into(),
                })?;
                stypes.push((n, ident(value, line)?));
            }
            other => {
                return Err(VgdlError::UnknownKeyword {
                    line,
                    col: 1,
                    kind: "termination parameter",
                    word: other.into(),
                });
            }
        }
    }
    stypes.sort_by_key(|(n, _)| *n);
    let win = win.ok_or(VgdlError::Syntax {
        line,
        col: 1,
        msg: "termination requires win=True|False".into(),
    })?;
    let expected = match kind {
        TerminationKind::SpriteCounter | TerminationKind::SpriteCounterMore => Some(1),
        TerminationKind::MultiSpriteCounter => None, // >= 2
        TerminationKind::Timeout => Some(0),
    };
    match expected {
        Some(n) if stypes.len() != n => {
            return Err(VgdlError::Syntax {
                line,
                col: 1,
                msg: format!("{kind_word} takes exactly {n} stype parameter(s)"),
            });
        }
        None if stypes.len() < 2 => {
            return Err(VgdlError::Syntax {
                line,
                col: 1,
                msg: "MultiSpriteCounter takes at least stype1= and stype2=".into(),
            });
        }
        _ => {}
    }
    Ok(TerminationRule {
        kind,
        stypes: stypes.into_iter().map(|(_, s)| s).collect(),
        limit: limit.unwrap_or(0),
        win,
    })
}

fn parse_mapping_line(
    content: &str,
    line: usize,
    desc: &mut GameDescription,
) -> Result<(), VgdlError> {
    let (lhs, rest) = split_on_arrow(content, line)?;
    let lhs = lhs.trim();
    let mut chars = lhs.chars();
    let ch = chars.next().ok_or(VgdlError::Syntax {
        line,
        col: 1,
        msg: "level mapping needs a single character before `>`".into(),
    })?;
    if chars.next().is_some() {
        return Err(VgdlError::Syntax {
            line,
            col: 1,
            msg: format!("level mapping key `{lhs}` must be a single character"),
        });
    }
    if desc.level_mapping.iter().any(|(c, _)| *c == ch) {
        return Err(VgdlError::Syntax {
            line,
            col: 1,
            msg: format!("duplicate level mapping for `{ch}`"),
        });
    }
    let names: Vec<String> = rest.split_whitespace().map(str::to_owned).collect();
    desc.level_mapping.push((ch, names));
    Ok(())
}

/// Parse a level grid against a description's level mapping.
///
/// The grid must be rectangular, every character must be mapped, and
/// exactly one avatar-hierarchy sprite must be instantiated.
pub fn parse_level(text: &str, desc: &GameDescription) -> Result<LevelGrid, VgdlError> {
    let rows: Vec<&str> = text
        .lines()
        .map(|l| l.trim_end_matches('\r'))
        .filter(|l| !l.is_empty())
        .collect();
    if rows.is_empty() {
        return Err(VgdlError::EmptyLevel);
    }
    let width = rows[0].chars().count();
    let height = rows.len();
    let mut cells = Vec::with_capacity(width * height);
    let mut avatars = 0usize;
    for (row_idx, row) in rows.iter().enumerate() {
        let got = row.chars().count();
        if got != width {
            return Err(VgdlError::RaggedLevel {
                row: row_idx + 1,
                got,
                expected: width,
            });
        }
        for ch in row.chars() {
            let names = desc
                .mapping_for(ch)
                .ok_or(VgdlError::UnmappedChar {
                    line: row_idx + 1,
                    ch,
                })?
                .to_vec();
            avatars += names
                .iter()
                .filter(|n| desc.is_avatar_sprite(n))
                .count();
            cells.push(names);
        }
    }
    if avatars != 1 {
        return Err(VgdlError::AvatarCount { count: avatars });
    }
    Ok(LevelGrid {
        width,
        height,
        cells,
    })
}

fn check_references(desc: &GameDescription) -> Result<(), VgdlError> {
    let declared = |name: &str| desc.sprites.iter().any(|s| s.name == name);
    let check = |name: &str| -> Result<(), VgdlError> {
        if declared(name) {
            Ok(())
        } else {
            Err(VgdlError::UndeclaredSprite { name: name.into() })
        }
    };
    for s in &desc.sprites {
        if let Some(p) = &s.parent {
            check(p)?;
        }
        if let Some(t) = &s.params.stype {
            check(t)?;
        }
        if let Some(e) = &s.params.exit_name {
            check(e)?;
        }
    }
    for r in &desc.interactions {
        check(&r.first)?;
        check(&r.second)?;
        if let Some(t) = &r.stype {
            check(t)?;
        }
    }
    for t in &desc.terminations {
        for s in &t.stypes {
            check(s)?;
        }
    }
    for (_, names) in &desc.level_mapping {
        for n in names {
            check(n)?;
        }
    }
    Ok(())
}

#[cfg(test)]
pub(super) fn recheck_cycles_for_tests(desc: &GameDescription) -> Result<(), VgdlError> {
    check_parent_cycles(desc)
}

fn check_parent_cycles(desc: &GameDescription) -> Result<(), VgdlError> {
    for s in &desc.sprites {
        let mut seen = vec![s.name.as_str()];
        let mut cur = s.parent.as_deref();
        while let Some(p) = cur {
            if seen.contains(&p) {
                return Err(VgdlError::CyclicParent { name: p.into() });
            }
            seen.push(p);
            cur = desc.sprite(p).and_then(|d| d.parent.as_deref());
        }
    }
    Ok(())
}

fn split_arrow(content: &str, line: usize) -> Result<(String, &str), VgdlError> {
    let (lhs, rest) = split_on_arrow(content, line)?;
    Ok((ident(lhs.trim(), line)?, rest))
}

fn split_on_arrow(content: &str, line: usize) -> Result<(&str, &str), VgdlError> {
    content
        .split_once('>')
        .map(|(l, r)| (l.trim(), r.trim()))
        .ok_or(VgdlError::Syntax {
            line,
            col: 1,
            msg: "expected `>`".into(),
        })
}

fn split_kv(part: &str, line: usize) -> Result<(&str, &str), VgdlError> {
    part.split_once('=').ok_or(VgdlError::Syntax {
        line,
        col: 1,
        msg: format!("expected key=value, found `{part}`"),
    })
}

fn ident(word: &str, line: usize) -> Result<String, VgdlError> {
    let ok = !word.is_empty()
        && word.chars().next().unwrap().is_ascii_alphabetic()
        && word
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || c == '_');
    if ok {
        Ok(word.to_owned())
    } else {
        Err(VgdlError::Syntax {
            line,
            col: 1,
            msg: format!("invalid identifier `{word}`"),
        })
    }
}

fn parse_class(word: &str, line: usize) -> Result<SpriteClass, VgdlError> {
    Ok(match word {
        "Immovable" => SpriteClass::Immovable,
        "Passive" => SpriteClass::Passive,
        "Missile" => SpriteClass::Missile,
        "RandomNPC" => SpriteClass::RandomNPC,
        "Bomber" => SpriteClass::Bomber,
        "SpawnPoint" => SpriteClass::SpawnPoint,
        "Flicker" => SpriteClass::Flicker,
        "Portal" => SpriteClass::Portal,
        "MovingAvatar" => SpriteClass::MovingAvatar,
        "ShootAvatar" => SpriteClass::ShootAvatar,
        "OngoingAvatar" => SpriteClass::OngoingAvatar,
        "Abstract" => SpriteClass::Abstract,
        other => {
            return Err(VgdlError::UnknownKeyword {
                line,
                col: 1,
                kind: "class",
                word: other.into(),
            });
        }
    })
}

fn parse_direction(word: &str, line: usize) -> Result<Direction, VgdlError> {
    Ok(match word {
        "UP" => Direction::Up,
        "DOWN" => Direction::Down,
        "LEFT" => Direction::Left,
        "RIGHT" => Direction::Right,
        other => {
            return Err(VgdlError::UnknownKeyword {
                line,
                col: 1,
                kind: "direction",
                word: other.into(),
            });
        }
    })
}

fn parse_u32(word: &str, line: usize) -> Result<u32, VgdlError> {
    word.parse().map_err(|_| VgdlError::Syntax {
        line,
        col: 1,
        msg: format!("invalid integer `{word}`"),
    })
}

fn parse_prob(word: &str, line: usize) -> Result<f64, VgdlError> {
    word.parse().map_err(|_| VgdlError::Syntax {
        line,
        col: 1,
        msg: format!("invalid probability `{word}`"),
    })
}

fn parse_bool(word: &str, line: usize) -> Result<bool, VgdlError> {
    match word {
        "True" => Ok(true),
        "False" => Ok(false),
        other => Err(VgdlError::Syntax {
            line,
            col: 1,
            msg: format!("expected True or False, found `{other}`"),
        }),
    }
}
