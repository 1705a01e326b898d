//! Fixture-level parsing checks: every bundled game parses, validates
//! cleanly, round-trips through canonical text, and matches the expected
//! structure.

use critmech::harness::fixtures;
use critmech::vgdl::{canonical_text, parse_game, parse_level, validate, SpriteClass};

#[test]
fn all_fixtures_parse_and_validate_cleanly() {
    for game in fixtures::GAMES {
        let desc = parse_game(game.description)
            .unwrap_or_else(|e| panic!("{} failed to parse: {e}", game.name));
        let diags = validate(&desc);
        assert!(
            diags.is_empty(),
            "{} has diagnostics: {:?}",
            game.name,
            diags.iter().map(|d| d.to_string()).collect::<Vec<_>>()
        );
    }
}

#[test]
fn all_fixture_levels_parse() {
    for game in fixtures::GAMES {
        let desc = parse_game(game.description).unwrap();
        for level in game.levels {
            parse_level(level.source, &desc)
                .unwrap_or_else(|e| panic!("{}/{} failed: {e}", game.name, level.name));
        }
    }
}

#[test]
fn fixtures_round_trip_through_canonical_text() {
    for game in fixtures::GAMES {
        let desc = parse_game(game.description).unwrap();
        let text = canonical_text(&desc);
        let reparsed = parse_game(&text)
            .unwrap_or_else(|e| panic!("{} canonical text failed to reparse: {e}", game.name));
        assert_eq!(desc, reparsed, "{} canonical round trip", game.name);
    }
}

#[test]
fn zelda_sprite_hierarchy_matches_expectations() {
    let desc = parse_game(fixtures::ZELDA.description).unwrap();
    let nokey = desc.sprite("nokey").unwrap();
    let withkey = desc.sprite("withkey").unwrap();
    assert_eq!(nokey.parent.as_deref(), Some("avatar"));
    assert_eq!(withkey.parent.as_deref(), Some("avatar"));
    let bat = desc.sprite("bat").unwrap();
    let spider = desc.sprite("spider").unwrap();
    assert_eq!(bat.parent.as_deref(), Some("enemy"));
    assert_eq!(spider.parent.as_deref(), Some("enemy"));
    assert_eq!(desc.sprite("enemy").unwrap().class, SpriteClass::Abstract);
    assert_eq!(desc.avatar_root(), Some("avatar"));
}

#[test]
fn zelda_level_0_contains_key_and_goal() {
    let desc = parse_game(fixtures::ZELDA.description).unwrap();
    let grid = parse_level(fixtures::ZELDA.levels[0].source, &desc).unwrap();
    let count = |name: &str| {
        grid.cells
            .iter()
            .filter(|c| c.contains(&name.to_owned()))
            .count()
    };
    assert!(count("key") >= 1);
    assert!(count("goal") >= 1);
    assert_eq!(count("nokey"), 1);
}

#[test]
fn parsing_is_pure() {
    for game in fixtures::GAMES {
        let a = parse_game(game.description).unwrap();
        let b = parse_game(game.description).unwrap();
        assert_eq!(a, b);
    }
}
