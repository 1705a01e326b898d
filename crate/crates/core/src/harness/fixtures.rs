//! Bundled game fixtures: descriptions, levels, solution scripts, survey
//! tables, and per-level score bounds for normalization.

/// How a game's raw score is measured for result rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RawScore {
    /// The engine's game score.
    GameScore,
    /// Survival time in ticks (used where score depends on randomness).
    SurvivalTicks,
}

#[derive(Debug, Clone, Copy)]
pub struct LevelFixture {
    pub name: &'static str,
    pub source: &'static str,
    /// Minimum obtainable raw score for normalization.
    pub score_min: f64,
    /// Maximum obtainable raw score (minimal optimal score for games
    /// without an upper bound; normalization clamps).
    pub score_max: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct GameFixture {
    pub name: &'static str,
    pub description: &'static str,
    pub levels: &'static [LevelFixture],
    /// Solution scripts for level 0, replayed at seed 0 by the discovery
    /// pipeline.
    pub solutions: &'static [(&'static str, &'static str)],
    pub human_table: &'static str,
    pub raw_score: RawScore,
}

macro_rules! lvl {
    ($game:literal, $n:literal, $min:expr, $max:expr) => {
        LevelFixture {
            name: concat!("level_", $n),
            source: include_str!(concat!(
                "../../assets/",
                $game,
                "/level_",
                $n,
                ".lvl"
            )),
            score_min: $min,
            score_max: $max,
        }
    };
}

pub const ZELDA: GameFixture = GameFixture {
    name: "zelda",
    description: include_str!("../../assets/zelda/game.vgd"),
    levels: &[
        lvl!("zelda", 0, 0.0, 2.0),
        lvl!("zelda", 1, 0.0, 5.0),
        lvl!("zelda", 2, 0.0, 5.0),
        lvl!("zelda", 3, 0.0, 4.0),
        lvl!("zelda", 4, 0.0, 3.0),
    ],
    solutions: &[
        (
            "solution_0_main",
            include_str!("../../assets/zelda/solution_0_main.acts"),
        ),
        (
            "solution_0_alt",
            include_str!("../../assets/zelda/solution_0_alt.acts"),
        ),
    ],
    human_table: include_str!("../../assets/zelda/human_table.json"),
    raw_score: RawScore::GameScore,
};

pub const SOLARFOX: GameFixture = GameFixture {
    name: "solarfox",
    description: include_str!("../../assets/solarfox/game.vgd"),
    levels: &[
        lvl!("solarfox", 0, 0.0, 4.0),
        lvl!("solarfox", 1, 0.0, 4.0),
        lvl!("solarfox", 2, 0.0, 6.0),
        lvl!("solarfox", 3, 0.0, 6.0),
        lvl!("solarfox", 4, 0.0, 4.0),
    ],
    solutions: &[(
        "solution_0_main",
        include_str!("../../assets/solarfox/solution_0_main.acts"),
    )],
    human_table: include_str!("../../assets/solarfox/human_table.json"),
    raw_score: RawScore::GameScore,
};

pub const PLANTS: GameFixture = GameFixture {
    name: "plants",
    description: include_str!("../../assets/plants/game.vgd"),
    levels: &[
        lvl!("plants", 0, 0.0, 1000.0),
        lvl!("plants", 1, 0.0, 1000.0),
        lvl!("plants", 2, 0.0, 1000.0),
        lvl!("plants", 3, 0.0, 1000.0),
        lvl!("plants", 4, 0.0, 1000.0),
    ],
    solutions: &[(
        "solution_0_main",
        include_str!("../../assets/plants/solution_0_main.acts"),
    )],
    human_table: include_str!("../../assets/plants/human_table.json"),
    raw_score: RawScore::SurvivalTicks,
};

pub const REALPORTALS: GameFixture = GameFixture {
    name: "realportals",
    description: include_str!("../../assets/realportals/game.vgd"),
    levels: &[
        lvl!("realportals", 0, 0.0, 3.0),
        lvl!("realportals", 1, 0.0, 3.0),
        lvl!("realportals", 2, 0.0, 3.0),
        lvl!("realportals", 3, 0.0, 3.0),
        lvl!("realportals", 4, 0.0, 3.0),
    ],
    solutions: &[(
        "solution_0_main",
        include_str!("../../assets/realportals/solution_0_main.acts"),
    )],
    human_table: include_str!("../../assets/realportals/human_table.json"),
    raw_score: RawScore::GameScore,
};

pub const GAMES: [&GameFixture; 4] = [&ZELDA, &SOLARFOX, &PLANTS, &REALPORTALS];

pub fn fixture(name: &str) -> Option<&'static GameFixture> {
    GAMES.iter().copied().find(|g| g.name == name)
}
