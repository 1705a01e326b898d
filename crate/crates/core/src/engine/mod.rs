//! Deterministic forward model.
//!
//! A [`GameState`] advances one tick per [`GameState::step`] call. The
//! update order within a tick is fixed:
//!
//! 1. the avatar acts (moves, or spawns via USE),
//! 2. non-avatar sprites act in creation order,
//! 3. co-located sprite pairs are matched against interaction rules in
//!    description order,
//! 4. a USE spawn logs its input-mechanic event,
//! 5. termination rules are checked in description order; the first
//!    satisfied rule ends the game.
//!
//! All randomness is a pure function of (seed, tick, sprite id), so
//! `(description, level, seed, actions)` fully determines a playthrough.

pub mod rng;
mod trace;

pub use trace::{parse_actions, replay, GameEvent, Playtrace, PlaytraceMeta};

use crate::graph::ids;
use crate::vgdl::{Direction, Effect, GameDescription, LevelGrid, SpriteClass, TerminationKind};
use serde::{Deserialize, Serialize};
use std::sync::Arc;

/// Maximum sprite kinds per game; subtree membership is kept in u64 masks.
pub const MAX_SPRITE_KINDS: usize = 64;

const SALT_MOVE: u64 = 0x01;
const SALT_SPAWN: u64 = 0x02;

/// Agent-facing action. Ordering helpers use the token's lexicographic
/// order (DOWN < LEFT < NIL < RIGHT < UP < USE), which downstream
/// tie-breaking relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Action {
    #[serde(rename = "NIL")]
    Nil,
    #[serde(rename = "UP")]
    Up,
    #[serde(rename = "DOWN")]
    Down,
    #[serde(rename = "LEFT")]
    Left,
    #[serde(rename = "RIGHT")]
    Right,
    #[serde(rename = "USE")]
    Use,
}

impl Action {
    pub const ALL: [Action; 6] = [
        Action::Nil,
        Action::Up,
        Action::Down,
        Action::Left,
        Action::Right,
        Action::Use,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Action::Nil => "NIL",
            Action::Up => "UP",
            Action::Down => "DOWN",
            Action::Left => "LEFT",
            Action::Right => "RIGHT",
            Action::Use => "USE",
        }
    }

    /// Rank in token-lexicographic order.
    pub fn lex_rank(self) -> u8 {
        match self {
            Action::Down => 0,
            Action::Left => 1,
            Action::Nil => 2,
            Action::Right => 3,
            Action::Up => 4,
            Action::Use => 5,
        }
    }

    pub fn direction(self) -> Option<Direction> {
        match self {
            Action::Up => Some(Direction::Up),
            Action::Down => Some(Direction::Down),
            Action::Left => Some(Direction::Left),
            Action::Right => Some(Direction::Right),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Outcome {
    Ongoing,
    Win,
    Loss,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum EngineError {
    #[error("game declares {got} sprite kinds, the engine supports at most {max}")]
    TooManySpriteKinds { got: usize, max: usize },
    #[error("description has validation diagnostics; run validate() first")]
    InvalidDescription,
    #[error("INCOMPLETE_TRACE: action script ended at tick {tick} with the game still ongoing")]
    IncompleteTrace { tick: u32 },
    #[error("unknown action token `{token}` at line {line}")]
    BadActionToken { token: String, line: usize },
}

/// One live sprite. Ids are assigned in creation order and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpriteInstance {
    pub id: u32,
    /// Index into the compiled sprite table.
    pub stype: u8,
    pub x: u8,
    pub y: u8,
    pub orientation: Direction,
    /// Completed ticks since creation.
    pub age: u32,
}

#[derive(Debug, Clone)]
struct CompiledSprite {
    name: String,
    class: SpriteClass,
    orientation: Direction,
    speed_period: u32,
    prob: f64,
    limit: u32,
    stype: Option<u8>,
    exit: Option<u8>,
}

#[derive(Debug, Clone)]
struct CompiledRule {
    first_mask: u64,
    second_mask: u64,
    effect: Effect,
    stype: Option<u8>,
    kill_second: bool,
    score_change: i64,
    mechanic_id: String,
}

#[derive(Debug, Clone)]
struct CompiledTermination {
    kind: TerminationKind,
    count_mask: u64,
    limit: u32,
    win: bool,
    mechanic_id: String,
}

/// Preprocessed description: name indices, subtree bitmasks, mechanic ids.
/// Shared read-only by every state cloned from the same game.
#[derive(Debug)]
pub struct CompiledGame {
    pub desc: GameDescription,
    sprites: Vec<CompiledSprite>,
    rules: Vec<CompiledRule>,
    terminations: Vec<CompiledTermination>,
    /// USE mechanic id per sprite index (ShootAvatar only).
    use_ids: Vec<Option<String>>,
    avatar_mask: u64,
    width: u8,
    height: u8,
    /// Sprite indices to instantiate per cell, row-major.
    init_cells: Vec<Vec<u8>>,
}

impl CompiledGame {
    /// Compile a validated description and level. The description must
    /// have no [`crate::vgdl::validate`] diagnostics.
    pub fn compile(desc: &GameDescription, level: &LevelGrid) -> Result<Arc<Self>, EngineError> {
        if !crate::vgdl::validate(desc).is_empty() {
            return Err(EngineError::InvalidDescription);
        }
        if desc.sprites.len() > MAX_SPRITE_KINDS {
            return Err(EngineError::TooManySpriteKinds {
                got: desc.sprites.len(),
                max: MAX_SPRITE_KINDS,
            });
        }
        let index_of = |name: &str| desc.sprite_index(name).expect("validated reference") as u8;
        let subtree_mask = |root: &str| -> u64 {
            desc.subtree(root)
                .iter()
                .map(|n| 1u64 << index_of(n))
                .fold(0, |a, b| a | b)
        };

        let sprites = desc
            .sprites
            .iter()
            .map(|s| CompiledSprite {
                name: s.name.clone(),
                class: s.class,
                orientation: s.params.orientation.unwrap_or(Direction::Up),
                speed_period: s.params.speed_period.unwrap_or(1).max(1),
                prob: s.params.prob.unwrap_or(1.0),
                limit: s.params.limit.unwrap_or(0),
                stype: s.params.stype.as_deref().map(index_of),
                exit: s.params.exit_name.as_deref().map(index_of),
            })
            .collect();

        let rules = desc
            .interactions
            .iter()
            .map(|r| CompiledRule {
                first_mask: subtree_mask(&r.first),
                second_mask: subtree_mask(&r.second),
                effect: r.effect,
                stype: r.stype.as_deref().map(index_of),
                kill_second: r.kill_second,
                score_change: r.score_change,
                mechanic_id: ids::interaction_id(r),
            })
            .collect();

        let terminations = desc
            .terminations
            .iter()
            .map(|t| CompiledTermination {
                kind: t.kind,
                count_mask: t
                    .stypes
                    .iter()
                    .map(|s| subtree_mask(s))
                    .fold(0, |a, b| a | b),
                limit: t.limit,
                win: t.win,
                mechanic_id: ids::termination_id(t),
            })
            .collect();

        let use_ids = desc
            .sprites
            .iter()
            .map(|s| {
                (s.class == SpriteClass::ShootAvatar)
                    .then(|| ids::use_id(&s.name, s.params.stype.as_deref().unwrap_or("?")))
            })
            .collect();

        let avatar_mask = subtree_mask(desc.avatar_root().expect("validated avatar"));

        let init_cells = level
            .cells
            .iter()
            .map(|names| names.iter().map(|n| index_of(n)).collect())
            .collect();

        Ok(Arc::new(Self {
            desc: desc.clone(),
            sprites,
            rules,
            terminations,
            use_ids,
            avatar_mask,
            width: level.width as u8,
            height: level.height as u8,
            init_cells,
        }))
    }

    pub fn sprite_name(&self, stype: u8) -> &str {
        &self.sprites[stype as usize].name
    }

    pub fn width(&self) -> usize {
        self.width as usize
    }

    pub fn height(&self) -> usize {
        self.height as usize
    }
}

/// Full simulation state. Cloning yields an independent state; stepping a
/// clone never affects the original.
#[derive(Debug, Clone)]
pub struct GameState {
    pub tick: u32,
    pub score: i64,
    pub outcome: Outcome,
    /// Seed of the deterministic generator; part of the state so clones
    /// replay identically.
    pub rng_seed: u64,
    sprites: Vec<SpriteInstance>,
    next_id: u32,
    game: Arc<CompiledGame>,
}

/// Build the initial state: sprites are instantiated row-major, and within
/// a cell in mapping-list order; ids count up from zero in that order.
pub fn init(game: &Arc<CompiledGame>, seed: u64) -> GameState {
    let mut sprites = Vec::new();
    let mut next_id = 0u32;
    for (cell_idx, kinds) in game.init_cells.iter().enumerate() {
        let x = (cell_idx % game.width()) as u8;
        let y = (cell_idx / game.width()) as u8;
        for &stype in kinds {
            sprites.push(SpriteInstance {
                id: next_id,
                stype,
                x,
                y,
                orientation: game.sprites[stype as usize].orientation,
                age: 0,
            });
            next_id += 1;
        }
    }
    GameState {
        tick: 0,
        score: 0,
        outcome: Outcome::Ongoing,
        rng_seed: seed,
        sprites,
        next_id,
        game: game.clone(),
    }
}

impl GameState {
    pub fn game(&self) -> &Arc<CompiledGame> {
        &self.game
    }

    pub fn sprites(&self) -> &[SpriteInstance] {
        &self.sprites
    }

    /// The single avatar instance, if alive.
    pub fn avatar(&self) -> Option<&SpriteInstance> {
        self.sprites
            .iter()
            .find(|s| self.game.avatar_mask & (1 << s.stype) != 0)
    }

    pub fn count_in_mask(&self, mask: u64) -> usize {
        self.sprites
            .iter()
            .filter(|s| mask & (1 << s.stype) != 0)
            .count()
    }

    /// Count live instances of `name` or any of its subtypes.
    pub fn count_sprites(&self, name: &str) -> usize {
        let Some(_) = self.game.desc.sprite_index(name) else {
            return 0;
        };
        let mask = self
            .game
            .desc
            .subtree(name)
            .iter()
            .filter_map(|n| self.game.desc.sprite_index(n))
            .fold(0u64, |a, i| a | (1 << i));
        self.count_in_mask(mask)
    }

    /// Legal actions for the current avatar class.
    pub fn legal_actions(&self) -> Vec<Action> {
        let mut out = vec![
            Action::Nil,
            Action::Up,
            Action::Down,
            Action::Left,
            Action::Right,
        ];
        if let Some(av) = self.avatar() {
            if self.game.sprites[av.stype as usize].class == SpriteClass::ShootAvatar {
                out.push(Action::Use);
            }
        }
        out
    }

    /// Advance one tick. Panics if the game is already over; termination
    /// is absorbing and stepping past it is a caller bug.
    pub fn step(&mut self, action: Action) -> Vec<GameEvent> {
        assert!(
            self.outcome == Outcome::Ongoing,
            "step() called on a terminated state"
        );
        let game = Arc::clone(&self.game);
        let new_tick = self.tick + 1;
        let mut events = Vec::new();
        let pre_existing = self.sprites.len();
        // Positions at tick start, by pre-phase index; stepBack targets.
        let start_pos: Vec<(u8, u8)> = self.sprites.iter().map(|s| (s.x, s.y)).collect();
        let mut alive: Vec<bool> = vec![true; pre_existing];

        // Phase 1: avatar.
        let avatar_idx = self
            .sprites
            .iter()
            .position(|s| game.avatar_mask & (1 << s.stype) != 0);
        let mut use_spawn: Option<(u32, u32, String)> = None;
        if let Some(ai) = avatar_idx {
            let class = game.sprites[self.sprites[ai].stype as usize].class;
            match action {
                Action::Nil => {}
                Action::Use => {
                    if class == SpriteClass::ShootAvatar {
                        let stype = self.sprites[ai].stype;
                        let spawn_kind = game.sprites[stype as usize]
                            .stype
                            .expect("validated ShootAvatar stype");
                        let dir = self.sprites[ai].orientation;
                        let (dx, dy) = dir.delta();
                        let nx = self.sprites[ai].x as i32 + dx;
                        let ny = self.sprites[ai].y as i32 + dy;
                        if self.in_bounds(nx, ny) {
                            let spawned =
                                self.spawn(spawn_kind, nx as u8, ny as u8, Some(dir));
                            let use_mechanic = game.use_ids[stype as usize]
                                .clone()
                                .expect("ShootAvatar has a USE mechanic");
                            use_spawn = Some((self.sprites[ai].id, spawned, use_mechanic));
                        }
                    }
                }
                _ => {
                    let dir = action.direction().unwrap();
                    self.sprites[ai].orientation = dir;
                    if class != SpriteClass::OngoingAvatar {
                        self.try_move(ai, dir);
                    }
                }
            }
            if class == SpriteClass::OngoingAvatar {
                let dir = self.sprites[ai].orientation;
                self.try_move(ai, dir);
            }
        }

        // Phase 2: non-avatar sprites in creation order. Sprites created
        // during this step do not act until the next one.
        #[allow(clippy::needless_range_loop)] // indices stay valid across spawns
        for i in 0..pre_existing {
            if !alive[i] || Some(i) == avatar_idx {
                continue;
            }
            let stype = self.sprites[i].stype as usize;
            let cls = game.sprites[stype].class;
            let period = game.sprites[stype].speed_period;
            match cls {
                SpriteClass::Missile | SpriteClass::Bomber
                    if new_tick.is_multiple_of(period) =>
                {
                    let dir = self.sprites[i].orientation;
                    self.try_move(i, dir);
                }
                SpriteClass::RandomNPC if new_tick.is_multiple_of(period) => {
                    let legal: Vec<Direction> = Direction::ALL
                        .into_iter()
                        .filter(|d| {
                            let (dx, dy) = d.delta();
                            self.in_bounds(
                                self.sprites[i].x as i32 + dx,
                                self.sprites[i].y as i32 + dy,
                            )
                        })
                        .collect();
                    if !legal.is_empty() {
                        let r = rng::draw(
                            self.rng_seed,
                            u64::from(new_tick),
                            u64::from(self.sprites[i].id),
                            SALT_MOVE,
                        );
                        let dir = legal[(r % legal.len() as u64) as usize];
                        self.sprites[i].orientation = dir;
                        self.try_move(i, dir);
                    }
                }
                SpriteClass::Flicker if self.sprites[i].age >= game.sprites[stype].limit => {
                    alive[i] = false;
                }
                _ => {}
            }
            if matches!(cls, SpriteClass::Bomber | SpriteClass::SpawnPoint) && alive[i] {
                let u = rng::unit(rng::draw(
                    self.rng_seed,
                    u64::from(new_tick),
                    u64::from(self.sprites[i].id),
                    SALT_SPAWN,
                ));
                if u < game.sprites[stype].prob {
                    let kind = game.sprites[stype].stype.expect("validated stype");
                    let (x, y) = (self.sprites[i].x, self.sprites[i].y);
                    self.spawn(kind, x, y, None);
                }
            }
        }

        // Phase 3: interactions over the co-location snapshot, which
        // includes sprites spawned in phases 1-2 (a USE spawn collides on
        // its spawn tick). Pairs are ordered by (first id, second id);
        // effects apply immediately, and dead participants drop out of
        // later rules. Position changes made by an effect do not create
        // new pairs within the same tick.
        let phase3_count = self.sprites.len();
        alive.resize(phase3_count, true);
        let start_pos: Vec<(u8, u8)> = {
            let mut sp = start_pos;
            for s in &self.sprites[pre_existing..] {
                sp.push((s.x, s.y));
            }
            sp
        };
        let pairs = self.collision_pairs(phase3_count, &alive);
        for rule in &game.rules {
            for &(i, j) in &pairs {
                if !alive[i] || !alive[j] {
                    continue;
                }
                let si = self.sprites[i].stype;
                let sj = self.sprites[j].stype;
                if rule.first_mask & (1 << si) == 0 || rule.second_mask & (1 << sj) == 0 {
                    continue;
                }
                match rule.effect {
                    Effect::KillSprite => alive[i] = false,
                    Effect::KillBoth => {
                        alive[i] = false;
                        alive[j] = false;
                    }
                    Effect::TransformTo => {
                        let kind = rule.stype.expect("parser enforces transformTo stype");
                        let (x, y, dir) =
                            (self.sprites[i].x, self.sprites[i].y, self.sprites[i].orientation);
                        self.spawn(kind, x, y, Some(dir));
                        alive[i] = false;
                        if rule.kill_second {
                            alive[j] = false;
                        }
                    }
                    Effect::StepBack => {
                        let (x, y) = start_pos[i];
                        self.sprites[i].x = x;
                        self.sprites[i].y = y;
                    }
                    Effect::TeleportToExit => {
                        let exit_kind =
                            game.sprites[sj as usize].exit.expect("validated exitName");
                        // Lowest-id live exit; if none exists the rule
                        // does not fire.
                        let exit = self
                            .sprites
                            .iter()
                            .enumerate()
                            .filter(|(k, s)| {
                                s.stype == exit_kind && alive.get(*k).copied().unwrap_or(true)
                            })
                            .map(|(_, s)| (s.x, s.y))
                            .next();
                        match exit {
                            Some((x, y)) => {
                                self.sprites[i].x = x;
                                self.sprites[i].y = y;
                            }
                            None => continue,
                        }
                    }
                    Effect::BounceForward => {
                        let dir = self.sprites[j].orientation;
                        self.try_move(i, dir);
                    }
                }
                self.score += rule.score_change;
                events.push(GameEvent {
                    tick: new_tick,
                    mechanic_id: rule.mechanic_id.clone(),
                    participants: vec![self.sprites[i].id, self.sprites[j].id],
                    score_delta: rule.score_change,
                });
            }
        }

        // Phase 4: the USE spawn logs its input mechanic.
        if let Some((avatar_id, spawned_id, mechanic_id)) = use_spawn {
            events.push(GameEvent {
                tick: new_tick,
                mechanic_id,
                participants: vec![avatar_id, spawned_id],
                score_delta: 0,
            });
        }

        // Remove the dead before counting terminations.
        let mut keep = alive;
        keep.resize(self.sprites.len(), true);
        let mut it = keep.iter();
        self.sprites.retain(|_| *it.next().unwrap());

        // Phase 5: terminations in description order.
        if let Some(event) = self.check_terminations(new_tick) {
            events.push(event);
        }

        for s in &mut self.sprites {
            s.age += 1;
        }
        self.tick = new_tick;
        events
    }

    fn check_terminations(&mut self, at_tick: u32) -> Option<GameEvent> {
        let game = Arc::clone(&self.game);
        for term in &game.terminations {
            let fired = match term.kind {
                TerminationKind::SpriteCounter | TerminationKind::MultiSpriteCounter => {
                    self.count_in_mask(term.count_mask) <= term.limit as usize
                }
                TerminationKind::SpriteCounterMore => {
                    self.count_in_mask(term.count_mask) >= term.limit as usize
                }
                TerminationKind::Timeout => at_tick >= term.limit,
            };
            if fired {
                self.outcome = if term.win { Outcome::Win } else { Outcome::Loss };
                return Some(GameEvent {
                    tick: at_tick,
                    mechanic_id: term.mechanic_id.clone(),
                    participants: Vec::new(),
                    score_delta: 0,
                });
            }
        }
        None
    }

    /// Evaluate terminations once at tick 0, before any step. Degenerate
    /// games (a zero-limit timeout, a level already satisfying a counter)
    /// end immediately.
    pub fn resolve_initial(&mut self) -> Option<GameEvent> {
        if self.outcome != Outcome::Ongoing {
            return None;
        }
        self.check_terminations(0)
    }

    fn in_bounds(&self, x: i32, y: i32) -> bool {
        x >= 0 && y >= 0 && x < self.game.width() as i32 && y < self.game.height() as i32
    }

    /// Move one cell in `dir`; out-of-bounds moves are silently clamped.
    fn try_move(&mut self, idx: usize, dir: Direction) {
        let (dx, dy) = dir.delta();
        let nx = self.sprites[idx].x as i32 + dx;
        let ny = self.sprites[idx].y as i32 + dy;
        if self.in_bounds(nx, ny) {
            self.sprites[idx].x = nx as u8;
            self.sprites[idx].y = ny as u8;
        }
    }

    fn spawn(&mut self, stype: u8, x: u8, y: u8, orientation: Option<Direction>) -> u32 {
        let id = self.next_id;
        self.next_id += 1;
        self.sprites.push(SpriteInstance {
            id,
            stype,
            x,
            y,
            orientation: orientation.unwrap_or(self.game.sprites[stype as usize].orientation),
            age: 0,
        });
        id
    }

    /// Ordered co-located index pairs among sprites that existed at the
    /// start of phase 3, sorted by (id of first, id of second).
    fn collision_pairs(&self, limit: usize, alive: &[bool]) -> Vec<(usize, usize)> {
        let mut by_cell: Vec<(u16, usize)> = (0..limit)
            .filter(|&i| alive[i])
            .map(|i| {
                let s = &self.sprites[i];
                ((u16::from(s.y)) * u16::from(self.game.width) + u16::from(s.x), i)
            })
            .collect();
        by_cell.sort_unstable();
        let mut pairs = Vec::new();
        let mut start = 0;
        while start < by_cell.len() {
            let cell = by_cell[start].0;
            let mut end = start + 1;
            while end < by_cell.len() && by_cell[end].0 == cell {
                end += 1;
            }
            for a in start..end {
                for b in start..end {
                    if a != b {
                        pairs.push((by_cell[a].1, by_cell[b].1));
                    }
                }
            }
            start = end;
        }
        // Sprite ids increase with index, so index order is id order.
        pairs.sort_unstable();
        pairs
    }
}

/// Deep copy helper, mirroring the forward-model contract. `Clone` does
/// the same thing; this name makes call sites explicit.
pub fn clone_state(state: &GameState) -> GameState {
    state.clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::vgdl::{parse_game, parse_level};

    const ROOM: &str = "\
SpriteSet
    wall > Immovable
    avatar > MovingAvatar
InteractionSet
    avatar wall > stepBack
TerminationSet
    Timeout limit=100 win=True
LevelMapping
    . >
    w > wall
    A > avatar
";

    fn room_state(level: &str, seed: u64) -> GameState {
        let desc = parse_game(ROOM).unwrap();
        let grid = parse_level(level, &desc).unwrap();
        let game = CompiledGame::compile(&desc, &grid).unwrap();
        init(&game, seed)
    }

    #[test]
    fn avatar_moves_into_empty_cell_without_events() {
        let mut state = room_state("wwwww\nw...w\nw.A.w\nw...w\nwwwww", 1);
        let before = state.avatar().unwrap().id;
        let events = state.step(Action::Up);
        assert!(events.is_empty());
        let avatar = state.avatar().unwrap();
        assert_eq!(avatar.id, before);
        assert_eq!((avatar.x, avatar.y), (2, 1));
        assert_eq!(state.tick, 1);
    }

    #[test]
    fn grid_edge_clamps_silently() {
        let mut state = room_state("A..", 2);
        let events = state.step(Action::Up);
        assert!(events.is_empty());
        assert_eq!((state.avatar().unwrap().x, state.avatar().unwrap().y), (0, 0));
    }

    #[test]
    fn wall_bump_steps_back_with_event() {
        let mut state = room_state("wwwww\nwA..w\nwwwww", 3);
        let events = state.step(Action::Left);
        assert_eq!(events.len(), 1);
        assert_eq!(
            events[0].mechanic_id,
            "collision(avatar,wall)->stepBack(avatar)"
        );
        assert_eq!((state.avatar().unwrap().x, state.avatar().unwrap().y), (1, 1));
    }

    #[test]
    fn clone_is_independent() {
        let mut state = room_state("wwwww\nw.A.w\nwwwww", 4);
        let copy = clone_state(&state);
        state.step(Action::Right);
        assert_eq!(copy.tick, 0);
        assert_eq!(state.tick, 1);
    }

    #[test]
    fn clone_preserves_terminal_outcome() {
        let mut state = room_state("A", 5);
        for _ in 0..100 {
            if state.outcome != Outcome::Ongoing {
                break;
            }
            state.step(Action::Nil);
        }
        assert_eq!(state.outcome, Outcome::Win);
        let copy = clone_state(&state);
        assert_eq!(copy.outcome, Outcome::Win);
    }

    #[test]
    #[should_panic(expected = "terminated state")]
    fn stepping_terminated_state_panics() {
        let mut state = room_state("A", 6);
        for _ in 0..=100 {
            state.step(Action::Nil);
        }
    }

    #[test]
    fn action_lex_order_matches_tokens() {
        let mut tokens: Vec<&str> = Action::ALL.iter().map(|a| a.token()).collect();
        tokens.sort_unstable();
        let mut by_rank = Action::ALL;
        by_rank.sort_by_key(|a| a.lex_rank());
        let ranked: Vec<&str> = by_rank.iter().map(|a| a.token()).collect();
        assert_eq!(tokens, ranked);
    }
}
