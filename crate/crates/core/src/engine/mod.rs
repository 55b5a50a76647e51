//! Game state and the effect of a single action.

mod turn;

pub use turn::{
    play_one_turn, replay_from, run_script, run_script_with_programs, validate_ordering,
    validate_program, LoggedEvent, OrderingViolation, ProgramViolation, Replay, ReplayError,
    ReplayErrorKind,
};

use alloc::vec::Vec;

use crate::board::BoardState;
use crate::geom::{Coord, Direction, Frame, Shift, SHIFTABLE_LINES};
use crate::notation::{Action, ActionStep, CharId, Verb};
use crate::tile::TileKind;

pub const MAX_CHARACTERS: usize = 6;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct RuleVariant {
    pub push_from_start_allowed: bool,
    pub push_from_control_allowed: bool,
    /// Test mutation: Mortal rooms also grant their entrant a shift, which
    /// still happens after the entrant dies.
    pub free_kill: bool,
}

impl RuleVariant {
    pub const DEFAULT: RuleVariant = RuleVariant {
        push_from_start_allowed: false,
        push_from_control_allowed: false,
        free_kill: false,
    };
    pub const PUSH_FROM_START: RuleVariant = RuleVariant {
        push_from_start_allowed: true,
        ..RuleVariant::DEFAULT
    };
    pub const FREE_KILL: RuleVariant = RuleVariant {
        free_kill: true,
        ..RuleVariant::DEFAULT
    };

    /// Whether entering a room of this kind comes with a shift.
    pub fn grants_shift(self, k: TileKind) -> bool {
        k.grants_shift() || (self.free_kill && k == TileKind::Mortal)
    }
}

/// How deaths affect the outcome.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Regime {
    /// The first death loses the game.
    AllSurvive,
    /// Up to `max_deaths` characters may die before the game is lost.
    Partial { max_deaths: u8 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DeathCause {
    Mortal,
    RedRoom,
    Trap,
    Acid,
    Flood,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MoveCause {
    Walk,
    Pushed {
        by: CharId,
    },
    Vortex,
    /// Carried along by a line shift.
    Carried,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Outcome {
    InProgress,
    Won {
        turn: u32,
        deaths: u8,
    },
    Lost {
        turn: u32,
        who: CharId,
        cause: DeathCause,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Event {
    /// `flipped` is false for a look, which leaves the tile face down.
    TileRevealed {
        at: Coord,
        kind: Option<TileKind>,
        flipped: bool,
    },
    CharacterMoved {
        who: CharId,
        from: Coord,
        to: Coord,
        cause: MoveCause,
    },
    LineShifted {
        shift: Shift,
        by: CharId,
    },
    Death {
        who: CharId,
        at: Coord,
        cause: DeathCause,
    },
    VictorySlide {
        shift: Shift,
    },
    TurnEnded {
        turn: u32,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum StepError {
    #[error("the game is over")]
    GameOver,
    #[error("no character {0}")]
    UnknownCharacter(CharId),
    #[error("character {0} is dead")]
    DeadCharacter(CharId),
    #[error("character {0} has no action left this turn")]
    NoActionsLeft(CharId),
    #[error("character {0} already used {1:?} this turn")]
    RepeatedVerb(CharId, Verb),
    #[error("{to} is not adjacent to {from}")]
    IllegalMove { from: Coord, to: Coord },
    #[error("{0} is not an adjacent face-down room")]
    IllegalLook(Coord),
    #[error("a character in a dark room cannot look")]
    LookFromDarkForbidden,
    #[error("character {0} is not in the pusher's room")]
    TargetNotPresent(CharId),
    #[error("pushing from the start room is not allowed")]
    PushFromStartForbidden,
    #[error("pushing from the control room is not allowed")]
    PushFromControlForbidden,
    #[error("central lines cannot be shifted")]
    CentralLineForbidden,
    #[error("{0} does not pass through the actor")]
    LineNotThroughActor(Shift),
    #[error("{0} was already shifted the other way this turn")]
    LineLockViolation(Shift),
    #[error("entering {0} requires a shift")]
    MissingRider(Coord),
    #[error("entering {0} grants no shift")]
    UnexpectedRider(Coord),
    #[error("the room at {0} is undecided")]
    UnresolvedTile(Coord),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CharacterState {
    pub id: CharId,
    /// `None` once the character has died.
    pub position: Option<Coord>,
    /// Set while the character sits in a trap it entered.
    pub trap_pending: bool,
    /// Turn at whose end the character drowns if still in the flooded room.
    pub flood_deadline: Option<u32>,
    pub actions_taken: u8,
    /// Bit set of verbs already used this turn.
    pub used: u8,
}

impl CharacterState {
    pub fn alive(&self) -> bool {
        self.position.is_some()
    }

    pub fn has_used(&self, v: Verb) -> bool {
        self.used & v.bit() != 0
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GameState {
    pub board: BoardState,
    pub characters: Vec<CharacterState>,
    /// Current turn, starting at 1.
    pub turn: u32,
    /// Index of the character who acts first this turn.
    pub first_player_offset: u8,
    /// Direction each shiftable line was moved in this turn.
    pub line_locks: [Option<Direction>; 8],
    pub outcome: Outcome,
    pub variant: RuleVariant,
    pub regime: Regime,
    pub deaths: u8,
    /// Living characters ordered by the time they entered their room.
    arrivals: Vec<CharId>,
}

impl GameState {
    /// # Panics
    ///
    /// Panics unless `1 <= n <= MAX_CHARACTERS`.
    pub fn new(board: BoardState, n: usize, variant: RuleVariant) -> GameState {
        assert!(
            (1..=MAX_CHARACTERS).contains(&n),
            "1 to {MAX_CHARACTERS} characters"
        );
        let characters = (0..n)
            .map(|i| CharacterState {
                id: CharId::from_slot(i),
                position: Some(Coord::ORIGIN),
                trap_pending: false,
                flood_deadline: None,
                actions_taken: 0,
                used: 0,
            })
            .collect();
        GameState {
            board,
            characters,
            turn: 1,
            first_player_offset: 0,
            line_locks: [None; 8],
            outcome: Outcome::InProgress,
            variant,
            regime: Regime::AllSurvive,
            deaths: 0,
            arrivals: (0..n).map(CharId::from_slot).collect(),
        }
    }

    pub fn with_regime(mut self, regime: Regime) -> GameState {
        self.regime = regime;
        self
    }

    pub fn n(&self) -> usize {
        self.characters.len()
    }

    pub fn character(&self, who: CharId) -> Option<&CharacterState> {
        self.characters.get(who.slot())
    }

    pub fn position(&self, who: CharId) -> Option<Coord> {
        self.character(who).and_then(|c| c.position)
    }

    pub fn living(&self) -> impl Iterator<Item = &CharacterState> {
        self.characters.iter().filter(|c| c.alive())
    }

    pub fn arrivals(&self) -> &[CharId] {
        &self.arrivals
    }

    pub fn is_over(&self) -> bool {
        self.outcome != Outcome::InProgress
    }

    /// Characters in the order they act this turn, dead ones included.
    pub fn seat_order(&self) -> impl Iterator<Item = CharId> + '_ {
        let n = self.n();
        let off = self.first_player_offset as usize;
        (0..n).map(move |i| CharId::from_slot((off + i) % n))
    }

    /// Places a character anywhere, as when setting up a position by hand.
    pub fn place(&mut self, who: CharId, at: Coord) {
        self.characters[who.slot()].position = Some(at);
        self.arrivals.retain(|&c| c != who);
        self.arrivals.push(who);
    }

    pub fn lock(&self, s: Shift) -> Option<Direction> {
        s.line().slot().and_then(|i| self.line_locks[i])
    }

    /// The whole position seen through a symmetry frame.
    pub fn transformed(&self, f: Frame) -> GameState {
        let mut g = self.clone();
        g.board = self.board.apply_frame(f);
        for c in &mut g.characters {
            c.position = c.position.map(|p| f.apply(p));
        }
        g.line_locks = [None; 8];
        for (i, d) in self.line_locks.iter().enumerate() {
            if let Some(d) = d {
                let line = f.apply_line(SHIFTABLE_LINES[i]);
                g.line_locks[line.slot().expect("frames keep lines off-centre")] =
                    Some(f.apply_dir(*d));
            }
        }
        g
    }

    /// Applies one step to a copy of the state.
    pub fn apply_step(&self, step: &ActionStep) -> Result<(GameState, Vec<Event>), StepError> {
        let mut g = self.clone();
        let mut ev = Vec::new();
        g.step_in_place(step, &mut ev)?;
        Ok((g, ev))
    }

    /// Ends the turn on a copy of the state.
    pub fn end_turn(&self) -> (GameState, Vec<Event>) {
        let mut g = self.clone();
        let mut ev = Vec::new();
        g.end_turn_in_place(&mut ev);
        (g, ev)
    }

    fn actor(&self, who: CharId) -> Result<(&CharacterState, Coord), StepError> {
        let c = self
            .character(who)
            .ok_or(StepError::UnknownCharacter(who))?;
        let p = c.position.ok_or(StepError::DeadCharacter(who))?;
        Ok((c, p))
    }

    fn check_shift(&self, s: Shift) -> Result<(), StepError> {
        let slot = s.line().slot().ok_or(StepError::CentralLineForbidden)?;
        match self.line_locks[slot] {
            Some(d) if d != s.dir() => Err(StepError::LineLockViolation(s)),
            _ => Ok(()),
        }
    }

    fn check_entry(&self, to: Coord, rider: Option<Shift>) -> Result<(), StepError> {
        let kind = self
            .board
            .kind_at(to)
            .ok_or(StepError::UnresolvedTile(to))?;
        match (self.variant.grants_shift(kind), rider) {
            (true, None) => Err(StepError::MissingRider(to)),
            (false, Some(_)) => Err(StepError::UnexpectedRider(to)),
            (true, Some(r)) => self.check_shift(r),
            (false, None) => Ok(()),
        }
    }

    /// Checks a step without changing anything.
    pub fn check_step(&self, step: &ActionStep) -> Result<(), StepError> {
        if self.is_over() {
            return Err(StepError::GameOver);
        }
        let (c, p) = self.actor(step.actor)?;
        if c.actions_taken >= 2 {
            return Err(StepError::NoActionsLeft(step.actor));
        }
        if c.has_used(step.verb()) {
            return Err(StepError::RepeatedVerb(step.actor, step.verb()));
        }
        match step.action {
            Action::Look { at } => {
                if self.board.kind_at(p) == Some(TileKind::Dark) {
                    return Err(StepError::LookFromDarkForbidden);
                }
                if !p.is_adjacent(at) || self.board.is_face_up(at) {
                    return Err(StepError::IllegalLook(at));
                }
                Ok(())
            }
            Action::Move { to, rider } => {
                if !p.is_adjacent(to) {
                    return Err(StepError::IllegalMove { from: p, to });
                }
                self.check_entry(to, rider)
            }
            Action::Push { target, to, rider } => {
                let t = self
                    .character(target)
                    .ok_or(StepError::UnknownCharacter(target))?;
                if target == step.actor || t.position != Some(p) {
                    return Err(StepError::TargetNotPresent(target));
                }
                match self.board.kind_at(p) {
                    Some(TileKind::Start) if !self.variant.push_from_start_allowed => {
                        return Err(StepError::PushFromStartForbidden)
                    }
                    Some(TileKind::Control) if !self.variant.push_from_control_allowed => {
                        return Err(StepError::PushFromControlForbidden)
                    }
                    _ => {}
                }
                if !p.is_adjacent(to) {
                    return Err(StepError::IllegalMove { from: p, to });
                }
                self.check_entry(to, rider)
            }
            Action::Control { shift } => {
                if !shift.line().contains(p) {
                    return Err(StepError::LineNotThroughActor(shift));
                }
                self.check_shift(shift)
            }
        }
    }

    /// Applies a step in place, appending its events. Nothing changes on error.
    pub fn step_in_place(
        &mut self,
        step: &ActionStep,
        ev: &mut Vec<Event>,
    ) -> Result<(), StepError> {
        self.check_step(step)?;
        let who = step.actor;
        let trapped_before = self.characters[who.slot()].trap_pending;
        {
            let c = &mut self.characters[who.slot()];
            c.actions_taken += 1;
            c.used |= step.verb().bit();
        }
        let mut moved = 0u8;
        match step.action {
            Action::Look { at } => {
                ev.push(Event::TileRevealed {
                    at,
                    kind: self.board.kind_at(at),
                    flipped: false,
                });
            }
            Action::Move { to, rider } => {
                self.enter(who, to, MoveCause::Walk, &mut moved, ev);
                if let Some(r) = rider {
                    self.slide(r, who, ev);
                }
            }
            Action::Push { target, to, rider } => {
                self.enter(target, to, MoveCause::Pushed { by: who }, &mut moved, ev);
                if let Some(r) = rider {
                    self.slide(r, who, ev);
                }
            }
            Action::Control { shift } => self.slide(shift, who, ev),
        }
        if trapped_before && moved & (1 << who.slot()) == 0 {
            if let Some(at) = self.characters[who.slot()].position {
                self.kill(who, at, DeathCause::Trap, ev);
            }
        }
        Ok(())
    }

    fn relocate(&mut self, who: CharId, to: Coord, cause: MoveCause, ev: &mut Vec<Event>) {
        let c = &mut self.characters[who.slot()];
        let from = c.position.expect("only living characters move");
        c.position = Some(to);
        c.trap_pending = false;
        c.flood_deadline = None;
        self.arrivals.retain(|&x| x != who);
        self.arrivals.push(who);
        ev.push(Event::CharacterMoved {
            who,
            from,
            to,
            cause,
        });
    }

    fn enter(
        &mut self,
        who: CharId,
        to: Coord,
        cause: MoveCause,
        moved: &mut u8,
        ev: &mut Vec<Event>,
    ) {
        let slot = self.board.slot_mut(to);
        if !slot.face_up {
            slot.face_up = true;
            ev.push(Event::TileRevealed {
                at: to,
                kind: slot.kind,
                flipped: true,
            });
        }
        *moved |= 1 << who.slot();
        self.relocate(who, to, cause, ev);
        match self.board.kind_at(to) {
            Some(TileKind::Mortal) => self.kill(who, to, DeathCause::Mortal, ev),
            Some(TileKind::RedOther) => self.kill(who, to, DeathCause::RedRoom, ev),
            Some(TileKind::Vortex) => self.relocate(who, Coord::ORIGIN, MoveCause::Vortex, ev),
            Some(TileKind::Trap) => self.characters[who.slot()].trap_pending = true,
            Some(TileKind::Flood) => {
                self.characters[who.slot()].flood_deadline = Some(self.turn + 1)
            }
            Some(TileKind::Acid) => {
                let victim = self
                    .arrivals
                    .iter()
                    .copied()
                    .find(|&x| x != who && self.characters[x.slot()].position == Some(to));
                if let Some(v) = victim {
                    self.kill(v, to, DeathCause::Acid, ev);
                }
            }
            _ => {}
        }
    }

    fn kill(&mut self, who: CharId, at: Coord, cause: DeathCause, ev: &mut Vec<Event>) {
        let c = &mut self.characters[who.slot()];
        c.position = None;
        c.trap_pending = false;
        c.flood_deadline = None;
        self.arrivals.retain(|&x| x != who);
        self.deaths += 1;
        ev.push(Event::Death { who, at, cause });
        if self.outcome != Outcome::InProgress {
            return;
        }
        let allowed = match self.regime {
            Regime::AllSurvive => 0,
            Regime::Partial { max_deaths } => max_deaths,
        };
        if self.deaths > allowed || self.living().next().is_none() {
            self.outcome = Outcome::Lost {
                turn: self.turn,
                who,
                cause,
            };
        }
    }

    /// Shifts a line, or slides the exit off the board if everyone stands on it.
    fn slide(&mut self, s: Shift, by: CharId, ev: &mut Vec<Event>) {
        let slot = s.line().slot().expect("checked before");
        self.line_locks[slot] = Some(s.dir());
        if self.outcome != Outcome::InProgress {
            return;
        }
        let lead = s.leading_cell();
        let all_on_exit = self.board.kind_at(lead) == Some(TileKind::Exit)
            && self.living().next().is_some()
            && self.living().all(|c| c.position == Some(lead));
        if all_on_exit {
            ev.push(Event::VictorySlide { shift: s });
            self.outcome = Outcome::Won {
                turn: self.turn,
                deaths: self.deaths,
            };
            return;
        }
        self.board.apply_shift(s);
        let (dx, dy) = s.dir().delta();
        for i in 0..self.characters.len() {
            let Some(p) = self.characters[i].position else {
                continue;
            };
            if !s.line().contains(p) {
                continue;
            }
            let wrap = |v: i8| (v + 2).rem_euclid(5) - 2;
            let to = Coord::at(wrap(p.x() + dx), wrap(p.y() + dy));
            self.characters[i].position = Some(to);
            ev.push(Event::CharacterMoved {
                who: CharId::from_slot(i),
                from: p,
                to,
                cause: MoveCause::Carried,
            });
        }
        ev.push(Event::LineShifted { shift: s, by });
    }

    pub fn end_turn_in_place(&mut self, ev: &mut Vec<Event>) {
        for i in 0..self.characters.len() {
            let c = self.characters[i];
            if let (Some(p), Some(d)) = (c.position, c.flood_deadline) {
                if d <= self.turn {
                    self.kill(c.id, p, DeathCause::Flood, ev);
                }
            }
        }
        for c in &mut self.characters {
            c.actions_taken = 0;
            c.used = 0;
        }
        self.line_locks = [None; 8];
        ev.push(Event::TurnEnded { turn: self.turn });
        self.first_player_offset = ((self.first_player_offset as usize + 1) % self.n()) as u8;
        self.turn += 1;
    }

    /// Parameterisations of a verb that pass every check except the rider,
    /// which is left empty. Undecided destinations are included.
    pub fn candidates(&self, who: CharId, verb: Verb) -> Vec<ActionStep> {
        let mut out = Vec::new();
        let Ok((c, p)) = self.actor(who) else {
            return out;
        };
        if self.is_over() || c.actions_taken >= 2 || c.has_used(verb) {
            return out;
        }
        match verb {
            Verb::Look => {
                if self.board.kind_at(p) != Some(TileKind::Dark) {
                    for at in p.neighbors().filter(|&n| !self.board.is_face_up(n)) {
                        out.push(ActionStep::new(who, Action::Look { at }));
                    }
                }
            }
            Verb::Move => {
                for to in p.neighbors() {
                    out.push(ActionStep::new(who, Action::Move { to, rider: None }));
                }
            }
            Verb::Push => {
                let allowed = match self.board.kind_at(p) {
                    Some(TileKind::Start) => self.variant.push_from_start_allowed,
                    Some(TileKind::Control) => self.variant.push_from_control_allowed,
                    _ => true,
                };
                if allowed {
                    for t in self
                        .living()
                        .filter(|t| t.id != who && t.position == Some(p))
                    {
                        for to in p.neighbors() {
                            out.push(ActionStep::new(
                                who,
                                Action::Push {
                                    target: t.id,
                                    to,
                                    rider: None,
                                },
                            ));
                        }
                    }
                }
            }
            Verb::Control => {
                for shift in Shift::all().filter(|s| s.line().contains(p)) {
                    if self.check_shift(shift).is_ok() {
                        out.push(ActionStep::new(who, Action::Control { shift }));
                    }
                }
            }
        }
        out
    }

    /// Whether the verb has at least one legal parameterisation.
    pub fn can_perform(&self, who: CharId, verb: Verb) -> bool {
        !self.candidates(who, verb).is_empty()
    }

    /// Riders allowed by this turn's line locks.
    pub fn legal_riders(&self) -> impl Iterator<Item = Shift> + '_ {
        Shift::all().filter(|&s| self.check_shift(s).is_ok())
    }

    /// Fully parameterised legal steps, riders included. Steps into
    /// undecided rooms are left without a rider.
    pub fn legal_steps(&self, who: CharId, verb: Verb) -> Vec<ActionStep> {
        let mut out = Vec::new();
        for s in self.candidates(who, verb) {
            let dest = match s.action {
                Action::Move { to, .. } | Action::Push { to, .. } => self.board.kind_at(to),
                _ => None,
            };
            if dest.is_some_and(|k| self.variant.grants_shift(k)) {
                for r in self.legal_riders() {
                    out.push(ActionStep {
                        action: s.action.with_rider(Some(r)),
                        ..s
                    });
                }
            } else {
                out.push(s);
            }
        }
        out
    }
}
