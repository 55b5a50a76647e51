//! Programs, turn ordering and whole-script replay.

use alloc::vec::Vec;

use super::{Event, GameState, Outcome, RuleVariant, StepError};
use crate::board::{BoardError, BoardState};
use crate::notation::{infer_program, ActionStep, CharId, ProgrammedTurn, Script, Turn, Verb};

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProgramViolation {
    #[error("character {0} is not in the game")]
    UnknownCharacter(CharId),
    #[error("character {0} is dead")]
    DeadCharacter(CharId),
    #[error("character {0} is programmed twice")]
    DuplicateEntry(CharId),
    #[error("character {0} programs the same action twice")]
    DuplicateAction(CharId),
    #[error("character {0} programs no action")]
    NoAction(CharId),
    #[error("character {0} programs more than two actions")]
    TooManyActions(CharId),
    #[error("character {0} has no program")]
    MissingCharacter(CharId),
    #[error("program is for turn {found}, expected {expected}")]
    WrongTurn { expected: u32, found: u32 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OrderingViolation {
    #[error("step out of order; character {expected}'s {verb:?} was due")]
    OrderViolation { expected: CharId, verb: Verb },
    #[error("step by a character with nothing left to do")]
    UnexpectedStep,
    #[error("character {who} skipped a possible {verb:?}")]
    SkippedMandatoryAction { who: CharId, verb: Verb },
    #[error("step after the game ended")]
    StepAfterGameOver,
    #[error(transparent)]
    Step(#[from] StepError),
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ReplayErrorKind {
    #[error("invalid board: {0}")]
    Board(BoardError),
    #[error("expected turn {expected}, found {found}")]
    TurnGap { expected: u32, found: u32 },
    #[error("invalid program: {0:?}")]
    Program(Vec<ProgramViolation>),
    #[error(transparent)]
    Ordering(OrderingViolation),
    #[error("turn {0} given after the game ended")]
    TurnAfterGameOver(u32),
}

/// Where a replay failed: turn number and 1-based step within the turn.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("turn {turn}, step {step}: {kind}")]
pub struct ReplayError {
    pub turn: u32,
    pub step: usize,
    pub kind: ReplayErrorKind,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LoggedEvent {
    pub turn: u32,
    /// 1-based step within the turn, `None` for end-of-turn effects.
    pub step: Option<usize>,
    pub event: Event,
}

#[derive(Clone, Debug)]
pub struct Replay {
    pub outcome: Outcome,
    pub events: Vec<LoggedEvent>,
    pub state: GameState,
}

fn check_program(
    p: &ProgrammedTurn,
    g: &GameState,
    require_all: bool,
) -> Result<(), Vec<ProgramViolation>> {
    let mut v = Vec::new();
    if p.turn != g.turn {
        v.push(ProgramViolation::WrongTurn {
            expected: g.turn,
            found: p.turn,
        });
    }
    for (i, e) in p.entries.iter().enumerate() {
        match g.character(e.who) {
            None => v.push(ProgramViolation::UnknownCharacter(e.who)),
            Some(c) if !c.alive() => v.push(ProgramViolation::DeadCharacter(e.who)),
            Some(_) => {}
        }
        if p.entries[..i].iter().any(|f| f.who == e.who) {
            v.push(ProgramViolation::DuplicateEntry(e.who));
        }
        match e.verbs.as_slice() {
            [] => v.push(ProgramViolation::NoAction(e.who)),
            [a, b] if a == b => v.push(ProgramViolation::DuplicateAction(e.who)),
            [_] | [_, _] => {}
            _ => v.push(ProgramViolation::TooManyActions(e.who)),
        }
    }
    if require_all {
        for c in g.living() {
            if p.verbs_of(c.id).is_none() {
                v.push(ProgramViolation::MissingCharacter(c.id));
            }
        }
    }
    if v.is_empty() {
        Ok(())
    } else {
        Err(v)
    }
}

/// Checks a program against the state at the start of its turn.
pub fn validate_program(p: &ProgrammedTurn, g: &GameState) -> Result<(), Vec<ProgramViolation>> {
    check_program(p, g, true)
}

/// Plays a turn's steps in program order and reports the first violation
/// with its 0-based step index.
fn play_turn(
    g: &mut GameState,
    steps: &[ActionStep],
    program: &ProgrammedTurn,
    log: &mut Vec<(usize, Event)>,
) -> Result<(), (usize, OrderingViolation)> {
    let seats: Vec<CharId> = g.seat_order().collect();
    let mut i = 0;
    let mut done_early = [false; super::MAX_CHARACTERS];
    let mut ev = Vec::new();
    let mut apply = |g: &mut GameState, i: &mut usize, log: &mut Vec<(usize, Event)>| {
        ev.clear();
        g.step_in_place(&steps[*i], &mut ev)
            .map_err(|e| (*i, e.into()))?;
        log.extend(ev.iter().map(|&e| (*i, e)));
        *i += 1;
        Ok(())
    };
    'passes: for pass in 0..2 {
        for &c in &seats {
            if g.is_over() {
                break 'passes;
            }
            if !g.character(c).is_some_and(|s| s.alive()) {
                continue;
            }
            let Some(verbs) = program.verbs_of(c) else {
                continue;
            };
            let next = steps.get(i);
            let is_next = |v: Verb| next.is_some_and(|s| s.actor == c && s.verb() == v);
            let expected = match (pass, verbs) {
                (0, [v]) => {
                    if is_next(*v) {
                        apply(g, &mut i, log)?;
                        done_early[c.slot()] = true;
                    }
                    continue;
                }
                (1, [v]) if !done_early[c.slot()] => *v,
                (1, [_]) => continue,
                (p, [a, b]) => {
                    if p == 0 {
                        *a
                    } else {
                        *b
                    }
                }
                _ => continue,
            };
            if is_next(expected) {
                apply(g, &mut i, log)?;
            } else if next.is_some_and(|s| s.actor == c) {
                return Err((
                    i,
                    OrderingViolation::OrderViolation {
                        expected: c,
                        verb: expected,
                    },
                ));
            } else if g.can_perform(c, expected) {
                let later = steps[i..]
                    .iter()
                    .any(|s| s.actor == c && s.verb() == expected);
                let v = if later {
                    OrderingViolation::OrderViolation {
                        expected: c,
                        verb: expected,
                    }
                } else {
                    OrderingViolation::SkippedMandatoryAction {
                        who: c,
                        verb: expected,
                    }
                };
                return Err((i, v));
            }
        }
    }
    if i < steps.len() {
        let v = if g.is_over() {
            OrderingViolation::StepAfterGameOver
        } else {
            OrderingViolation::UnexpectedStep
        };
        return Err((i, v));
    }
    Ok(())
}

/// Replays one turn's steps from `g` and checks them against the program.
pub fn validate_ordering(
    steps: &[ActionStep],
    program: &ProgrammedTurn,
    g: &GameState,
) -> Result<(), OrderingViolation> {
    let mut g = g.clone();
    play_turn(&mut g, steps, program, &mut Vec::new()).map_err(|(_, v)| v)
}

/// Replays a script with programs inferred from the steps themselves.
pub fn run_script(
    board: &BoardState,
    n: usize,
    variant: RuleVariant,
    script: &Script,
) -> Result<Replay, ReplayError> {
    run_script_with_programs(board, n, variant, script, None)
}

/// Replays a script; when `programs` is given, each turn is checked against
/// its program, including mandatory actions that the script skipped.
pub fn run_script_with_programs(
    board: &BoardState,
    n: usize,
    variant: RuleVariant,
    script: &Script,
    programs: Option<&[ProgrammedTurn]>,
) -> Result<Replay, ReplayError> {
    board.validate_initial().map_err(|e| ReplayError {
        turn: 0,
        step: 0,
        kind: ReplayErrorKind::Board(e),
    })?;
    replay_from(GameState::new(board.clone(), n, variant), script, programs)
}

/// Replays a script from a prepared first-turn state, e.g. one with a
/// partial-victory regime.
pub fn replay_from(
    mut g: GameState,
    script: &Script,
    programs: Option<&[ProgrammedTurn]>,
) -> Result<Replay, ReplayError> {
    let mut events = Vec::new();
    for (k, turn) in script.turns.iter().enumerate() {
        let fail = |step: usize, kind| ReplayError {
            turn: turn.number,
            step,
            kind,
        };
        let expected = k as u32 + 1;
        if turn.number != expected {
            return Err(fail(
                0,
                ReplayErrorKind::TurnGap {
                    expected,
                    found: turn.number,
                },
            ));
        }
        if g.is_over() {
            return Err(fail(0, ReplayErrorKind::TurnAfterGameOver(turn.number)));
        }
        let inferred;
        let program = match programs.and_then(|ps| ps.iter().find(|p| p.turn == turn.number)) {
            Some(p) => {
                check_program(p, &g, true).map_err(|v| fail(0, ReplayErrorKind::Program(v)))?;
                p
            }
            None => {
                inferred = infer_program(turn);
                check_program(&inferred, &g, false)
                    .map_err(|v| fail(0, ReplayErrorKind::Program(v)))?;
                &inferred
            }
        };
        let mut log = Vec::new();
        let result = play_turn(&mut g, &turn.steps, program, &mut log);
        events.extend(log.into_iter().map(|(i, event)| LoggedEvent {
            turn: turn.number,
            step: Some(i + 1),
            event,
        }));
        result.map_err(|(i, v)| fail(i + 1, ReplayErrorKind::Ordering(v)))?;
        if !g.is_over() {
            let mut ev = Vec::new();
            g.end_turn_in_place(&mut ev);
            events.extend(ev.into_iter().map(|event| LoggedEvent {
                turn: turn.number,
                step: None,
                event,
            }));
        }
    }
    Ok(Replay {
        outcome: g.outcome,
        events,
        state: g,
    })
}

/// Replays a single turn from an arbitrary state.
pub fn play_one_turn(
    g: &GameState,
    turn: &Turn,
) -> Result<(GameState, Vec<Event>), OrderingViolation> {
    let mut g = g.clone();
    let mut log = Vec::new();
    play_turn(&mut g, &turn.steps, &infer_program(turn), &mut log).map_err(|(_, v)| v)?;
    Ok((g, log.into_iter().map(|(_, e)| e).collect()))
}
