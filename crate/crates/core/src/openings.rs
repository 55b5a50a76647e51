//! The two scripted openings: the fast one (pivot tile next to the start,
//! exit reached on the second turn) and the bold six-character one (control
//! room next to the start, exit reached within the first turn).
//!
//! Scripts are written in a standard frame where the pivot is `[1;0]` and
//! the exit `[2;1]`; a [`LuckWitness`] carries the frame that maps a concrete
//! board onto the standard one.

use alloc::vec;
use alloc::vec::Vec;

use crate::board::BoardState;
use crate::engine::MAX_CHARACTERS;
use crate::geom::{Coord, Direction, Frame, Line, Shift, START_NEIGHBORS};
use crate::notation::{
    Action, ActionStep, CharId, ProgramEntry, ProgrammedTurn, Script, Turn, Verb,
};
use crate::tile::TileKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Opening {
    /// Fast opening, any number of characters.
    Veloce,
    /// Bold opening, exactly six characters, needs pushing from the start.
    Temeraire,
}

impl Opening {
    pub fn name(self) -> &'static str {
        match self {
            Opening::Veloce => "veloce",
            Opening::Temeraire => "temeraire",
        }
    }

    pub fn from_name(s: &str) -> Option<Opening> {
        match s {
            "veloce" | "véloce" => Some(Opening::Veloce),
            "temeraire" | "téméraire" => Some(Opening::Temeraire),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum OpeningError {
    #[error("the bold opening needs exactly 6 characters, got {0}")]
    ArityFixed(usize),
    #[error("between 1 and 6 characters, got {0}")]
    BadCount(usize),
    #[error("every room must be known")]
    BoardNotRevealed,
}

/// Standard-frame pivot and exit cells.
pub const PIVOT: Coord = Coord::at(1, 0);
pub const EXIT: Coord = Coord::at(2, 1);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LuckWitness {
    /// Maps board coordinates to the standard frame.
    pub frame: Frame,
    /// Kind of the board tile that lands on [`PIVOT`].
    pub pivot: TileKind,
}

impl LuckWitness {
    pub fn in_standard_frame(pivot: TileKind) -> LuckWitness {
        LuckWitness {
            frame: Frame::IDENTITY,
            pivot,
        }
    }
}

fn id(i: usize) -> CharId {
    CharId::from_slot(i - 1)
}

fn entry(who: usize, verbs: &[Verb]) -> ProgramEntry {
    ProgramEntry {
        who: id(who),
        verbs: verbs.to_vec(),
    }
}

fn check_count(n: usize) -> Result<(), OpeningError> {
    if (1..=MAX_CHARACTERS).contains(&n) {
        Ok(())
    } else {
        Err(OpeningError::BadCount(n))
    }
}

/// First-turn program of the fast opening: `1DC` alone, otherwise
/// `RD` for all but the last two characters, then `DC` and `DR`.
pub fn veloce_program(n: usize) -> Result<ProgrammedTurn, OpeningError> {
    use Verb::*;
    check_count(n)?;
    let entries = if n == 1 {
        vec![entry(1, &[Move, Control])]
    } else {
        let mut e: Vec<ProgramEntry> = (1..=n - 2).map(|i| entry(i, &[Look, Move])).collect();
        e.push(entry(n - 1, &[Move, Control]));
        e.push(entry(n, &[Move, Look]));
        e
    };
    Ok(ProgrammedTurn { turn: 1, entries })
}

/// Second-turn program of the fast opening, in seat order.
pub fn veloce_second_program(n: usize) -> Result<ProgrammedTurn, OpeningError> {
    check_count(n)?;
    let mut entries: Vec<ProgramEntry> = (2..=n).map(|i| entry(i, &[Verb::Move])).collect();
    entries.push(entry(1, &[Verb::Move, Verb::Control]));
    Ok(ProgrammedTurn { turn: 2, entries })
}

/// Program of the bold opening: `1PD | 2PD | 3CD | 4DC | 5DC | 6DC`.
pub fn temeraire_program(n: usize) -> Result<ProgrammedTurn, OpeningError> {
    use Verb::*;
    if n != 6 {
        return Err(OpeningError::ArityFixed(n));
    }
    let entries = vec![
        entry(1, &[Push, Move]),
        entry(2, &[Push, Move]),
        entry(3, &[Control, Move]),
        entry(4, &[Move, Control]),
        entry(5, &[Move, Control]),
        entry(6, &[Move, Control]),
    ];
    Ok(ProgrammedTurn { turn: 1, entries })
}

fn require_known(board: &BoardState) -> Result<(), OpeningError> {
    if board.is_fully_known() {
        Ok(())
    } else {
        Err(OpeningError::BoardNotRevealed)
    }
}

/// The first frame, in [`Frame::ALL`] order, whose pivot is a usable green
/// room and whose exit cell holds the exit.
pub fn v_lucky(board: &BoardState) -> Result<Option<LuckWitness>, OpeningError> {
    require_known(board)?;
    Ok(Frame::ALL.into_iter().find_map(|f| {
        let inv = f.inverse();
        let pivot = board.kind_at(inv.apply(PIVOT))?;
        let lucky =
            pivot.is_valid_pivot() && board.kind_at(inv.apply(EXIT)) == Some(TileKind::Exit);
        lucky.then_some(LuckWitness { frame: f, pivot })
    }))
}

/// The frame a player commits to after looking at the four rooms around the
/// start, before knowing where the exit is: the first whose pivot is usable.
/// The exit then has to be on that frame's exit cell.
pub fn frame_choice(board: &BoardState, usable: impl Fn(TileKind) -> bool) -> Option<LuckWitness> {
    Frame::ALL.into_iter().find_map(|f| {
        let k = board.kind_at(f.inverse().apply(PIVOT))?;
        usable(k).then_some(LuckWitness { frame: f, pivot: k })
    })
}

/// The bold opening's luck: a control room on the pivot and the exit on the
/// exit cell of the same frame.
pub fn t_lucky(board: &BoardState) -> Result<Option<LuckWitness>, OpeningError> {
    require_known(board)?;
    Ok(Frame::ALL.into_iter().find_map(|f| {
        let inv = f.inverse();
        let lucky = board.kind_at(inv.apply(PIVOT)) == Some(TileKind::Control)
            && board.kind_at(inv.apply(EXIT)) == Some(TileKind::Exit);
        lucky.then_some(LuckWitness {
            frame: f,
            pivot: TileKind::Control,
        })
    }))
}

fn shift(dir: Direction, line: Line) -> Shift {
    Shift::new(line, dir).expect("standard-frame shifts are well formed")
}

/// Rider used by the fast opening when the pivot is a machine room: a row
/// the script never relies on.
const SPARE_RIDER: (Direction, Line) = (Direction::Left, Line::row(-2));

fn step(who: usize, action: Action) -> ActionStep {
    ActionStep::new(id(who), action)
}

fn veloce_standard(n: usize, pivot: TileKind) -> Result<Script, OpeningError> {
    check_count(n)?;
    let rider = pivot
        .grants_shift()
        .then(|| shift(SPARE_RIDER.0, SPARE_RIDER.1));
    let to_pivot = |who| step(who, Action::Move { to: PIVOT, rider });
    let up = step(
        n.saturating_sub(1).max(1),
        Action::Control {
            shift: shift(Direction::Up, Line::column(1)),
        },
    );
    let mut t1 = Vec::new();
    if n == 1 {
        t1.push(to_pivot(1));
        t1.push(up);
    } else {
        for i in 1..=n - 2 {
            t1.push(step(
                i,
                Action::Look {
                    at: START_NEIGHBORS[(i - 1) % 4],
                },
            ));
        }
        t1.push(to_pivot(n - 1));
        t1.push(to_pivot(n));
        for i in 1..=n - 2 {
            t1.push(to_pivot(i));
        }
        t1.push(up);
        if pivot != TileKind::Dark {
            t1.push(step(n, Action::Look { at: EXIT }));
        }
    }
    let mut t2: Vec<ActionStep> = (2..=n)
        .chain([1])
        .map(|i| {
            step(
                i,
                Action::Move {
                    to: EXIT,
                    rider: None,
                },
            )
        })
        .collect();
    let mut last = step(
        1,
        Action::Control {
            shift: shift(Direction::Right, Line::row(1)),
        },
    );
    last.win_marker = true;
    t2.push(last);
    Ok(Script {
        turns: vec![
            Turn {
                number: 1,
                steps: t1,
            },
            Turn {
                number: 2,
                steps: t2,
            },
        ],
    })
}

fn temeraire_standard(pivot: TileKind) -> Script {
    let rider = pivot
        .grants_shift()
        .then(|| shift(Direction::Left, Line::row(1)));
    let top = Coord::at(0, 1);
    let left = shift(Direction::Left, Line::row(1));
    let mut steps = vec![
        step(
            1,
            Action::Push {
                target: id(3),
                to: PIVOT,
                rider,
            },
        ),
        step(
            2,
            Action::Push {
                target: id(4),
                to: PIVOT,
                rider,
            },
        ),
        step(
            3,
            Action::Control {
                shift: shift(Direction::Up, Line::column(1)),
            },
        ),
        step(
            4,
            Action::Move {
                to: top,
                rider: None,
            },
        ),
        step(
            5,
            Action::Move {
                to: top,
                rider: None,
            },
        ),
        step(
            6,
            Action::Move {
                to: top,
                rider: None,
            },
        ),
        step(
            1,
            Action::Move {
                to: top,
                rider: None,
            },
        ),
        step(
            2,
            Action::Move {
                to: top,
                rider: None,
            },
        ),
        step(
            3,
            Action::Move {
                to: top,
                rider: None,
            },
        ),
        step(4, Action::Control { shift: left }),
        step(5, Action::Control { shift: left }),
        step(6, Action::Control { shift: left }),
    ];
    steps.last_mut().expect("non-empty").win_marker = true;
    Script {
        turns: vec![Turn { number: 1, steps }],
    }
}

/// Maps every coordinate, line and direction of a script through a frame.
pub fn transform_script(s: &Script, f: Frame) -> Script {
    let map_step = |st: &ActionStep| {
        let action = match st.action {
            Action::Look { at } => Action::Look { at: f.apply(at) },
            Action::Move { to, rider } => Action::Move {
                to: f.apply(to),
                rider: rider.map(|r| f.apply_shift(r)),
            },
            Action::Push { target, to, rider } => Action::Push {
                target,
                to: f.apply(to),
                rider: rider.map(|r| f.apply_shift(r)),
            },
            Action::Control { shift } => Action::Control {
                shift: f.apply_shift(shift),
            },
        };
        ActionStep { action, ..*st }
    };
    Script {
        turns: s
            .turns
            .iter()
            .map(|t| Turn {
                number: t.number,
                steps: t.steps.iter().map(map_step).collect(),
            })
            .collect(),
    }
}

/// The opening's script on the board described by `witness`, in board
/// coordinates. Steps that the program makes impossible (a look from a dark
/// pivot) are left out.
pub fn canned_script(
    opening: Opening,
    witness: LuckWitness,
    n: usize,
) -> Result<Script, OpeningError> {
    let standard = match opening {
        Opening::Veloce => veloce_standard(n, witness.pivot)?,
        Opening::Temeraire => {
            if n != 6 {
                return Err(OpeningError::ArityFixed(n));
            }
            temeraire_standard(witness.pivot)
        }
    };
    Ok(transform_script(&standard, witness.frame.inverse()))
}

/// The programs matching [`canned_script`], one per turn.
pub fn canned_programs(opening: Opening, n: usize) -> Result<Vec<ProgrammedTurn>, OpeningError> {
    match opening {
        Opening::Veloce => Ok(vec![veloce_program(n)?, veloce_second_program(n)?]),
        Opening::Temeraire => Ok(vec![temeraire_program(n)?]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{run_script_with_programs, Outcome, RuleVariant, StepError};
    use crate::engine::{OrderingViolation, ReplayErrorKind};
    use alloc::string::ToString;

    fn board(pivot: TileKind, pivot_at: Coord, exit_at: Coord) -> BoardState {
        BoardState::from_fn(|c| {
            Some(if c == Coord::ORIGIN {
                TileKind::Start
            } else if c == pivot_at {
                pivot
            } else if c == exit_at {
                TileKind::Exit
            } else {
                TileKind::YellowOther
            })
        })
    }

    #[test]
    fn programs_print() {
        assert_eq!(veloce_program(1).unwrap().to_string(), "1: 1DC");
        assert_eq!(veloce_program(2).unwrap().to_string(), "1: 1DC | 2DR");
        assert_eq!(
            veloce_program(6).unwrap().to_string(),
            "1: 1RD | 2RD | 3RD | 4RD | 5DC | 6DR"
        );
        assert_eq!(
            temeraire_program(6).unwrap().to_string(),
            "1: 1PD | 2PD | 3CD | 4DC | 5DC | 6DC"
        );
        assert_eq!(temeraire_program(5), Err(OpeningError::ArityFixed(5)));
    }

    #[test]
    fn veloce_one_script() {
        let w = LuckWitness::in_standard_frame(TileKind::Empty);
        let s = canned_script(Opening::Veloce, w, 1).unwrap();
        assert_eq!(
            s.to_string(),
            "1: 1D[1;0] | 1C^[1;]\n2: 1D[2;1] | 1C>[;1]#\n"
        );
    }

    #[test]
    fn witness_of_rotated_board() {
        let b = board(TileKind::Empty, Coord::at(1, 0), Coord::at(2, 1));
        assert_eq!(v_lucky(&b).unwrap().unwrap().frame, Frame::IDENTITY);
        let r = b.apply_frame(Frame::R90);
        assert_eq!(v_lucky(&r).unwrap().unwrap().frame, Frame::R270);
        let m = b.apply_frame(Frame::MIRROR);
        assert_eq!(v_lucky(&m).unwrap().unwrap().frame, Frame::MIRROR);
        assert_eq!(
            frame_choice(&m, TileKind::is_valid_pivot).unwrap().frame,
            Frame::IDENTITY
        );
        assert_eq!(
            v_lucky(&BoardState::unknown()),
            Err(OpeningError::BoardNotRevealed)
        );
        let unlucky = board(TileKind::Mortal, Coord::at(1, 0), Coord::at(2, 1));
        assert_eq!(v_lucky(&unlucky).unwrap(), None);
    }

    #[test]
    fn veloce_wins_for_every_count_pivot_and_frame() {
        for pivot in [
            TileKind::Empty,
            TileKind::Machine,
            TileKind::Dark,
            TileKind::Tunnel,
        ] {
            let b = board(pivot, PIVOT, EXIT);
            for f in Frame::ALL {
                let fb = b.apply_frame(f);
                let w = v_lucky(&fb).unwrap().expect("lucky by construction");
                for n in 1..=6 {
                    let s = canned_script(Opening::Veloce, w, n).unwrap();
                    let progs = canned_programs(Opening::Veloce, n).unwrap();
                    let r =
                        run_script_with_programs(&fb, n, RuleVariant::DEFAULT, &s, Some(&progs))
                            .unwrap_or_else(|e| panic!("{pivot:?} {f} {n}: {e}\n{s}"));
                    assert_eq!(
                        r.outcome,
                        Outcome::Won { turn: 2, deaths: 0 },
                        "{pivot:?} {f} {n}"
                    );
                }
            }
        }
    }

    #[test]
    fn temeraire_needs_variant() {
        let b = board(TileKind::Control, PIVOT, EXIT);
        let w = t_lucky(&b).unwrap().unwrap();
        let s = canned_script(Opening::Temeraire, w, 6).unwrap();
        let progs = canned_programs(Opening::Temeraire, 6).unwrap();
        let r = run_script_with_programs(&b, 6, RuleVariant::PUSH_FROM_START, &s, Some(&progs))
            .unwrap();
        assert_eq!(r.outcome, Outcome::Won { turn: 1, deaths: 0 });
        let e =
            run_script_with_programs(&b, 6, RuleVariant::DEFAULT, &s, Some(&progs)).unwrap_err();
        assert_eq!(
            e.kind,
            ReplayErrorKind::Ordering(OrderingViolation::Step(StepError::PushFromStartForbidden))
        );
    }
}
