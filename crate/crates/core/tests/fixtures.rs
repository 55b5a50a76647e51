//! Replays of the shipped fixture files.

use room25_core::engine::OrderingViolation;
use room25_core::engine::{
    run_script, run_script_with_programs, Outcome, ReplayErrorKind, RuleVariant, StepError,
};
use room25_core::openings::{t_lucky, v_lucky};
use room25_core::{parse_programs, parse_script, BoardState, Coord, Frame, TileKind};

macro_rules! fixture {
    ($name:literal) => {
        include_str!(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/../../fixtures/",
            $name
        ))
    };
}

fn board(text: &str) -> BoardState {
    BoardState::parse(text).unwrap()
}

#[test]
fn fast_opening_fixtures_win_on_turn_two() {
    let b = board(fixture!("veloce.board"));
    assert_eq!(v_lucky(&b).unwrap().unwrap().frame, Frame::IDENTITY);
    for (n, script, programs) in [
        (1, fixture!("veloce1.s"), fixture!("veloce1.prog")),
        (6, fixture!("veloce6.s"), fixture!("veloce6.prog")),
    ] {
        let s = parse_script(script).unwrap();
        let p = parse_programs(programs).unwrap();
        let r = run_script_with_programs(&b, n, RuleVariant::DEFAULT, &s, Some(&p)).unwrap();
        assert_eq!(r.outcome, Outcome::Won { turn: 2, deaths: 0 });
    }
}

#[test]
fn bold_fixture_needs_pushes_from_start() {
    let b = board(fixture!("temeraire.board"));
    assert_eq!(t_lucky(&b).unwrap().unwrap().frame, Frame::IDENTITY);
    let s = parse_script(fixture!("temeraire.s")).unwrap();
    let p = parse_programs(fixture!("temeraire.prog")).unwrap();
    let r = run_script_with_programs(&b, 6, RuleVariant::PUSH_FROM_START, &s, Some(&p)).unwrap();
    assert_eq!(r.outcome, Outcome::Won { turn: 1, deaths: 0 });
    let e = run_script_with_programs(&b, 6, RuleVariant::DEFAULT, &s, Some(&p)).unwrap_err();
    assert_eq!(
        e.kind,
        ReplayErrorKind::Ordering(OrderingViolation::Step(StepError::PushFromStartForbidden))
    );
}

#[test]
fn uncorrected_bold_script_parses_but_does_not_replay() {
    let b = board(fixture!("temeraire.board"));
    let s = parse_script(fixture!("temeraire_uncorrected.s")).unwrap();
    assert_eq!(s.turns[0].steps.len(), 12);
    let e = run_script(&b, 6, RuleVariant::PUSH_FROM_START, &s).unwrap_err();
    assert_eq!((e.turn, e.step), (1, 2));
}

#[test]
fn move_push_and_shift_fixtures() {
    let r = run_script(
        &board(fixture!("move_push.board")),
        3,
        RuleVariant::DEFAULT,
        &parse_script(fixture!("move_push.s")).unwrap(),
    )
    .unwrap();
    assert_eq!(
        r.state.position(room25_core::CharId::from_slot(0)),
        Some(Coord::at(2, 0))
    );
    assert_eq!(
        r.state.position(room25_core::CharId::from_slot(2)),
        Some(Coord::ORIGIN)
    );

    let r = run_script(
        &board(fixture!("slide.board")),
        2,
        RuleVariant::DEFAULT,
        &parse_script(fixture!("slide.s")).unwrap(),
    )
    .unwrap();
    assert_eq!(r.outcome, Outcome::Won { turn: 2, deaths: 0 });

    let b = board(fixture!("dispersal.board"));
    let s = parse_script(fixture!("dispersal.s")).unwrap();
    let p = parse_programs(fixture!("dispersal.prog")).unwrap();
    let r = run_script_with_programs(&b, 3, RuleVariant::DEFAULT, &s, Some(&p)).unwrap();
    assert_eq!(
        r.state.position(room25_core::CharId::from_slot(1)),
        Some(Coord::at(2, 0))
    );
}

#[test]
fn adversary_board_fixture() {
    let b = board(fixture!("hostile.board"));
    assert_eq!(b.kind_at(Coord::at(1, 0)), Some(TileKind::Mortal));
    assert_eq!(b.kind_at(Coord::at(0, 1)), Some(TileKind::Vortex));
    assert_eq!(b.kind_at(Coord::at(-1, 0)), Some(TileKind::Trap));
    assert_eq!(b.kind_at(Coord::at(0, -1)), Some(TileKind::Trap));
    assert_eq!(b.census()[14], 20);
    assert!(BoardState::parse(fixture!("blank.board")).unwrap().census()[14] == 24);
}
