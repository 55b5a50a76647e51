use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use room25_core::engine::{run_script_with_programs, GameState, Outcome, RuleVariant};
use room25_core::openings::{
    canned_programs, canned_script, t_lucky, v_lucky, Opening, EXIT, PIVOT,
};
use room25_core::prob::sample_board;
use room25_core::{
    parse_script, Action, ActionStep, BoardState, CharId, Coord, Frame, Roster, Script, Shift,
    TileKind, Turn, Verb,
};

fn coord() -> impl Strategy<Value = Coord> {
    (0usize..25).prop_map(Coord::from_index)
}

fn shift() -> impl Strategy<Value = Shift> {
    let all: Vec<Shift> = Shift::all().collect();
    proptest::sample::select(all)
}

fn frame() -> impl Strategy<Value = Frame> {
    proptest::sample::select(Frame::ALL.to_vec())
}

fn char_id() -> impl Strategy<Value = CharId> {
    (0usize..6).prop_map(CharId::from_slot)
}

fn step() -> impl Strategy<Value = ActionStep> {
    let action = prop_oneof![
        coord().prop_map(|at| Action::Look { at }),
        (coord(), proptest::option::of(shift())).prop_map(|(to, rider)| Action::Move { to, rider }),
        (char_id(), coord(), proptest::option::of(shift()))
            .prop_map(|(target, to, rider)| Action::Push { target, to, rider }),
        shift().prop_map(|shift| Action::Control { shift }),
    ];
    (char_id(), action, any::<bool>())
        .prop_filter(
            "no self-push",
            |(a, act, _)| !matches!(act, Action::Push { target, .. } if target == a),
        )
        .prop_map(|(actor, action, win_marker)| ActionStep {
            actor,
            action,
            win_marker,
        })
}

fn script() -> impl Strategy<Value = Script> {
    proptest::collection::vec(proptest::collection::vec(step(), 1..8), 1..4).prop_map(|turns| {
        Script {
            turns: turns
                .into_iter()
                .enumerate()
                .map(|(i, steps)| Turn {
                    number: i as u32 + 1,
                    steps,
                })
                .collect(),
        }
    })
}

fn board() -> impl Strategy<Value = BoardState> {
    any::<u64>()
        .prop_map(|seed| sample_board(&Roster::solo(), &mut ChaCha8Rng::seed_from_u64(seed)))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(10_000))]

    #[test]
    fn scripts_roundtrip(s in script()) {
        let text = s.to_string();
        let back = parse_script(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(back.to_string(), text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn five_shifts_are_the_identity(b in board(), s in shift()) {
        let mut t = b.clone();
        for _ in 0..5 {
            t = t.shift_line(s.line(), s.dir()).unwrap();
        }
        prop_assert_eq!(t, b);
    }

    #[test]
    fn opposite_shifts_cancel(b in board(), s in shift()) {
        let t = b.shift_line(s.line(), s.dir()).unwrap().shift_line(s.line(), s.dir().opposite()).unwrap();
        prop_assert_eq!(t, b);
    }

    #[test]
    fn shifts_keep_the_census(b in board(), s in shift()) {
        prop_assert_eq!(b.shift_line(s.line(), s.dir()).unwrap().census(), b.census());
    }

    #[test]
    fn frames_form_a_group(f in frame(), g in frame(), h in frame(), c in coord()) {
        prop_assert_eq!(f.then(g).then(h).apply(c), f.then(g.then(h)).apply(c));
        prop_assert_eq!(f.then(f.inverse()).apply(c), c);
        prop_assert_eq!(Frame::IDENTITY.then(f).apply(c), f.apply(c));
        prop_assert!(Frame::ALL.contains(&f.then(g)));
        prop_assert_eq!(f.then(g).apply(c), g.apply(f.apply(c)));
    }

    #[test]
    fn frames_commute_with_shifts(b in board(), f in frame(), s in shift()) {
        let a = b.shift_line(s.line(), s.dir()).unwrap().apply_frame(f);
        let t = f.apply_shift(s);
        let c = b.apply_frame(f).shift_line(t.line(), t.dir()).unwrap();
        prop_assert_eq!(a, c);
    }

    #[test]
    fn luck_is_frame_equivariant(b in board(), f in frame()) {
        let fb = b.apply_frame(f);
        prop_assert_eq!(v_lucky(&fb).unwrap().is_some(), v_lucky(&b).unwrap().is_some());
        prop_assert_eq!(t_lucky(&fb).unwrap().is_some(), t_lucky(&b).unwrap().is_some());
    }

    #[test]
    fn fast_opening_wins_whenever_lucky(
        b in board(),
        pivot in proptest::sample::select(vec![TileKind::Empty, TileKind::Machine, TileKind::Dark, TileKind::Tunnel]),
        f in frame(),
        n in 1usize..=6,
    ) {
        let lucky = force(&b, pivot, f);
        let w = v_lucky(&lucky).unwrap().expect("lucky by construction");
        let s = canned_script(Opening::Veloce, w, n).unwrap();
        let p = canned_programs(Opening::Veloce, n).unwrap();
        let r = run_script_with_programs(&lucky, n, RuleVariant::DEFAULT, &s, Some(&p)).unwrap();
        prop_assert_eq!(r.outcome, Outcome::Won { turn: 2, deaths: 0 });
    }

    #[test]
    fn bold_opening_wins_whenever_lucky(b in board(), f in frame()) {
        let lucky = force(&b, TileKind::Control, f);
        let w = t_lucky(&lucky).unwrap().expect("lucky by construction");
        let s = canned_script(Opening::Temeraire, w, 6).unwrap();
        let p = canned_programs(Opening::Temeraire, 6).unwrap();
        let r = run_script_with_programs(&lucky, 6, RuleVariant::PUSH_FROM_START, &s, Some(&p)).unwrap();
        prop_assert_eq!(r.outcome, Outcome::Won { turn: 1, deaths: 0 });
    }

    #[test]
    fn random_play_keeps_invariants(b in board(), n in 1usize..=6, picks in proptest::collection::vec(any::<u16>(), 1..40)) {
        let mut g = GameState::new(b.clone(), n, RuleVariant::DEFAULT);
        let census = b.census();
        let mut ev = Vec::new();
        for p in picks {
            if g.is_over() {
                break;
            }
            let ids: Vec<CharId> = g.living().map(|c| c.id).collect();
            let moves: Vec<ActionStep> =
                ids.iter().flat_map(|&id| Verb::ALL.map(|v| g.legal_steps(id, v))).flatten().collect();
            if moves.is_empty() {
                ev.clear();
                g.end_turn_in_place(&mut ev);
                continue;
            }
            let s = moves[p as usize % moves.len()];
            ev.clear();
            g.step_in_place(&s, &mut ev).unwrap();
            prop_assert_eq!(g.board.census(), census);
            prop_assert_eq!(g.board.kind_at(Coord::ORIGIN), Some(TileKind::Start));
            let placed = (0..n).filter(|&i| g.character(CharId::from_slot(i)).is_some()).count();
            prop_assert_eq!(placed, n);
            for c in g.living() {
                prop_assert!(c.position.is_some_and(|p| g.board.kind_at(p).is_some()));
            }
        }
    }
}

/// Moves `pivot` onto the standard pivot cell and the exit onto the standard
/// exit cell by swapping tiles, then views the board through `f`.
fn force(b: &BoardState, pivot: TileKind, f: Frame) -> BoardState {
    let mut t = b.clone();
    let swap = |t: &mut BoardState, k: TileKind, to: Coord| {
        let from = Coord::all()
            .find(|&c| c != PIVOT && c != EXIT && t.kind_at(c) == Some(k))
            .unwrap_or(to);
        let old = t.kind_at(to);
        t.set_kind(from, old);
        t.set_kind(to, Some(k));
    };
    let from_exit = t.find(TileKind::Exit).unwrap();
    let old = t.kind_at(EXIT);
    t.set_kind(from_exit, old);
    t.set_kind(EXIT, Some(TileKind::Exit));
    if t.kind_at(PIVOT) != Some(pivot) {
        if Coord::all().any(|c| c != PIVOT && c != EXIT && t.kind_at(c) == Some(pivot)) {
            swap(&mut t, pivot, PIVOT);
        } else {
            t.set_kind(PIVOT, Some(pivot));
        }
    }
    t.apply_frame(f)
}
