use super::*;
use crate::engine::Outcome;
use crate::notation::parse_script;

fn run(cfg: SearchConfig) -> SearchReport {
    search(&SearchConfig {
        budget: 100_000_000,
        ..cfg
    })
    .unwrap()
}

fn win(r: &SearchReport) -> &Certificate {
    match &r.verdict {
        Verdict::WinFound(c) => c,
        v => panic!("expected a win, got {v:?}"),
    }
}

#[test]
fn no_win_in_one_turn() {
    for n in 1..=3 {
        assert_eq!(
            run(SearchConfig::one_turn(n)).verdict,
            Verdict::NoWin,
            "n = {n}"
        );
    }
}

#[test]
fn no_partial_win_in_one_turn() {
    for n in 2..=3 {
        assert_eq!(
            run(SearchConfig::partial(n)).verdict,
            Verdict::NoWin,
            "n = {n}"
        );
    }
}

#[test]
fn shift_granting_mortal_rooms_are_not_enough() {
    let cfg = SearchConfig {
        variant: RuleVariant::FREE_KILL,
        ..SearchConfig::partial(2)
    };
    assert_eq!(run(cfg).verdict, Verdict::NoWin);
}

#[test]
fn partial_win_appears_with_pushes_from_start() {
    for variant in [
        RuleVariant::PUSH_FROM_START,
        RuleVariant {
            push_from_start_allowed: true,
            ..RuleVariant::FREE_KILL
        },
    ] {
        let r = run(SearchConfig {
            variant,
            ..SearchConfig::partial(2)
        });
        let c = win(&r);
        let replay = c.replay().unwrap();
        assert_eq!(
            replay.outcome,
            Outcome::Won { turn: 1, deaths: 1 },
            "{}",
            c.script
        );
    }
}

#[test]
fn two_turns_suffice_for_one_character() {
    let r = run(SearchConfig::angelic(1, 2));
    let c = win(&r);
    assert!(
        matches!(c.replay().unwrap().outcome, Outcome::Won { turn: 2, .. }),
        "{}",
        c.script
    );
}

#[test]
fn every_two_turn_solo_win_satisfies_both_lemmas() {
    let r = run(SearchConfig {
        max_certificates: usize::MAX,
        ..SearchConfig::angelic(1, 2)
    });
    assert_eq!(r.certificates.len(), 512);
    for c in &r.certificates {
        assert!(matches!(
            c.replay().unwrap().outcome,
            Outcome::Won { turn: 2, .. }
        ));
        let l = lemma_check(c).unwrap();
        assert_eq!(l.pi, 1);
        assert!(l.last_entry_walked && l.someone_moved_twice, "{}", c.script);
    }
}

#[test]
fn caching_pruning_and_symmetry_do_not_change_results() {
    let base = SearchConfig {
        max_certificates: usize::MAX,
        ..SearchConfig::angelic(1, 2)
    };
    let reference = run(SearchConfig {
        memo: false,
        prune: false,
        symmetry: false,
        ..base.clone()
    });
    for (memo, prune, symmetry) in [
        (true, false, false),
        (true, false, true),
        (false, true, false),
        (true, true, true),
    ] {
        let r = run(SearchConfig {
            memo,
            prune,
            symmetry,
            ..base.clone()
        });
        assert_eq!(
            r.certificates.len(),
            reference.certificates.len(),
            "{memo} {prune} {symmetry}"
        );
    }
    for memo in [false, true] {
        let r = run(SearchConfig {
            memo,
            ..SearchConfig::one_turn(1)
        });
        assert_eq!(r.verdict, Verdict::NoWin);
    }
}

#[test]
fn bold_opening_wins_with_pushes_from_start() {
    let r = run(SearchConfig::bold_witness());
    let c = win(&r);
    assert_eq!(
        c.replay().unwrap().outcome,
        Outcome::Won { turn: 1, deaths: 0 }
    );
    let l = lemma_check(c).unwrap();
    assert!(l.last_entry_walked);
}

#[test]
fn bold_program_cannot_win_under_default_rules() {
    let cfg = SearchConfig {
        variant: RuleVariant::DEFAULT,
        ..SearchConfig::bold_witness()
    };
    assert_eq!(run(cfg).verdict, Verdict::NoWin);
}

#[test]
fn hostile_rooms_force_a_loss() {
    for (t, n) in [(3, 1), (2, 2), (4, 1)] {
        let r = run(SearchConfig::antagonistic(t, n));
        assert_eq!(r.verdict, Verdict::ForcedLoss, "T = {t}, n = {n}");
        assert!(r.leaves > 0);
    }
}

#[test]
fn random_second_mortal_loses_one_time_in_five() {
    let r = randomized_defense(3, 1, 100_000_000).unwrap();
    assert!(r.escaping_lines > 0);
    assert_eq!(r.min_losses, Some(1));
    assert!(r.indistinguishable);
}

#[test]
fn escapes_are_reported() {
    // With the cross fully known and harmless, stepping out is easy.
    let board = BoardState::from_fn(|c| {
        Some(match (c.x(), c.y()) {
            (0, 0) => TileKind::Start,
            (2, 2) => TileKind::Exit,
            _ => TileKind::Empty,
        })
    });
    let r = run(SearchConfig {
        board: Some(board),
        ..SearchConfig::antagonistic(1, 1)
    });
    assert!(matches!(r.verdict, Verdict::Escaped(_)), "{:?}", r.verdict);
}

#[test]
fn budget_is_enforced() {
    let r = search(&SearchConfig {
        budget: 100,
        ..SearchConfig::partial(3)
    });
    assert!(matches!(r, Err(SearchError::HorizonTooLarge { .. })));
}

#[test]
fn split_search_matches_sequential() {
    let cfg = SearchConfig {
        max_certificates: usize::MAX,
        ..SearchConfig::angelic(1, 2)
    };
    let counter = AtomicU64::new(0);
    let parts: Vec<PartReport> = split(&cfg)
        .iter()
        .map(|t| search_subtree(&cfg, t, &counter).unwrap())
        .collect();
    let merged = merge(&cfg, parts, counter.into_inner());
    assert_eq!(merged.certificates.len(), 512);
    assert!(matches!(merged.verdict, Verdict::WinFound(_)));
    let r = {
        let cfg = SearchConfig::partial(2);
        let counter = AtomicU64::new(0);
        let parts = split(&cfg)
            .iter()
            .map(|t| search_subtree(&cfg, t, &counter).unwrap())
            .collect();
        merge(&cfg, parts, counter.into_inner())
    };
    assert_eq!(r.verdict, Verdict::NoWin);
}

#[test]
fn lemma_check_sees_pushes() {
    let board = BoardState::from_fn(|c| {
        Some(match (c.x(), c.y()) {
            (0, 0) => TileKind::Start,
            (1, 0) => TileKind::Machine,
            (2, 1) => TileKind::Exit,
            (1, -1) => TileKind::Mortal,
            _ => TileKind::Empty,
        })
    });
    let script = parse_script("1: 1P2[1;0]^[1;] | 2D[2;1] | 1D[1;0] | 2C>[;1]").unwrap();
    let c = Certificate {
        board,
        script,
        goal: Goal::Win,
        n: 2,
        variant: RuleVariant::PUSH_FROM_START,
        regime: Regime::Partial { max_deaths: 1 },
    };
    assert_eq!(
        c.replay().unwrap().outcome,
        Outcome::Won { turn: 1, deaths: 1 }
    );
    let l = lemma_check(&c).unwrap();
    assert_eq!(l.pi, 0b11);
    assert!(l.last_entry_walked);
    assert!(!l.someone_moved_twice);
}
