use proptest::prelude::*;

use room25_core::prob::{
    enumerate_oracle, p_t_loss_bound, p_t_lucky, p_v_loss_bound, p_v_lucky, p_v_lucky_no_dark,
    CategoryCounts, LuckEvent, Rational,
};
use room25_core::{Roster, TileKind};

type Closed = fn(&CategoryCounts) -> Result<Rational, room25_core::prob::ProbError>;

fn check(c: &CategoryCounts) -> Result<(), TestCaseError> {
    let pairs: [(LuckEvent, Closed); 5] = [
        (LuckEvent::VLucky, p_v_lucky),
        (LuckEvent::VLuckyNoDark, p_v_lucky_no_dark),
        (LuckEvent::VLoss, p_v_loss_bound),
        (LuckEvent::TLucky, p_t_lucky),
        (LuckEvent::TLossCore, p_t_loss_bound),
    ];
    for (e, closed) in pairs {
        let o: Rational = enumerate_oracle(c, e).unwrap();
        prop_assert_eq!(o, closed(c).unwrap(), "{:?} on {:?}", e, c);
    }
    Ok(())
}

/// A roster of 23 non-blue rooms with at least one control room.
fn roster() -> impl Strategy<Value = Roster> {
    let kinds: Vec<TileKind> = TileKind::ALL
        .into_iter()
        .filter(|k| k.color() != room25_core::Color::Blue)
        .collect();
    proptest::collection::vec(proptest::sample::select(kinds), 22).prop_map(|tiles| {
        let mut r = Roster::empty();
        r.set(TileKind::Control, 1);
        for t in tiles {
            r.set(t, r.count(t) + 1);
        }
        r
    })
}

#[test]
fn oracle_matches_on_the_solo_roster() {
    check(&CategoryCounts::default()).unwrap();
}

#[test]
fn oracle_matches_on_hand_picked_rosters() {
    let base = Roster::solo();
    let swaps = [
        (TileKind::Empty, TileKind::Mortal),
        (TileKind::Dark, TileKind::YellowOther),
        (TileKind::Mortal, TileKind::Empty),
        (TileKind::Trap, TileKind::Tunnel),
        (TileKind::RedOther, TileKind::Dark),
        (TileKind::YellowOther, TileKind::Acid),
        (TileKind::Tunnel, TileKind::Flood),
        (TileKind::Machine, TileKind::Vortex),
        (TileKind::Flood, TileKind::Machine),
        (TileKind::Acid, TileKind::Trap),
        (TileKind::Vortex, TileKind::Empty),
        (TileKind::Empty, TileKind::Dark),
    ];
    for (from, to) in swaps {
        let mut r = base;
        r.set(from, r.count(from) - 1);
        r.set(to, r.count(to) + 1);
        r.validate().unwrap();
        let c = CategoryCounts::from_roster(&r);
        assert_ne!(c, CategoryCounts::default(), "{from:?} -> {to:?}");
        check(&c).unwrap();
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn oracle_matches_on_random_rosters(r in roster()) {
        check(&CategoryCounts::from_roster(&r))?;
    }
}
