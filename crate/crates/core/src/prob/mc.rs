//! Monte Carlo over random boards, played through the rules engine.
//!
//! Trials are grouped in batches of [`BATCH_SIZE`]; batch `b` draws from the
//! ChaCha8 stream `b` of the given seed, so results do not depend on how
//! batches are spread over threads.

use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::board::BoardState;
use crate::engine::{GameState, Outcome, RuleVariant};
use crate::geom::{Coord, Frame, EXIT_CELLS, START_NEIGHBORS};
use crate::notation::{Action, ActionStep, CharId, Verb};
use crate::openings::{canned_script, frame_choice, LuckWitness, Opening, EXIT};
use crate::tile::{Roster, TileKind};

pub const BATCH_SIZE: u64 = 10_000;

/// Characters used by the simulated openings.
const PARTY: usize = 6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TrialOutcome {
    /// Won as early as the opening allows.
    OptimalWin,
    /// Someone died during the first turn.
    InstantLoss,
    /// Someone died while the fast opening pressed on blindly in turn 2.
    SecondTurnLoss,
    /// The opening stopped with everyone alive and no win.
    Other,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct McTally {
    pub trials: u64,
    pub optimal_win: u64,
    pub instant_loss: u64,
    pub second_turn_loss: u64,
    pub other: u64,
}

impl McTally {
    pub fn record(&mut self, o: TrialOutcome) {
        self.trials += 1;
        match o {
            TrialOutcome::OptimalWin => self.optimal_win += 1,
            TrialOutcome::InstantLoss => self.instant_loss += 1,
            TrialOutcome::SecondTurnLoss => self.second_turn_loss += 1,
            TrialOutcome::Other => self.other += 1,
        }
    }

    pub fn merge(mut self, o: McTally) -> McTally {
        self.trials += o.trials;
        self.optimal_win += o.optimal_win;
        self.instant_loss += o.instant_loss;
        self.second_turn_loss += o.second_turn_loss;
        self.other += o.other;
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McReport {
    pub opening: Opening,
    pub seed: u64,
    pub tally: McTally,
    pub win_rate: f64,
    /// Variance of `win_rate` as an estimator, from the observed rate.
    pub win_variance: f64,
    pub instant_loss_rate: f64,
    pub instant_loss_variance: f64,
}

impl McReport {
    pub fn from_tally(opening: Opening, seed: u64, tally: McTally) -> McReport {
        let n = tally.trials.max(1) as f64;
        let w = tally.optimal_win as f64 / n;
        let l = tally.instant_loss as f64 / n;
        McReport {
            opening,
            seed,
            tally,
            win_rate: w,
            win_variance: w * (1.0 - w) / n,
            instant_loss_rate: l,
            instant_loss_variance: l * (1.0 - l) / n,
        }
    }
}

/// A uniformly random starting board: the exit on one of its 12 cells, the
/// roster shuffled into the other 23 face-down slots.
pub fn sample_board<R: Rng + ?Sized>(roster: &Roster, rng: &mut R) -> BoardState {
    let exit = EXIT_CELLS[rng.random_range(0..EXIT_CELLS.len())];
    let mut tiles = roster.tiles();
    tiles.shuffle(rng);
    let mut it = tiles.into_iter();
    BoardState::from_fn(|c| {
        if c == Coord::ORIGIN {
            Some(TileKind::Start)
        } else if c == exit {
            Some(TileKind::Exit)
        } else {
            it.next()
        }
    })
}

fn who(i: usize) -> CharId {
    CharId::from_slot(i - 1)
}

/// Applies a step if legal, adding a rider when the destination needs one.
fn attempt(g: &mut GameState, mut s: ActionStep, ev: &mut Vec<crate::engine::Event>) -> bool {
    if g.is_over() {
        return false;
    }
    if let Action::Move { to, .. } | Action::Push { to, .. } = s.action {
        let needs = g
            .board
            .kind_at(to)
            .is_some_and(|k| g.variant.grants_shift(k));
        if needs && s.action.rider().is_none() {
            let r = g.legal_riders().next();
            s.action = s.action.with_rider(r);
        } else if !needs {
            s.action = s.action.with_rider(None);
        }
    }
    ev.clear();
    g.step_in_place(&s, ev).is_ok()
}

/// Performs the first legal parameterisation of a verb, if any.
fn first_legal(g: &mut GameState, id: CharId, verb: Verb, ev: &mut Vec<crate::engine::Event>) {
    if let Some(s) = g.candidates(id, verb).into_iter().next() {
        attempt(g, s, ev);
    }
}

/// Preference when no neighbour can serve as a pivot.
fn refuge_rank(k: TileKind) -> u8 {
    match k {
        TileKind::Control => 0,
        TileKind::YellowOther => 1,
        TileKind::Vortex => 2,
        TileKind::Flood => 3,
        TileKind::Trap => 4,
        TileKind::Acid => 5,
        _ => 6,
    }
}

fn veloce_trial(board: &BoardState) -> TrialOutcome {
    let mut g = GameState::new(board.clone(), PARTY, RuleVariant::DEFAULT);
    let mut ev = Vec::new();
    // The first four characters look at the four neighbours before anyone
    // moves, so the choice below uses only what they saw.
    let seen = BoardState::from_fn(|c| {
        if START_NEIGHBORS.contains(&c) || c == Coord::ORIGIN {
            board.kind_at(c)
        } else {
            Some(TileKind::YellowOther)
        }
    });
    let Some(w) = frame_choice(&seen, TileKind::is_valid_pivot) else {
        return refuge(&mut g, &mut ev);
    };
    let script = canned_script(Opening::Veloce, w, PARTY).expect("six characters");
    for s in &script.turns[0].steps {
        attempt(&mut g, *s, &mut ev);
    }
    if g.is_over() {
        return classify(&g, 1);
    }
    let exit_cell = w.frame.inverse().apply(EXIT);
    let exit_seen = board.kind_at(exit_cell) == Some(TileKind::Exit);
    if w.pivot != TileKind::Dark && !exit_seen {
        return TrialOutcome::Other;
    }
    g.end_turn_in_place(&mut ev);
    for s in &script.turns[1].steps {
        attempt(&mut g, *s, &mut ev);
    }
    classify(&g, 2)
}

fn refuge(g: &mut GameState, ev: &mut Vec<crate::engine::Event>) -> TrialOutcome {
    let y = *START_NEIGHBORS
        .iter()
        .min_by_key(|&&c| refuge_rank(g.board.kind_at(c).expect("sampled boards are known")))
        .expect("four neighbours");
    let go = |i| ActionStep::new(who(i), Action::Move { to: y, rider: None });
    for (i, &n) in START_NEIGHBORS.iter().enumerate() {
        attempt(g, ActionStep::new(who(i + 1), Action::Look { at: n }), ev);
    }
    attempt(g, go(5), ev);
    attempt(g, go(6), ev);
    for i in 1..=4 {
        attempt(g, go(i), ev);
    }
    first_legal(g, who(5), Verb::Control, ev);
    first_legal(g, who(6), Verb::Look, ev);
    classify(g, 1)
}

fn classify(g: &GameState, turn: u32) -> TrialOutcome {
    match g.outcome {
        Outcome::Won { .. } => TrialOutcome::OptimalWin,
        Outcome::Lost { turn: 1, .. } => TrialOutcome::InstantLoss,
        Outcome::Lost { .. } => TrialOutcome::SecondTurnLoss,
        Outcome::InProgress if turn == 1 => TrialOutcome::Other,
        Outcome::InProgress => TrialOutcome::Other,
    }
}

fn temeraire_trial(board: &BoardState) -> TrialOutcome {
    let mut g = GameState::new(board.clone(), PARTY, RuleVariant::PUSH_FROM_START);
    let mut ev = Vec::new();
    let pivot = board
        .kind_at(crate::openings::PIVOT)
        .expect("sampled boards are known");
    let w = LuckWitness {
        frame: Frame::IDENTITY,
        pivot,
    };
    let script = canned_script(Opening::Temeraire, w, PARTY).expect("six characters");
    for s in &script.turns[0].steps {
        attempt(&mut g, *s, &mut ev);
    }
    classify(&g, 1)
}

/// Plays one opening on one fully known board.
pub fn run_trial(opening: Opening, board: &BoardState) -> TrialOutcome {
    match opening {
        Opening::Veloce => veloce_trial(board),
        Opening::Temeraire => temeraire_trial(board),
    }
}

/// Runs `trials` trials from stream `batch` of `seed`.
pub fn run_batch(opening: Opening, roster: &Roster, seed: u64, batch: u64, trials: u64) -> McTally {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    let mut t = McTally::default();
    for _ in 0..trials {
        let b = sample_board(roster, &mut rng);
        t.record(run_trial(opening, &b));
    }
    t
}

/// Batch sizes covering `trials`, all full except possibly the last.
pub fn batches(trials: u64) -> impl Iterator<Item = (u64, u64)> {
    let full = trials / BATCH_SIZE;
    let rest = trials % BATCH_SIZE;
    (0..full)
        .map(|b| (b, BATCH_SIZE))
        .chain((rest > 0).then_some((full, rest)))
}

/// Single-threaded Monte Carlo; identical to any parallel run over [`batches`].
pub fn monte_carlo(opening: Opening, roster: &Roster, trials: u64, seed: u64) -> McReport {
    let tally = batches(trials)
        .map(|(b, n)| run_batch(opening, roster, seed, b, n))
        .fold(McTally::default(), McTally::merge);
    McReport::from_tally(opening, seed, tally)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_boards_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let b = sample_board(&Roster::solo(), &mut rng);
            b.validate_initial().unwrap();
            assert!(b.is_fully_known());
            let census = b.census();
            for (k, n) in Roster::solo().iter() {
                assert_eq!(census[k.index()], n);
            }
        }
    }

    #[test]
    fn lucky_boards_win() {
        let b = BoardState::from_fn(|c| {
            Some(match (c.x(), c.y()) {
                (0, 0) => TileKind::Start,
                (1, 0) => TileKind::Tunnel,
                (2, 1) => TileKind::Exit,
                (1, 1) => TileKind::Control,
                _ => TileKind::Mortal,
            })
        });
        assert_eq!(run_trial(Opening::Veloce, &b), TrialOutcome::OptimalWin);
        let mut t = b.clone();
        t.set_kind(Coord::at(1, 0), Some(TileKind::Control));
        t.set_kind(Coord::at(1, 1), Some(TileKind::Empty));
        t.set_kind(Coord::at(0, 1), Some(TileKind::Empty));
        t.set_kind(Coord::at(-2, 1), Some(TileKind::Empty));
        t.set_kind(Coord::at(-1, 1), Some(TileKind::Empty));
        assert_eq!(run_trial(Opening::Temeraire, &t), TrialOutcome::OptimalWin);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = monte_carlo(Opening::Veloce, &Roster::solo(), 2_500, 11);
        let b = monte_carlo(Opening::Veloce, &Roster::solo(), 2_500, 11);
        assert_eq!(a.tally, b.tally);
        assert_eq!(a.tally.trials, 2_500);
    }

    #[test]
    fn batches_cover() {
        let v: Vec<_> = batches(25_000).collect();
        assert_eq!(v, [(0, 10_000), (1, 10_000), (2, 5_000)]);
    }
}
