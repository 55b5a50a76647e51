//! Bounded exhaustive search for wins, with unknown rooms resolved either in
//! the players' favour (angelic) or by a fixed hostile policy (demonic).
//!
//! Both modes share the move generator; they differ only in which
//! identities an undecided room may take when it is first looked at or
//! entered.

mod search;

use alloc::vec::Vec;
use core::sync::atomic::AtomicU64;

use crate::board::BoardState;
use crate::engine::{
    replay_from, Event, GameState, MoveCause, Regime, Replay, ReplayError, RuleVariant,
};
use crate::geom::Coord;
use crate::notation::{ActionStep, ProgrammedTurn, Script, Verb};
use crate::openings::temeraire_program;
use crate::tile::{Color, Roster, TileKind};

use search::{in_cross, Node, Search};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Undecided rooms take whichever identity suits the players.
    Angelic,
    /// Undecided rooms are fixed by the hostile policy when first revealed.
    Demonic,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Goal {
    Win,
    /// A character got outside the start and its four neighbours, see
    /// [`Confinement`].
    Escape,
}

/// How the start's cross (the start and its four neighbours) is watched.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Confinement {
    Off,
    /// A line ends as an escape at its first step leaving a living
    /// character outside the cross.
    StopOnExit,
    /// A line escapes if a living character stood outside the cross and
    /// the line reaches the horizon without any death.
    Enforce,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum SearchError {
    #[error("node budget exhausted after {nodes} nodes")]
    HorizonTooLarge { nodes: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub mode: Mode,
    pub n: usize,
    /// Turns explored.
    pub horizon: u8,
    pub variant: RuleVariant,
    pub regime: Regime,
    pub roster: Roster,
    /// Starting board; `None` leaves every room but the start undecided.
    pub board: Option<BoardState>,
    /// Fixed programs, one per turn; turns without one are searched freely.
    pub programs: Option<Vec<ProgrammedTurn>>,
    pub confinement: Confinement,
    pub budget: u64,
    pub prune: bool,
    pub memo: bool,
    pub symmetry: bool,
    /// Failed positions kept before the table is flushed.
    pub memo_limit: usize,
    /// Stop after this many goal lines.
    pub max_certificates: usize,
}

pub const DEFAULT_BUDGET: u64 = 200_000_000;

impl SearchConfig {
    pub fn angelic(n: usize, horizon: u8) -> SearchConfig {
        SearchConfig {
            mode: Mode::Angelic,
            n,
            horizon,
            variant: RuleVariant::DEFAULT,
            regime: Regime::AllSurvive,
            roster: Roster::solo(),
            board: None,
            programs: None,
            confinement: Confinement::Off,
            budget: DEFAULT_BUDGET,
            prune: true,
            memo: true,
            symmetry: true,
            memo_limit: 4_000_000,
            max_certificates: 1,
        }
    }

    /// No win within one turn, nobody allowed to die.
    pub fn one_turn(n: usize) -> SearchConfig {
        SearchConfig::angelic(n, 1)
    }

    /// No win within one turn with exactly one death allowed.
    pub fn partial(n: usize) -> SearchConfig {
        SearchConfig {
            regime: Regime::Partial { max_deaths: 1 },
            ..SearchConfig::angelic(n, 1)
        }
    }

    /// The hostile policy on an unknown board.
    pub fn antagonistic(horizon: u8, n: usize) -> SearchConfig {
        SearchConfig {
            mode: Mode::Demonic,
            confinement: Confinement::Enforce,
            prune: false,
            ..SearchConfig::angelic(n, horizon)
        }
    }

    /// Six characters with the bold opening's program, pushes from the start
    /// allowed.
    pub fn bold_witness() -> SearchConfig {
        SearchConfig {
            variant: RuleVariant::PUSH_FROM_START,
            programs: Some(Vec::from([temeraire_program(6).expect("six characters")])),
            ..SearchConfig::angelic(6, 1)
        }
    }
}

/// A goal line together with a board on which it replays.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub board: BoardState,
    pub script: Script,
    pub goal: Goal,
    pub n: usize,
    pub variant: RuleVariant,
    pub regime: Regime,
}

impl Certificate {
    pub fn replay(&self) -> Result<Replay, ReplayError> {
        let g = GameState::new(self.board.clone(), self.n, self.variant).with_regime(self.regime);
        replay_from(g, &self.script, None)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    NoWin,
    WinFound(Certificate),
    /// No line wins, and every line that gets a character out of the start's
    /// cross has a death.
    ForcedLoss,
    Escaped(Certificate),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchReport {
    pub mode: Mode,
    pub horizon: u8,
    pub n: usize,
    pub variant: RuleVariant,
    pub regime: Regime,
    pub verdict: Verdict,
    pub nodes: u64,
    pub memo_hits: u64,
    pub pruned: u64,
    /// Lines that ended without reaching a goal.
    pub leaves: u64,
    /// Goal lines collected, at most `max_certificates`.
    pub certificates: Vec<Certificate>,
}

/// A first-level branch of the search, searchable on its own.
#[derive(Clone, Debug)]
pub struct Subtree {
    node: Node,
    prefix: Option<(u32, ActionStep)>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct PartStats {
    pub memo_hits: u64,
    pub pruned: u64,
    pub leaves: u64,
}

/// Partial result of one subtree.
#[derive(Clone, Debug, Default)]
pub struct PartReport {
    pub stats: PartStats,
    pub certificates: Vec<Certificate>,
}

/// Splits the search at its first decision.
pub fn split(cfg: &SearchConfig) -> Vec<Subtree> {
    let counter = AtomicU64::new(0);
    let mut s = Search::new(cfg, &counter);
    let root = s.root();
    s.split(&root)
        .into_iter()
        .map(|(node, prefix)| Subtree { node, prefix })
        .collect()
}

/// Searches one subtree; `counter` is shared by all workers for the budget.
pub fn search_subtree(
    cfg: &SearchConfig,
    t: &Subtree,
    counter: &AtomicU64,
) -> Result<PartReport, SearchError> {
    let mut s = Search::new(cfg, counter);
    s.with_prefix(t.prefix);
    s.enter_child(t.node.clone())?;
    Ok(PartReport {
        stats: PartStats {
            memo_hits: s.memo_hits,
            pruned: s.pruned,
            leaves: s.leaves,
        },
        certificates: s.certificates,
    })
}

/// Combines subtree results in subtree order.
pub fn merge(cfg: &SearchConfig, parts: Vec<PartReport>, nodes: u64) -> SearchReport {
    let mut certificates = Vec::new();
    let mut st = PartStats::default();
    for p in parts {
        st.memo_hits += p.stats.memo_hits;
        st.pruned += p.stats.pruned;
        st.leaves += p.stats.leaves;
        certificates.extend(p.certificates);
    }
    certificates.truncate(cfg.max_certificates);
    report(cfg, certificates, nodes, st)
}

fn report(
    cfg: &SearchConfig,
    certificates: Vec<Certificate>,
    nodes: u64,
    st: PartStats,
) -> SearchReport {
    let verdict = match certificates.first() {
        Some(c) if c.goal == Goal::Win => Verdict::WinFound(c.clone()),
        Some(c) => Verdict::Escaped(c.clone()),
        None if cfg.confinement != Confinement::Off => Verdict::ForcedLoss,
        None => Verdict::NoWin,
    };
    SearchReport {
        mode: cfg.mode,
        horizon: cfg.horizon,
        n: cfg.n,
        variant: cfg.variant,
        regime: cfg.regime,
        verdict,
        nodes,
        memo_hits: st.memo_hits,
        pruned: st.pruned,
        leaves: st.leaves,
        certificates,
    }
}

/// Runs a search on the current thread.
pub fn search(cfg: &SearchConfig) -> Result<SearchReport, SearchError> {
    let counter = AtomicU64::new(0);
    let mut s = Search::new(cfg, &counter);
    let root = s.root();
    s.visit(&root)?;
    let st = PartStats {
        memo_hits: s.memo_hits,
        pruned: s.pruned,
        leaves: s.leaves,
    };
    let nodes = counter.load(core::sync::atomic::Ordering::Relaxed);
    Ok(report(cfg, s.certificates, nodes, st))
}

pub fn verify_no_one_turn_win(n: usize, budget: u64) -> Result<SearchReport, SearchError> {
    search(&SearchConfig {
        budget,
        ..SearchConfig::one_turn(n)
    })
}

pub fn verify_no_partial_one_turn_win(n: usize, budget: u64) -> Result<SearchReport, SearchError> {
    search(&SearchConfig {
        budget,
        ..SearchConfig::partial(n)
    })
}

pub fn antagonistic_defense(
    horizon: u8,
    n: usize,
    budget: u64,
) -> Result<SearchReport, SearchError> {
    search(&SearchConfig {
        budget,
        ..SearchConfig::antagonistic(horizon, n)
    })
}

/// The cells a character can first reach outside the cross when the four
/// neighbours of the start hold Mortal `[1;0]`, Vortex `[0;1]` and Traps
/// `[-1;0]`, `[0;-1]`.
pub const GRAY_CELLS: [Coord; 5] = [
    Coord::at(-2, 0),
    Coord::at(-1, 1),
    Coord::at(-1, -1),
    Coord::at(0, -2),
    Coord::at(1, -1),
];

/// The hostile layout with the second Mortal on `GRAY_CELLS[mortal]`, every
/// other room outside the cross empty and the exit on `[2;1]`.
pub fn gray_board(mortal: usize) -> BoardState {
    BoardState::from_fn(|c| {
        Some(match (c.x(), c.y()) {
            (0, 0) => TileKind::Start,
            (1, 0) => TileKind::Mortal,
            (0, 1) => TileKind::Vortex,
            (-1, 0) | (0, -1) => TileKind::Trap,
            (2, 1) => TileKind::Exit,
            _ if c == GRAY_CELLS[mortal] => TileKind::Mortal,
            _ => TileKind::Empty,
        })
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RandomizedReport {
    pub horizon: u8,
    pub n: usize,
    /// Lines that leave the cross within the horizon.
    pub escaping_lines: usize,
    /// Fewest boards, out of `GRAY_CELLS.len()`, on which an escaping line
    /// loses. `None` when no line escapes.
    pub min_losses: Option<usize>,
    /// Whether every escaping line sees the same events on all boards
    /// before its last step.
    pub indistinguishable: bool,
    pub nodes: u64,
}

/// Enumerates every line up to its first step outside the cross and replays
/// it against each placement of the second Mortal.
pub fn randomized_defense(
    horizon: u8,
    n: usize,
    budget: u64,
) -> Result<RandomizedReport, SearchError> {
    let cfg = SearchConfig {
        board: Some(gray_board(0)),
        confinement: Confinement::StopOnExit,
        max_certificates: usize::MAX,
        budget,
        ..SearchConfig::antagonistic(horizon, n)
    };
    let report = search(&cfg)?;
    let mut min_losses: Option<usize> = None;
    let mut indistinguishable = true;
    let mut escaping = 0;
    for cert in report
        .certificates
        .iter()
        .filter(|c| c.goal == Goal::Escape)
    {
        escaping += 1;
        let mut losses = 0;
        let mut reference: Option<Vec<Event>> = None;
        for m in 0..GRAY_CELLS.len() {
            let c = Certificate {
                board: gray_board(m),
                ..cert.clone()
            };
            let r = c.replay().expect("lines replay on every placement");
            if r.events
                .iter()
                .any(|e| matches!(e.event, Event::Death { .. }))
            {
                losses += 1;
            }
            let last = (
                cert.script.turns.len() as u32,
                cert.script.turns.last().map_or(0, |t| t.steps.len()),
            );
            let before: Vec<Event> = r
                .events
                .iter()
                .filter(|e| (e.turn, e.step.unwrap_or(usize::MAX)) < last)
                .map(|e| e.event)
                .collect();
            match &reference {
                None => reference = Some(before),
                Some(r0) => indistinguishable &= *r0 == before,
            }
        }
        min_losses = Some(min_losses.map_or(losses, |m| m.min(losses)));
    }
    Ok(RandomizedReport {
        horizon,
        n,
        escaping_lines: escaping,
        min_losses,
        indistinguishable,
        nodes: report.nodes,
    })
}

/// Facts about a winning line used to check the structural lemmas.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    /// Characters that reached a non-blue room, as a bit set by slot.
    pub pi: u8,
    /// The last member of `pi` to reach the exit walked in.
    pub last_entry_walked: bool,
    /// Some member of `pi` moved at least twice.
    pub someone_moved_twice: bool,
}

pub fn lemma_check(cert: &Certificate) -> Result<LemmaCheck, ReplayError> {
    let replay = cert.replay()?;
    let mut board = cert.board.clone();
    let mut pi = 0u8;
    let mut exit_entries = Vec::new();
    for e in &replay.events {
        match e.event {
            Event::CharacterMoved { who, to, cause, .. } if cause != MoveCause::Carried => {
                match board.kind_at(to) {
                    Some(k) if k.color() != Color::Blue => pi |= 1 << who.slot(),
                    Some(TileKind::Exit) => exit_entries.push((who, cause)),
                    _ => {}
                }
            }
            Event::LineShifted { shift, .. } => board.apply_shift(shift),
            _ => {}
        }
    }
    let last_entry_walked = exit_entries
        .iter()
        .rev()
        .find(|(who, _)| pi & 1 << who.slot() != 0)
        .is_none_or(|(_, cause)| *cause == MoveCause::Walk);
    let mut moves = [0u8; 8];
    for s in cert.script.turns.iter().flat_map(|t| &t.steps) {
        if s.verb() == Verb::Move {
            moves[s.actor.slot()] += 1;
        }
    }
    let someone_moved_twice = (0..8).any(|i| pi & 1 << i != 0 && moves[i] >= 2);
    Ok(LemmaCheck {
        pi,
        last_entry_walked,
        someone_moved_twice,
    })
}

/// Whether a cell is the start or one of its four neighbours.
pub fn in_start_cross(c: Coord) -> bool {
    in_cross(c)
}

#[cfg(test)]
mod tests;
