//! Depth-first search over turns, programs, parameters and room identities.

use alloc::boxed::Box;
use alloc::vec::Vec;
use core::sync::atomic::{AtomicU64, Ordering};

use hashbrown::HashSet;

use super::{Certificate, Confinement, Goal, Mode, SearchConfig, SearchError};
use crate::board::BoardState;
use crate::engine::{Event, GameState, Regime, RuleVariant, MAX_CHARACTERS};
use crate::geom::{
    is_exit_cell, Coord, Frame, Shift, EXIT_CELLS, SHIFTABLE_LINES, START_NEIGHBORS,
};
use crate::notation::{Action, ActionStep, CharId, ProgrammedTurn, Script, Turn, Verb};
use crate::tile::TileKind;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Plan {
    /// Nothing decided yet this turn.
    Pending,
    /// First of two actions settled (performed, or impossible and skipped).
    Acted(Verb),
    /// A single action kept for the second pass.
    Deferred,
    Done,
}

impl Plan {
    fn code(self) -> u8 {
        match self {
            Plan::Pending => 0,
            Plan::Acted(v) => 1 + v as u8,
            Plan::Deferred => 5,
            Plan::Done => 6,
        }
    }
}

#[derive(Clone, Debug)]
pub(crate) struct Node {
    pub g: GameState,
    pub plans: [Plan; MAX_CHARACTERS],
    pub pass: u8,
    pub seat: u8,
    pub turns_left: u8,
    /// Reveals next to the start so far, for the fixed adversary.
    pub adv: u8,
    /// Some living character has stood outside the start's cross.
    pub escaped: bool,
}

/// A child of a decision: optional room identity fixed first, then the step.
#[derive(Clone, Copy, Debug)]
struct Choice {
    assign: Option<(Coord, TileKind)>,
    step: Option<ActionStep>,
    plan: Plan,
}

pub(crate) fn in_cross(c: Coord) -> bool {
    c == Coord::ORIGIN || START_NEIGHBORS.contains(&c)
}

/// Kinds grouped by identical behaviour under the rules.
fn class_code(k: TileKind, v: RuleVariant) -> u8 {
    match k {
        TileKind::Empty | TileKind::Tunnel | TileKind::YellowOther => TileKind::Empty as u8,
        TileKind::RedOther if !v.free_kill => TileKind::Mortal as u8,
        k => k as u8,
    }
}

fn classes(v: RuleVariant) -> Vec<&'static [TileKind]> {
    let mut c: Vec<&'static [TileKind]> = Vec::from([
        &[TileKind::Empty, TileKind::Tunnel, TileKind::YellowOther][..],
        &[TileKind::Dark],
        &[TileKind::Machine],
        &[TileKind::Control],
        &[TileKind::Vortex],
        &[TileKind::Trap],
        &[TileKind::Acid],
        &[TileKind::Flood],
    ]);
    if v.free_kill {
        c.push(&[TileKind::Mortal]);
        c.push(&[TileKind::RedOther]);
    } else {
        c.push(&[TileKind::Mortal, TileKind::RedOther]);
    }
    c
}

const HOSTILE_NEIGHBORS: [TileKind; 4] = [
    TileKind::Mortal,
    TileKind::Vortex,
    TileKind::Trap,
    TileKind::Trap,
];

const KILL_FIRST: [TileKind; 12] = [
    TileKind::Mortal,
    TileKind::RedOther,
    TileKind::Trap,
    TileKind::Flood,
    TileKind::Acid,
    TileKind::Vortex,
    TileKind::Dark,
    TileKind::Empty,
    TileKind::Tunnel,
    TileKind::YellowOther,
    TileKind::Machine,
    TileKind::Control,
];

const LOOK_ORDER: [TileKind; 12] = [
    TileKind::RedOther,
    TileKind::Trap,
    TileKind::Flood,
    TileKind::Acid,
    TileKind::Vortex,
    TileKind::Dark,
    TileKind::Empty,
    TileKind::Tunnel,
    TileKind::YellowOther,
    TileKind::Machine,
    TileKind::Control,
    TileKind::Mortal,
];

pub(crate) struct Search<'a> {
    cfg: &'a SearchConfig,
    pool: [u8; 14],
    h: [u8; 25],
    counter: &'a AtomicU64,
    memo: HashSet<Box<[u8]>>,
    ev: Vec<Event>,
    path: Vec<(u32, ActionStep)>,
    pub certificates: Vec<Certificate>,
    pub memo_hits: u64,
    pub pruned: u64,
    pub leaves: u64,
    pub goals: u64,
}

/// Shifts needed before a tile at each cell can leave the board, the final
/// slide included. The origin never moves.
fn slide_distances() -> [u8; 25] {
    let mut h = [u8::MAX; 25];
    for s in Shift::all() {
        h[s.leading_cell().index()] = 1;
    }
    for _ in 0..25 {
        for c in Coord::all() {
            for s in Shift::all().filter(|s| s.line().contains(c)) {
                let (dx, dy) = s.dir().delta();
                let wrap = |v: i8| (v + 2).rem_euclid(5) - 2;
                let next = Coord::at(wrap(c.x() + dx), wrap(c.y() + dy));
                let via = h[next.index()].saturating_add(1);
                if via < h[c.index()] {
                    h[c.index()] = via;
                }
            }
        }
    }
    h
}

impl<'a> Search<'a> {
    pub fn new(cfg: &'a SearchConfig, counter: &'a AtomicU64) -> Search<'a> {
        let mut pool = [0u8; 14];
        for (k, n) in cfg.roster.iter() {
            pool[k.index()] = n;
        }
        pool[TileKind::Exit.index()] = 1;
        Search {
            cfg,
            pool,
            h: slide_distances(),
            counter,
            memo: HashSet::new(),
            ev: Vec::new(),
            path: Vec::new(),
            certificates: Vec::new(),
            memo_hits: 0,
            pruned: 0,
            leaves: 0,
            goals: 0,
        }
    }

    pub fn root(&self) -> Node {
        let board = self.cfg.board.clone().unwrap_or_else(BoardState::unknown);
        let g = GameState::new(board, self.cfg.n, self.cfg.variant).with_regime(self.cfg.regime);
        let mut node = Node {
            g,
            plans: [Plan::Pending; MAX_CHARACTERS],
            pass: 0,
            seat: 0,
            turns_left: self.cfg.horizon,
            adv: 0,
            escaped: false,
        };
        let mut ev = Vec::new();
        settle(&mut node, &mut ev);
        node
    }

    fn remaining(&self, b: &BoardState) -> [u8; 14] {
        let census = b.census();
        core::array::from_fn(|i| self.pool[i].saturating_sub(census[i]))
    }

    fn undecided_exit_homes(b: &BoardState) -> usize {
        b.slots()
            .filter(|(_, s)| s.kind.is_none() && is_exit_cell(s.home))
            .count()
    }

    /// Identities the search may give a room the moment it is entered.
    fn on_entry(&self, node: &Node, at: Coord) -> Vec<TileKind> {
        let b = &node.g.board;
        let rem = self.remaining(b);
        let home = b.slot(at).home;
        let exit_open = rem[TileKind::Exit.index()] > 0;
        let forced = exit_open && is_exit_cell(home) && Self::undecided_exit_homes(b) == 1;
        match self.cfg.mode {
            Mode::Angelic => {
                let mut out = Vec::new();
                if exit_open && is_exit_cell(home) {
                    out.push(TileKind::Exit);
                }
                if !forced {
                    for class in classes(self.cfg.variant) {
                        if let Some(&k) = class.iter().find(|k| rem[k.index()] > 0) {
                            out.push(k);
                        }
                    }
                }
                out
            }
            Mode::Demonic => Vec::from([self.adversary(node, at, &rem, forced, &KILL_FIRST)]),
        }
    }

    fn on_look(&self, node: &Node, at: Coord) -> Option<TileKind> {
        match self.cfg.mode {
            Mode::Angelic => None,
            Mode::Demonic => {
                let b = &node.g.board;
                let rem = self.remaining(b);
                let forced = rem[TileKind::Exit.index()] > 0
                    && is_exit_cell(b.slot(at).home)
                    && Self::undecided_exit_homes(b) == 1;
                Some(self.adversary(node, at, &rem, forced, &LOOK_ORDER))
            }
        }
    }

    fn adversary(
        &self,
        node: &Node,
        at: Coord,
        rem: &[u8; 14],
        forced: bool,
        order: &[TileKind],
    ) -> TileKind {
        if forced {
            return TileKind::Exit;
        }
        if START_NEIGHBORS.contains(&at) && (node.adv as usize) < HOSTILE_NEIGHBORS.len() {
            let k = HOSTILE_NEIGHBORS[node.adv as usize];
            if rem[k.index()] > 0 {
                return k;
            }
        }
        order
            .iter()
            .copied()
            .find(|k| rem[k.index()] > 0)
            .unwrap_or(TileKind::Exit)
    }

    fn program(&self, turn: u32) -> Option<&'a ProgrammedTurn> {
        self.cfg.programs.as_ref()?.iter().find(|p| p.turn == turn)
    }

    /// Fully parameterised steps for a verb, each with the room identity it
    /// needs fixed first.
    fn expand(
        &self,
        node: &Node,
        who: CharId,
        verb: Verb,
        out: &mut Vec<(Option<(Coord, TileKind)>, ActionStep)>,
    ) {
        let g = &node.g;
        for s in g.candidates(who, verb) {
            match s.action {
                Action::Look { at } => {
                    let a = if g.board.kind_at(at).is_none() {
                        self.on_look(node, at).map(|k| (at, k))
                    } else {
                        None
                    };
                    out.push((a, s));
                }
                Action::Move { to, .. } | Action::Push { to, .. } => {
                    let kinds: Vec<(Option<(Coord, TileKind)>, TileKind)> =
                        match g.board.kind_at(to) {
                            Some(k) => Vec::from([(None, k)]),
                            None => self
                                .on_entry(node, to)
                                .into_iter()
                                .map(|k| (Some((to, k)), k))
                                .collect(),
                        };
                    for (a, k) in kinds {
                        if g.variant.grants_shift(k) {
                            for r in g.legal_riders() {
                                out.push((
                                    a,
                                    ActionStep {
                                        action: s.action.with_rider(Some(r)),
                                        ..s
                                    },
                                ));
                            }
                        } else {
                            out.push((a, s));
                        }
                    }
                }
                Action::Control { .. } => out.push((None, s)),
            }
        }
    }

    fn choices(&self, node: &Node, who: CharId) -> Vec<Choice> {
        let mut out = Vec::new();
        let mut steps = Vec::new();
        let plan = node.plans[who.slot()];
        let fixed = self
            .program(node.g.turn)
            .map(|p| p.verbs_of(who).unwrap_or(&[]));
        let push = |out: &mut Vec<Choice>, a, s, plan| {
            out.push(Choice {
                assign: a,
                step: s,
                plan,
            })
        };
        let skip = |out: &mut Vec<Choice>, plan| {
            out.push(Choice {
                assign: None,
                step: None,
                plan,
            })
        };
        match (node.pass, plan, fixed) {
            (0, Plan::Pending, None) => {
                skip(&mut out, Plan::Deferred);
                let mut any_impossible = false;
                for v in Verb::ALL {
                    steps.clear();
                    self.expand(node, who, v, &mut steps);
                    if steps.is_empty() {
                        any_impossible = true;
                        skip(&mut out, Plan::Acted(v));
                    }
                    for &(a, s) in &steps {
                        push(&mut out, a, Some(s), Plan::Acted(v));
                        push(&mut out, a, Some(s), Plan::Done);
                    }
                }
                if any_impossible {
                    skip(&mut out, Plan::Done);
                }
            }
            (1, Plan::Acted(_) | Plan::Deferred, None) => {
                let first = match plan {
                    Plan::Acted(v) => Some(v),
                    _ => None,
                };
                let used = node.g.character(who).map_or(0, |c| c.used);
                let mut any_impossible = false;
                for w in Verb::ALL
                    .into_iter()
                    .filter(|&w| Some(w) != first && used & w.bit() == 0)
                {
                    steps.clear();
                    self.expand(node, who, w, &mut steps);
                    any_impossible |= steps.is_empty();
                    for &(a, s) in &steps {
                        push(&mut out, a, Some(s), Plan::Done);
                    }
                }
                if any_impossible {
                    skip(&mut out, Plan::Done);
                }
            }
            (0, Plan::Pending, Some(verbs)) => match *verbs {
                [v] => {
                    skip(&mut out, Plan::Deferred);
                    self.expand(node, who, v, &mut steps);
                    for &(a, s) in &steps {
                        push(&mut out, a, Some(s), Plan::Done);
                    }
                }
                [v, _] => {
                    self.expand(node, who, v, &mut steps);
                    if steps.is_empty() {
                        skip(&mut out, Plan::Acted(v));
                    }
                    for &(a, s) in &steps {
                        push(&mut out, a, Some(s), Plan::Acted(v));
                    }
                }
                _ => skip(&mut out, Plan::Done),
            },
            (1, Plan::Acted(_) | Plan::Deferred, Some(verbs)) => {
                let v = match (plan, verbs) {
                    (Plan::Acted(_), [_, b]) => Some(*b),
                    (Plan::Deferred, [a]) => Some(*a),
                    _ => None,
                };
                if let Some(v) = v {
                    self.expand(node, who, v, &mut steps);
                }
                if steps.is_empty() {
                    skip(&mut out, Plan::Done);
                }
                for &(a, s) in &steps {
                    push(&mut out, a, Some(s), Plan::Done);
                }
            }
            _ => skip(&mut out, Plan::Done),
        }
        out
    }

    fn apply(&mut self, node: &Node, who: CharId, c: &Choice) -> Node {
        let mut ch = node.clone();
        if let Some((at, k)) = c.assign {
            ch.g.board.set_kind(at, Some(k));
            if self.cfg.mode == Mode::Demonic && START_NEIGHBORS.contains(&at) {
                ch.adv = ch.adv.saturating_add(1);
            }
        }
        if let Some(s) = c.step {
            self.ev.clear();
            ch.g.step_in_place(&s, &mut self.ev)
                .expect("generated steps are legal");
        }
        ch.plans[who.slot()] = c.plan;
        ch.seat += 1;
        if self.cfg.confinement == Confinement::Enforce {
            ch.escaped |=
                ch.g.living()
                    .any(|c| c.position.is_some_and(|p| !in_cross(p)));
        }
        ch
    }

    fn goal(&self, node: &Node) -> Option<Goal> {
        if matches!(node.g.outcome, crate::engine::Outcome::Won { .. }) {
            return Some(Goal::Win);
        }
        let out = node
            .g
            .living()
            .any(|c| c.position.is_some_and(|p| !in_cross(p)));
        match self.cfg.confinement {
            Confinement::StopOnExit if out => Some(Goal::Escape),
            _ => None,
        }
    }

    fn actions_left(&self, node: &Node, c: CharId) -> u32 {
        let fixed = self
            .program(node.g.turn)
            .map(|p| p.verbs_of(c).map_or(0, |v| v.len() as u32));
        match node.plans[c.slot()] {
            Plan::Pending => fixed.unwrap_or(2).min(2),
            Plan::Acted(_) => u32::from(fixed.is_none_or(|n| n >= 2)),
            Plan::Deferred => 1,
            Plan::Done => 0,
        }
    }

    /// Whether the node can be shown not to reach a win in the actions left.
    fn hopeless(&self, node: &Node) -> bool {
        let g = &node.g;
        let allowed = match g.regime {
            Regime::AllSurvive => 0,
            Regime::Partial { max_deaths } => max_deaths,
        };
        let spare = u32::from(allowed.saturating_sub(g.deaths));
        let exit = g.board.find(TileKind::Exit);
        let slides = match exit {
            Some(e) => self.h[e.index()],
            None if self.remaining(&g.board)[TileKind::Exit.index()] > 0 => g
                .board
                .slots()
                .filter(|(_, s)| s.kind.is_none() && is_exit_cell(s.home))
                .map(|(c, _)| self.h[c.index()])
                .min()
                .unwrap_or(u8::MAX),
            None => u8::MAX,
        };
        if slides == u8::MAX {
            return true;
        }
        let away = g
            .living()
            .filter(|c| exit.is_none() || c.position != exit)
            .count() as u32;
        let need = away.saturating_sub(spare) + u32::from(slides);
        let living: Vec<CharId> = g.living().map(|c| c.id).collect();
        let now: u32 = living.iter().map(|&c| self.actions_left(node, c)).sum();
        let later = 2 * living.len() as u32 * u32::from(node.turns_left.saturating_sub(1));
        need > now + later
    }

    fn key(&self, node: &Node) -> Box<[u8]> {
        let frames: &[Frame] = if self.cfg.symmetry {
            &Frame::ALL
        } else {
            &[Frame::IDENTITY]
        };
        let classy = self.cfg.mode == Mode::Angelic;
        let mut best: Option<Vec<u8>> = None;
        let mut buf = Vec::with_capacity(96);
        for &f in frames {
            buf.clear();
            encode(node, f, classy, &mut buf);
            if best.as_ref().is_none_or(|b| buf < *b) {
                best = Some(buf.clone());
            }
        }
        best.expect("at least one frame").into_boxed_slice()
    }

    fn tick(&self) -> Result<(), SearchError> {
        let n = self.counter.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.cfg.budget {
            return Err(SearchError::HorizonTooLarge { nodes: n });
        }
        Ok(())
    }

    fn want_more(&self) -> bool {
        self.certificates.len() < self.cfg.max_certificates
    }

    /// Searches below a settled node. Returns whether a goal was found.
    pub fn visit(&mut self, node: &Node) -> Result<bool, SearchError> {
        let Some(who) = decision(node) else {
            if node.escaped && node.g.deaths == 0 && !node.g.is_over() {
                return Ok(self.reached(node, Goal::Escape));
            }
            self.leaves += 1;
            return Ok(false);
        };
        if self.cfg.prune && self.hopeless(node) {
            self.pruned += 1;
            return Ok(false);
        }
        let key = if self.cfg.memo {
            let k = self.key(node);
            if self.memo.contains(&k) {
                self.memo_hits += 1;
                return Ok(false);
            }
            Some(k)
        } else {
            None
        };
        let mut found = false;
        for c in self.choices(node, who) {
            self.tick()?;
            let child = self.apply(node, who, &c);
            if let Some(s) = c.step {
                self.path.push((node.g.turn, s));
            }
            let hit = self.enter_child(child)?;
            if c.step.is_some() {
                self.path.pop();
            }
            found |= hit;
            if found && !self.want_more() {
                return Ok(true);
            }
        }
        if !found {
            if let Some(k) = key {
                if self.memo.len() >= self.cfg.memo_limit {
                    self.memo.clear();
                }
                self.memo.insert(k);
            }
        }
        Ok(found)
    }

    /// Checks a freshly produced child for a goal, then settles and searches it.
    pub fn enter_child(&mut self, mut child: Node) -> Result<bool, SearchError> {
        if let Some(goal) = self.goal(&child) {
            return Ok(self.reached(&child, goal));
        }
        if child.g.is_over() {
            self.leaves += 1;
            return Ok(false);
        }
        let mut ev = core::mem::take(&mut self.ev);
        settle(&mut child, &mut ev);
        self.ev = ev;
        self.visit(&child)
    }

    fn reached(&mut self, node: &Node, goal: Goal) -> bool {
        self.goals += 1;
        if self.want_more() {
            let cert = self.certificate(node, goal);
            self.certificates.push(cert);
        }
        true
    }

    /// First-level children of the root with the step leading to each.
    pub fn split(&mut self, root: &Node) -> Vec<(Node, Option<(u32, ActionStep)>)> {
        let Some(who) = decision(root) else {
            return Vec::new();
        };
        self.choices(root, who)
            .into_iter()
            .map(|c| (self.apply(root, who, &c), c.step.map(|s| (root.g.turn, s))))
            .collect()
    }

    pub fn with_prefix(&mut self, prefix: Option<(u32, ActionStep)>) {
        self.path.clear();
        self.path.extend(prefix);
    }

    fn certificate(&self, node: &Node, goal: Goal) -> Certificate {
        let mut turns: Vec<Turn> = Vec::new();
        for &(t, s) in &self.path {
            while turns.last().is_none_or(|l| l.number < t) {
                let number = turns.last().map_or(1, |l| l.number + 1);
                turns.push(Turn {
                    number,
                    steps: Vec::new(),
                });
            }
            turns.last_mut().expect("pushed above").steps.push(s);
        }
        let board = self.initial_board(&node.g.board);
        Certificate {
            board,
            script: Script { turns },
            goal,
            n: self.cfg.n,
            variant: self.cfg.variant,
            regime: self.cfg.regime,
        }
    }

    /// The starting layout implied by the identities fixed so far, with the
    /// undecided rooms filled from what is left of the roster.
    fn initial_board(&self, b: &BoardState) -> BoardState {
        let mut kinds: [Option<TileKind>; 25] = [None; 25];
        for (_, s) in b.slots() {
            kinds[s.home.index()] = s.kind;
        }
        let mut rem = self.remaining(b);
        if rem[TileKind::Exit.index()] > 0 {
            if let Some(c) = EXIT_CELLS.iter().find(|c| kinds[c.index()].is_none()) {
                kinds[c.index()] = Some(TileKind::Exit);
                rem[TileKind::Exit.index()] = 0;
            }
        }
        let mut fill = TileKind::ALL
            .into_iter()
            .flat_map(|k| core::iter::repeat_n(k, rem[k.index()] as usize));
        for k in kinds.iter_mut().filter(|k| k.is_none()) {
            *k = Some(fill.next().unwrap_or(TileKind::Empty));
        }
        BoardState::from_fn(|c| kinds[c.index()])
    }
}

/// The character whose decision is due, if the node is not terminal.
pub(crate) fn decision(node: &Node) -> Option<CharId> {
    if node.g.is_over() || node.turns_left == 0 || node.pass >= 2 {
        return None;
    }
    node.g.seat_order().nth(node.seat as usize)
}

/// Moves the cursor to the next decision, closing turns on the way.
pub(crate) fn settle(node: &mut Node, ev: &mut Vec<Event>) {
    loop {
        if node.g.is_over() || node.turns_left == 0 {
            return;
        }
        if node.pass >= 2 {
            ev.clear();
            node.g.end_turn_in_place(ev);
            node.turns_left -= 1;
            node.pass = 0;
            node.seat = 0;
            node.plans = [Plan::Pending; MAX_CHARACTERS];
            continue;
        }
        if node.seat as usize >= node.g.n() {
            node.pass += 1;
            node.seat = 0;
            continue;
        }
        let c = node
            .g
            .seat_order()
            .nth(node.seat as usize)
            .expect("seat in range");
        let alive = node.g.character(c).is_some_and(|s| s.alive());
        let due = matches!(
            (node.pass, node.plans[c.slot()]),
            (0, Plan::Pending) | (1, Plan::Acted(_) | Plan::Deferred)
        );
        if alive && due {
            return;
        }
        node.seat += 1;
    }
}

fn encode(node: &Node, f: Frame, classy: bool, out: &mut Vec<u8>) {
    let g = &node.g;
    let inv = f.inverse();
    for i in 0..25 {
        let s = g.board.slot(inv.apply(Coord::from_index(i)));
        let k = match s.kind {
            None => 0x20 | u8::from(is_exit_cell(s.home)),
            Some(k) if classy => class_code(k, g.variant),
            Some(k) => k as u8,
        };
        out.push(k | u8::from(s.face_up) << 6);
    }
    for (c, p) in g.characters.iter().zip(node.plans) {
        out.push(c.position.map_or(0xff, |p| f.apply(p).index() as u8));
        let flood = c
            .flood_deadline
            .map_or(0, |d| 1 + d.saturating_sub(g.turn).min(3) as u8);
        out.push(u8::from(c.trap_pending) | flood << 1 | c.actions_taken << 4);
        out.push(c.used | p.code() << 4);
    }
    out.extend(g.arrivals().iter().map(|c| c.get()));
    out.push(0xfe);
    let mut locks = [0u8; 8];
    for (i, d) in g.line_locks.iter().enumerate() {
        if let Some(d) = d {
            let line = f.apply_line(SHIFTABLE_LINES[i]);
            locks[line.slot().expect("frames keep lines off-centre")] = f.apply_dir(*d) as u8 + 1;
        }
    }
    out.extend_from_slice(&locks);
    out.extend_from_slice(&[
        node.pass,
        node.seat,
        node.turns_left,
        g.first_player_offset,
        g.deaths,
        node.adv,
        u8::from(node.escaped),
    ]);
}
