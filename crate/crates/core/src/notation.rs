//! Textual notation for actions, turns and action programs.
//!
//! A step reads `1R[1;2]`, `1D[1;0]`, `1P2[1;0]` or `1C^[1;]`; moves and
//! pushes into a room that grants a shift carry a trailing rider such as
//! `<[;1]`, and a bare rider `5<[;1]` is read as a control action. A turn is
//! `N: step | step | ...`, possibly continued on following lines.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::geom::{Coord, Direction, Line, Shift};

/// A character number, starting at 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CharId(u8);

impl CharId {
    pub fn new(n: u8) -> Option<CharId> {
        (n >= 1).then_some(CharId(n))
    }

    pub const fn get(self) -> u8 {
        self.0
    }

    /// Position in zero-based arrays.
    pub const fn slot(self) -> usize {
        self.0 as usize - 1
    }

    pub const fn from_slot(i: usize) -> CharId {
        CharId(i as u8 + 1)
    }
}

impl fmt::Display for CharId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Verb {
    Look,
    Move,
    Push,
    Control,
}

impl Verb {
    pub const ALL: [Verb; 4] = [Verb::Look, Verb::Move, Verb::Push, Verb::Control];

    pub const fn letter(self) -> char {
        match self {
            Verb::Look => 'R',
            Verb::Move => 'D',
            Verb::Push => 'P',
            Verb::Control => 'C',
        }
    }

    pub fn from_letter(c: char) -> Option<Verb> {
        Verb::ALL.into_iter().find(|v| v.letter() == c)
    }

    pub const fn bit(self) -> u8 {
        1 << self as u8
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Action {
    Look {
        at: Coord,
    },
    Move {
        to: Coord,
        rider: Option<Shift>,
    },
    Push {
        target: CharId,
        to: Coord,
        rider: Option<Shift>,
    },
    Control {
        shift: Shift,
    },
}

impl Action {
    pub fn verb(&self) -> Verb {
        match self {
            Action::Look { .. } => Verb::Look,
            Action::Move { .. } => Verb::Move,
            Action::Push { .. } => Verb::Push,
            Action::Control { .. } => Verb::Control,
        }
    }

    pub fn rider(&self) -> Option<Shift> {
        match *self {
            Action::Move { rider, .. } | Action::Push { rider, .. } => rider,
            _ => None,
        }
    }

    pub fn with_rider(self, r: Option<Shift>) -> Action {
        match self {
            Action::Move { to, .. } => Action::Move { to, rider: r },
            Action::Push { target, to, .. } => Action::Push {
                target,
                to,
                rider: r,
            },
            other => other,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ActionStep {
    pub actor: CharId,
    pub action: Action,
    /// The `#` annotation marking the winning step.
    pub win_marker: bool,
}

impl ActionStep {
    pub fn new(actor: CharId, action: Action) -> ActionStep {
        ActionStep {
            actor,
            action,
            win_marker: false,
        }
    }

    pub fn verb(&self) -> Verb {
        self.action.verb()
    }
}

impl fmt::Display for ActionStep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.actor)?;
        match self.action {
            Action::Look { at } => write!(f, "R{at}")?,
            Action::Move { to, rider } => {
                write!(f, "D{to}")?;
                if let Some(r) = rider {
                    write!(f, "{r}")?;
                }
            }
            Action::Push { target, to, rider } => {
                write!(f, "P{target}{to}")?;
                if let Some(r) = rider {
                    write!(f, "{r}")?;
                }
            }
            Action::Control { shift } => write!(f, "C{shift}")?,
        }
        if self.win_marker {
            f.write_str("#")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Turn {
    pub number: u32,
    pub steps: Vec<ActionStep>,
}

impl fmt::Display for Turn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.number)?;
        for (i, s) in self.steps.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { " | " })?;
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Script {
    pub turns: Vec<Turn>,
}

impl fmt::Display for Script {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for t in &self.turns {
            writeln!(f, "{t}")?;
        }
        Ok(())
    }
}

/// The verbs one character committed to for a turn, in execution order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProgramEntry {
    pub who: CharId,
    pub verbs: Vec<Verb>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ProgrammedTurn {
    pub turn: u32,
    pub entries: Vec<ProgramEntry>,
}

impl ProgrammedTurn {
    pub fn verbs_of(&self, who: CharId) -> Option<&[Verb]> {
        self.entries
            .iter()
            .find(|e| e.who == who)
            .map(|e| e.verbs.as_slice())
    }
}

impl fmt::Display for ProgrammedTurn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:", self.turn)?;
        for (i, e) in self.entries.iter().enumerate() {
            f.write_str(if i == 0 { " " } else { " | " })?;
            write!(f, "{}", e.who)?;
            for v in &e.verbs {
                write!(f, "{}", v.letter())?;
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(&'static str),
    CoordOutOfRange(i32),
    SelfPush,
    DirectionMismatch,
    NonMonotoneTurnNumbers { previous: u32, found: u32 },
}

/// A parse failure with a 1-based line and column (in characters).
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}, column {column}: {kind}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(m) => write!(f, "syntax error: {m}"),
            ParseErrorKind::CoordOutOfRange(v) => write!(f, "coordinate {v} outside -2..=2"),
            ParseErrorKind::SelfPush => f.write_str("a character cannot push itself"),
            ParseErrorKind::DirectionMismatch => {
                f.write_str("direction does not run along the line")
            }
            ParseErrorKind::NonMonotoneTurnNumbers { previous, found } => {
                write!(f, "turn {found} follows turn {previous}")
            }
        }
    }
}

struct Cursor<'a> {
    chars: &'a [(usize, char)],
    pos: usize,
    line: usize,
    end_column: usize,
}

fn bold_digit(c: char) -> Option<u32> {
    let v = c as u32;
    (0x1D7CE..=0x1D7D7).contains(&v).then(|| v - 0x1D7CE)
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].1.is_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn column(&mut self) -> usize {
        self.skip_ws();
        self.chars
            .get(self.pos)
            .map_or(self.end_column, |&(col, _)| col)
    }

    fn error(&mut self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            line: self.line,
            column: self.column(),
        }
    }

    fn syntax(&mut self, m: &'static str) -> ParseError {
        self.error(ParseErrorKind::Syntax(m))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char, m: &'static str) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.syntax(m))
        }
    }

    fn at_end(&mut self) -> bool {
        self.peek().is_none()
    }

    /// ASCII or mathematical bold digits; whitespace may not split a number.
    fn number(&mut self, allow_bold: bool) -> Option<u32> {
        self.skip_ws();
        let mut value: Option<u32> = None;
        while let Some(&(_, c)) = self.chars.get(self.pos) {
            let d = c
                .to_digit(10)
                .or_else(|| if allow_bold { bold_digit(c) } else { None });
            match d {
                Some(d) => {
                    value = Some(value.unwrap_or(0).saturating_mul(10).saturating_add(d));
                    self.pos += 1;
                }
                None => break,
            }
        }
        value
    }

    fn char_id(&mut self, m: &'static str) -> Result<CharId, ParseError> {
        let col = self.column();
        match self.number(false) {
            Some(n) if (1..=255).contains(&n) => Ok(CharId(n as u8)),
            _ => Err(ParseError {
                kind: ParseErrorKind::Syntax(m),
                line: self.line,
                column: col,
            }),
        }
    }

    fn component(&mut self) -> Result<i8, ParseError> {
        let col = self.column();
        let neg = self.eat('-') || self.eat('\u{2212}');
        let v = self
            .number(false)
            .ok_or_else(|| self.syntax("expected a coordinate"))?;
        let v = if neg { -(v as i64) } else { v as i64 };
        if !(-2..=2).contains(&v) {
            return Err(ParseError {
                kind: ParseErrorKind::CoordOutOfRange(
                    v.clamp(i32::MIN as i64, i32::MAX as i64) as i32
                ),
                line: self.line,
                column: col,
            });
        }
        Ok(v as i8)
    }

    fn coord(&mut self) -> Result<Coord, ParseError> {
        self.expect('[', "expected '['")?;
        let x = self.component()?;
        self.expect(';', "expected ';'")?;
        let y = self.component()?;
        self.expect(']', "expected ']'")?;
        Ok(Coord::at(x, y))
    }

    fn line_ref(&mut self) -> Result<Line, ParseError> {
        self.expect('[', "expected '['")?;
        if self.eat(';') {
            let y = self.component()?;
            self.expect(']', "expected ']'")?;
            Ok(Line::row(y))
        } else {
            let x = self.component()?;
            self.expect(';', "expected ';'")?;
            self.expect(']', "expected ']' after a column index")?;
            Ok(Line::column(x))
        }
    }

    fn direction(&mut self) -> Option<Direction> {
        let d = self.peek().and_then(Direction::from_symbol)?;
        self.pos += 1;
        Some(d)
    }

    fn shift_after(&mut self, dir: Direction) -> Result<Shift, ParseError> {
        let col = self.column();
        let line = self.line_ref()?;
        Shift::new(line, dir).ok_or(ParseError {
            kind: ParseErrorKind::DirectionMismatch,
            line: self.line,
            column: col,
        })
    }

    fn rider(&mut self) -> Result<Option<Shift>, ParseError> {
        match self.direction() {
            Some(d) => self.shift_after(d).map(Some),
            None => Ok(None),
        }
    }

    fn step(&mut self) -> Result<ActionStep, ParseError> {
        let actor = self.char_id("expected a character number")?;
        let action = if let Some(d) = self.direction() {
            Action::Control {
                shift: self.shift_after(d)?,
            }
        } else {
            let letter = self.peek();
            let verb = letter
                .and_then(Verb::from_letter)
                .ok_or_else(|| self.syntax("expected R, D, P or C"))?;
            self.pos += 1;
            match verb {
                Verb::Look => Action::Look { at: self.coord()? },
                Verb::Move => {
                    let to = self.coord()?;
                    Action::Move {
                        to,
                        rider: self.rider()?,
                    }
                }
                Verb::Push => {
                    let col = self.column();
                    let target = self.char_id("expected the number of the pushed character")?;
                    if target == actor {
                        return Err(ParseError {
                            kind: ParseErrorKind::SelfPush,
                            line: self.line,
                            column: col,
                        });
                    }
                    let to = self.coord()?;
                    Action::Push {
                        target,
                        to,
                        rider: self.rider()?,
                    }
                }
                Verb::Control => {
                    let d = self
                        .direction()
                        .ok_or_else(|| self.syntax("expected a direction"))?;
                    Action::Control {
                        shift: self.shift_after(d)?,
                    }
                }
            }
        };
        let win_marker = self.eat('#');
        Ok(ActionStep {
            actor,
            action,
            win_marker,
        })
    }

    fn program_entry(&mut self) -> Result<ProgramEntry, ParseError> {
        let who = self.char_id("expected a character number")?;
        let mut verbs = Vec::new();
        while let Some(v) = self.peek().and_then(Verb::from_letter) {
            if verbs.len() == 2 {
                return Err(self.syntax("at most two actions per character"));
            }
            self.pos += 1;
            verbs.push(v);
        }
        if verbs.is_empty() {
            return Err(self.syntax("expected R, D, P or C"));
        }
        Ok(ProgramEntry { who, verbs })
    }

    /// Items separated by `|`; a trailing `|` is allowed.
    fn items<T>(
        &mut self,
        mut item: impl FnMut(&mut Self) -> Result<T, ParseError>,
    ) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.at_end() {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.at_end() {
                return Ok(out);
            }
            self.expect('|', "expected '|' between steps")?;
            if self.at_end() {
                return Ok(out);
            }
        }
    }

    /// Consumes `N:` if the line starts with a turn header.
    fn header(&mut self) -> Result<Option<u32>, ParseError> {
        let save = self.pos;
        let col = self.column();
        if let Some(n) = self.number(true) {
            if self.eat(':') {
                return Ok(Some(n));
            }
        } else if self.peek() == Some(':') {
            return Err(ParseError {
                kind: ParseErrorKind::Syntax("expected a turn number"),
                line: self.line,
                column: col,
            });
        }
        self.pos = save;
        Ok(None)
    }
}

fn indexed_chars(line: &str) -> Vec<(usize, char)> {
    let body = match line.find("//") {
        Some(i) => &line[..i],
        None => line,
    };
    body.chars().enumerate().map(|(i, c)| (i + 1, c)).collect()
}

fn with_cursor<T>(
    text: &str,
    line_no: usize,
    f: impl FnOnce(&mut Cursor<'_>) -> Result<T, ParseError>,
) -> Result<T, ParseError> {
    let chars = indexed_chars(text);
    let end_column = chars.len() + 1;
    let mut cur = Cursor {
        chars: &chars,
        pos: 0,
        line: line_no,
        end_column,
    };
    f(&mut cur)
}

/// Parses a single step such as `1P2[1;0]<[;1]`.
pub fn parse_step(text: &str) -> Result<ActionStep, ParseError> {
    with_cursor(text, 1, |c| {
        let s = c.step()?;
        if !c.at_end() {
            return Err(c.syntax("unexpected trailing input"));
        }
        Ok(s)
    })
}

/// Parses `|`-separated steps without a turn header.
pub fn parse_steps(text: &str) -> Result<Vec<ActionStep>, ParseError> {
    with_cursor(text, 1, |c| c.items(|c| c.step()))
}

fn parse_headed<T>(
    text: &str,
    mut item: impl FnMut(&mut Cursor<'_>) -> Result<T, ParseError>,
) -> Result<Vec<(u32, Vec<T>)>, ParseError> {
    let mut out: Vec<(u32, Vec<T>)> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        with_cursor(raw, line_no, |c| {
            if c.at_end() {
                return Ok(());
            }
            let col = c.column();
            match c.header()? {
                Some(n) => {
                    if let Some(&(prev, _)) = out.last() {
                        if n <= prev {
                            return Err(ParseError {
                                kind: ParseErrorKind::NonMonotoneTurnNumbers {
                                    previous: prev,
                                    found: n,
                                },
                                line: line_no,
                                column: col,
                            });
                        }
                    }
                    let items = c.items(&mut item)?;
                    out.push((n, items));
                }
                None => {
                    if out.is_empty() {
                        return Err(c.syntax("expected a turn header such as '1:'"));
                    }
                    c.eat('|');
                    let items = c.items(&mut item)?;
                    out.last_mut().expect("checked above").1.extend(items);
                }
            }
            Ok(())
        })?;
    }
    Ok(out)
}

/// Parses a script: one turn per header `N:`, lines without a header
/// continue the previous turn, `//` starts a comment.
pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let turns = parse_headed(text, |c| c.step())?;
    Ok(Script {
        turns: turns
            .into_iter()
            .map(|(number, steps)| Turn { number, steps })
            .collect(),
    })
}

/// Parses one or more programmed turns such as `2: 2DR | 3PR | 1DR`.
pub fn parse_programs(text: &str) -> Result<Vec<ProgrammedTurn>, ParseError> {
    let turns = parse_headed(text, |c| c.program_entry())?;
    Ok(turns
        .into_iter()
        .map(|(turn, entries)| ProgrammedTurn { turn, entries })
        .collect())
}

/// Parses exactly one programmed turn.
pub fn parse_program(text: &str) -> Result<ProgrammedTurn, ParseError> {
    let mut v = parse_programs(text)?;
    match v.len() {
        1 => Ok(v.remove(0)),
        _ => Err(ParseError {
            kind: ParseErrorKind::Syntax("expected exactly one programmed turn"),
            line: 1,
            column: 1,
        }),
    }
}

/// Canonical ASCII form of a script.
pub fn format_script(s: &Script) -> String {
    alloc::format!("{s}")
}

/// Inferred program of a turn: each character's verbs in order of appearance.
pub fn infer_program(turn: &Turn) -> ProgrammedTurn {
    let mut entries: Vec<ProgramEntry> = Vec::new();
    for s in &turn.steps {
        match entries.iter_mut().find(|e| e.who == s.actor) {
            Some(e) => e.verbs.push(s.verb()),
            None => entries.push(ProgramEntry {
                who: s.actor,
                verbs: alloc::vec![s.verb()],
            }),
        }
    }
    ProgrammedTurn {
        turn: turn.number,
        entries,
    }
}
