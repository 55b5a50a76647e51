//! The 5×5 grid of room tiles.

use alloc::vec::Vec;
use core::fmt;

use crate::geom::{is_exit_cell, Coord, Direction, Frame, Line, Shift};
use crate::tile::TileKind;

/// One tile. `kind` is `None` while the tile's identity is undecided.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Slot {
    pub kind: Option<TileKind>,
    pub face_up: bool,
    /// Where the tile lay when the game started.
    pub home: Coord,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BoardError {
    #[error("central lines cannot be shifted")]
    CentralLineForbidden,
    #[error("direction {0} does not run along {1}")]
    DirectionMismatch(Direction, Line),
    #[error("the start room must sit at [0;0]")]
    StartMisplaced,
    #[error("more than one exit")]
    SeveralExits,
    #[error("no exit on a fully known board")]
    NoExit,
    #[error("the exit may not start at {0}")]
    ExitMisplaced(Coord),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct BoardState {
    slots: [Slot; 25],
}

impl BoardState {
    /// Start face up at the origin, every other tile face down and undecided.
    pub fn unknown() -> BoardState {
        BoardState::from_fn(|c| {
            if c == Coord::ORIGIN {
                Some(TileKind::Start)
            } else {
                None
            }
        })
    }

    /// Builds a starting board; only the start room is face up.
    pub fn from_fn(mut f: impl FnMut(Coord) -> Option<TileKind>) -> BoardState {
        let slots = core::array::from_fn(|i| {
            let c = Coord::from_index(i);
            let kind = f(c);
            Slot {
                kind,
                face_up: kind == Some(TileKind::Start),
                home: c,
            }
        });
        BoardState { slots }
    }

    pub fn slot(&self, c: Coord) -> &Slot {
        &self.slots[c.index()]
    }

    pub fn slot_mut(&mut self, c: Coord) -> &mut Slot {
        &mut self.slots[c.index()]
    }

    pub fn kind_at(&self, c: Coord) -> Option<TileKind> {
        self.slots[c.index()].kind
    }

    pub fn set_kind(&mut self, c: Coord, k: Option<TileKind>) {
        self.slots[c.index()].kind = k;
    }

    pub fn is_face_up(&self, c: Coord) -> bool {
        self.slots[c.index()].face_up
    }

    pub fn slots(&self) -> impl Iterator<Item = (Coord, &Slot)> {
        self.slots
            .iter()
            .enumerate()
            .map(|(i, s)| (Coord::from_index(i), s))
    }

    pub fn find(&self, k: TileKind) -> Option<Coord> {
        self.slots()
            .find(|(_, s)| s.kind == Some(k))
            .map(|(c, _)| c)
    }

    pub fn exit_position(&self) -> Option<Coord> {
        self.find(TileKind::Exit)
    }

    pub fn is_fully_known(&self) -> bool {
        self.slots.iter().all(|s| s.kind.is_some())
    }

    /// Checks the constraints on a board at the start of a game.
    pub fn validate_initial(&self) -> Result<(), BoardError> {
        if self.kind_at(Coord::ORIGIN) != Some(TileKind::Start)
            || self
                .slots()
                .any(|(c, s)| c != Coord::ORIGIN && s.kind == Some(TileKind::Start))
        {
            return Err(BoardError::StartMisplaced);
        }
        let exits: Vec<Coord> = self
            .slots()
            .filter(|(_, s)| s.kind == Some(TileKind::Exit))
            .map(|(c, _)| c)
            .collect();
        match exits.as_slice() {
            [] if self.is_fully_known() => Err(BoardError::NoExit),
            [] => Ok(()),
            [c] if is_exit_cell(*c) => Ok(()),
            [c] => Err(BoardError::ExitMisplaced(*c)),
            _ => Err(BoardError::SeveralExits),
        }
    }

    /// Slides a non-central line one step, wrapping the tile that falls off.
    pub fn shift_line(&self, line: Line, dir: Direction) -> Result<BoardState, BoardError> {
        let shift = Shift::new(line, dir).ok_or(BoardError::DirectionMismatch(dir, line))?;
        if line.is_central() {
            return Err(BoardError::CentralLineForbidden);
        }
        let mut b = self.clone();
        b.apply_shift(shift);
        Ok(b)
    }

    /// In-place shift; the caller guarantees the line is not central.
    pub(crate) fn apply_shift(&mut self, s: Shift) {
        let cells = s.line().cells();
        let before: [Slot; 5] = cells.map(|c| self.slots[c.index()]);
        let step = match s.dir() {
            Direction::Up | Direction::Right => 1,
            Direction::Down | Direction::Left => 4,
        };
        for (i, slot) in before.into_iter().enumerate() {
            self.slots[cells[(i + step) % 5].index()] = slot;
        }
    }

    /// The same board seen through a symmetry frame.
    pub fn apply_frame(&self, f: Frame) -> BoardState {
        let mut slots = self.slots;
        for (i, s) in self.slots.iter().enumerate() {
            let c = f.apply(Coord::from_index(i));
            slots[c.index()] = Slot {
                home: f.apply(s.home),
                ..*s
            };
        }
        BoardState { slots }
    }

    /// Distinct images of the board under the eight frames.
    pub fn frame_orbit(&self) -> Vec<BoardState> {
        let mut out: Vec<BoardState> = Vec::new();
        for f in Frame::ALL {
            let b = self.apply_frame(f);
            if !out.contains(&b) {
                out.push(b);
            }
        }
        out
    }

    /// Number of tiles of each kind, with undecided tiles in the last entry.
    pub fn census(&self) -> [u8; 15] {
        let mut out = [0u8; 15];
        for s in &self.slots {
            out[s.kind.map_or(14, TileKind::index)] += 1;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BoardParseError {
    #[error("line {line}: expected 5 rooms, found {found}")]
    WrongWidth { line: usize, found: usize },
    #[error("expected 5 rows, found {0}")]
    WrongHeight(usize),
    #[error("line {line}, column {column}: unknown room code {code:?}")]
    UnknownCode {
        line: usize,
        column: usize,
        code: alloc::string::String,
    },
    #[error(transparent)]
    Invalid(#[from] BoardError),
}

impl BoardState {
    /// Reads five rows of five room codes, top row (`y = 2`) first, `x`
    /// running from -2 to 2. `?` leaves a room undecided; blank lines and
    /// text after `//` are ignored. The result is checked as a starting board.
    pub fn parse(text: &str) -> Result<BoardState, BoardParseError> {
        let mut rows: Vec<[Option<TileKind>; 5]> = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let body = raw.split("//").next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let mut row = [None; 5];
            let mut count = 0;
            let mut column = 1;
            for word in body.split_whitespace() {
                column += body[column - 1..].find(word).unwrap_or(0);
                let kind = match word {
                    "?" => None,
                    w => {
                        let mut cs = w.chars();
                        match (cs.next().and_then(TileKind::from_code), cs.next()) {
                            (Some(k), None) => Some(k),
                            _ => {
                                return Err(BoardParseError::UnknownCode {
                                    line: i + 1,
                                    column: body[..column - 1].chars().count() + 1,
                                    code: w.into(),
                                })
                            }
                        }
                    }
                };
                if count < 5 {
                    row[count] = kind;
                }
                count += 1;
                column += word.len();
            }
            if count != 5 {
                return Err(BoardParseError::WrongWidth {
                    line: i + 1,
                    found: count,
                });
            }
            rows.push(row);
        }
        if rows.len() != 5 {
            return Err(BoardParseError::WrongHeight(rows.len()));
        }
        let b = BoardState::from_fn(|c| rows[(2 - c.y()) as usize][(c.x() + 2) as usize]);
        b.validate_initial()?;
        Ok(b)
    }
}

impl fmt::Display for BoardState {
    /// Five lines of tile codes, top row first; `?` marks an undecided tile.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for y in (-2..=2).rev() {
            for x in -2..=2 {
                if x > -2 {
                    f.write_str(" ")?;
                }
                let k = self.kind_at(Coord::at(x, y));
                write!(f, "{}", k.map_or('?', TileKind::code))?;
            }
            f.write_str("\n")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mixed_row() -> BoardState {
        let mut b = BoardState::unknown();
        let row = [
            TileKind::Dark,
            TileKind::Tunnel,
            TileKind::Control,
            TileKind::Exit,
            TileKind::Empty,
        ];
        for (c, k) in Line::row(1).cells().into_iter().zip(row) {
            b.set_kind(c, Some(k));
        }
        b
    }

    #[test]
    fn row_shift_right_wraps() {
        let b = mixed_row()
            .shift_line(Line::row(1), Direction::Right)
            .unwrap();
        let got: Vec<_> = Line::row(1)
            .cells()
            .iter()
            .map(|&c| b.kind_at(c).unwrap())
            .collect();
        assert_eq!(
            got,
            [
                TileKind::Empty,
                TileKind::Dark,
                TileKind::Tunnel,
                TileKind::Control,
                TileKind::Exit
            ]
        );
    }

    #[test]
    fn central_shift_rejected() {
        let b = BoardState::unknown();
        assert_eq!(
            b.shift_line(Line::column(0), Direction::Up),
            Err(BoardError::CentralLineForbidden)
        );
        assert!(matches!(
            b.shift_line(Line::column(1), Direction::Left),
            Err(BoardError::DirectionMismatch(..))
        ));
    }

    #[test]
    fn unknown_board_is_symmetric() {
        assert_eq!(BoardState::unknown().frame_orbit().len(), 1);
    }

    #[test]
    fn parse_roundtrip() {
        let text = "? ? ? ? S\n? ? ? ? ?\n? V D ? ?\n? ? ? ? ?\n? ? ? ? ?\n";
        let b = BoardState::parse(text).unwrap();
        assert_eq!(b.kind_at(Coord::at(2, 2)), Some(TileKind::Exit));
        assert_eq!(b.kind_at(Coord::at(-1, 0)), Some(TileKind::Empty));
        assert_eq!(alloc::format!("{b}"), text);
        assert!(matches!(
            BoardState::parse("? ? ? ? Q\n? ? ? ? ?\n? ? D ? ?\n? ? ? ? ?\n? ? ? ? ?"),
            Err(BoardParseError::UnknownCode {
                line: 1,
                column: 9,
                ..
            })
        ));
    }

    #[test]
    fn exit_placement_checked() {
        let mut b = BoardState::unknown();
        b.set_kind(Coord::at(2, 0), Some(TileKind::Exit));
        assert_eq!(
            b.validate_initial(),
            Err(BoardError::ExitMisplaced(Coord::at(2, 0)))
        );
        b.set_kind(Coord::at(2, 0), None);
        b.set_kind(Coord::at(2, 1), Some(TileKind::Exit));
        assert_eq!(b.validate_initial(), Ok(()));
    }
}
