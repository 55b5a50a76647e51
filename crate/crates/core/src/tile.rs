//! Room kinds, their colours and the solo roster.

use core::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TileKind {
    Start,
    Exit,
    Empty,
    Control,
    Machine,
    Dark,
    Tunnel,
    Mortal,
    Vortex,
    Trap,
    Acid,
    Flood,
    /// Any other red room; kills on entry.
    RedOther,
    /// Any yellow room; no effect.
    YellowOther,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Color {
    Blue,
    Green,
    Yellow,
    Red,
}

impl TileKind {
    pub const ALL: [TileKind; 14] = [
        TileKind::Start,
        TileKind::Exit,
        TileKind::Empty,
        TileKind::Control,
        TileKind::Machine,
        TileKind::Dark,
        TileKind::Tunnel,
        TileKind::Mortal,
        TileKind::Vortex,
        TileKind::Trap,
        TileKind::Acid,
        TileKind::Flood,
        TileKind::RedOther,
        TileKind::YellowOther,
    ];

    pub const fn index(self) -> usize {
        self as usize
    }

    pub const fn code(self) -> char {
        match self {
            TileKind::Start => 'D',
            TileKind::Exit => 'S',
            TileKind::Empty => 'V',
            TileKind::Control => 'C',
            TileKind::Machine => 'E',
            TileKind::Dark => 'N',
            TileKind::Tunnel => 'T',
            TileKind::Mortal => 'M',
            TileKind::Vortex => 'O',
            TileKind::Trap => 'P',
            TileKind::Acid => 'A',
            TileKind::Flood => 'F',
            TileKind::RedOther => 'R',
            TileKind::YellowOther => 'Y',
        }
    }

    pub fn from_code(c: char) -> Option<TileKind> {
        TileKind::ALL.into_iter().find(|k| k.code() == c)
    }

    pub const fn color(self) -> Color {
        match self {
            TileKind::Start | TileKind::Exit => Color::Blue,
            TileKind::Empty
            | TileKind::Control
            | TileKind::Machine
            | TileKind::Dark
            | TileKind::Tunnel => Color::Green,
            TileKind::YellowOther => Color::Yellow,
            TileKind::Mortal
            | TileKind::Vortex
            | TileKind::Trap
            | TileKind::Acid
            | TileKind::Flood
            | TileKind::RedOther => Color::Red,
        }
    }

    pub const fn is_red(self) -> bool {
        matches!(self.color(), Color::Red)
    }

    /// Entering kills the entrant at once.
    pub const fn kills_on_entry(self) -> bool {
        matches!(self, TileKind::Mortal | TileKind::RedOther)
    }

    /// Entering grants the controller a line shift.
    pub const fn grants_shift(self) -> bool {
        matches!(self, TileKind::Control | TileKind::Machine)
    }

    /// Green rooms the fast opening can use as its pivot tile.
    pub const fn is_valid_pivot(self) -> bool {
        matches!(
            self,
            TileKind::Empty | TileKind::Machine | TileKind::Dark | TileKind::Tunnel
        )
    }

    /// Rooms the bold opening cannot survive stepping into.
    pub const fn is_forbidden_for_bold(self) -> bool {
        matches!(self, TileKind::Mortal | TileKind::Trap)
    }
}

impl fmt::Display for TileKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum RosterError {
    #[error("roster may not contain blue rooms")]
    BlueRoom,
    #[error("roster holds {0} rooms, expected 23")]
    WrongTotal(u32),
}

/// Multiset of non-blue rooms drawn into the 23 face-down slots.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Roster {
    counts: [u8; 14],
}

impl Roster {
    pub const SLOTS: u32 = 23;

    pub const fn empty() -> Roster {
        Roster { counts: [0; 14] }
    }

    /// The roster of the solo game.
    pub fn solo() -> Roster {
        let mut r = Roster::empty();
        for (k, n) in [
            (TileKind::Empty, 4),
            (TileKind::Machine, 1),
            (TileKind::Dark, 2),
            (TileKind::Tunnel, 2),
            (TileKind::Control, 1),
            (TileKind::Mortal, 2),
            (TileKind::Trap, 2),
            (TileKind::Vortex, 1),
            (TileKind::Acid, 1),
            (TileKind::Flood, 1),
            (TileKind::RedOther, 2),
            (TileKind::YellowOther, 4),
        ] {
            r.counts[k.index()] = n;
        }
        r
    }

    pub fn count(&self, k: TileKind) -> u8 {
        self.counts[k.index()]
    }

    pub fn set(&mut self, k: TileKind, n: u8) {
        self.counts[k.index()] = n;
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().map(|&c| u32::from(c)).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (TileKind, u8)> + '_ {
        TileKind::ALL
            .into_iter()
            .map(|k| (k, self.count(k)))
            .filter(|&(_, n)| n > 0)
    }

    /// One entry per physical tile, in kind order.
    pub fn tiles(&self) -> alloc::vec::Vec<TileKind> {
        self.iter()
            .flat_map(|(k, n)| core::iter::repeat_n(k, n as usize))
            .collect()
    }

    /// Checks that the roster fills the board exactly.
    pub fn validate(&self) -> Result<(), RosterError> {
        if self.count(TileKind::Start) > 0 || self.count(TileKind::Exit) > 0 {
            return Err(RosterError::BlueRoom);
        }
        match self.total() {
            Self::SLOTS => Ok(()),
            t => Err(RosterError::WrongTotal(t)),
        }
    }
}

impl Default for Roster {
    fn default() -> Self {
        Roster::solo()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn codes_roundtrip() {
        for k in TileKind::ALL {
            assert_eq!(TileKind::from_code(k.code()), Some(k));
        }
        assert_eq!(TileKind::from_code('?'), None);
    }

    #[test]
    fn solo_roster_categories() {
        let r = Roster::solo();
        r.validate().unwrap();
        let red: u8 = r.iter().filter(|(k, _)| k.is_red()).map(|(_, n)| n).sum();
        let pivot: u8 = r
            .iter()
            .filter(|(k, _)| k.is_valid_pivot())
            .map(|(_, n)| n)
            .sum();
        let forbidden: u8 = r
            .iter()
            .filter(|(k, _)| k.is_forbidden_for_bold())
            .map(|(_, n)| n)
            .sum();
        assert_eq!(
            (red, pivot, forbidden, r.count(TileKind::Dark)),
            (9, 9, 4, 2)
        );
    }
}
