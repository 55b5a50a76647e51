//! Rules engine and analysis tools for the solo game of Room 25.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, parallel
//! drivers and the command-line tool live in the `room25` crate.

#![no_std]

extern crate alloc;

pub mod adversary;
pub mod board;
pub mod engine;
pub mod geom;
pub mod notation;
pub mod openings;
pub mod prob;
pub mod tile;

pub use board::{BoardError, BoardParseError, BoardState, Slot};
pub use geom::{Axis, Coord, Direction, Frame, Line, Shift, EXIT_CELLS, START_NEIGHBORS};
pub use notation::{
    parse_program, parse_programs, parse_script, parse_step, parse_steps, Action, ActionStep,
    CharId, ParseError, ParseErrorKind, ProgramEntry, ProgrammedTurn, Script, Turn, Verb,
};
pub use tile::{Color, Roster, RosterError, TileKind};
