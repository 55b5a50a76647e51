//! File formats, parallel drivers and the command-line interface on top of
//! `room25-core`.

pub mod cli;
pub mod io;
pub mod par;
