//! Reading boards, scripts, programs and rosters from text files.

use std::fmt;
use std::path::{Path, PathBuf};

use room25_core::{
    parse_programs, parse_script, BoardParseError, BoardState, ParseError, ProgrammedTurn, Roster,
    RosterError, Script, TileKind,
};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Board {
        path: PathBuf,
        source: BoardParseError,
    },
    #[error("{path}: {source}")]
    Notation { path: PathBuf, source: ParseError },
    #[error("{path}: {source}")]
    Roster {
        path: PathBuf,
        source: RosterParseError,
    },
}

#[derive(Debug, PartialEq, Eq, thiserror::Error)]
pub enum RosterParseError {
    #[error("line {line}: expected `<room code> <count>`")]
    Syntax { line: usize },
    #[error("line {line}, column 1: unknown room code {code:?}")]
    UnknownCode { line: usize, code: String },
    #[error("line {line}: room {code} listed twice")]
    Duplicate { line: usize, code: char },
    #[error(transparent)]
    Invalid(#[from] RosterError),
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|source| InputError::Read {
        path: path.into(),
        source,
    })
}

pub fn read_board(path: &Path) -> Result<BoardState, InputError> {
    BoardState::parse(&read(path)?).map_err(|source| InputError::Board {
        path: path.into(),
        source,
    })
}

pub fn read_script(path: &Path) -> Result<Script, InputError> {
    parse_script(&read(path)?).map_err(|source| InputError::Notation {
        path: path.into(),
        source,
    })
}

pub fn read_programs(path: &Path) -> Result<Vec<ProgrammedTurn>, InputError> {
    parse_programs(&read(path)?).map_err(|source| InputError::Notation {
        path: path.into(),
        source,
    })
}

pub fn read_roster(path: &Path) -> Result<Roster, InputError> {
    parse_roster(&read(path)?).map_err(|source| InputError::Roster {
        path: path.into(),
        source,
    })
}

/// One `<code> <count>` pair per line; `//` starts a comment. Kinds not
/// listed count zero, and the total must fill the 23 face-down slots.
pub fn parse_roster(text: &str) -> Result<Roster, RosterParseError> {
    let mut r = Roster::empty();
    let mut seen = [false; 14];
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.split("//").next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut words = body.split_whitespace();
        let (Some(code), Some(count), None) = (words.next(), words.next(), words.next()) else {
            return Err(RosterParseError::Syntax { line });
        };
        let mut cs = code.chars();
        let kind = match (cs.next().and_then(TileKind::from_code), cs.next()) {
            (Some(k), None) => k,
            _ => {
                return Err(RosterParseError::UnknownCode {
                    line,
                    code: code.into(),
                })
            }
        };
        let n: u8 = count
            .parse()
            .map_err(|_| RosterParseError::Syntax { line })?;
        if std::mem::replace(&mut seen[kind.index()], true) {
            return Err(RosterParseError::Duplicate {
                line,
                code: kind.code(),
            });
        }
        r.set(kind, n);
    }
    r.validate()?;
    Ok(r)
}

/// Inverse of [`parse_roster`].
pub struct RosterText<'a>(pub &'a Roster);

impl fmt::Display for RosterText<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, n) in self.0.iter().filter(|&(_, n)| n > 0) {
            writeln!(f, "{} {n}", k.code())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solo_roster_roundtrips() {
        let text = RosterText(&Roster::solo()).to_string();
        assert_eq!(parse_roster(&text).unwrap(), Roster::solo());
    }

    #[test]
    fn roster_errors() {
        assert_eq!(
            parse_roster("V 23 // all empty")
                .unwrap()
                .count(TileKind::Empty),
            23
        );
        assert_eq!(
            parse_roster("V 22\nQ 1"),
            Err(RosterParseError::UnknownCode {
                line: 2,
                code: "Q".into()
            })
        );
        assert_eq!(
            parse_roster("V 22\nV 1"),
            Err(RosterParseError::Duplicate { line: 2, code: 'V' })
        );
        assert_eq!(parse_roster("V"), Err(RosterParseError::Syntax { line: 1 }));
        assert_eq!(
            parse_roster("V 20"),
            Err(RosterParseError::Invalid(RosterError::WrongTotal(20)))
        );
        assert_eq!(
            parse_roster("S 23"),
            Err(RosterParseError::Invalid(RosterError::BlueRoom))
        );
    }
}
