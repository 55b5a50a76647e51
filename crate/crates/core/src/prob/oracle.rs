//! Brute-force enumeration over every draw of physical tiles into the cells
//! an event depends on. Shares no arithmetic with the closed forms.

use alloc::vec::Vec;

use num_bigint::BigInt;

use super::{CategoryCounts, ProbError, Rational};
use crate::geom::{Coord, Frame, EXIT_CELLS, START_NEIGHBORS};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LuckEvent {
    VLucky,
    VLuckyNoDark,
    VLoss,
    TLucky,
    TLossCore,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Tag {
    Pivot { dark: bool },
    Red { forbidden: bool },
    Other { control: bool },
}

fn tiles(c: &CategoryCounts) -> Vec<Tag> {
    let mut v = Vec::new();
    for i in 0..c.valid_x {
        v.push(Tag::Pivot { dark: i < c.dark });
    }
    for i in 0..c.red {
        v.push(Tag::Red {
            forbidden: i < c.forbidden,
        });
    }
    for i in 0..c.total_nonblue - c.valid_x - c.red {
        v.push(Tag::Other { control: i == 0 });
    }
    v
}

const PIVOT: Coord = Coord::at(1, 0);
const TARGET: Coord = Coord::at(2, 1);

fn neighbor_slot(c: Coord) -> usize {
    START_NEIGHBORS
        .iter()
        .position(|&n| n == c)
        .expect("frames permute the start neighbours")
}

/// Probability of `event` by exhaustive enumeration.
pub fn enumerate_oracle(c: &CategoryCounts, event: LuckEvent) -> Result<Rational, ProbError> {
    c.check()?;
    if c.exit_positions as usize != EXIT_CELLS.len() {
        return Err(ProbError::UnsupportedGeometry);
    }
    let t = tiles(c);
    match event {
        LuckEvent::VLucky | LuckEvent::VLuckyNoDark | LuckEvent::VLoss => neighbours(&t, event),
        LuckEvent::TLucky | LuckEvent::TLossCore => bold(&t, event),
    }
}

fn neighbours(t: &[Tag], event: LuckEvent) -> Result<Rational, ProbError> {
    if t.len() < 4 {
        return Err(ProbError::ImpossibleCounts);
    }
    let usable = |tag: Tag| match tag {
        Tag::Pivot { dark } => event != LuckEvent::VLuckyNoDark || !dark,
        _ => false,
    };
    let mut hits: u64 = 0;
    let mut total: u64 = 0;
    let n = t.len();
    for a in 0..n {
        for b in (0..n).filter(|&b| b != a) {
            for c in (0..n).filter(|&c| c != a && c != b) {
                for d in (0..n).filter(|&d| d != a && d != b && d != c) {
                    let drawn = [t[a], t[b], t[c], t[d]];
                    let target = Frame::ALL.into_iter().find_map(|f| {
                        let inv = f.inverse();
                        usable(drawn[neighbor_slot(inv.apply(PIVOT))]).then(|| inv.apply(TARGET))
                    });
                    let all_red = drawn.iter().all(|x| matches!(x, Tag::Red { .. }));
                    for exit in EXIT_CELLS {
                        total += 1;
                        let hit = match event {
                            LuckEvent::VLoss => all_red,
                            _ => target == Some(exit),
                        };
                        hits += u64::from(hit);
                    }
                }
            }
        }
    }
    Ok(Rational::new(BigInt::from(hits), BigInt::from(total)))
}

fn bold(t: &[Tag], event: LuckEvent) -> Result<Rational, ProbError> {
    let n = t.len();
    if n < 2 {
        return Err(ProbError::ImpossibleCounts);
    }
    if event == LuckEvent::TLucky && !t.contains(&Tag::Other { control: true }) {
        return Err(ProbError::ImpossibleCounts);
    }
    let forbidden = |x: Tag| x == Tag::Red { forbidden: true };
    // Each outcome is weighted over the common denominator 12 n (n-1).
    let mut hits: u64 = 0;
    let mut total: u64 = 0;
    for exit in EXIT_CELLS {
        for a in 0..n {
            if exit == TARGET {
                let w = (n - 1) as u64;
                total += w;
                let hit = match event {
                    LuckEvent::TLucky => t[a] == Tag::Other { control: true },
                    _ => forbidden(t[a]),
                };
                hits += if hit { w } else { 0 };
            } else {
                for b in (0..n).filter(|&b| b != a) {
                    total += 1;
                    let hit = match event {
                        LuckEvent::TLucky => false,
                        _ => forbidden(t[a]) || forbidden(t[b]),
                    };
                    hits += u64::from(hit);
                }
            }
        }
    }
    Ok(Rational::new(BigInt::from(hits), BigInt::from(total)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prob::{p_t_loss_bound, p_t_lucky, p_v_loss_bound, p_v_lucky, p_v_lucky_no_dark};

    #[test]
    fn oracle_matches_closed_forms_on_solo_counts() {
        let c = CategoryCounts::default();
        assert_eq!(
            enumerate_oracle(&c, LuckEvent::VLucky).unwrap(),
            p_v_lucky(&c).unwrap()
        );
        assert_eq!(
            enumerate_oracle(&c, LuckEvent::VLuckyNoDark).unwrap(),
            p_v_lucky_no_dark(&c).unwrap()
        );
        assert_eq!(
            enumerate_oracle(&c, LuckEvent::VLoss).unwrap(),
            p_v_loss_bound(&c).unwrap()
        );
        assert_eq!(
            enumerate_oracle(&c, LuckEvent::TLucky).unwrap(),
            p_t_lucky(&c).unwrap()
        );
        assert_eq!(
            enumerate_oracle(&c, LuckEvent::TLossCore).unwrap(),
            p_t_loss_bound(&c).unwrap()
        );
    }

    #[test]
    fn other_geometry_rejected() {
        let c = CategoryCounts {
            exit_positions: 4,
            ..CategoryCounts::default()
        };
        assert_eq!(
            enumerate_oracle(&c, LuckEvent::VLucky),
            Err(ProbError::UnsupportedGeometry)
        );
    }
}
