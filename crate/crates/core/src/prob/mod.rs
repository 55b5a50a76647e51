//! Exact opening probabilities, a brute-force oracle and Monte Carlo estimates.

mod mc;
mod oracle;

pub use mc::{
    batches, monte_carlo, run_batch, run_trial, sample_board, McReport, McTally, TrialOutcome,
    BATCH_SIZE,
};
pub use oracle::{enumerate_oracle, LuckEvent};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::geom::EXIT_CELLS;
use crate::tile::{Roster, TileKind};

pub type Rational = BigRational;

#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ProbError {
    #[error("category counts are inconsistent")]
    ImpossibleCounts,
    #[error("the brute-force oracle needs the real board geometry (12 exit cells)")]
    UnsupportedGeometry,
}

/// Tile counts the closed forms depend on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct CategoryCounts {
    /// Green rooms usable as the fast opening's pivot (Dark included).
    pub valid_x: u32,
    /// Dark rooms among `valid_x`.
    pub dark: u32,
    pub red: u32,
    /// Red rooms fatal to the bold opening.
    pub forbidden: u32,
    pub total_nonblue: u32,
    pub exit_positions: u32,
}

impl CategoryCounts {
    pub fn from_roster(r: &Roster) -> CategoryCounts {
        let sum = |p: fn(TileKind) -> bool| {
            r.iter()
                .filter(|&(k, _)| p(k))
                .map(|(_, n)| u32::from(n))
                .sum()
        };
        CategoryCounts {
            valid_x: sum(TileKind::is_valid_pivot),
            dark: u32::from(r.count(TileKind::Dark)),
            red: sum(TileKind::is_red),
            forbidden: sum(TileKind::is_forbidden_for_bold),
            total_nonblue: r.total(),
            exit_positions: EXIT_CELLS.len() as u32,
        }
    }

    fn check(&self) -> Result<(), ProbError> {
        let ok = self.dark <= self.valid_x
            && self.forbidden <= self.red
            && self.valid_x + self.red <= self.total_nonblue
            && self.exit_positions >= 1
            && self.total_nonblue >= 1;
        if ok {
            Ok(())
        } else {
            Err(ProbError::ImpossibleCounts)
        }
    }
}

impl Default for CategoryCounts {
    fn default() -> Self {
        CategoryCounts::from_roster(&Roster::solo())
    }
}

fn int(v: u32) -> BigInt {
    BigInt::from(v)
}

fn ratio(n: BigInt, d: BigInt) -> Rational {
    Rational::new(n, d)
}

/// `n (n-1) ... (n-k+1)`, zero when `k > n`.
fn falling(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * int(n - i))
}

fn four_draws(c: &CategoryCounts) -> Result<BigInt, ProbError> {
    c.check()?;
    if c.total_nonblue < 4 {
        return Err(ProbError::ImpossibleCounts);
    }
    Ok(falling(c.total_nonblue, 4))
}

/// Chance that none of the four rooms around the start is a usable pivot.
pub fn p_v_no_pivot(c: &CategoryCounts) -> Result<Rational, ProbError> {
    let all = four_draws(c)?;
    Ok(ratio(falling(c.total_nonblue - c.valid_x, 4), all))
}

/// Fast-opening luck: a usable pivot exists, and the exit lies on the exit
/// cell of the frame chosen from it.
pub fn p_v_lucky(c: &CategoryCounts) -> Result<Rational, ProbError> {
    let none = p_v_no_pivot(c)?;
    Ok((Rational::one() - none) / ratio(int(c.exit_positions), BigInt::one()))
}

/// As [`p_v_lucky`] when dark rooms cannot serve as the pivot.
pub fn p_v_lucky_no_dark(c: &CategoryCounts) -> Result<Rational, ProbError> {
    let all = four_draws(c)?;
    let usable = c.valid_x - c.dark;
    let none = ratio(falling(c.total_nonblue - usable, 4), all);
    Ok((Rational::one() - none) / ratio(int(c.exit_positions), BigInt::one()))
}

/// Upper bound on a first-turn loss for the fast opening: all four rooms
/// around the start are red.
pub fn p_v_loss_bound(c: &CategoryCounts) -> Result<Rational, ProbError> {
    let all = four_draws(c)?;
    Ok(ratio(falling(c.red, 4), all))
}

/// Bold-opening luck: the single control room on the pivot and the exit on
/// the exit cell.
pub fn p_t_lucky(c: &CategoryCounts) -> Result<Rational, ProbError> {
    c.check()?;
    Ok(ratio(
        BigInt::one(),
        int(c.total_nonblue) * int(c.exit_positions),
    ))
}

/// Chance the bold opening survives its entries: the pivot is not forbidden,
/// and, unless the exit is there, neither is the exit cell's room.
pub fn p_t_survival(c: &CategoryCounts) -> Result<Rational, ProbError> {
    c.check()?;
    let n = c.total_nonblue;
    let e = c.exit_positions;
    let safe = n
        .checked_sub(c.forbidden)
        .ok_or(ProbError::ImpossibleCounts)?;
    let first = ratio(int(safe), int(n));
    let mut p = first.clone() / ratio(int(e), BigInt::one());
    if e > 1 {
        if n < 2 {
            return Err(ProbError::ImpossibleCounts);
        }
        let second = ratio(int(safe.saturating_sub(1)), int(n - 1));
        p += ratio(int(e - 1), int(e)) * first * second;
    }
    Ok(p)
}

/// Complement of [`p_t_survival`].
pub fn p_t_loss_bound(c: &CategoryCounts) -> Result<Rational, ProbError> {
    Ok(Rational::one() - p_t_survival(c)?)
}

/// Decimal rendering with `digits` places, rounded half up.
pub fn to_decimal(r: &Rational, digits: u32) -> alloc::string::String {
    let scale = num_traits::pow(BigInt::from(10), digits as usize);
    let scaled =
        (r * ratio(scale.clone(), BigInt::one()) + ratio(BigInt::one(), BigInt::from(2))).floor();
    let v = scaled.to_integer();
    let neg = v < BigInt::zero();
    let v = if neg { -v } else { v };
    let whole = &v / &scale;
    let frac = &v % &scale;
    let mut frac_s = alloc::format!("{frac}");
    while frac_s.len() < digits as usize {
        frac_s.insert(0, '0');
    }
    let sign = if neg { "-" } else { "" };
    if digits == 0 {
        alloc::format!("{sign}{whole}")
    } else {
        alloc::format!("{sign}{whole}.{frac_s}")
    }
}

/// Nearest `f64`, for reporting only.
pub fn to_f64(r: &Rational) -> f64 {
    use num_traits::ToPrimitive;
    r.to_f64().unwrap_or(f64::NAN)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn solo_values() {
        let c = CategoryCounts::default();
        assert_eq!(
            c,
            CategoryCounts {
                valid_x: 9,
                dark: 2,
                red: 9,
                forbidden: 4,
                total_nonblue: 23,
                exit_positions: 12
            }
        );
        assert_eq!(p_v_no_pivot(&c).unwrap(), q(13, 115));
        assert_eq!(p_v_lucky(&c).unwrap(), q(17, 230));
        assert_eq!(p_v_lucky_no_dark(&c).unwrap(), q(67, 1012));
        assert_eq!(p_v_loss_bound(&c).unwrap(), q(18, 1265));
        assert_eq!(p_t_lucky(&c).unwrap(), q(1, 276));
        assert_eq!(p_t_survival(&c).unwrap(), q(95, 138));
        assert_eq!(p_t_loss_bound(&c).unwrap(), q(43, 138));
    }

    #[test]
    fn decimals() {
        assert_eq!(to_decimal(&q(17, 230), 6), "0.073913");
        assert_eq!(to_decimal(&q(67, 1012), 4), "0.0662");
        assert_eq!(to_decimal(&q(1, 2), 0), "1");
    }

    #[test]
    fn edge_counts() {
        let c = CategoryCounts {
            valid_x: 0,
            dark: 0,
            red: 0,
            forbidden: 0,
            total_nonblue: 1,
            exit_positions: 1,
        };
        assert_eq!(p_t_lucky(&c).unwrap(), q(1, 1));
        let none = CategoryCounts {
            valid_x: 0,
            dark: 0,
            total_nonblue: 23,
            ..CategoryCounts::default()
        };
        let none = CategoryCounts { red: 9, ..none };
        assert_eq!(p_v_lucky(&none).unwrap(), q(0, 1));
        let no_dark = CategoryCounts {
            dark: 0,
            ..CategoryCounts::default()
        };
        assert_eq!(
            p_v_lucky_no_dark(&no_dark).unwrap(),
            p_v_lucky(&no_dark).unwrap()
        );
        let bad = CategoryCounts {
            valid_x: 20,
            red: 9,
            ..CategoryCounts::default()
        };
        assert_eq!(p_v_lucky(&bad), Err(ProbError::ImpossibleCounts));
        let bad = CategoryCounts {
            forbidden: 10,
            ..CategoryCounts::default()
        };
        assert_eq!(p_t_lucky(&bad), Err(ProbError::ImpossibleCounts));
    }
}
