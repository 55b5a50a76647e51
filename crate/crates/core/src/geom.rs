//! Board geometry: cells, lines, shift directions and the eight symmetry frames.

use core::fmt;

/// A cell of the 5×5 board, addressed with the start room at the origin.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Coord {
    x: i8,
    y: i8,
}

impl Coord {
    pub const ORIGIN: Coord = Coord { x: 0, y: 0 };

    /// Returns `None` unless both components lie in `-2..=2`.
    pub const fn new(x: i8, y: i8) -> Option<Coord> {
        if x >= -2 && x <= 2 && y >= -2 && y <= 2 {
            Some(Coord { x, y })
        } else {
            None
        }
    }

    /// # Panics
    ///
    /// Panics if a component is outside `-2..=2`.
    pub const fn at(x: i8, y: i8) -> Coord {
        match Coord::new(x, y) {
            Some(c) => c,
            None => panic!("coordinate out of range"),
        }
    }

    pub const fn x(self) -> i8 {
        self.x
    }

    pub const fn y(self) -> i8 {
        self.y
    }

    /// Dense index in `0..25`, row-major from the bottom-left cell.
    pub const fn index(self) -> usize {
        ((self.y + 2) * 5 + (self.x + 2)) as usize
    }

    pub const fn from_index(i: usize) -> Coord {
        Coord {
            x: (i % 5) as i8 - 2,
            y: (i / 5) as i8 - 2,
        }
    }

    pub fn all() -> impl Iterator<Item = Coord> {
        (0..25).map(Coord::from_index)
    }

    pub fn offset(self, dx: i8, dy: i8) -> Option<Coord> {
        Coord::new(self.x + dx, self.y + dy)
    }

    /// The orthogonal neighbours that lie on the board.
    pub fn neighbors(self) -> impl Iterator<Item = Coord> {
        Direction::ALL.into_iter().filter_map(move |d| {
            let (dx, dy) = d.delta();
            self.offset(dx, dy)
        })
    }

    pub fn is_adjacent(self, other: Coord) -> bool {
        (self.x - other.x).abs() + (self.y - other.y).abs() == 1
    }

    pub fn manhattan(self, other: Coord) -> u8 {
        ((self.x - other.x).abs() + (self.y - other.y).abs()) as u8
    }

    pub fn row(self) -> Line {
        Line::row(self.y)
    }

    pub fn column(self) -> Line {
        Line::column(self.x)
    }
}

impl fmt::Display for Coord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{};{}]", self.x, self.y)
    }
}

/// Cells where the exit tile may lie when the game starts: the corners and
/// the two cells next to each corner along the border.
pub const EXIT_CELLS: [Coord; 12] = [
    Coord::at(2, 2),
    Coord::at(2, 1),
    Coord::at(1, 2),
    Coord::at(-2, 2),
    Coord::at(-2, 1),
    Coord::at(-1, 2),
    Coord::at(-2, -2),
    Coord::at(-2, -1),
    Coord::at(-1, -2),
    Coord::at(2, -2),
    Coord::at(2, -1),
    Coord::at(1, -2),
];

pub fn is_exit_cell(c: Coord) -> bool {
    c.x.abs() >= 1 && c.y.abs() >= 1 && (c.x.abs() == 2 || c.y.abs() == 2)
}

/// The four cells adjacent to the start room.
pub const START_NEIGHBORS: [Coord; 4] = [
    Coord::at(1, 0),
    Coord::at(0, 1),
    Coord::at(-1, 0),
    Coord::at(0, -1),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Axis {
    /// Cells sharing a `y` value, written `[;y]`.
    Row,
    /// Cells sharing an `x` value, written `[x;]`.
    Column,
}

/// A row or a column of the board.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    axis: Axis,
    index: i8,
}

impl Line {
    /// # Panics
    ///
    /// Panics if `y` is outside `-2..=2`.
    pub const fn row(y: i8) -> Line {
        assert!(y >= -2 && y <= 2);
        Line {
            axis: Axis::Row,
            index: y,
        }
    }

    /// # Panics
    ///
    /// Panics if `x` is outside `-2..=2`.
    pub const fn column(x: i8) -> Line {
        assert!(x >= -2 && x <= 2);
        Line {
            axis: Axis::Column,
            index: x,
        }
    }

    pub fn new(axis: Axis, index: i8) -> Option<Line> {
        (-2..=2).contains(&index).then_some(Line { axis, index })
    }

    pub const fn axis(self) -> Axis {
        self.axis
    }

    pub const fn index(self) -> i8 {
        self.index
    }

    /// The central row and column never move.
    pub const fn is_central(self) -> bool {
        self.index == 0
    }

    pub fn contains(self, c: Coord) -> bool {
        match self.axis {
            Axis::Row => c.y == self.index,
            Axis::Column => c.x == self.index,
        }
    }

    /// Cells in increasing order of the free coordinate.
    pub fn cells(self) -> [Coord; 5] {
        core::array::from_fn(|i| {
            let t = i as i8 - 2;
            match self.axis {
                Axis::Row => Coord::at(t, self.index),
                Axis::Column => Coord::at(self.index, t),
            }
        })
    }

    /// Position among [`SHIFTABLE_LINES`], or `None` for a central line.
    pub fn slot(self) -> Option<usize> {
        if self.is_central() {
            return None;
        }
        let k = if self.index < 0 {
            self.index + 2
        } else {
            self.index + 1
        } as usize;
        Some(match self.axis {
            Axis::Row => k,
            Axis::Column => 4 + k,
        })
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.axis {
            Axis::Row => write!(f, "[;{}]", self.index),
            Axis::Column => write!(f, "[{};]", self.index),
        }
    }
}

/// Lines that may be shifted, indexed by [`Line::slot`].
pub const SHIFTABLE_LINES: [Line; 8] = [
    Line::row(-2),
    Line::row(-1),
    Line::row(1),
    Line::row(2),
    Line::column(-2),
    Line::column(-1),
    Line::column(1),
    Line::column(2),
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Direction {
    Up,
    Down,
    Left,
    Right,
}

impl Direction {
    pub const ALL: [Direction; 4] = [
        Direction::Right,
        Direction::Up,
        Direction::Left,
        Direction::Down,
    ];

    pub const fn delta(self) -> (i8, i8) {
        match self {
            Direction::Up => (0, 1),
            Direction::Down => (0, -1),
            Direction::Left => (-1, 0),
            Direction::Right => (1, 0),
        }
    }

    pub fn from_delta(dx: i8, dy: i8) -> Option<Direction> {
        match (dx, dy) {
            (0, 1) => Some(Direction::Up),
            (0, -1) => Some(Direction::Down),
            (-1, 0) => Some(Direction::Left),
            (1, 0) => Some(Direction::Right),
            _ => None,
        }
    }

    pub const fn opposite(self) -> Direction {
        match self {
            Direction::Up => Direction::Down,
            Direction::Down => Direction::Up,
            Direction::Left => Direction::Right,
            Direction::Right => Direction::Left,
        }
    }

    /// The axis along which this direction moves a line.
    pub const fn axis(self) -> Axis {
        match self {
            Direction::Up | Direction::Down => Axis::Column,
            Direction::Left | Direction::Right => Axis::Row,
        }
    }

    pub const fn symbol(self) -> char {
        match self {
            Direction::Up => '^',
            Direction::Down => 'v',
            Direction::Left => '<',
            Direction::Right => '>',
        }
    }

    /// Accepts the ASCII symbols and the Unicode arrows.
    pub fn from_symbol(c: char) -> Option<Direction> {
        match c {
            '^' | '↑' => Some(Direction::Up),
            'v' | '↓' => Some(Direction::Down),
            '<' | '←' => Some(Direction::Left),
            '>' | '→' => Some(Direction::Right),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A line together with the direction it slides in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Shift {
    line: Line,
    dir: Direction,
}

impl Shift {
    /// Returns `None` when the direction does not run along the line.
    pub fn new(line: Line, dir: Direction) -> Option<Shift> {
        (line.axis == dir.axis()).then_some(Shift { line, dir })
    }

    pub const fn line(self) -> Line {
        self.line
    }

    pub const fn dir(self) -> Direction {
        self.dir
    }

    /// Every shift of a non-central line, sixteen in all.
    pub fn all() -> impl Iterator<Item = Shift> {
        SHIFTABLE_LINES.into_iter().flat_map(|line| {
            let dirs = match line.axis {
                Axis::Row => [Direction::Left, Direction::Right],
                Axis::Column => [Direction::Up, Direction::Down],
            };
            dirs.into_iter().map(move |dir| Shift { line, dir })
        })
    }

    /// The cell whose tile leaves the board when this shift is a victory slide.
    pub fn leading_cell(self) -> Coord {
        let cells = self.line.cells();
        match self.dir {
            Direction::Up | Direction::Right => cells[4],
            Direction::Down | Direction::Left => cells[0],
        }
    }
}

impl fmt::Display for Shift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.dir, self.line)
    }
}

/// One of the eight symmetries of the square: a counter-clockwise rotation by
/// `rot` quarter turns, applied after an optional reflection `(x, y) -> (x, -y)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frame {
    rot: u8,
    mirror: bool,
}

impl Frame {
    pub const IDENTITY: Frame = Frame {
        rot: 0,
        mirror: false,
    };
    pub const R90: Frame = Frame {
        rot: 1,
        mirror: false,
    };
    pub const R180: Frame = Frame {
        rot: 2,
        mirror: false,
    };
    pub const R270: Frame = Frame {
        rot: 3,
        mirror: false,
    };
    pub const MIRROR: Frame = Frame {
        rot: 0,
        mirror: true,
    };

    /// Rotations first, then each rotation composed with the reflection.
    pub const ALL: [Frame; 8] = [
        Frame {
            rot: 0,
            mirror: false,
        },
        Frame {
            rot: 1,
            mirror: false,
        },
        Frame {
            rot: 2,
            mirror: false,
        },
        Frame {
            rot: 3,
            mirror: false,
        },
        Frame {
            rot: 0,
            mirror: true,
        },
        Frame {
            rot: 1,
            mirror: true,
        },
        Frame {
            rot: 2,
            mirror: true,
        },
        Frame {
            rot: 3,
            mirror: true,
        },
    ];

    pub const fn rotation(self) -> u8 {
        self.rot
    }

    pub const fn is_mirrored(self) -> bool {
        self.mirror
    }

    /// Row-major integer matrix acting on column vectors `(x, y)`.
    pub const fn matrix(self) -> [[i8; 2]; 2] {
        let r = match self.rot & 3 {
            0 => [[1, 0], [0, 1]],
            1 => [[0, -1], [1, 0]],
            2 => [[-1, 0], [0, -1]],
            _ => [[0, 1], [-1, 0]],
        };
        if self.mirror {
            [[r[0][0], -r[0][1]], [r[1][0], -r[1][1]]]
        } else {
            r
        }
    }

    fn from_matrix(m: [[i8; 2]; 2]) -> Frame {
        for f in Frame::ALL {
            if f.matrix() == m {
                return f;
            }
        }
        unreachable!("not an element of the dihedral group")
    }

    fn map_vec(self, x: i8, y: i8) -> (i8, i8) {
        let m = self.matrix();
        (m[0][0] * x + m[0][1] * y, m[1][0] * x + m[1][1] * y)
    }

    pub fn apply(self, c: Coord) -> Coord {
        let (x, y) = self.map_vec(c.x, c.y);
        Coord { x, y }
    }

    pub fn apply_dir(self, d: Direction) -> Direction {
        let (dx, dy) = d.delta();
        let (x, y) = self.map_vec(dx, dy);
        Direction::from_delta(x, y).expect("frames preserve unit vectors")
    }

    pub fn apply_line(self, l: Line) -> Line {
        let (px, py, ax, ay) = match l.axis {
            Axis::Row => (0, l.index, 1, 0),
            Axis::Column => (l.index, 0, 0, 1),
        };
        let (qx, qy) = self.map_vec(px, py);
        let (bx, _) = self.map_vec(ax, ay);
        if bx == 0 {
            Line {
                axis: Axis::Column,
                index: qx,
            }
        } else {
            Line {
                axis: Axis::Row,
                index: qy,
            }
        }
    }

    pub fn apply_shift(self, s: Shift) -> Shift {
        Shift {
            line: self.apply_line(s.line),
            dir: self.apply_dir(s.dir),
        }
    }

    /// `self.then(g)` applies `self` first, then `g`.
    pub fn then(self, g: Frame) -> Frame {
        let a = g.matrix();
        let b = self.matrix();
        let mut m = [[0i8; 2]; 2];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, v) in row.iter_mut().enumerate() {
                *v = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        Frame::from_matrix(m)
    }

    pub fn inverse(self) -> Frame {
        let m = self.matrix();
        Frame::from_matrix([[m[0][0], m[1][0]], [m[0][1], m[1][1]]])
    }

    pub const fn name(self) -> &'static str {
        match (self.rot, self.mirror) {
            (0, false) => "id",
            (1, false) => "r90",
            (2, false) => "r180",
            (3, false) => "r270",
            (0, true) => "h",
            (1, true) => "r90h",
            (2, true) => "r180h",
            _ => "r270h",
        }
    }

    pub fn from_name(s: &str) -> Option<Frame> {
        Frame::ALL.into_iter().find(|f| f.name() == s)
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exit_cells_match_predicate() {
        let listed: alloc::vec::Vec<Coord> = EXIT_CELLS.to_vec();
        let derived: alloc::vec::Vec<Coord> = Coord::all().filter(|&c| is_exit_cell(c)).collect();
        assert_eq!(derived.len(), 12);
        for c in derived {
            assert!(listed.contains(&c));
        }
        for c in EXIT_CELLS {
            assert!(!START_NEIGHBORS.iter().any(|n| n.is_adjacent(c)));
        }
    }

    #[test]
    fn rotation_sends_2_1_to_minus1_2() {
        assert_eq!(Frame::R90.apply(Coord::at(2, 1)), Coord::at(-1, 2));
        assert_eq!(Frame::MIRROR.apply(Coord::at(2, 1)), Coord::at(2, -1));
        assert_eq!(
            Frame::MIRROR.then(Frame::R180).apply(Coord::at(2, 1)),
            Coord::at(-2, 1)
        );
    }

    #[test]
    fn lines_follow_cells() {
        for f in Frame::ALL {
            for l in SHIFTABLE_LINES {
                let image = f.apply_line(l);
                for c in l.cells() {
                    assert!(image.contains(f.apply(c)), "{f} {l} {c}");
                }
            }
        }
    }

    #[test]
    fn shifts_enumerated() {
        assert_eq!(Shift::all().count(), 16);
        assert!(Shift::new(Line::row(1), Direction::Up).is_none());
        assert_eq!(
            Shift::new(Line::row(1), Direction::Right)
                .unwrap()
                .leading_cell(),
            Coord::at(2, 1)
        );
    }

    #[test]
    fn slots_are_dense() {
        for (i, l) in SHIFTABLE_LINES.iter().enumerate() {
            assert_eq!(l.slot(), Some(i));
        }
        assert_eq!(Line::row(0).slot(), None);
    }

    #[test]
    fn frame_names_roundtrip() {
        for f in Frame::ALL {
            assert_eq!(Frame::from_name(f.name()), Some(f));
        }
    }
}
