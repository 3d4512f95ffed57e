use std::fmt;

/// Handle into the enumeration of a [`SpacePresentation`](super::SpacePresentation).
///
/// Ids are dense: the ball of radius `W` around the basepoint is exactly the
/// id prefix `0..window_len(W)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointId(pub u32);

impl PointId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for PointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A generator letter of a group word. Generator `i` is `i + 1`, its inverse
/// is `-(i + 1)`. In the infinite dihedral group both generators are
/// involutions, so `a = 1` and `b = 2` are their own inverses.
pub type Letter = i8;

/// Concrete coordinates of a point.
///
/// Composite spaces refer to their factors' enumerations by id.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Point {
    Lattice(Vec<i64>),
    Word(Vec<Letter>),
    Node(usize),
    Left(PointId),
    Right(PointId),
    Pair(PointId, PointId),
}

pub(crate) fn letter_name(l: Letter) -> char {
    let base = b'a' + (l.unsigned_abs() - 1);
    if l > 0 {
        base as char
    } else {
        base.to_ascii_uppercase() as char
    }
}

/// Parses `aBab`-style words: lowercase letters are generators, uppercase
/// their inverses.
pub fn parse_word(text: &str) -> Option<Vec<Letter>> {
    text.chars()
        .map(|c| {
            if c.is_ascii_lowercase() {
                Some((c as u8 - b'a' + 1) as Letter)
            } else if c.is_ascii_uppercase() {
                Some(-((c as u8 - b'A' + 1) as Letter))
            } else {
                None
            }
        })
        .collect()
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Point::Lattice(c) if c.len() == 1 => write!(f, "{}", c[0]),
            Point::Lattice(c) => {
                write!(f, "(")?;
                for (i, x) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            Point::Word(w) if w.is_empty() => write!(f, "e"),
            Point::Word(w) => w.iter().try_for_each(|&l| write!(f, "{}", letter_name(l))),
            Point::Node(i) => write!(f, "n{i}"),
            Point::Left(p) => write!(f, "L{p}"),
            Point::Right(p) => write!(f, "R{p}"),
            Point::Pair(a, b) => write!(f, "<{a},{b}>"),
        }
    }
}
