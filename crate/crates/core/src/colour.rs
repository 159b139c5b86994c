use core::fmt;

/// Vertex colour. `Red < Blue` is the fixed order used by canonical forms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Colour {
    Red,
    Blue,
}

impl Colour {
    pub fn other(self) -> Colour {
        match self {
            Colour::Red => Colour::Blue,
            Colour::Blue => Colour::Red,
        }
    }

    pub fn token(self) -> char {
        match self {
            Colour::Red => 'R',
            Colour::Blue => 'B',
        }
    }

    pub fn from_token(token: &str) -> Option<Colour> {
        match token {
            "R" => Some(Colour::Red),
            "B" => Some(Colour::Blue),
            _ => None,
        }
    }

    pub(crate) fn index(self) -> u32 {
        match self {
            Colour::Red => 0,
            Colour::Blue => 1,
        }
    }
}

impl fmt::Display for Colour {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Colour::Red => f.write_str("red"),
            Colour::Blue => f.write_str("blue"),
        }
    }
}

/// Edge colour in a subdivided midsection; black marks edges added by the
/// subdivision.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeColour {
    Red,
    Blue,
    Black,
}

impl EdgeColour {
    pub fn token(self) -> char {
        match self {
            EdgeColour::Red => 'R',
            EdgeColour::Blue => 'B',
            EdgeColour::Black => 'K',
        }
    }

    pub fn from_token(token: &str) -> Option<EdgeColour> {
        match token {
            "R" => Some(EdgeColour::Red),
            "B" => Some(EdgeColour::Blue),
            "K" => Some(EdgeColour::Black),
            _ => None,
        }
    }

    pub fn as_colour(self) -> Option<Colour> {
        match self {
            EdgeColour::Red => Some(Colour::Red),
            EdgeColour::Blue => Some(Colour::Blue),
            EdgeColour::Black => None,
        }
    }
}

impl From<Colour> for EdgeColour {
    fn from(c: Colour) -> Self {
        match c {
            Colour::Red => EdgeColour::Red,
            Colour::Blue => EdgeColour::Blue,
        }
    }
}
