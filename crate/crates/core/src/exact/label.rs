use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// A Laurent monomial `x^x * y^y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentMono {
    pub x: i32,
    pub y: i32,
}

impl LaurentMono {
    pub const fn new(x: i32, y: i32) -> Self {
        LaurentMono { x, y }
    }

    pub fn degree(&self) -> i32 {
        self.x + self.y
    }

    /// Both exponents strictly negative.
    pub fn is_interior(&self) -> bool {
        self.x <= -1 && self.y <= -1
    }
}

impl fmt::Display for LaurentMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let part = |name: &str, e: i32| match e {
            0 => None,
            1 => Some(name.to_string()),
            e => Some(format!("{name}^{e}")),
        };
        let parts: Vec<String> = [part("x", self.x), part("y", self.y)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            write!(f, "1")
        } else {
            write!(f, "{}", parts.join("*"))
        }
    }
}

impl FromStr for LaurentMono {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        let mut m = LaurentMono::new(0, 0);
        if s == "1" {
            return Ok(m);
        }
        for factor in s.split('*') {
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (
                    n,
                    e.parse::<i32>()
                        .map_err(|_| Error::Parse(format!("bad exponent in {s:?}")))?,
                ),
                None => (factor, 1),
            };
            match name {
                "x" => m.x += e,
                "y" => m.y += e,
                _ => return Err(Error::Parse(format!("bad monomial {s:?}"))),
            }
        }
        Ok(m)
    }
}

/// Row or column tag of a formula matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Label {
    /// A basis monomial of a cohomology space.
    Mono(LaurentMono),
    /// A basis monomial inside a named block, e.g. the `Fxx` block of the
    /// generalized Sylvester matrix or the `f` rows of a Sylvester matrix.
    Block(String, LaurentMono),
    Index(usize),
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::Mono(m) => write!(f, "{m}"),
            Label::Block(b, m) => write!(f, "{b}:{m}"),
            Label::Index(i) => write!(f, "#{i}"),
        }
    }
}

impl FromStr for Label {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        if let Some(i) = s.strip_prefix('#') {
            return i
                .parse()
                .map(Label::Index)
                .map_err(|_| Error::Parse(format!("bad label {s:?}")));
        }
        match s.split_once(':') {
            Some((b, m)) => Ok(Label::Block(b.to_string(), m.parse()?)),
            None => Ok(Label::Mono(s.parse()?)),
        }
    }
}
