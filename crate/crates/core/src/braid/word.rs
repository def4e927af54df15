use std::fmt;

use crate::error::{Error, Result};

/// The generator `α_ij`, `1 <= i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Generator {
    i: usize,
    j: usize,
}

impl Generator {
    pub fn new(i: usize, j: usize) -> Result<Self> {
        if 1 <= i && i < j {
            Ok(Generator { i, j })
        } else {
            Err(Error::Malformed(format!("generator indices must satisfy 1 <= i < j, got ({i}, {j})")))
        }
    }

    pub fn i(&self) -> usize {
        self.i
    }

    pub fn j(&self) -> usize {
        self.j
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.i < 10 && self.j < 10 {
            write!(f, "a{}{}", self.i, self.j)
        } else {
            write!(f, "a{}_{}", self.i, self.j)
        }
    }
}

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Letter {
    pub generator: Generator,
    pub inverse: bool,
}

impl Letter {
    pub fn inverted(self) -> Letter {
        Letter { inverse: !self.inverse, ..self }
    }

    pub fn exponent(&self) -> i64 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.generator)?;
        if self.inverse {
            write!(f, "^-1")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Malformed(format!("bad generator token `{s}`"));
        let (body, inverse) = match s.strip_suffix("^-1") {
            Some(b) => (b, true),
            None => (s, false),
        };
        let digits = body.strip_prefix('a').ok_or_else(bad)?;
        let (i, j) = match digits.split_once('_') {
            Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
            None if digits.len() == 2 && digits.bytes().all(|b| b.is_ascii_digit()) => {
                ((digits.as_bytes()[0] - b'0') as usize, (digits.as_bytes()[1] - b'0') as usize)
            }
            None => return Err(bad()),
        };
        Ok(Letter { generator: Generator::new(i, j)?, inverse })
    }
}

/// A word in the generators and their inverses.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn gen(i: usize, j: usize) -> Self {
        Word(vec![Letter { generator: Generator::new(i, j).expect("valid generator"), inverse: false }])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverted()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        Word(self.0.iter().chain(&other.0).copied().collect())
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        a.concat(b).concat(&a.inverse()).concat(&b.inverse())
    }

    /// Exponent sum of `g` in this word.
    pub fn exponent_sum(&self, g: Generator) -> i64 {
        self.0.iter().filter(|l| l.generator == g).map(Letter::exponent).sum()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (t, l) in self.0.iter().enumerate() {
            if t > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Cancels adjacent `x x^-1` pairs until none remain.
pub fn free_reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for &l in &w.0 {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    Word(out)
}
