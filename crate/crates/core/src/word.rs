//! Letters and words over the generators of Thompson's group F.
//!
//! A word of length d is a formal tuple of letters g_i or g_i^-1; no free
//! reduction is performed. The textual grammar is
//!
//! ```text
//! word   := WS* (letter (WS+ letter)*)? WS*
//! letter := "g" DIGITS ("^-1")? | DIGITS ("+" | "-")
//! DIGITS := [0-9]+
//! WS     := space or tab
//! ```
//!
//! Canonical output uses the "g" form, e.g. `g3^-1 g6`.

use std::fmt;
use std::str::FromStr;

use crate::{Error, Result};

/// Generator subscript. Indices are unbounded in principle; parsing
/// rejects anything that does not fit in a u64, and rewriting uses
/// checked arithmetic.
pub type Index = u64;

/// Exponent of a letter: +1 for a generator, -1 for its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// One letter g_index^sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub index: Index,
    pub sign: Sign,
}

impl Letter {
    pub fn gen(index: Index) -> Letter {
        Letter {
            index,
            sign: Sign::Plus,
        }
    }

    pub fn inv(index: Index) -> Letter {
        Letter {
            index,
            sign: Sign::Minus,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.sign {
            Sign::Plus => write!(f, "g{}", self.index),
            Sign::Minus => write!(f, "g{}^-1", self.index),
        }
    }
}

/// A formal word: an ordered tuple of letters. The empty word is legal
/// and evaluates to the identity.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Word {
        Word { letters }
    }

    pub fn empty() -> Word {
        Word::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Letter> {
        self.letters.iter()
    }

    /// Concatenation; associative, with the empty word as identity.
    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    /// Sum of letter exponents; 0 iff generators and inverses balance.
    pub fn sign_sum(&self) -> i64 {
        self.letters.iter().map(|l| l.sign.as_int()).sum()
    }

    /// Sum of generator subscripts.
    pub fn index_sum(&self) -> u64 {
        self.letters.iter().map(|l| l.index).sum()
    }
}

impl From<Vec<Letter>> for Word {
    fn from(letters: Vec<Letter>) -> Word {
        Word { letters }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, letter) in self.letters.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{letter}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        parse_word(s)
    }
}

fn is_ws(b: u8) -> bool {
    b == b' ' || b == b'\t'
}

/// Parses a digit run starting at `i`; returns (value, next position).
fn parse_digits(bytes: &[u8], i: usize) -> Result<(u64, usize)> {
    let start = i;
    let mut j = i;
    let mut value: u64 = 0;
    while j < bytes.len() && bytes[j].is_ascii_digit() {
        let digit = (bytes[j] - b'0') as u64;
        value = value
            .checked_mul(10)
            .and_then(|v| v.checked_add(digit))
            .ok_or(Error::Overflow { offset: start })?;
        j += 1;
    }
    if j == start {
        return Err(Error::Syntax {
            offset: start,
            message: "expected a generator index".into(),
        });
    }
    Ok((value, j))
}

/// Parses the textual grammar. Errors carry the byte offset of the
/// offending input.
pub fn parse_word(text: &str) -> Result<Word> {
    let bytes = text.as_bytes();
    let mut letters = Vec::new();
    let mut i = 0;
    loop {
        while i < bytes.len() && is_ws(bytes[i]) {
            i += 1;
        }
        if i == bytes.len() {
            break;
        }
        let letter = if bytes[i] == b'g' {
            let (index, j) = parse_digits(bytes, i + 1)?;
            i = j;
            if i < bytes.len() && bytes[i] == b'^' {
                if bytes.len() >= i + 3 && &bytes[i..i + 3] == b"^-1" {
                    i += 3;
                    Letter::inv(index)
                } else {
                    return Err(Error::Syntax {
                        offset: i,
                        message: "expected ^-1".into(),
                    });
                }
            } else {
                Letter::gen(index)
            }
        } else if bytes[i].is_ascii_digit() {
            let (index, j) = parse_digits(bytes, i)?;
            i = j;
            match bytes.get(j) {
                Some(b'+') => {
                    i += 1;
                    Letter::gen(index)
                }
                Some(b'-') => {
                    i += 1;
                    Letter::inv(index)
                }
                _ => {
                    return Err(Error::Syntax {
                        offset: j,
                        message: "expected + or - after a bare index".into(),
                    });
                }
            }
        } else {
            return Err(Error::Syntax {
                offset: i,
                message: "expected a letter".into(),
            });
        };
        letters.push(letter);
        if i < bytes.len() && !is_ws(bytes[i]) {
            return Err(Error::Syntax {
                offset: i,
                message: "expected whitespace between letters".into(),
            });
        }
    }
    Ok(Word { letters })
}

/// Canonical rendering; `parse_word(format_word(w)) == w` for every word.
pub fn format_word(w: &Word) -> String {
    w.to_string()
}
