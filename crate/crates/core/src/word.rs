use std::fmt;
use std::str::FromStr;

use crate::error::Error;

/// Finite word over the alphabet `{0, .., m-1}`, stored 0-based.
///
/// Words print 1-based: `[0, 1, 0]` is written `"121"`. Alphabets with more
/// than nine symbols print with `.` separators (`"1.12.3"`).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(symbols: Vec<usize>) -> Self {
        Word(symbols)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn symbols(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Decode the lexicographic rank of a length-`len` word over `m` symbols
    /// (first symbol most significant).
    pub fn from_index(mut index: usize, len: usize, m: usize) -> Self {
        let mut symbols = vec![0; len];
        for slot in symbols.iter_mut().rev() {
            *slot = index % m;
            index /= m;
        }
        Word(symbols)
    }

    pub fn index(&self, m: usize) -> usize {
        self.0.iter().fold(0, |acc, &s| acc * m + s)
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut symbols = self.0.clone();
        symbols.extend_from_slice(&other.0);
        Word(symbols)
    }

    pub fn repeat(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn max_symbol(&self) -> Option<usize> {
        self.0.iter().copied().max()
    }

    /// True when the word is not a proper power of a shorter word.
    pub fn is_primitive(&self) -> bool {
        let n = self.0.len();
        (1..n)
            .filter(|d| n.is_multiple_of(*d))
            .all(|d| (d..n).any(|i| self.0[i] != self.0[i - d]))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&s| s < 9) {
            for s in &self.0 {
                write!(f, "{}", s + 1)?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.0.iter().map(|s| (s + 1).to_string()).collect();
            f.write_str(&parts.join("."))
        }
    }
}

impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidInput(format!("malformed word {s:?}"));
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let symbols: Result<Vec<usize>, Error> = if s.contains('.') {
            s.split('.')
                .map(|p| match p.parse::<usize>() {
                    Ok(v) if v >= 1 => Ok(v - 1),
                    _ => Err(bad()),
                })
                .collect()
        } else {
            s.chars()
                .map(|c| match c.to_digit(10) {
                    Some(d) if d >= 1 => Ok(d as usize - 1),
                    _ => Err(bad()),
                })
                .collect()
        };
        symbols.map(Word)
    }
}
