use std::fmt;
use std::ops::Mul;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn neg(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inv(self) -> Self {
        Letter {
            gen: self.gen,
            inverse: !self.inverse,
        }
    }

    pub fn cancels(self, other: Letter) -> bool {
        self.gen == other.gen && self.inverse != other.inverse
    }

    /// Lowercase for generators, uppercase for inverses. Ranks above 26 are
    /// not representable in the text syntax.
    pub fn to_char(self) -> char {
        let base = if self.inverse { b'A' } else { b'a' };
        (base + self.gen as u8) as char
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'a'..='z' => Some(Letter::pos(c as usize - 'a' as usize)),
            'A'..='Z' => Some(Letter::neg(c as usize - 'A' as usize)),
            _ => None,
        }
    }
}

/// A freely reduced word in the free group of the given rank.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    rank: usize,
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity(rank: usize) -> Self {
        Word {
            rank,
            letters: Vec::new(),
        }
    }

    pub fn generator(rank: usize, gen: usize) -> Self {
        assert!(gen < rank, "generator {gen} out of range for rank {rank}");
        Word {
            rank,
            letters: vec![Letter::pos(gen)],
        }
    }

    /// Freely reduces a raw letter sequence.
    pub fn reduce(rank: usize, raw: impl IntoIterator<Item = Letter>) -> Result<Self> {
        let mut letters: Vec<Letter> = Vec::new();
        for l in raw {
            if l.gen >= rank {
                return Err(Error::GeneratorOutOfRange { gen: l.gen, rank });
            }
            push_reduced(&mut letters, l);
        }
        Ok(Word { rank, letters })
    }

    /// Parses the text syntax: `a`..`z` generators, `A`..`Z` inverses,
    /// `""` or `"1"` for the identity. Whitespace and `*` are ignored.
    pub fn parse(text: &str, rank: usize) -> Result<Self> {
        let text = text.trim();
        if text.is_empty() || text == "1" {
            return Ok(Word::identity(rank));
        }
        let mut raw = Vec::with_capacity(text.len());
        for c in text.chars() {
            if c.is_whitespace() || c == '*' {
                continue;
            }
            let l = Letter::from_char(c)
                .ok_or_else(|| Error::Parse(format!("unexpected character {c:?} in word {text:?}")))?;
            raw.push(l);
        }
        Word::reduce(rank, raw)
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word {
            rank: self.rank,
            letters: self.letters.iter().rev().map(|l| l.inv()).collect(),
        }
    }

    pub fn checked_mul(&self, other: &Word) -> Result<Word> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch {
                left: self.rank,
                right: other.rank,
            });
        }
        Ok(self.mul_same_rank(other))
    }

    fn mul_same_rank(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.letters.len() + other.letters.len());
        letters.extend_from_slice(&self.letters);
        for &l in &other.letters {
            push_reduced(&mut letters, l);
        }
        Word {
            rank: self.rank,
            letters,
        }
    }

    /// Conjugate `x * self * x^-1`.
    pub fn conjugate_by(&self, x: &Word) -> Word {
        &(x * self) * &x.inverse()
    }

    pub fn pow(&self, n: i64) -> Word {
        let base = if n < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::identity(self.rank);
        for _ in 0..n.unsigned_abs() {
            out = &out * &base;
        }
        out
    }

    /// Exponent sum of every generator.
    pub fn exponent_sums(&self) -> Vec<i64> {
        let mut sums = vec![0; self.rank];
        for l in &self.letters {
            sums[l.gen] += if l.inverse { -1 } else { 1 };
        }
        sums
    }

    /// Substitutes `images[g]` for generator `g`, in the free group where the
    /// images live.
    pub fn substitute(&self, images: &[Word]) -> Word {
        assert_eq!(images.len(), self.rank);
        let target_rank = images.first().map_or(0, |w| w.rank);
        let mut out = Word::identity(target_rank);
        for l in &self.letters {
            let img = &images[l.gen];
            out = if l.inverse {
                &out * &img.inverse()
            } else {
                &out * img
            };
        }
        out
    }

    /// Text form where the identity is written `1`.
    pub fn to_string_or_one(&self) -> String {
        if self.is_identity() {
            "1".to_string()
        } else {
            self.to_string()
        }
    }
}

fn push_reduced(letters: &mut Vec<Letter>, l: Letter) {
    match letters.last() {
        Some(&last) if last.cancels(l) => {
            letters.pop();
        }
        _ => letters.push(l),
    }
}

impl Mul for &Word {
    type Output = Word;

    /// Panics on rank mismatch; use [`Word::checked_mul`] for untrusted input.
    fn mul(self, rhs: &Word) -> Word {
        assert_eq!(self.rank, rhs.rank, "rank mismatch in word product");
        self.mul_same_rank(rhs)
    }
}

impl Mul for Word {
    type Output = Word;

    fn mul(self, rhs: Word) -> Word {
        &self * &rhs
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "{}", l.to_char())?;
        }
        Ok(())
    }
}

/// Parses with the smallest rank covering every letter in the text.
impl FromStr for Word {
    type Err = Error;

    fn from_str(s: &str) -> Result<Word> {
        let rank = s
            .chars()
            .filter_map(Letter::from_char)
            .map(|l| l.gen + 1)
            .max()
            .unwrap_or(0);
        Word::parse(s, rank)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}
