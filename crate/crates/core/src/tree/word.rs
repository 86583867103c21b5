use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Generator letter of a Grigorchuk-family group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    A,
    B,
    C,
    D,
}

impl Letter {
    pub const BCD: [Letter; 3] = [Letter::B, Letter::C, Letter::D];

    pub fn from_char(c: char) -> Result<Self> {
        match c {
            'a' => Ok(Letter::A),
            'b' => Ok(Letter::B),
            'c' => Ok(Letter::C),
            'd' => Ok(Letter::D),
            _ => Err(Error::InvalidLetter(c)),
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Letter::A => 'a',
            Letter::B => 'b',
            Letter::C => 'c',
            Letter::D => 'd',
        }
    }

    pub fn is_a(self) -> bool {
        self == Letter::A
    }

    /// Product in the Klein four-group `{1, b, c, d}`; `None` is the identity.
    fn klein(self, other: Letter) -> Option<Letter> {
        debug_assert!(!self.is_a() && !other.is_a());
        if self == other {
            return None;
        }
        Letter::BCD.into_iter().find(|&x| x != self && x != other)
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// A permutation of `{b, c, d}`, extended by `a ↦ a`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LetterPerm {
    /// Images of `b`, `c`, `d` in that order.
    images: [Letter; 3],
}

impl LetterPerm {
    pub fn identity() -> Self {
        Self { images: Letter::BCD }
    }

    /// The transposition exchanging `x` and `y` (identity when equal).
    pub fn transposition(x: Letter, y: Letter) -> Self {
        let images = Letter::BCD.map(|l| {
            if l == x {
                y
            } else if l == y {
                x
            } else {
                l
            }
        });
        Self { images }
    }

    pub fn apply(&self, l: Letter) -> Letter {
        match l {
            Letter::A => Letter::A,
            Letter::B => self.images[0],
            Letter::C => self.images[1],
            Letter::D => self.images[2],
        }
    }

    pub fn inverse(&self) -> Self {
        let mut images = Letter::BCD;
        for (src, &dst) in Letter::BCD.iter().zip(&self.images) {
            images[bcd_index(dst)] = *src;
        }
        Self { images }
    }

    pub fn is_identity(&self) -> bool {
        self.images == Letter::BCD
    }
}

impl fmt::Display for LetterPerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [b, c, d] = self.images;
        write!(f, "b->{b},c->{c},d->{d}")
    }
}

fn bcd_index(l: Letter) -> usize {
    match l {
        Letter::B => 0,
        Letter::C => 1,
        Letter::D => 2,
        Letter::A => unreachable!("a is not in the Klein four-group"),
    }
}

/// Which generating set word length is measured against.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GenSet {
    /// `⟨a, b, c, d⟩`: every letter costs one.
    Abcd,
    /// `⟨a, b, c⟩`: `d` is spelled `bc` and costs two.
    Abc,
}

/// An element of `G_{σ^k ω}` written as a reduced word over `{a, b, c, d}`.
///
/// Reduced means no two adjacent `a`s and no two adjacent letters from
/// `{b, c, d}`, so a nonempty word alternates between `a` and the Klein
/// letters. Words act on strings with the rightmost letter first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct TreeWord {
    offset: usize,
    letters: Vec<Letter>,
}

impl TreeWord {
    pub fn identity(offset: usize) -> Self {
        Self {
            offset,
            letters: Vec::new(),
        }
    }

    pub fn letter(letter: Letter, offset: usize) -> Self {
        Self {
            offset,
            letters: vec![letter],
        }
    }

    /// Freely reduces `raw` using `a² = x² = 1` and the Klein four-group
    /// relations among `b, c, d`.
    pub fn reduce(raw: impl IntoIterator<Item = Letter>, offset: usize) -> Self {
        let mut stack: Vec<Letter> = Vec::new();
        for l in raw {
            match stack.last().copied() {
                Some(top) if top.is_a() && l.is_a() => {
                    stack.pop();
                }
                Some(top) if !top.is_a() && !l.is_a() => {
                    stack.pop();
                    if let Some(p) = top.klein(l) {
                        stack.push(p);
                    }
                }
                _ => stack.push(l),
            }
        }
        Self { offset, letters: stack }
    }

    /// Parses a word such as `"abad"`; `"1"` and `""` denote the identity.
    pub fn parse(s: &str, offset: usize) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Self::identity(offset));
        }
        let raw = s
            .chars()
            .filter(|c| !c.is_whitespace())
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::reduce(raw, offset))
    }

    pub fn offset(&self) -> usize {
        self.offset
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

    /// True when the word has an odd number of `a`s, i.e. swaps the two
    /// subtrees of the root.
    pub fn swaps_root(&self) -> bool {
        self.letters.iter().filter(|l| l.is_a()).count() % 2 == 1
    }

    pub fn multiply(&self, other: &TreeWord) -> Result<TreeWord> {
        if self.offset != other.offset {
            return Err(Error::OffsetMismatch(self.offset, other.offset));
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &TreeWord) -> TreeWord {
        debug_assert_eq!(self.offset, other.offset);
        Self::reduce(self.letters.iter().chain(&other.letters).copied(), self.offset)
    }

    /// All generators are involutions, so the inverse is the reversal.
    pub fn invert(&self) -> TreeWord {
        Self {
            offset: self.offset,
            letters: self.letters.iter().rev().copied().collect(),
        }
    }

    pub fn conjugate_by(&self, h: &TreeWord) -> Result<TreeWord> {
        Ok(h.multiply(self)?.mul_unchecked(&h.invert()))
    }

    pub fn pow(&self, mut exp: u64) -> TreeWord {
        let mut base = self.clone();
        let mut acc = TreeWord::identity(self.offset);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul_unchecked(&base);
            }
            exp >>= 1;
            if exp > 0 {
                base = base.mul_unchecked(&base);
            }
        }
        acc
    }

    /// Letter-count length, an upper bound on the geodesic length.
    pub fn word_length(&self, gens: GenSet) -> usize {
        self.letters
            .iter()
            .map(|&l| match (gens, l) {
                (GenSet::Abc, Letter::D) => 2,
                _ => 1,
            })
            .sum()
    }

    pub fn relabel(&self, perm: &LetterPerm) -> TreeWord {
        Self::reduce(self.letters.iter().map(|&l| perm.apply(l)), self.offset)
    }

    pub fn count(&self, letter: Letter) -> usize {
        self.letters.iter().filter(|&&l| l == letter).count()
    }

    pub(crate) fn with_offset(letters: Vec<Letter>, offset: usize) -> Self {
        Self::reduce(letters, offset)
    }
}

impl fmt::Display for TreeWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("1");
        }
        for l in &self.letters {
            write!(f, "{l}")?;
        }
        Ok(())
    }
}
