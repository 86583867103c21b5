use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::word::{Letter, LetterPerm};
use crate::error::{Error, Result};

/// An eventually periodic infinite string `prefix · cycle^∞` over `{b, c, d}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OmegaSequence {
    prefix: Vec<Letter>,
    cycle: Vec<Letter>,
}

impl OmegaSequence {
    pub fn new(prefix: Vec<Letter>, cycle: Vec<Letter>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::EmptyCycle);
        }
        if let Some(l) = prefix.iter().chain(&cycle).find(|l| l.is_a()) {
            return Err(Error::InvalidOmegaLetter(l.as_char()));
        }
        Ok(Self { prefix, cycle })
    }

    pub fn from_strs(prefix: &str, cycle: &str) -> Result<Self> {
        Self::new(omega_letters(prefix)?, omega_letters(cycle)?)
    }

    /// `ω = (dcb)^∞`, which gives the first Grigorchuk group.
    pub fn classical() -> Self {
        Self {
            prefix: Vec::new(),
            cycle: vec![Letter::D, Letter::C, Letter::B],
        }
    }

    pub fn prefix(&self) -> &[Letter] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[Letter] {
        &self.cycle
    }

    pub fn letter_at(&self, n: usize) -> Letter {
        self.letter_at_position(self.position(n))
    }

    /// Number of distinct tail states `σ^n ω`.
    pub fn num_positions(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    /// Canonical index of the tail `σ^n ω`; two indices agree exactly when
    /// the representation makes the tails equal.
    pub fn position(&self, n: usize) -> usize {
        let p = self.prefix.len();
        if n < p {
            n
        } else {
            p + (n - p) % self.cycle.len()
        }
    }

    pub fn letter_at_position(&self, pos: usize) -> Letter {
        let p = self.prefix.len();
        if pos < p {
            self.prefix[pos]
        } else {
            self.cycle[pos - p]
        }
    }

    /// True when `ω_j = x` for every `j ≥ k`.
    pub fn tail_constant_from(&self, k: usize, x: Letter) -> bool {
        let p = self.prefix.len();
        let prefix_ok = k >= p || self.prefix[k..].iter().all(|&l| l == x);
        prefix_ok && self.cycle.iter().all(|&l| l == x)
    }

    pub fn is_eventually_constant(&self) -> bool {
        self.cycle.iter().all(|&l| l == self.cycle[0])
    }

    /// Smallest `m ≥ from` with `ω_m ≠ x`, if any.
    pub fn next_position_differing(&self, from: usize, x: Letter) -> Option<usize> {
        (from..from + self.num_positions() + 1).find(|&m| self.letter_at(m) != x)
    }

    pub fn relabel(&self, perm: &LetterPerm) -> Self {
        Self {
            prefix: self.prefix.iter().map(|&l| perm.apply(l)).collect(),
            cycle: self.cycle.iter().map(|&l| perm.apply(l)).collect(),
        }
    }

    /// Normal form: primitive cycle and shortest prefix. Two sequences are
    /// equal as infinite strings iff their normal forms coincide.
    pub fn normalized(&self) -> Self {
        let mut cycle = self.cycle.clone();
        let n = cycle.len();
        if let Some(d) = (1..=n).find(|&d| n.is_multiple_of(d) && (0..n).all(|i| cycle[i] == cycle[i % d])) {
            cycle.truncate(d);
        }
        let mut prefix = self.prefix.clone();
        while let Some(&last) = prefix.last() {
            if last != *cycle.last().unwrap() {
                break;
            }
            prefix.pop();
            cycle.rotate_right(1);
        }
        Self { prefix, cycle }
    }

    pub fn same_sequence(&self, other: &OmegaSequence) -> bool {
        self.normalized() == other.normalized()
    }

    pub fn is_classical(&self) -> bool {
        self.same_sequence(&Self::classical())
    }
}

fn omega_letters(s: &str) -> Result<Vec<Letter>> {
    s.chars()
        .map(|c| match c {
            'b' => Ok(Letter::B),
            'c' => Ok(Letter::C),
            'd' => Ok(Letter::D),
            _ => Err(Error::InvalidOmegaLetter(c)),
        })
        .collect()
}

/// Accepts `cycle`, `prefix(cycle)` or `prefix(cycle)*`.
impl FromStr for OmegaSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let s = s.strip_suffix('*').unwrap_or(s);
        match s.find('(') {
            None => Self::from_strs("", s),
            Some(open) => {
                let rest = &s[open + 1..];
                let cycle = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::InvalidOmega(s.to_string()))?;
                Self::from_strs(&s[..open], cycle)
            }
        }
    }
}

impl fmt::Display for OmegaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.prefix {
            write!(f, "{l}")?;
        }
        f.write_str("(")?;
        for l in &self.cycle {
            write!(f, "{l}")?;
        }
        f.write_str(")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn letters_follow_prefix_then_cycle() {
        let w: OmegaSequence = "bb(dc)".parse().unwrap();
        let got: String = (0..7).map(|n| w.letter_at(n).as_char()).collect();
        assert_eq!(got, "bbdcdcd");
        assert_eq!(w.position(6), 2);
        assert_eq!(w.to_string(), "bb(dc)");
    }

    #[test]
    fn parse_errors() {
        assert_eq!("".parse::<OmegaSequence>(), Err(Error::EmptyCycle));
        assert_eq!("ab".parse::<OmegaSequence>(), Err(Error::InvalidOmegaLetter('a')));
        assert!("b(dc".parse::<OmegaSequence>().is_err());
    }

    #[test]
    fn eventually_constant_is_read_from_cycle() {
        let w: OmegaSequence = "dcb(b)".parse().unwrap();
        assert!(w.is_eventually_constant());
        assert!(w.tail_constant_from(2, Letter::B));
        assert!(!w.tail_constant_from(1, Letter::B));
        assert!(!OmegaSequence::classical().is_eventually_constant());
    }

    #[test]
    fn normal_form() {
        let a: OmegaSequence = "d(cbdcbd)".parse().unwrap();
        assert!(a.is_classical());
        let b: OmegaSequence = "dcb(dcb)".parse().unwrap();
        assert!(b.is_classical());
        let c: OmegaSequence = "(dc)".parse().unwrap();
        assert!(!c.is_classical());
    }
}
