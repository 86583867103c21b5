use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::bits::Bits;
use crate::error::{Error, Result};

/// Deepest level a Mealy identity test may be asked to examine.
pub const MAX_MEALY_DEPTH: usize = 32;

/// Recursion rule of one generator.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MealyRule {
    /// Flips the first bit; both sections are trivial.
    Swap,
    /// Reads bit `x`, writes `x ^ swap`, and continues as `left` (x = 0) or
    /// `right` (x = 1). `None` is the identity.
    Pair {
        left: Option<usize>,
        right: Option<usize>,
        swap: bool,
    },
}

/// Unresolved form of a rule, as written in a group file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuleSpec {
    Swap,
    Pair {
        left: Option<String>,
        right: Option<String>,
        swap: bool,
    },
}

/// A finite wreath-recursion (Mealy automaton) definition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MealyDef {
    names: Vec<String>,
    rules: Vec<MealyRule>,
}

/// Tri-state identity verdict; generic Mealy groups need not contract.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MealyVerdict {
    /// The section closure is finite and never swaps: trivial on every level.
    Identity,
    /// Some string of this length is moved.
    NotIdentity { level: usize },
    /// Trivial on all levels up to `depth`; nothing is claimed below.
    TrivialToDepth { depth: usize },
}

impl MealyDef {
    pub fn new(gens: Vec<(String, RuleSpec)>) -> Result<Self> {
        let names: Vec<String> = gens.iter().map(|(n, _)| n.clone()).collect();
        let resolve = |r: &Option<String>| -> Result<Option<usize>> {
            match r {
                None => Ok(None),
                Some(name) => names
                    .iter()
                    .position(|n| n == name)
                    .map(Some)
                    .ok_or_else(|| Error::UnresolvedRef(name.clone())),
            }
        };
        let rules = gens
            .iter()
            .map(|(_, spec)| match spec {
                RuleSpec::Swap => Ok(MealyRule::Swap),
                RuleSpec::Pair { left, right, swap } => Ok(MealyRule::Pair {
                    left: resolve(left)?,
                    right: resolve(right)?,
                    swap: *swap,
                }),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { names, rules })
    }

    /// `a` swap, `b = (a, c)`, `c = (a, d)`, `d = (1, b)`.
    pub fn classical() -> Self {
        let pair = |l: Option<&str>, r: &str| RuleSpec::Pair {
            left: l.map(str::to_string),
            right: Some(r.to_string()),
            swap: false,
        };
        Self::new(vec![
            ("a".into(), RuleSpec::Swap),
            ("b".into(), pair(Some("a"), "c")),
            ("c".into(), pair(Some("a"), "d")),
            ("d".into(), pair(None, "b")),
        ])
        .expect("classical definition resolves")
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rules(&self) -> &[MealyRule] {
        &self.rules
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// Parses whitespace-separated generator names; a token that is not a
    /// name is read character by character.
    pub fn parse_word(&self, s: &str) -> Result<Vec<usize>> {
        let mut word = Vec::new();
        for tok in s.split_whitespace() {
            if tok == "1" {
                continue;
            }
            if let Some(i) = self.index_of(tok) {
                word.push(i);
                continue;
            }
            for c in tok.chars() {
                let name = c.to_string();
                word.push(self.index_of(&name).ok_or(Error::UnresolvedRef(name))?);
            }
        }
        Ok(word)
    }

    pub fn format_word(&self, word: &[usize]) -> String {
        if word.is_empty() {
            return "1".into();
        }
        let single = word.iter().all(|&g| self.names[g].chars().count() == 1);
        let sep = if single { "" } else { " " };
        word.iter()
            .map(|&g| self.names[g].as_str())
            .collect::<Vec<_>>()
            .join(sep)
    }

    fn check_word(&self, word: &[usize]) -> Result<()> {
        match word.iter().find(|&&g| g >= self.rules.len()) {
            Some(g) => Err(Error::UnresolvedRef(format!("#{g}"))),
            None => Ok(()),
        }
    }

    fn step(&self, gen: usize, bit: u8) -> (u8, Option<usize>) {
        match &self.rules[gen] {
            MealyRule::Swap => (bit ^ 1, None),
            MealyRule::Pair { left, right, swap } => {
                let next = if bit == 0 { *left } else { *right };
                (bit ^ u8::from(*swap), next)
            }
        }
    }

    fn swaps_root(&self, word: &[usize]) -> bool {
        word.iter()
            .filter(|&&g| matches!(self.rules[g], MealyRule::Swap | MealyRule::Pair { swap: true, .. }))
            .count()
            % 2
            == 1
    }

    /// Action on a string, rightmost generator first.
    pub fn act(&self, word: &[usize], s: &Bits) -> Result<Bits> {
        self.check_word(word)?;
        let mut out = s.clone();
        for &g in word.iter().rev() {
            let mut state = Some(g);
            for bit in out.as_mut_slice() {
                let Some(q) = state else { break };
                let (b, next) = self.step(q, *bit);
                *bit = b;
                state = next;
            }
        }
        Ok(out)
    }

    /// Sections at the two children and the root swap flag.
    pub fn sections(&self, word: &[usize]) -> Result<(Vec<usize>, Vec<usize>, bool)> {
        self.check_word(word)?;
        Ok((self.section(word, 0), self.section(word, 1), self.swaps_root(word)))
    }

    fn section(&self, word: &[usize], bit: u8) -> Vec<usize> {
        let mut p = bit;
        let mut parts = Vec::new();
        for &g in word.iter().rev() {
            let (b, next) = self.step(g, p);
            parts.extend(next);
            p = b;
        }
        parts.reverse();
        parts
    }

    /// Breadth-first over the section closure of `word`, one tree level per
    /// layer.
    pub fn is_identity_to_depth(&self, word: &[usize], depth: usize) -> Result<MealyVerdict> {
        if depth > MAX_MEALY_DEPTH {
            return Err(Error::LevelTooLarge {
                level: depth,
                max: MAX_MEALY_DEPTH,
            });
        }
        self.check_word(word)?;
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut frontier = vec![word.to_vec()];
        seen.insert(word.to_vec());
        for level in 1..=depth {
            let mut next = Vec::new();
            for w in &frontier {
                if self.swaps_root(w) {
                    return Ok(MealyVerdict::NotIdentity { level });
                }
                for bit in 0..2 {
                    let s = self.section(w, bit);
                    if seen.insert(s.clone()) {
                        next.push(s);
                    }
                }
            }
            if next.is_empty() {
                return Ok(MealyVerdict::Identity);
            }
            frontier = next;
        }
        Ok(MealyVerdict::TrivialToDepth { depth })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_relations_hold() {
        let g = MealyDef::classical();
        let bcd = g.parse_word("bcd").unwrap();
        assert_eq!(g.is_identity_to_depth(&bcd, 10).unwrap(), MealyVerdict::Identity);
        for x in ["aa", "bb", "cc", "dd"] {
            let w = g.parse_word(x).unwrap();
            assert_eq!(g.is_identity_to_depth(&w, 10).unwrap(), MealyVerdict::Identity);
        }
    }

    #[test]
    fn swap_is_not_identity() {
        let g = MealyDef::classical();
        assert_eq!(
            g.is_identity_to_depth(&[0], 1).unwrap(),
            MealyVerdict::NotIdentity { level: 1 }
        );
        let ab = g.parse_word("abab").unwrap();
        assert!(matches!(
            g.is_identity_to_depth(&ab, 10).unwrap(),
            MealyVerdict::NotIdentity { .. }
        ));
    }

    #[test]
    fn unresolved_reference() {
        let err = MealyDef::new(vec![(
            "b".into(),
            RuleSpec::Pair {
                left: Some("a".into()),
                right: Some("z".into()),
                swap: false,
            },
        )]);
        assert_eq!(err, Err(Error::UnresolvedRef("a".into())));
        assert!(MealyDef::classical().parse_word("abz").is_err());
    }

    #[test]
    fn depth_limit_is_enforced() {
        let g = MealyDef::classical();
        assert!(g.is_identity_to_depth(&[0], MAX_MEALY_DEPTH + 1).is_err());
    }

    #[test]
    fn odometer_square_moves_level_two() {
        // The binary odometer: t = (1, t) with a root swap.
        let g = MealyDef::new(vec![(
            "t".into(),
            RuleSpec::Pair {
                left: None,
                right: Some("t".into()),
                swap: true,
            },
        )])
        .unwrap();
        let tt = g.parse_word("t t").unwrap();
        assert!(matches!(
            g.is_identity_to_depth(&tt, 4).unwrap(),
            MealyVerdict::NotIdentity { level: 2 }
        ));
    }

    #[test]
    fn shallow_depth_is_inconclusive() {
        let g = MealyDef::classical();
        let bcd = g.parse_word("bcd").unwrap();
        assert_eq!(
            g.is_identity_to_depth(&bcd, 1).unwrap(),
            MealyVerdict::TrivialToDepth { depth: 1 }
        );
    }

    #[test]
    fn sections_of_classical_b() {
        let g = MealyDef::classical();
        let (l, r, swapped) = g.sections(&[1]).unwrap();
        assert_eq!((l, r, swapped), (vec![0], vec![2], false));
    }
}
