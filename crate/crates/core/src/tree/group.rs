use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use super::omega::OmegaSequence;
use super::word::{Letter, TreeWord};
use crate::bits::Bits;
use crate::error::{Error, Result};

/// Memo entries kept before the word-problem cache is flushed.
const MEMO_LIMIT: usize = 1 << 21;

/// `g = (left, right) · a^swapped` with both sections one level down.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SectionPair {
    pub left: TreeWord,
    pub right: TreeWord,
    pub swapped: bool,
}

/// Result of an order computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Order {
    Finite(u64),
    /// No power `2^e` with `e ≤ cap` is trivial, or a squaring cycle shows
    /// the order is infinite.
    ExceedsCap,
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(n) => write!(f, "{n}"),
            Order::ExceedsCap => f.write_str("exceeds-cap"),
        }
    }
}

type MemoKey = (usize, Vec<Letter>);

/// The generalized Grigorchuk group `G_ω` together with all of its shifts
/// `G_{σ^k ω}`; a [`TreeWord`] at offset `k` lives in the `k`-th shift.
///
/// Holds a word-problem memo shared between threads.
pub struct GrigorchukGroup {
    omega: OmegaSequence,
    memo: RwLock<HashMap<MemoKey, bool>>,
}

impl fmt::Debug for GrigorchukGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GrigorchukGroup")
            .field("omega", &self.omega)
            .finish_non_exhaustive()
    }
}

impl Clone for GrigorchukGroup {
    fn clone(&self) -> Self {
        Self::new(self.omega.clone())
    }
}

impl GrigorchukGroup {
    pub fn new(omega: OmegaSequence) -> Self {
        Self {
            omega,
            memo: RwLock::new(HashMap::new()),
        }
    }

    pub fn classical() -> Self {
        Self::new(OmegaSequence::classical())
    }

    pub fn omega(&self) -> &OmegaSequence {
        &self.omega
    }

    /// Section of the single letter `x` (at `offset`) at child `bit`.
    ///
    /// `x_k = (a^ε, x_{k+1})` with `ε = 0` iff `ω_k = x`; `a` has trivial
    /// sections.
    fn letter_section(&self, x: Letter, offset: usize, bit: u8) -> Option<Letter> {
        match (x, bit) {
            (Letter::A, _) => None,
            (_, 0) if self.omega.letter_at(offset) == x => None,
            (_, 0) => Some(Letter::A),
            _ => Some(x),
        }
    }

    /// `g↓_bit`, defined by `g(bit · t) = g(bit) · g↓_bit(t)`.
    pub fn section(&self, g: &TreeWord, bit: u8) -> TreeWord {
        let offset = g.offset();
        let mut p = bit;
        let mut parts = Vec::with_capacity(g.len() / 2 + 1);
        for &x in g.letters().iter().rev() {
            if x.is_a() {
                p ^= 1;
            } else if let Some(y) = self.letter_section(x, offset, p) {
                parts.push(y);
            }
        }
        parts.reverse();
        TreeWord::with_offset(parts, offset + 1)
    }

    pub fn sections(&self, g: &TreeWord) -> SectionPair {
        SectionPair {
            left: self.section(g, 0),
            right: self.section(g, 1),
            swapped: g.swaps_root(),
        }
    }

    /// `g↓_s` for an arbitrary string `s`.
    pub fn section_along(&self, g: &TreeWord, s: &Bits) -> TreeWord {
        s.as_slice().iter().fold(g.clone(), |h, &bit| self.section(&h, bit))
    }

    pub fn act(&self, g: &TreeWord, s: &Bits) -> Bits {
        let mut out = s.clone();
        self.act_in_place(g, out.as_mut_slice());
        out
    }

    /// Applies `g` to a string, rightmost letter first.
    pub fn act_in_place(&self, g: &TreeWord, s: &mut [u8]) {
        for &x in g.letters().iter().rev() {
            self.act_letter(x, g.offset(), s);
        }
    }

    fn act_letter(&self, x: Letter, offset: usize, s: &mut [u8]) {
        if s.is_empty() {
            return;
        }
        if x.is_a() {
            s[0] ^= 1;
            return;
        }
        // x fixes 1^n and changes at most the bit after the first 0.
        if let Some(n) = s.iter().position(|&b| b == 0) {
            if n + 1 < s.len() && self.omega.letter_at(offset + n) != x {
                s[n + 1] ^= 1;
            }
        }
    }

    /// Permutation induced on level `m`, as `perm[i] = g(s_i)` with strings
    /// addressed by their lexicographic index.
    pub fn level_permutation(&self, g: &TreeWord, m: usize) -> Vec<u32> {
        let tables: Vec<Vec<u32>> = Letter::BCD
            .iter()
            .map(|&x| self.letter_table(x, g.offset(), m))
            .collect();
        let a_table = self.letter_table(Letter::A, g.offset(), m);
        (0..1u32 << m)
            .map(|mut i| {
                for &x in g.letters().iter().rev() {
                    i = match x {
                        Letter::A => a_table[i as usize],
                        Letter::B => tables[0][i as usize],
                        Letter::C => tables[1][i as usize],
                        Letter::D => tables[2][i as usize],
                    };
                }
                i
            })
            .collect()
    }

    pub(crate) fn letter_table(&self, x: Letter, offset: usize, m: usize) -> Vec<u32> {
        (0..1usize << m)
            .map(|i| {
                let mut s = Bits::from_index(i, m);
                self.act_letter(x, offset, s.as_mut_slice());
                s.to_index() as u32
            })
            .collect()
    }

    /// Decides `g = 1` by recursion on sections; terminates because both
    /// sections of a reduced word of length `ℓ ≥ 2` are shorter than `ℓ`.
    pub fn is_identity(&self, g: &TreeWord) -> bool {
        if g.is_empty() {
            return true;
        }
        if g.swaps_root() {
            return false;
        }
        if g.len() == 1 {
            return self.omega.tail_constant_from(g.offset(), g.letters()[0]);
        }
        let key = (self.omega.position(g.offset()), g.letters().to_vec());
        if let Some(&hit) = self.memo.read().unwrap().get(&key) {
            return hit;
        }
        let left = self.section(g, 0);
        let right = self.section(g, 1);
        assert!(
            left.len() < g.len() && right.len() < g.len(),
            "contraction violated for {g}"
        );
        let result = self.is_identity(&left) && self.is_identity(&right);
        let mut memo = self.memo.write().unwrap();
        if memo.len() >= MEMO_LIMIT {
            memo.clear();
        }
        memo.insert(key, result);
        result
    }

    pub fn equals(&self, u: &TreeWord, v: &TreeWord) -> Result<bool> {
        Ok(self.is_identity(&u.multiply(&v.invert())?))
    }

    /// Equality as tree automorphisms for words at arbitrary offsets.
    ///
    /// Explores pairs of sections; the reachable pair set is finite since
    /// sections of words of length at most one stay that short.
    pub fn same_automorphism(&self, u: &TreeWord, v: &TreeWord) -> bool {
        let mut seen: HashSet<(usize, Vec<Letter>, usize, Vec<Letter>)> = HashSet::new();
        let mut work = vec![(u.clone(), v.clone())];
        while let Some((x, y)) = work.pop() {
            if x.swaps_root() != y.swaps_root() {
                return false;
            }
            let px = self.omega.position(x.offset());
            let py = self.omega.position(y.offset());
            if px == py {
                let y_here = TreeWord::with_offset(y.letters().to_vec(), x.offset());
                if !self.is_identity(&x.mul_unchecked(&y_here.invert())) {
                    return false;
                }
                continue;
            }
            if !seen.insert((px, x.letters().to_vec(), py, y.letters().to_vec())) {
                continue;
            }
            for bit in 0..2 {
                work.push((self.section(&x, bit), self.section(&y, bit)));
            }
        }
        true
    }

    /// Exact order, always a power of two when finite.
    pub fn order(&self, g: &TreeWord, cap_exponent: u32) -> Order {
        let mut stack = HashMap::new();
        match self.order_exponent(g, 0, cap_exponent, &mut stack) {
            Some(e) => Order::Finite(1u64 << e),
            None => Order::ExceedsCap,
        }
    }

    /// Largest `acc + e` reached, where `2^e` is the order contributed by
    /// `g`; `None` once the cap is exceeded or a squaring cycle appears.
    fn order_exponent(&self, g: &TreeWord, acc: u32, cap: u32, stack: &mut HashMap<MemoKey, u32>) -> Option<u32> {
        if acc > cap {
            return None;
        }
        if self.is_identity(g) {
            return Some(acc);
        }
        let key = (self.omega.position(g.offset()), g.letters().to_vec());
        if let Some(&prev) = stack.get(&key) {
            // Revisiting with extra squarings means unbounded order.
            return if acc > prev { None } else { Some(acc) };
        }
        stack.insert(key.clone(), acc);
        let result = if g.swaps_root() {
            self.order_exponent(&g.mul_unchecked(g), acc + 1, cap, stack)
        } else {
            let left = self.order_exponent(&self.section(g, 0), acc, cap, stack);
            left.and_then(|l| {
                self.order_exponent(&self.section(g, 1), acc, cap, stack)
                    .map(|r| l.max(r))
            })
        };
        stack.remove(&key);
        result
    }

    /// Order by repeated squaring against the word problem; used to
    /// cross-check [`Self::order`] on small exponents.
    pub fn order_by_squaring(&self, g: &TreeWord, cap_exponent: u32) -> Order {
        let mut power = g.clone();
        for e in 0..=cap_exponent {
            if self.is_identity(&power) {
                return Order::Finite(1u64 << e);
            }
            power = power.mul_unchecked(&power);
        }
        Order::ExceedsCap
    }

    /// `supp_m(g)`: level-`m` strings with nontrivial section.
    pub fn support(&self, g: &TreeWord, m: usize) -> Result<BTreeSet<Bits>> {
        let mut out = BTreeSet::new();
        self.support_rec(g, m, m, Bits::empty(), &mut out)?;
        Ok(out)
    }

    fn support_rec(
        &self,
        g: &TreeWord,
        remaining: usize,
        level: usize,
        prefix: Bits,
        out: &mut BTreeSet<Bits>,
    ) -> Result<()> {
        if self.is_identity(g) {
            return Ok(());
        }
        if remaining == 0 {
            out.insert(prefix);
            return Ok(());
        }
        if g.swaps_root() {
            return Err(Error::NotInStabilizer(level));
        }
        for bit in 0..2 {
            let mut p = prefix.clone();
            p.push(bit);
            self.support_rec(&self.section(g, bit), remaining - 1, level, p, out)?;
        }
        Ok(())
    }

    pub fn stabilizes_level(&self, g: &TreeWord, m: usize) -> bool {
        self.support(g, m).is_ok()
    }

    /// `g ∈ Rist(s)`: `g` fixes every string not beginning with `s`.
    pub fn in_rist(&self, g: &TreeWord, s: &Bits) -> bool {
        let mut h = g.clone();
        for &bit in s.as_slice() {
            if self.is_identity(&h) {
                return true;
            }
            if h.swaps_root() || !self.is_identity(&self.section(&h, 1 - bit)) {
                return false;
            }
            h = self.section(&h, bit);
        }
        true
    }

    pub fn memo_len(&self) -> usize {
        self.memo.read().unwrap().len()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g() -> GrigorchukGroup {
        GrigorchukGroup::classical()
    }

    fn w(s: &str) -> TreeWord {
        TreeWord::parse(s, 0).unwrap()
    }

    fn bits(s: &str) -> Bits {
        s.parse().unwrap()
    }

    /// Brute-force comparison of actions on every string of length `m`.
    fn same_action(grp: &GrigorchukGroup, u: &TreeWord, v: &TreeWord, m: usize) -> bool {
        Bits::level(m).all(|s| grp.act(u, &s) == grp.act(v, &s))
    }

    #[test]
    fn classical_d_sections() {
        let p = g().sections(&w("d"));
        assert!(p.left.is_empty());
        assert_eq!(p.right.to_string(), "d");
        assert_eq!(p.right.offset(), 1);
        assert!(!p.swapped);
        // d_1 acts as the classical b.
        assert!(g().same_automorphism(&p.right, &w("b")));
    }

    #[test]
    fn aba_sections_are_c_and_a() {
        let p = g().sections(&w("aba"));
        assert!(!p.swapped);
        assert!(g().same_automorphism(&p.left, &w("c")));
        assert!(g().same_automorphism(&p.right, &w("a")));
    }

    #[test]
    fn abab_sections_are_ca_and_ac() {
        // Oracle: sections of ab·ab from those of ab, multiplied by hand.
        let p = g().sections(&w("abab"));
        assert!(!p.swapped);
        assert!(g().same_automorphism(&p.left, &w("ca")));
        assert!(g().same_automorphism(&p.right, &w("ac")));
    }

    #[test]
    fn act_examples() {
        assert_eq!(g().act(&w("a"), &bits("011")).to_string(), "111");
        assert_eq!(g().act(&w("abababab"), &bits("111")).to_string(), "110");
        assert_eq!(g().act(&w("d"), &bits("100")).to_string(), "101");
        assert!(g().act(&w("a"), &Bits::empty()).is_empty());
    }

    #[test]
    fn explicit_description_of_b_c_d() {
        // x flips the bit after the first 0 depending on n mod 3.
        let grp = g();
        for n in 0..7usize {
            let mut s = vec![1u8; n];
            s.extend([0, 0, 1]);
            let s = Bits::new(s).unwrap();
            for (x, flips) in [
                ("b", [true, true, false]),
                ("c", [true, false, true]),
                ("d", [false, true, true]),
            ] {
                let out = grp.act(&w(x), &s);
                assert_eq!(out != s, flips[n % 3], "{x} on {s}");
            }
        }
    }

    #[test]
    fn identity_examples() {
        assert!(g().is_identity(&TreeWord::reduce([Letter::B, Letter::C, Letter::D], 5)));
        assert!(!g().is_identity(&w("a")));
        let only_b = GrigorchukGroup::new("(b)".parse().unwrap());
        assert!(only_b.is_identity(&w("b")));
        assert!(!only_b.is_identity(&w("c")));
        assert!(!g().is_identity(&w("b")));
    }

    #[test]
    fn equals_examples() {
        assert!(g().equals(&w("bc"), &w("d")).unwrap());
        assert!(!g().equals(&w("ab"), &w("ba")).unwrap());
        assert!(!same_action(&g(), &w("ab"), &w("ba"), 2));
        assert!(g().equals(&w("b"), &TreeWord::parse("b", 1).unwrap()).is_err());
    }

    #[test]
    fn orders() {
        assert_eq!(g().order(&w("a"), 30), Order::Finite(2));
        assert_eq!(g().order(&w("ad"), 30), Order::Finite(4));
        assert_eq!(g().order(&w(""), 30), Order::Finite(1));
        assert_eq!(g().order(&w("ac"), 30), Order::Finite(8));
        assert_eq!(g().order(&w("ab"), 30), Order::Finite(16));
        assert_eq!(g().order(&w("ab"), 3), Order::ExceedsCap);
        for s in ["ad", "ac", "ab", "abac", "abadac", "b"] {
            assert_eq!(g().order(&w(s), 12), g().order_by_squaring(&w(s), 12), "{s}");
        }
    }

    #[test]
    fn infinite_order_for_eventually_constant_omega() {
        // ω = (d) makes d trivial and b = (a, b); then (ab)² has ba as a
        // section, so ab has infinite order.
        let grp = GrigorchukGroup::new("(d)".parse().unwrap());
        assert_eq!(grp.order(&w("ab"), 30), Order::ExceedsCap);
    }

    #[test]
    fn support_examples() {
        assert!(g().support(&w(""), 3).unwrap().is_empty());
        let s = g().support(&w("d"), 1).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![bits("1")]);
        assert_eq!(g().support(&w("a"), 1), Err(Error::NotInStabilizer(1)));
        let t1 = w("abadabad");
        let t1sq = t1.mul_unchecked(&t1);
        let s = g().support(&t1sq, 1).unwrap();
        assert_eq!(s.into_iter().collect::<Vec<_>>(), vec![bits("1")]);
    }

    #[test]
    fn rist_examples() {
        assert!(g().in_rist(&w(""), &bits("0101")));
        assert!(g().in_rist(&w("d"), &bits("1")));
        assert!(!g().in_rist(&w("a"), &bits("1")));
        assert!(!g().in_rist(&w("b"), &bits("1")));
    }

    #[test]
    fn same_automorphism_across_shifts() {
        // σ^3 of the classical ω is ω itself.
        let grp = g();
        let u = TreeWord::parse("abac", 3).unwrap();
        assert!(grp.same_automorphism(&u, &w("abac")));
        // σω = (cbd): c_1 acts as classical d.
        assert!(grp.same_automorphism(&TreeWord::parse("c", 1).unwrap(), &w("d")));
        assert!(!grp.same_automorphism(&TreeWord::parse("c", 1).unwrap(), &w("c")));
    }

    #[test]
    fn level_permutation_matches_act() {
        let grp = g();
        let u = w("abacabad");
        let perm = grp.level_permutation(&u, 5);
        for s in Bits::level(5) {
            assert_eq!(perm[s.to_index()] as usize, grp.act(&u, &s).to_index());
        }
    }
}
