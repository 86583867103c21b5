//! Short nontrivial elements of rigid stabilizers `Rist(1^m)`.
//!
//! Two constructions are provided. The classical one rewrites
//! `t_0 = abab` letterwise (`a ↦ aba, b ↦ d, c ↦ b, d ↦ c`) and works in the
//! first Grigorchuk group. The generalized one works for any `ω` that is not
//! eventually constant: after relabeling so that `ω_{n-1} = d` it builds
//! `t_k = ∏ a x_i` with `x_i ∈ {b_k, d_k}` downward from `t_n = a d_n`.
//!
//! Verification never panics or errors on mathematical failure; the
//! outcome of every check is recorded in a [`WitnessReport`].

use rayon::prelude::*;
use serde::Serialize;

use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::tree::{GenSet, GrigorchukGroup, Letter, LetterPerm, OmegaSequence, TreeWord};

pub const DEFAULT_MAX_LEVEL: usize = 10;
/// Largest `n` accepted by [`check_ad_order`].
pub const MAX_AD_ORDER_LEVEL: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum WitnessKind {
    Classical,
    Generalized,
}

#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub kind: WitnessKind,
    pub omega: String,
    pub m: usize,
    /// The constructed `t`, in the letters of the original `ω`.
    #[serde(serialize_with = "ser_word")]
    pub word: TreeWord,
    /// Letter counts of the witness `t²`.
    pub letters_abcd: usize,
    pub letters_abc: usize,
    /// Bound the letter count is checked against.
    pub length_bound: usize,
    pub length_ok: bool,
    pub nontrivial: bool,
    pub rist_ok: bool,
    /// Classical: `t_m↓_{1^m} = t_0`. Generalized: `t_k² = (1, t_{k+1}²)` at
    /// every level together with the odd `d`-count of every `t_k`.
    pub structure_ok: bool,
    /// Runtime checks of `(a d_{k+1})^{2^{n-k}} = 1` made for `ω_k = c`.
    pub dihedral_checks: Vec<(usize, bool)>,
    #[serde(serialize_with = "ser_perm")]
    pub relabel: LetterPerm,
}

fn ser_word<S: serde::Serializer>(w: &TreeWord, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&w.to_string())
}

fn ser_perm<S: serde::Serializer>(p: &LetterPerm, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&p.to_string())
}

impl WitnessReport {
    pub fn is_valid(&self) -> bool {
        self.nontrivial
            && self.rist_ok
            && self.length_ok
            && self.structure_ok
            && self.dihedral_checks.iter().all(|&(_, ok)| ok)
    }

    /// The witness `t²`.
    pub fn square(&self) -> TreeWord {
        self.word.mul_unchecked(&self.word)
    }

    pub const CSV_HEADER: &'static str =
        "kind,omega,m,word_len,letters_abcd,letters_abc,bound,nontrivial,rist_ok,structure_ok,valid";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{},{}",
            match self.kind {
                WitnessKind::Classical => "classical",
                WitnessKind::Generalized => "generalized",
            },
            self.omega,
            self.m,
            self.word.len(),
            self.letters_abcd,
            self.letters_abc,
            self.length_bound,
            self.nontrivial,
            self.rist_ok,
            self.structure_ok,
            if self.is_valid() { "VALID" } else { "INVALID" }
        )
    }
}

fn check_level(m: usize, max: usize) -> Result<()> {
    if m > max {
        return Err(Error::LevelTooLarge { level: m, max });
    }
    Ok(())
}

/// `t_m` from `t_0 = abab` by `m` rounds of `a ↦ aba, b ↦ d, c ↦ b, d ↦ c`.
pub fn classical_t(m: usize) -> Result<TreeWord> {
    check_level(m, DEFAULT_MAX_LEVEL)?;
    let mut t = TreeWord::parse("abab", 0)?;
    for _ in 0..m {
        let raw = t.letters().iter().flat_map(|&l| match l {
            Letter::A => vec![Letter::A, Letter::B, Letter::A],
            Letter::B => vec![Letter::D],
            Letter::C => vec![Letter::B],
            Letter::D => vec![Letter::C],
        });
        t = TreeWord::reduce(raw.collect::<Vec<_>>(), 0);
    }
    Ok(t)
}

fn require_classical(group: &GrigorchukGroup) -> Result<()> {
    if !group.omega().is_classical() {
        return Err(Error::Precondition(format!(
            "classical witnesses need omega = (dcb), got {}",
            group.omega()
        )));
    }
    Ok(())
}

pub fn verify_classical(group: &GrigorchukGroup, m: usize) -> Result<WitnessReport> {
    require_classical(group)?;
    let t = classical_t(m)?;
    Ok(verify_classical_word(group, &t, m))
}

/// Checks an arbitrary candidate against the classical witness properties.
pub fn verify_classical_word(group: &GrigorchukGroup, t: &TreeWord, m: usize) -> WitnessReport {
    let sq = t.mul_unchecked(t);
    let target = Bits::ones(m);
    let letters_abc = sq.word_length(GenSet::Abc);
    let length_bound = 1usize << (m + 4);
    let t0 = TreeWord::parse("abab", 0).expect("static word");
    let structure_ok = group.same_automorphism(&group.section_along(t, &target), &t0);
    WitnessReport {
        kind: WitnessKind::Classical,
        omega: group.omega().to_string(),
        m,
        word: t.clone(),
        letters_abcd: sq.word_length(GenSet::Abcd),
        letters_abc,
        length_bound,
        length_ok: letters_abc <= length_bound,
        nontrivial: !group.is_identity(&sq),
        rist_ok: group.in_rist(&sq, &target),
        structure_ok,
        dihedral_checks: Vec::new(),
        relabel: LetterPerm::identity(),
    }
}

/// A transposition of `{b, c, d}` making `ω_{n-1} = d`, and the relabeled
/// sequence. The transposition is its own inverse.
pub fn relabel_for_d(omega: &OmegaSequence, n: usize) -> Result<(OmegaSequence, LetterPerm)> {
    if n == 0 {
        return Err(Error::Precondition("relabeling needs n >= 1".into()));
    }
    let perm = LetterPerm::transposition(omega.letter_at(n - 1), Letter::D);
    Ok((omega.relabel(&perm), perm))
}

/// All intermediate data of the generalized construction.
#[derive(Clone, Debug)]
pub struct GeneralizedConstruction {
    pub n: usize,
    pub relabel: LetterPerm,
    pub relabeled_omega: OmegaSequence,
    /// `t_k` at offset `k` for `k = 0..=n`, in relabeled letters.
    pub levels: Vec<TreeWord>,
    pub dihedral_checks: Vec<(usize, bool)>,
    /// `t_0` translated back to the letters of the original `ω`.
    pub t: TreeWord,
}

/// Builds `t` with `t² ∈ Rist(1^n)` nontrivial and `|t| = 2^{n+1}`.
pub fn generalized_t(omega: &OmegaSequence, n: usize) -> Result<GeneralizedConstruction> {
    check_level(n, DEFAULT_MAX_LEVEL)?;
    if omega.is_eventually_constant() {
        return Err(Error::NoWitness);
    }
    if n == 0 {
        let t = TreeWord::parse("ad", 0)?;
        return Ok(GeneralizedConstruction {
            n,
            relabel: LetterPerm::identity(),
            relabeled_omega: omega.clone(),
            levels: vec![t.clone()],
            dihedral_checks: Vec::new(),
            t,
        });
    }
    let (relabeled, perm) = relabel_for_d(omega, n)?;
    let mut levels = vec![TreeWord::reduce([Letter::A, Letter::D], n)];
    let mut dihedral_checks = Vec::new();
    for k in (0..n).rev() {
        let letters: Vec<Letter> = if k == n - 1 {
            vec![Letter::A, Letter::B, Letter::A, Letter::D]
        } else {
            let y = match relabeled.letter_at(k) {
                Letter::D => Letter::B,
                Letter::C => {
                    dihedral_checks.push((k + 1, check_ad_order(&relabeled, n, k + 1)?));
                    Letter::D
                }
                _ => Letter::D,
            };
            let prev = levels.last().unwrap().letters();
            prev.chunks(2)
                .flat_map(|block| [Letter::A, y, Letter::A, block[1]])
                .collect()
        };
        levels.push(TreeWord::reduce(letters, k));
    }
    levels.reverse();
    let t = levels[0].relabel(&perm.inverse());
    Ok(GeneralizedConstruction {
        n,
        relabel: perm,
        relabeled_omega: relabeled,
        levels,
        dihedral_checks,
        t,
    })
}

pub fn verify_generalized(omega: &OmegaSequence, n: usize) -> Result<WitnessReport> {
    let cons = generalized_t(omega, n)?;
    let group = GrigorchukGroup::new(omega.clone());
    let relabeled = GrigorchukGroup::new(cons.relabeled_omega.clone());
    let sq = cons.t.mul_unchecked(&cons.t);
    let letters_abcd = sq.word_length(GenSet::Abcd);
    let length_bound = 1usize << (n + 2);

    let squares: Vec<TreeWord> = cons.levels.iter().map(|t| t.mul_unchecked(t)).collect();
    let recursion_ok = (0..n).all(|k| {
        let p = relabeled.sections(&squares[k]);
        relabeled.is_identity(&p.left) && !p.swapped && relabeled.equals(&p.right, &squares[k + 1]).unwrap_or(false)
    });
    let parity_ok = cons
        .levels
        .iter()
        .all(|t| t.count(Letter::D) % 2 == 1 && t.count(Letter::B) + t.count(Letter::D) == t.len() / 2);
    let shape_ok = cons.t.len() == 1 << (n + 1);

    Ok(WitnessReport {
        kind: WitnessKind::Generalized,
        omega: omega.to_string(),
        m: n,
        word: cons.t.clone(),
        letters_abcd,
        letters_abc: sq.word_length(GenSet::Abc),
        length_bound,
        length_ok: letters_abcd <= length_bound,
        nontrivial: !group.is_identity(&sq),
        rist_ok: group.in_rist(&sq, &Bits::ones(n)),
        structure_ok: recursion_ok && parity_ok && shape_ok,
        dihedral_checks: cons.dihedral_checks,
        relabel: cons.relabel,
    })
}

/// `(a d_k)^{2^{n-k+1}} = 1`, by repeated squaring, given `ω_{n-1} = d`.
pub fn check_ad_order(omega: &OmegaSequence, n: usize, k: usize) -> Result<bool> {
    if !(k < n && n <= MAX_AD_ORDER_LEVEL) {
        return Err(Error::Precondition(format!(
            "need 0 <= k < n <= {MAX_AD_ORDER_LEVEL}, got k = {k}, n = {n}"
        )));
    }
    if omega.letter_at(n - 1) != Letter::D {
        return Err(Error::Precondition(format!(
            "need omega_{} = d, got {}",
            n - 1,
            omega.letter_at(n - 1)
        )));
    }
    let trace = ad_power_trace(omega, k, (n - k + 1) as u32);
    Ok(*trace.last().unwrap())
}

/// Identity status of `(a d_k)^{2^j}` for `j = 0..=e`.
pub fn ad_power_trace(omega: &OmegaSequence, k: usize, e: u32) -> Vec<bool> {
    let group = GrigorchukGroup::new(omega.clone());
    let mut w = TreeWord::reduce([Letter::A, Letter::D], k);
    let mut trace = Vec::with_capacity(e as usize + 1);
    for j in 0..=e {
        trace.push(group.is_identity(&w));
        if j < e {
            w = w.mul_unchecked(&w);
        }
    }
    trace
}

/// One row of a witness sweep; `None` marks an eventually constant `ω`.
#[derive(Clone, Debug, Serialize)]
pub struct SweepRow {
    pub omega: String,
    pub n: usize,
    pub report: Option<WitnessReport>,
}

/// Generalized witnesses for every `ω` and every `n` in `levels`, computed
/// in parallel; row order is input order.
pub fn sweep(omegas: &[OmegaSequence], levels: std::ops::RangeInclusive<usize>) -> Result<Vec<SweepRow>> {
    let jobs: Vec<(OmegaSequence, usize)> = omegas
        .iter()
        .flat_map(|w| levels.clone().map(move |n| (w.clone(), n)))
        .collect();
    jobs.into_par_iter()
        .map(|(w, n)| match verify_generalized(&w, n) {
            Ok(report) => Ok(SweepRow {
                omega: w.to_string(),
                n,
                report: Some(report),
            }),
            Err(Error::NoWitness) => Ok(SweepRow {
                omega: w.to_string(),
                n,
                report: None,
            }),
            Err(e) => Err(e),
        })
        .collect()
}
