//! Checkable growth certificates.
//!
//! A certificate records a witness `g ∈ Rist(1^m)`, a spanning walk of the
//! level-`m` Schreier graph and an explicit Nielsen path in `Γ_{n+1}(G)`
//! from `S^{(1)}` that places each conjugate `h_i g h_i^{-1}` in the spare
//! slot in turn. The verifier rebuilds everything it checks from the record.

use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::Serialize;

use super::cubic::{check_cubic_bruteforce, check_cubic_by_support, MAX_BRUTE_FORCE};
use super::{spanning_walk, SchreierGraph, SpanningWalk};
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::prp::{NielsenMove, Side};
use crate::tree::{GrigorchukGroup, Letter, OmegaSequence, TreeWord};
use crate::witness::{classical_t, generalized_t};

pub const CERTIFICATE_HEADER: &str = "prgraph-certificate v1";
pub const MAX_CERTIFICATE_LEVEL: usize = 8;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub omega: OmegaSequence,
    pub level: usize,
    /// The base tuple `S`, one generator letter per entry.
    pub base: Vec<Letter>,
    pub witness: TreeWord,
    pub alpha: usize,
    pub k: usize,
    pub visits: Vec<Bits>,
    pub steps: Vec<TreeWord>,
    pub moves: Vec<NielsenMove>,
    /// `(moves applied, slot)` at which the `i`-th conjugate is present.
    pub marks: Vec<(usize, usize)>,
}

/// Verification outcome with one flag per hypothesis.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub walk_ok: bool,
    pub marks_ok: bool,
    pub cubic_ok: bool,
    pub alpha_ok: bool,
    pub length_ok: bool,
    pub path_len: usize,
    pub bound: usize,
    pub diagnostics: Vec<String>,
}

impl CertificateCheck {
    pub fn is_valid(&self) -> bool {
        self.walk_ok && self.marks_ok && self.cubic_ok && self.alpha_ok && self.length_ok
    }
}

struct Speller<'a> {
    base: &'a [Letter],
}

impl Speller<'_> {
    fn index(&self, x: Letter) -> Option<usize> {
        self.base.iter().position(|&y| y == x)
    }

    fn check(&self) -> Result<()> {
        for x in [Letter::A, Letter::B, Letter::C] {
            if self.index(x).is_none() {
                return Err(Error::MissingGenerator(x.as_char()));
            }
        }
        Ok(())
    }

    /// Base-tuple indices spelling a word; `d` becomes `b, c` when absent.
    fn spell(&self, w: &TreeWord) -> Vec<usize> {
        w.letters()
            .iter()
            .flat_map(|&x| match self.index(x) {
                Some(i) => vec![i],
                None => vec![self.index(Letter::B).unwrap(), self.index(Letter::C).unwrap()],
            })
            .collect()
    }
}

fn alpha_for(spelled: usize, level: usize) -> usize {
    spelled.div_ceil(1 << level)
}

/// Builds the certificate for `Γ_{n+1}(G_ω)` at level `m` from base `S`.
pub fn build_certificate(omega: &OmegaSequence, m: usize, base: &[Letter]) -> Result<Certificate> {
    if m > MAX_CERTIFICATE_LEVEL {
        return Err(Error::LevelTooLarge {
            level: m,
            max: MAX_CERTIFICATE_LEVEL,
        });
    }
    let speller = Speller { base };
    speller.check()?;
    let group = GrigorchukGroup::new(omega.clone());
    let t = if omega.is_classical() {
        classical_t(m)?
    } else {
        generalized_t(omega, m)?.t
    };
    let g = t.mul_unchecked(&t);
    let gens: Vec<TreeWord> = base.iter().map(|&x| TreeWord::letter(x, 0)).collect();
    let graph = SchreierGraph::new(&group, &gens, m)?;
    let walk = spanning_walk(&graph, &Bits::ones(m))?;

    let last = base.len();
    let spelled = speller.spell(&g);
    let mut moves: Vec<NielsenMove> = spelled
        .iter()
        .map(|&i| NielsenMove::r(i, last, false))
        .collect::<Result<_>>()?;
    let mut marks = vec![(moves.len(), last)];
    for step in &walk.steps {
        // c ↦ e c e^{-1} for each letter, rightmost first.
        for i in speller.spell(step).into_iter().rev() {
            moves.push(NielsenMove::l(i, last, false)?);
            moves.push(NielsenMove::r(i, last, true)?);
        }
        marks.push((moves.len(), last));
    }
    Ok(Certificate {
        omega: omega.clone(),
        level: m,
        base: base.to_vec(),
        witness: g,
        alpha: alpha_for(spelled.len(), m),
        k: 1 << m,
        visits: walk.visits,
        steps: walk.steps,
        moves,
        marks,
    })
}

/// Replays and rechecks a certificate. Never errors; failures are reported
/// in the returned flags and diagnostics.
pub fn verify_certificate(cert: &Certificate) -> CertificateCheck {
    let mut diag = Vec::new();
    let m = cert.level;
    let n_vertices = 1usize << m.min(usize::BITS as usize - 1);
    let bound = (cert.alpha + 4).saturating_mul(n_vertices);
    let mut check = CertificateCheck {
        walk_ok: false,
        marks_ok: false,
        cubic_ok: false,
        alpha_ok: false,
        length_ok: false,
        path_len: cert.moves.len(),
        bound,
        diagnostics: Vec::new(),
    };
    let speller = Speller { base: &cert.base };
    let structural = if m > MAX_CERTIFICATE_LEVEL {
        Err(format!("level {m} exceeds {MAX_CERTIFICATE_LEVEL}"))
    } else if cert.k != n_vertices {
        Err(format!("k = {} but 2^m = {n_vertices}", cert.k))
    } else if let Err(e) = speller.check() {
        Err(e.to_string())
    } else if cert.witness.offset() != 0 || cert.steps.iter().any(|s| s.offset() != 0) {
        Err("words must live at offset 0".into())
    } else {
        Ok(())
    };
    if let Err(e) = structural {
        check.diagnostics.push(e);
        return check;
    }
    let group = GrigorchukGroup::new(cert.omega.clone());
    let start = Bits::ones(m);

    // Walk: starts at 1^m, visits every string once, and h_i(start) = s_i.
    let walk = SpanningWalk::from_steps(start.clone(), cert.visits.clone(), cert.steps.clone());
    let mut sorted = cert.visits.clone();
    sorted.sort();
    sorted.dedup();
    let letters_ok = cert
        .steps
        .iter()
        .all(|s| s.letters().iter().all(|&x| cert.base.contains(&x) || x == Letter::D));
    check.walk_ok = cert.visits.len() == n_vertices
        && sorted.len() == n_vertices
        && cert.visits.iter().all(|s| s.len() == m)
        && cert.visits.first() == Some(&start)
        && cert.steps.len() + 1 == n_vertices
        && letters_ok
        && walk
            .words
            .iter()
            .zip(&cert.visits)
            .all(|(h, s)| group.act(h, &start) == *s);
    if !check.walk_ok {
        diag.push("walk does not visit every level string in the recorded order".to_string());
    }

    // Conjugates and cubicity.
    let conjugates: Vec<TreeWord> = walk
        .words
        .iter()
        .map(|h| h.mul_unchecked(&cert.witness).mul_unchecked(&h.invert()))
        .collect();
    let support = check_cubic_by_support(&group, &conjugates, m);
    check.cubic_ok = support.ok
        && support
            .supports
            .iter()
            .zip(&cert.visits)
            .all(|(s, v)| s.as_ref() == Some(v));
    if support.ok && !check.cubic_ok {
        diag.push("conjugate supports do not match the visit order".into());
    }
    diag.extend(support.diagnostics);
    if check.cubic_ok && conjugates.len() <= MAX_BRUTE_FORCE {
        let level = (m + 6).min(14);
        match check_cubic_bruteforce(&group, &conjugates, level) {
            Ok(true) => {}
            Ok(false) => {
                check.cubic_ok = false;
                diag.push("two subset products coincide".into());
            }
            Err(e) => {
                check.cubic_ok = false;
                diag.push(e.to_string());
            }
        }
    }

    match replay(&group, cert, &conjugates) {
        Ok(()) => check.marks_ok = true,
        Err(e) => diag.push(e),
    }

    // Constants.
    let expected_alpha = alpha_for(speller.spell(&cert.witness).len(), m);
    check.alpha_ok = cert.alpha == expected_alpha;
    if !check.alpha_ok {
        diag.push(format!(
            "recorded alpha {} but the witness needs {expected_alpha}",
            cert.alpha
        ));
    }
    check.length_ok = cert.moves.len() <= bound;
    if !check.length_ok {
        diag.push(format!("path length {} exceeds {bound}", cert.moves.len()));
    }
    check.diagnostics = diag;
    check
}

/// Applies the moves to `S^(1)` and checks each mark against its conjugate.
fn replay(group: &GrigorchukGroup, cert: &Certificate, conjugates: &[TreeWord]) -> std::result::Result<(), String> {
    if cert.marks.len() != conjugates.len() {
        return Err(format!(
            "{} marks recorded for {} conjugates",
            cert.marks.len(),
            conjugates.len()
        ));
    }
    if cert.marks.windows(2).any(|w| w[0].0 > w[1].0) || cert.marks.last().is_some_and(|m| m.0 > cert.moves.len()) {
        return Err("marks are out of order or past the end of the path".into());
    }
    let mut tuple: Vec<TreeWord> = cert.base.iter().map(|&x| TreeWord::letter(x, 0)).collect();
    tuple.push(TreeWord::identity(0));
    let mut marks = cert.marks.iter().zip(conjugates).enumerate().peekable();
    for applied in 0..=cert.moves.len() {
        if applied > 0 {
            let mv = cert.moves[applied - 1];
            if mv.i >= tuple.len() || mv.j >= tuple.len() || mv.i == mv.j {
                return Err(format!("move {mv} is out of range"));
            }
            let gi = if mv.inverse {
                tuple[mv.i].invert()
            } else {
                tuple[mv.i].clone()
            };
            tuple[mv.j] = match mv.side {
                Side::R => tuple[mv.j].mul_unchecked(&gi),
                Side::L => gi.mul_unchecked(&tuple[mv.j]),
            };
        }
        while let Some((i, (&(_, slot), c))) = marks.next_if(|(_, (m, _))| m.0 == applied) {
            let hit = slot < tuple.len() && group.is_identity(&tuple[slot].mul_unchecked(&c.invert()));
            if !hit {
                return Err(format!(
                    "conjugate {i} is not in slot {} after {applied} moves",
                    slot + 1
                ));
            }
        }
    }
    Ok(())
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |it: &mut dyn Iterator<Item = String>| it.collect::<Vec<_>>().join(" ");
        let mut s = String::new();
        let _ = writeln!(s, "{CERTIFICATE_HEADER}");
        let _ = writeln!(s, "omega {}", self.omega);
        let _ = writeln!(s, "level {}", self.level);
        let _ = writeln!(s, "base {}", self.base.iter().map(|x| x.as_char()).collect::<String>());
        let _ = writeln!(s, "witness {}", self.witness);
        let _ = writeln!(s, "alpha {}", self.alpha);
        let _ = writeln!(s, "k {}", self.k);
        let _ = writeln!(s, "walk {}", join(&mut self.visits.iter().map(|b| format!("[{b}]"))));
        let _ = writeln!(s, "steps {}", join(&mut self.steps.iter().map(|w| w.to_string())));
        let _ = writeln!(s, "moves {}", join(&mut self.moves.iter().map(|m| m.to_string())));
        let _ = writeln!(
            s,
            "marks {}",
            join(&mut self.marks.iter().map(|(a, b)| format!("{a}:{}", b + 1)))
        );
        let _ = writeln!(s, "end");
        f.write_str(&s)
    }
}

impl FromStr for Certificate {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'));
        if lines.next() != Some(CERTIFICATE_HEADER) {
            return Err(Error::Format(format!("missing header {CERTIFICATE_HEADER:?}")));
        }
        let mut field = |key: &str| -> Result<String> {
            let line = lines
                .next()
                .ok_or_else(|| Error::Format(format!("missing field {key}")))?;
            let rest = line
                .strip_prefix(key)
                .filter(|r| r.is_empty() || r.starts_with(' '))
                .ok_or_else(|| Error::Format(format!("expected field {key}, got {line:?}")))?;
            Ok(rest.trim().to_string())
        };
        let num = |key: &str, v: String| -> Result<usize> {
            v.parse()
                .map_err(|_| Error::Format(format!("field {key} is not a number: {v:?}")))
        };
        let omega: OmegaSequence = field("omega")?.parse()?;
        let level = num("level", field("level")?)?;
        let base = field("base")?
            .chars()
            .map(Letter::from_char)
            .collect::<Result<Vec<_>>>()?;
        let witness = TreeWord::parse(&field("witness")?, 0)?;
        let alpha = num("alpha", field("alpha")?)?;
        let k = num("k", field("k")?)?;
        let visits = field("walk")?
            .split_whitespace()
            .map(|b| {
                b.strip_prefix('[')
                    .and_then(|b| b.strip_suffix(']'))
                    .ok_or_else(|| Error::Format(format!("bad walk entry {b:?}")))?
                    .parse()
            })
            .collect::<Result<Vec<Bits>>>()?;
        let steps = field("steps")?
            .split_whitespace()
            .map(|w| TreeWord::parse(w, 0))
            .collect::<Result<Vec<_>>>()?;
        let moves = field("moves")?
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<Vec<NielsenMove>>>()?;
        let marks = field("marks")?
            .split_whitespace()
            .map(|m| {
                let bad = || Error::Format(format!("bad mark {m:?}"));
                let (a, b) = m.split_once(':').ok_or_else(bad)?;
                let a: usize = a.parse().map_err(|_| bad())?;
                let b: usize = b.parse().map_err(|_| bad())?;
                if b == 0 {
                    return Err(bad());
                }
                Ok((a, b - 1))
            })
            .collect::<Result<Vec<_>>>()?;
        if !field("end")?.is_empty() {
            return Err(Error::Format("trailing data after end".into()));
        }
        Ok(Self {
            omega,
            level,
            base,
            witness,
            alpha,
            k,
            visits,
            steps,
            moves,
            marks,
        })
    }
}
