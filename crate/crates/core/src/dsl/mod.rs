//! Text format for ω-sequences, family groups and explicit recursions.
//!
//! ```text
//! # the first Grigorchuk group, twice
//! omega w = ""("dcb")*
//! group G = grigorchuk(w)
//! group H { gen a = swap  gen b = (a, c)  gen c = (a, d)  gen d = (id, b) }
//! ```
//!
//! Omega and group names share one namespace; generator names are local to
//! their group. Keywords (`omega group grigorchuk gen swap id`) are reserved.

mod parser;

use std::fmt;

use thiserror::Error;

pub use parser::parse;

use crate::error::Result;
use crate::tree::{GrigorchukGroup, MealyDef, OmegaSequence, RuleSpec};

/// Source position, 1-based. Every `Pos` compares equal to every other, so
/// derived equality on the syntax tree ignores positions.
#[derive(Clone, Copy, Debug, Default, Eq)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unexpected character {0:?}")]
    UnexpectedChar(char),
    #[error("unterminated string")]
    UnterminatedString,
    #[error("expected {expected}, found {found}")]
    Expected { expected: String, found: String },
    #[error("`{0}` is a reserved word")]
    ReservedWord(String),
    #[error("name {0:?} must not start with a digit")]
    BadName(String),
    #[error("omega letter {0:?} is not one of b, c, d")]
    BadOmegaLetter(char),
    #[error("empty cycle")]
    EmptyCycle,
    #[error("duplicate name {0:?}")]
    Duplicate(String),
    #[error("unresolved reference {0:?}")]
    Unresolved(String),
}

#[derive(Clone, Debug, Eq, Error)]
#[error("{pos}: {kind}")]
pub struct ParseError {
    pub pos: Pos,
    pub kind: ParseErrorKind,
}

impl PartialEq for ParseError {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && (self.pos.line, self.pos.col) == (other.pos.line, other.pos.col)
    }
}

impl ParseError {
    pub(crate) fn new(pos: Pos, kind: ParseErrorKind) -> Self {
        Self { pos, kind }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecFile {
    pub items: Vec<Item>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Item {
    Omega(OmegaDecl),
    Group(GroupDecl),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OmegaDecl {
    pub name: String,
    pub prefix: String,
    pub cycle: String,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupDecl {
    pub name: String,
    pub body: GroupBody,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupBody {
    Family { omega: String, omega_pos: Pos },
    Explicit { gens: Vec<GenDecl> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GenDecl {
    pub name: String,
    pub rule: Rule,
    pub pos: Pos,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Rule {
    Swap,
    Pair(Ref, Ref),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ref {
    Id { pos: Pos },
    Name { name: String, pos: Pos },
}

impl fmt::Display for Ref {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ref::Id { .. } => f.write_str("id"),
            Ref::Name { name, .. } => f.write_str(name),
        }
    }
}

/// Canonical pretty-printing; reparsing the output gives an equal file.
impl fmt::Display for SpecFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for item in &self.items {
            match item {
                Item::Omega(o) => writeln!(f, "omega {} = \"{}\"(\"{}\")*", o.name, o.prefix, o.cycle)?,
                Item::Group(g) => match &g.body {
                    GroupBody::Family { omega, .. } => writeln!(f, "group {} = grigorchuk({})", g.name, omega)?,
                    GroupBody::Explicit { gens } => {
                        writeln!(f, "group {} {{", g.name)?;
                        for gen in gens {
                            match &gen.rule {
                                Rule::Swap => writeln!(f, "  gen {} = swap", gen.name)?,
                                Rule::Pair(l, r) => writeln!(f, "  gen {} = ({}, {})", gen.name, l, r)?,
                            }
                        }
                        writeln!(f, "}}")?;
                    }
                },
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub enum LoweredGroup {
    Family(GrigorchukGroup),
    Explicit(MealyDef),
}

#[derive(Clone, Debug, Default)]
pub struct Lowered {
    pub omegas: Vec<(String, OmegaSequence)>,
    pub groups: Vec<(String, LoweredGroup)>,
}

impl Lowered {
    pub fn group(&self, name: &str) -> Option<&LoweredGroup> {
        self.groups.iter().find(|(n, _)| n == name).map(|(_, g)| g)
    }

    pub fn omega(&self, name: &str) -> Option<&OmegaSequence> {
        self.omegas.iter().find(|(n, _)| n == name).map(|(_, w)| w)
    }
}

impl SpecFile {
    /// Builds group backends. A parsed file is already validated, so errors
    /// here only arise from hand-built syntax trees.
    pub fn lower(&self) -> Result<Lowered> {
        let mut out = Lowered::default();
        for item in &self.items {
            if let Item::Omega(o) = item {
                out.omegas
                    .push((o.name.clone(), OmegaSequence::from_strs(&o.prefix, &o.cycle)?));
            }
        }
        for item in &self.items {
            let Item::Group(g) = item else { continue };
            let lowered = match &g.body {
                GroupBody::Family { omega, omega_pos } => {
                    let w = out
                        .omega(omega)
                        .ok_or_else(|| ParseError::new(*omega_pos, ParseErrorKind::Unresolved(omega.clone())))?;
                    LoweredGroup::Family(GrigorchukGroup::new(w.clone()))
                }
                GroupBody::Explicit { gens } => {
                    let name = |r: &Ref| match r {
                        Ref::Id { .. } => None,
                        Ref::Name { name, .. } => Some(name.clone()),
                    };
                    let specs = gens
                        .iter()
                        .map(|gen| {
                            let spec = match &gen.rule {
                                Rule::Swap => RuleSpec::Swap,
                                Rule::Pair(l, r) => RuleSpec::Pair {
                                    left: name(l),
                                    right: name(r),
                                    swap: false,
                                },
                            };
                            (gen.name.clone(), spec)
                        })
                        .collect();
                    LoweredGroup::Explicit(MealyDef::new(specs)?)
                }
            };
            out.groups.push((g.name.clone(), lowered));
        }
        Ok(out)
    }
}

/// Parses and lowers in one step.
pub fn load(text: &str) -> Result<(SpecFile, Lowered)> {
    let file = parse(text)?;
    let lowered = file.lower()?;
    Ok((file, lowered))
}
