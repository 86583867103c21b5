use std::fs;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, ValueEnum};
use prgraph_core::dsl::{self, LoweredGroup};
use prgraph_core::group::{FreeAbelianElement, GroupBackend, ModVector, ModVectorElement};
use prgraph_core::tree::{MealyDef, TreeBackend, DEFAULT_FINGERPRINT_LEVEL};
use prgraph_core::{GrigorchukGroup, OmegaSequence, TreeWord, Zd};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Builtin {
    /// Generalized Grigorchuk group, `ω = (dcb)` unless --omega is given
    Grigorchuk,
    /// Free abelian group Z^d
    Zd,
    /// Elementary abelian group (Z_p)^n
    Zpn,
    /// (Z_2)^k
    Z2k,
}

#[derive(Args, Clone, Debug)]
pub struct GroupArgs {
    /// Builtin group
    #[arg(long, value_enum, default_value = "grigorchuk")]
    pub group: Builtin,
    /// ω as `cycle` or `prefix(cycle)`, over b, c, d
    #[arg(long)]
    pub omega: Option<String>,
    /// Group file (.grp); overrides --group
    #[arg(long)]
    pub file: Option<PathBuf>,
    /// Group declared in --file
    #[arg(long)]
    pub name: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub d: usize,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
    #[arg(long, default_value_t = 2)]
    pub n: usize,
    #[arg(long, default_value_t = 2)]
    pub k: usize,
    /// Fingerprint level for tree-group deduplication
    #[arg(long, default_value_t = DEFAULT_FINGERPRINT_LEVEL)]
    pub fingerprint: usize,
}

/// A group from the command line, ready for use.
pub enum Source {
    Tree(GrigorchukGroup),
    Mealy(MealyDef),
    Zd(usize),
    Mod(u32, usize),
}

impl GroupArgs {
    pub fn source(&self) -> Result<Source> {
        if let Some(path) = &self.file {
            let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let (_, lowered) = dsl::load(&text).map_err(|e| anyhow!("{}: {e}", path.display()))?;
            let name = match &self.name {
                Some(n) => n.clone(),
                None if lowered.groups.len() == 1 => lowered.groups[0].0.clone(),
                None => bail!(
                    "--name is required when the file declares {} groups",
                    lowered.groups.len()
                ),
            };
            return match lowered.group(&name) {
                Some(LoweredGroup::Family(g)) => Ok(Source::Tree(g.clone())),
                Some(LoweredGroup::Explicit(m)) => Ok(Source::Mealy(m.clone())),
                None => bail!("group {name:?} is not declared in {}", path.display()),
            };
        }
        Ok(match self.group {
            Builtin::Grigorchuk => Source::Tree(GrigorchukGroup::new(self.omega()?)),
            Builtin::Zd => Source::Zd(self.d),
            Builtin::Zpn => Source::Mod(self.p, self.n),
            Builtin::Z2k => Source::Mod(2, self.k),
        })
    }

    pub fn omega(&self) -> Result<OmegaSequence> {
        match &self.omega {
            Some(s) => Ok(s.parse()?),
            None => Ok(OmegaSequence::classical()),
        }
    }

    pub fn tree(&self) -> Result<GrigorchukGroup> {
        match self.source()? {
            Source::Tree(g) => Ok(g),
            _ => bail!("this command needs a Grigorchuk-family group"),
        }
    }

    /// Short description for output headers.
    pub fn describe(&self) -> String {
        if let Some(path) = &self.file {
            return format!("file:{}#{}", path.display(), self.name.as_deref().unwrap_or("-"));
        }
        match self.group {
            Builtin::Grigorchuk => format!(
                "grigorchuk:{}",
                self.omega().map(|w| w.to_string()).unwrap_or_else(|_| "?".into())
            ),
            Builtin::Zd => format!("zd:{}", self.d),
            Builtin::Zpn => format!("zpn:{}^{}", self.p, self.n),
            Builtin::Z2k => format!("z2k:{}", self.k),
        }
    }
}

/// Parsing and default tuples for each backend.
pub trait TupleSyntax: GroupBackend {
    fn parse_elem(&self, s: &str) -> Result<Self::Elem>;
    fn default_tuple(&self) -> Vec<Self::Elem>;

    fn parse_tuple(&self, s: &str) -> Result<Vec<Self::Elem>> {
        s.split(';').map(|e| self.parse_elem(e.trim())).collect()
    }
}

fn coords(s: &str) -> Result<Vec<i64>> {
    s.split(',')
        .map(|c| c.trim().parse::<i64>().with_context(|| format!("bad coordinate {c:?}")))
        .collect()
}

impl TupleSyntax for Zd {
    fn parse_elem(&self, s: &str) -> Result<FreeAbelianElement<i64>> {
        let c = coords(s)?;
        if c.len() != self.dim() {
            bail!("element {s:?} does not have {} coordinates", self.dim());
        }
        Ok(FreeAbelianElement::from_i64s(&c))
    }

    fn default_tuple(&self) -> Vec<FreeAbelianElement<i64>> {
        self.basis()
    }
}

impl TupleSyntax for ModVector {
    fn parse_elem(&self, s: &str) -> Result<ModVectorElement> {
        let c = coords(s)?;
        if c.len() != self.dim() {
            bail!("element {s:?} does not have {} coordinates", self.dim());
        }
        Ok(ModVectorElement::new(c, self.p()))
    }

    fn default_tuple(&self) -> Vec<ModVectorElement> {
        self.basis()
    }
}

impl TupleSyntax for TreeBackend {
    fn parse_elem(&self, s: &str) -> Result<<TreeBackend as GroupBackend>::Elem> {
        Ok(self.elem(TreeWord::parse(s, 0)?))
    }

    fn default_tuple(&self) -> Vec<<TreeBackend as GroupBackend>::Elem> {
        ["a", "b", "c", "d"]
            .iter()
            .map(|w| self.parse(w).expect("letter"))
            .collect()
    }
}

/// Runs `$body` with `$b` bound to the backend selected by `$args`.
#[macro_export]
macro_rules! with_backend {
    ($args:expr, |$b:ident| $body:expr) => {{
        match $args.source()? {
            $crate::groups::Source::Tree(g) => {
                let $b = prgraph_core::tree::TreeBackend::new(g, $args.fingerprint.min(16));
                $body
            }
            $crate::groups::Source::Zd(d) => {
                let $b = prgraph_core::Zd::new(d);
                $body
            }
            $crate::groups::Source::Mod(p, n) => {
                let $b = prgraph_core::group::ModVector::new(p, n)?;
                $body
            }
            $crate::groups::Source::Mealy(_) => {
                anyhow::bail!("explicit recursion groups support only element act and sections")
            }
        }
    }};
}
