//! Nielsen moves and the product replacement graph `Γ_n(G)`.
//!
//! Vertices are generating `n`-tuples; each tuple has `4n(n-1)` outgoing
//! moves `R_ij^±: g_j ↦ g_j g_i^±` and `L_ij^±: g_j ↦ g_i^± g_j`.

mod ball;
mod census;
mod dsu;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use ball::{ball, BallOptions, BallRow, BallTable, Explored, DEFAULT_BUDGET, MAX_DOT_VERTICES};
pub use census::{components_finite, Census, MAX_CENSUS_TUPLES};

use crate::error::{Error, Result};
use crate::group::GroupBackend;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    /// `g_j ↦ g_j g_i^±`
    R,
    /// `g_j ↦ g_i^± g_j`
    L,
}

/// A Nielsen move on indices `i ≠ j`, stored 0-based and written 1-based
/// (`R1,2+` is `R_12^+`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NielsenMove {
    pub side: Side,
    pub i: usize,
    pub j: usize,
    pub inverse: bool,
}

impl NielsenMove {
    pub fn new(side: Side, i: usize, j: usize, inverse: bool) -> Result<Self> {
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(Self { side, i, j, inverse })
    }

    pub fn r(i: usize, j: usize, inverse: bool) -> Result<Self> {
        Self::new(Side::R, i, j, inverse)
    }

    pub fn l(i: usize, j: usize, inverse: bool) -> Result<Self> {
        Self::new(Side::L, i, j, inverse)
    }

    /// The move undoing this one.
    pub fn reversed(self) -> Self {
        Self {
            inverse: !self.inverse,
            ..self
        }
    }

    /// All `4n(n-1)` moves in a fixed order: `i`, then `j`, then `R` before
    /// `L`, then `+` before `-`.
    pub fn all(n: usize) -> Vec<NielsenMove> {
        let mut out = Vec::with_capacity(4 * n * n.saturating_sub(1));
        for i in 0..n {
            for j in (0..n).filter(|&j| j != i) {
                for side in [Side::R, Side::L] {
                    for inverse in [false, true] {
                        out.push(NielsenMove { side, i, j, inverse });
                    }
                }
            }
        }
        out
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.i == self.j {
            return Err(Error::SameIndex(self.i));
        }
        for index in [self.i, self.j] {
            if index >= n {
                return Err(Error::IndexOutOfRange { index, len: n });
            }
        }
        Ok(())
    }
}

impl fmt::Display for NielsenMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = match self.side {
            Side::R => 'R',
            Side::L => 'L',
        };
        let sign = if self.inverse { '-' } else { '+' };
        write!(f, "{side}{},{}{sign}", self.i + 1, self.j + 1)
    }
}

impl FromStr for NielsenMove {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Format(format!("bad move {s:?}"));
        let side = match s.chars().next() {
            Some('R') => Side::R,
            Some('L') => Side::L,
            _ => return Err(bad()),
        };
        let inverse = match s.chars().last() {
            Some('+') => false,
            Some('-') => true,
            _ => return Err(bad()),
        };
        let body = s.get(1..s.len() - 1).ok_or_else(bad)?;
        let (i, j) = body.split_once(',').ok_or_else(bad)?;
        let i: usize = i.parse().map_err(|_| bad())?;
        let j: usize = j.parse().map_err(|_| bad())?;
        if i == 0 || j == 0 {
            return Err(bad());
        }
        Self::new(side, i - 1, j - 1, inverse)
    }
}

/// Applies `m` to a copy of `tuple`.
pub fn apply_move<B: GroupBackend>(b: &B, tuple: &[B::Elem], m: NielsenMove) -> Result<Vec<B::Elem>> {
    let mut out = tuple.to_vec();
    apply_move_in_place(b, &mut out, m)?;
    Ok(out)
}

pub fn apply_move_in_place<B: GroupBackend>(b: &B, tuple: &mut [B::Elem], m: NielsenMove) -> Result<()> {
    m.check(tuple.len())?;
    let gi = if m.inverse {
        b.invert(&tuple[m.i])
    } else {
        tuple[m.i].clone()
    };
    tuple[m.j] = match m.side {
        Side::R => b.multiply(&tuple[m.j], &gi),
        Side::L => b.multiply(&gi, &tuple[m.j]),
    };
    Ok(())
}

pub fn apply_moves<B: GroupBackend>(b: &B, tuple: &[B::Elem], moves: &[NielsenMove]) -> Result<Vec<B::Elem>> {
    let mut out = tuple.to_vec();
    for &m in moves {
        apply_move_in_place(b, &mut out, m)?;
    }
    Ok(out)
}

/// Moves, in application order, sending `(g_i, g_j)` to `(g_j^{-1}, g_i)`.
pub fn swap_invert_path(i: usize, j: usize) -> Result<[NielsenMove; 3]> {
    Ok([
        NielsenMove::l(i, j, false)?,
        NielsenMove::l(j, i, true)?,
        NielsenMove::r(i, j, false)?,
    ])
}

/// Every neighbour with multiplicity, in [`NielsenMove::all`] order.
pub fn neighbors<B: GroupBackend>(b: &B, tuple: &[B::Elem]) -> Vec<(NielsenMove, Vec<B::Elem>)> {
    NielsenMove::all(tuple.len())
        .into_iter()
        .map(|m| (m, apply_move(b, tuple, m).expect("moves are in range")))
        .collect()
}

/// Distinct neighbours, first occurrence kept.
pub fn neighbors_dedup<B: GroupBackend>(b: &B, tuple: &[B::Elem]) -> Vec<(NielsenMove, Vec<B::Elem>)> {
    let mut out: Vec<(NielsenMove, Vec<B::Elem>)> = Vec::new();
    for (m, t) in neighbors(b, tuple) {
        if !out.iter().any(|(_, u)| tuples_equal(b, u, &t)) {
            out.push((m, t));
        }
    }
    out
}

/// `S^{(m)}`: the tuple padded with `m` identities.
pub fn append_trivial<B: GroupBackend>(b: &B, tuple: &[B::Elem], m: usize) -> Vec<B::Elem> {
    let mut out = tuple.to_vec();
    out.extend(std::iter::repeat_with(|| b.identity()).take(m));
    out
}

pub fn tuples_equal<B: GroupBackend>(b: &B, x: &[B::Elem], y: &[B::Elem]) -> bool {
    x.len() == y.len() && x.iter().zip(y).all(|(u, v)| b.equals(u, v))
}

pub fn tuple_key<B: GroupBackend>(b: &B, tuple: &[B::Elem]) -> Vec<B::Key> {
    tuple.iter().map(|x| b.key(x)).collect()
}

pub fn format_tuple<B: GroupBackend>(b: &B, tuple: &[B::Elem]) -> String {
    let parts: Vec<String> = tuple.iter().map(|x| b.format(x)).collect();
    format!("({})", parts.join(";"))
}
