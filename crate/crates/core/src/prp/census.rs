use serde::Serialize;

use super::dsu::Dsu;
use super::NielsenMove;
use crate::error::{Error, Result};
use crate::group::FiniteBackend;

/// Largest number of `n`-tuples a census will enumerate.
pub const MAX_CENSUS_TUPLES: u128 = 10_000_000;

/// Connected components of `Γ_n(G)` for a finite `G`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Census {
    pub n: usize,
    pub group_order: usize,
    pub total_tuples: usize,
    pub generating_tuples: usize,
    /// Component sizes, largest first.
    pub components: Vec<usize>,
}

impl Census {
    pub fn is_connected(&self) -> bool {
        self.components.len() == 1
    }

    pub const CSV_HEADER: &'static str = "component,size";

    pub fn csv_rows(&self) -> Vec<String> {
        self.components
            .iter()
            .enumerate()
            .map(|(i, s)| format!("{i},{s}"))
            .collect()
    }
}

/// Enumerates every generating `n`-tuple and joins tuples one Nielsen move
/// apart. Tuples are indexed in base `|G|`, first entry most significant.
pub fn components_finite<B: FiniteBackend>(b: &B, n: usize) -> Result<Census> {
    let order = b.order();
    let count = (order as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    if count > MAX_CENSUS_TUPLES {
        return Err(Error::TooLarge {
            count,
            bound: MAX_CENSUS_TUPLES,
        });
    }
    let total = count as usize;
    let decode = |mut idx: usize| -> Vec<B::Elem> {
        let mut t = Vec::with_capacity(n);
        for _ in 0..n {
            t.push(b.element(idx % order));
            idx /= order;
        }
        t.reverse();
        t
    };
    let encode = |t: &[B::Elem]| t.iter().fold(0usize, |acc, x| acc * order + b.index_of(x));

    let generating: Vec<bool> = (0..total)
        .map(|idx| b.is_generating(&decode(idx)) == Some(true))
        .collect();
    let moves = NielsenMove::all(n);
    let mut dsu = Dsu::new(total);
    for idx in (0..total).filter(|&i| generating[i]) {
        let t = decode(idx);
        for &m in &moves {
            let u = super::apply_move(b, &t, m)?;
            dsu.union(idx as u32, encode(&u) as u32);
        }
    }
    let mut sizes = std::collections::HashMap::new();
    for idx in (0..total).filter(|&i| generating[i]) {
        *sizes.entry(dsu.find(idx as u32)).or_insert(0usize) += 1;
    }
    let mut components: Vec<usize> = sizes.into_values().collect();
    components.sort_unstable_by(|a, b| b.cmp(a));
    Ok(Census {
        n,
        group_order: order,
        total_tuples: total,
        generating_tuples: generating.iter().filter(|&&g| g).count(),
        components,
    })
}
