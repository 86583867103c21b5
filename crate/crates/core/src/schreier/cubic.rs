use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use serde::Serialize;

use super::SpanningWalk;
use crate::bits::Bits;
use crate::error::{Error, Result};
use crate::tree::{GrigorchukGroup, TreeWord};

/// Largest family enumerated by [`check_cubic_bruteforce`].
pub const MAX_BRUTE_FORCE: usize = 16;

/// `c_i = h_i g h_i^{-1}` along the walk; needs `g ∈ Rist(start)`.
pub fn conjugate_family(group: &GrigorchukGroup, g: &TreeWord, walk: &SpanningWalk) -> Result<Vec<TreeWord>> {
    if !group.in_rist(g, &walk.start) {
        return Err(Error::Precondition(format!(
            "element is not in the rigid stabilizer of {}",
            walk.start
        )));
    }
    Ok(walk
        .words
        .iter()
        .map(|h| h.mul_unchecked(g).mul_unchecked(&h.invert()))
        .collect())
}

/// Whether the `2^k` ordered products `g_1^{ε_1} ⋯ g_k^{ε_k}` are pairwise
/// distinct.
///
/// Products are fingerprinted by their action on level `fingerprint_level`;
/// equal fingerprints are settled by the word problem.
pub fn check_cubic_bruteforce(group: &GrigorchukGroup, elems: &[TreeWord], fingerprint_level: usize) -> Result<bool> {
    let k = elems.len();
    if k > MAX_BRUTE_FORCE {
        return Err(Error::TooManyForBruteForce(k));
    }
    if let Some(g) = elems.iter().find(|g| g.offset() != 0) {
        return Err(Error::OffsetMismatch(g.offset(), 0));
    }
    let perms: Vec<Vec<u32>> = elems
        .iter()
        .map(|g| group.level_permutation(g, fingerprint_level))
        .collect();
    let identity: Vec<u32> = (0..1u32 << fingerprint_level).collect();

    // Depth-first over ε, building the product left to right.
    let mut seen: HashMap<u64, Vec<u32>> = HashMap::with_capacity(1 << k);
    let mut stack = vec![(0usize, 0u32, identity)];
    while let Some((depth, mask, perm)) = stack.pop() {
        if depth == k {
            let mut h = DefaultHasher::new();
            perm.hash(&mut h);
            let bucket = seen.entry(h.finish()).or_default();
            for &other in bucket.iter() {
                let x = subset_product(elems, mask);
                let y = subset_product(elems, other);
                if group.is_identity(&x.mul_unchecked(&y.invert())) {
                    return Ok(false);
                }
            }
            bucket.push(mask);
            continue;
        }
        // (P g)(s) = P(g(s))
        let with: Vec<u32> = perms[depth].iter().map(|&i| perm[i as usize]).collect();
        stack.push((depth + 1, mask | 1 << depth, with));
        stack.push((depth + 1, mask, perm));
    }
    Ok(true)
}

fn subset_product(elems: &[TreeWord], mask: u32) -> TreeWord {
    let mut p = TreeWord::identity(0);
    for (i, g) in elems.iter().enumerate() {
        if mask >> i & 1 == 1 {
            p = p.mul_unchecked(g);
        }
    }
    p
}

/// Outcome of the support criterion, with the reasons for a failure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SupportCheck {
    pub ok: bool,
    /// The singleton support of each element, when it has one.
    pub supports: Vec<Option<Bits>>,
    pub diagnostics: Vec<String>,
}

/// Cubicity from supports: every element is nontrivial, fixes level `m`,
/// has a single level-`m` string carrying a nontrivial section, and those
/// strings are pairwise distinct.
pub fn check_cubic_by_support(group: &GrigorchukGroup, elems: &[TreeWord], m: usize) -> SupportCheck {
    let mut diagnostics = Vec::new();
    let mut supports = Vec::with_capacity(elems.len());
    for (i, g) in elems.iter().enumerate() {
        if group.is_identity(g) {
            diagnostics.push(format!("element {i} is trivial"));
            supports.push(None);
            continue;
        }
        match group.support(g, m) {
            Ok(s) if s.len() == 1 => supports.push(s.into_iter().next()),
            Ok(s) => {
                diagnostics.push(format!("element {i} has support of size {} on level {m}", s.len()));
                supports.push(None);
            }
            Err(e) => {
                diagnostics.push(format!("element {i}: {e}"));
                supports.push(None);
            }
        }
    }
    let mut owner: HashMap<&Bits, usize> = HashMap::new();
    for (i, s) in supports.iter().enumerate() {
        if let Some(s) = s {
            if let Some(j) = owner.insert(s, i) {
                diagnostics.push(format!("elements {j} and {i} share support {s}"));
            }
        }
    }
    SupportCheck {
        ok: diagnostics.is_empty(),
        supports,
        diagnostics,
    }
}
