use std::collections::HashSet;
use std::sync::{Arc, RwLock};

use super::group::GrigorchukGroup;
use super::word::{Letter, TreeWord};
use crate::group::GroupBackend;

/// Default fingerprint depth for tree-backend vertex deduplication.
pub const DEFAULT_FINGERPRINT_LEVEL: usize = 7;

/// A group element carried together with its permutation of one tree level.
#[derive(Clone, Debug)]
pub struct TreeElem {
    pub word: TreeWord,
    perm: Arc<[u16]>,
}

impl TreeElem {
    pub fn perm(&self) -> &[u16] {
        &self.perm
    }
}

/// [`GrigorchukGroup`] at offset 0 as a [`GroupBackend`].
///
/// Keys are level-`K` permutations; two elements with equal keys are told
/// apart by the exact word problem. Permutations are interned, so tuples
/// that share an element share its storage.
#[derive(Debug)]
pub struct TreeBackend {
    group: GrigorchukGroup,
    level: usize,
    letter_perms: [Vec<u16>; 4],
    pool: RwLock<HashSet<Arc<[u16]>>>,
}

impl TreeBackend {
    pub fn new(group: GrigorchukGroup, level: usize) -> Self {
        assert!(level <= 16, "fingerprint level must fit u16 indices");
        let table = |x: Letter| -> Vec<u16> { group.letter_table(x, 0, level).into_iter().map(|i| i as u16).collect() };
        let letter_perms = [table(Letter::A), table(Letter::B), table(Letter::C), table(Letter::D)];
        Self {
            group,
            level,
            letter_perms,
            pool: RwLock::default(),
        }
    }

    fn intern(&self, perm: Vec<u16>) -> Arc<[u16]> {
        if let Some(p) = self.pool.read().expect("pool lock").get(perm.as_slice()) {
            return p.clone();
        }
        let mut pool = self.pool.write().expect("pool lock");
        if let Some(p) = pool.get(perm.as_slice()) {
            return p.clone();
        }
        let p: Arc<[u16]> = perm.into();
        pool.insert(p.clone());
        p
    }

    pub fn group(&self) -> &GrigorchukGroup {
        &self.group
    }

    pub fn fingerprint_level(&self) -> usize {
        self.level
    }

    pub fn elem(&self, word: TreeWord) -> TreeElem {
        assert_eq!(word.offset(), 0, "backend elements live at offset 0");
        let perm: Vec<u16> = (0..1usize << self.level)
            .map(|i| {
                let mut i = i as u16;
                for &x in word.letters().iter().rev() {
                    i = self.letter_perms[x as usize][i as usize];
                }
                i
            })
            .collect();
        TreeElem {
            word,
            perm: self.intern(perm),
        }
    }

    pub fn letter(&self, x: Letter) -> TreeElem {
        self.elem(TreeWord::letter(x, 0))
    }

    pub fn parse(&self, s: &str) -> crate::error::Result<TreeElem> {
        Ok(self.elem(TreeWord::parse(s, 0)?))
    }
}

impl GroupBackend for TreeBackend {
    type Elem = TreeElem;
    type Key = Arc<[u16]>;

    fn identity(&self) -> TreeElem {
        self.elem(TreeWord::identity(0))
    }

    fn multiply(&self, x: &TreeElem, y: &TreeElem) -> TreeElem {
        // (xy)(s) = x(y(s))
        let perm: Vec<u16> = y.perm.iter().map(|&i| x.perm[i as usize]).collect();
        TreeElem {
            word: x.word.mul_unchecked(&y.word),
            perm: self.intern(perm),
        }
    }

    fn invert(&self, x: &TreeElem) -> TreeElem {
        let mut perm = vec![0u16; x.perm.len()];
        for (i, &j) in x.perm.iter().enumerate() {
            perm[j as usize] = i as u16;
        }
        TreeElem {
            word: x.word.invert(),
            perm: self.intern(perm),
        }
    }

    fn equals(&self, x: &TreeElem, y: &TreeElem) -> bool {
        x.perm == y.perm && self.group.is_identity(&x.word.mul_unchecked(&y.word.invert()))
    }

    fn key(&self, x: &TreeElem) -> Arc<[u16]> {
        x.perm.clone()
    }

    fn exact_keys(&self) -> bool {
        false
    }

    fn is_generating(&self, _tuple: &[TreeElem]) -> Option<bool> {
        None
    }

    fn format(&self, x: &TreeElem) -> String {
        x.word.to_string()
    }
}
