//! Group backends consumed by the product replacement explorer.

mod abelian;
mod modvec;

use std::fmt::Debug;
use std::hash::Hash;

pub use abelian::{is_generating_abelian, FreeAbelian, FreeAbelianElement};
pub use modvec::{determinant_mod_p, is_generating_modvector, rank_mod_p, ModVector, ModVectorElement};

/// Group law plus a hashable fingerprint of each element.
///
/// When [`GroupBackend::exact_keys`] is false, equal keys do not imply equal
/// elements and callers must confirm with [`GroupBackend::equals`].
pub trait GroupBackend: Sync {
    type Elem: Clone + Debug + Send + Sync;
    type Key: Clone + Eq + Hash + Send + Sync;

    fn identity(&self) -> Self::Elem;
    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem;
    fn invert(&self, x: &Self::Elem) -> Self::Elem;
    fn equals(&self, x: &Self::Elem, y: &Self::Elem) -> bool;
    fn key(&self, x: &Self::Elem) -> Self::Key;

    fn exact_keys(&self) -> bool {
        true
    }

    /// `None` where generation is not decidable by this backend.
    fn is_generating(&self, tuple: &[Self::Elem]) -> Option<bool>;

    fn format(&self, x: &Self::Elem) -> String;
}

/// A backend whose elements can be enumerated and indexed.
pub trait FiniteBackend: GroupBackend {
    fn order(&self) -> usize;
    fn element(&self, index: usize) -> Self::Elem;
    fn index_of(&self, x: &Self::Elem) -> usize;
}

#[cfg(test)]
pub(crate) mod laws {
    use super::GroupBackend;

    /// Associativity, two-sided identity, inverses and key/equals agreement.
    pub fn check_group_laws<B: GroupBackend>(b: &B, elems: &[B::Elem]) {
        let e = b.identity();
        for x in elems {
            assert!(b.equals(&b.multiply(&e, x), x));
            assert!(b.equals(&b.multiply(x, &e), x));
            assert!(b.equals(&b.multiply(&b.invert(x), x), &e));
            assert!(b.equals(x, x));
            for y in elems {
                assert_eq!(b.equals(x, y), b.equals(y, x));
                if b.exact_keys() {
                    assert_eq!(b.equals(x, y), b.key(x) == b.key(y));
                } else if b.equals(x, y) {
                    assert!(b.key(x) == b.key(y));
                }
                for z in elems {
                    let l = b.multiply(&b.multiply(x, y), z);
                    let r = b.multiply(x, &b.multiply(y, z));
                    assert!(b.equals(&l, &r));
                }
            }
        }
    }
}
