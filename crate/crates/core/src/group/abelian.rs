use std::fmt::{Debug, Display};
use std::hash::Hash;
use std::marker::PhantomData;

use num_integer::Integer;
use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Serialize};

use super::GroupBackend;
use crate::error::{Error, Result};

/// Integer scalar usable as a coordinate of `Z^d`.
pub trait IntScalar: PrimInt + Signed + Integer + Hash + Debug + Display + Send + Sync + 'static {}

impl<T> IntScalar for T where T: PrimInt + Signed + Integer + Hash + Debug + Display + Send + Sync + 'static {}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct FreeAbelianElement<T> {
    pub coords: Vec<T>,
}

impl<T: IntScalar> FreeAbelianElement<T> {
    pub fn new(coords: Vec<T>) -> Self {
        Self { coords }
    }

    pub fn from_i64s(coords: &[i64]) -> Self {
        Self {
            coords: coords
                .iter()
                .map(|&c| T::from(c).expect("coordinate fits the scalar type"))
                .collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `Z^d` under componentwise addition.
#[derive(Clone, Debug)]
pub struct FreeAbelian<T> {
    dim: usize,
    _scalar: PhantomData<T>,
}

impl<T: IntScalar> FreeAbelian<T> {
    pub fn new(dim: usize) -> Self {
        Self {
            dim,
            _scalar: PhantomData,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Vec<FreeAbelianElement<T>> {
        (0..self.dim)
            .map(|i| {
                FreeAbelianElement::new(
                    (0..self.dim)
                        .map(|j| if i == j { T::one() } else { T::zero() })
                        .collect(),
                )
            })
            .collect()
    }
}

impl<T: IntScalar> GroupBackend for FreeAbelian<T> {
    type Elem = FreeAbelianElement<T>;
    type Key = Vec<T>;

    fn identity(&self) -> Self::Elem {
        FreeAbelianElement::new(vec![T::zero(); self.dim])
    }

    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        FreeAbelianElement::new(x.coords.iter().zip(&y.coords).map(|(&a, &b)| a + b).collect())
    }

    fn invert(&self, x: &Self::Elem) -> Self::Elem {
        FreeAbelianElement::new(x.coords.iter().map(|&a| -a).collect())
    }

    fn equals(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y
    }

    fn key(&self, x: &Self::Elem) -> Self::Key {
        x.coords.clone()
    }

    fn is_generating(&self, tuple: &[Self::Elem]) -> Option<bool> {
        is_generating_abelian(tuple).ok()
    }

    fn format(&self, x: &Self::Elem) -> String {
        x.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// Whether `tuple` generates `Z^d`.
///
/// The columns generate iff the last invariant factor of the Smith normal
/// form is one, i.e. the `d × d` minors have gcd 1. Only `d ≤ 3` is handled.
pub fn is_generating_abelian<T: IntScalar>(tuple: &[FreeAbelianElement<T>]) -> Result<bool> {
    let Some(first) = tuple.first() else {
        return Ok(false);
    };
    let d = first.dim();
    if tuple.iter().any(|x| x.dim() != d) {
        return Err(Error::MixedModuli);
    }
    if d == 0 {
        return Ok(true);
    }
    if d > 3 {
        return Err(Error::UnsupportedDimension(d));
    }
    if tuple.len() < d {
        return Ok(false);
    }
    let cols: Vec<Vec<i128>> = tuple
        .iter()
        .map(|x| x.coords.iter().map(|c| c.to_i128().unwrap()).collect())
        .collect();
    let mut g: i128 = 0;
    for combo in combinations(cols.len(), d) {
        let m: Vec<&[i128]> = combo.iter().map(|&i| cols[i].as_slice()).collect();
        g = g.gcd(&det(&m));
        if g == 1 {
            return Ok(true);
        }
    }
    Ok(g == 1)
}

fn det(m: &[&[i128]]) -> i128 {
    match m.len() {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[1][0] * (m[0][1] * m[2][2] - m[0][2] * m[2][1])
                + m[2][0] * (m[0][1] * m[1][2] - m[0][2] * m[1][1])
        }
        _ => unreachable!("dimension checked by caller"),
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::laws::check_group_laws;

    fn v(c: &[i64]) -> FreeAbelianElement<i64> {
        FreeAbelianElement::from_i64s(c)
    }

    #[test]
    fn generation_examples() {
        assert!(is_generating_abelian(&[v(&[1, 0]), v(&[0, 1])]).unwrap());
        assert!(!is_generating_abelian(&[v(&[2, 0]), v(&[0, 1])]).unwrap());
        // det [[3,2],[5,3]] = 9 - 10 = -1
        assert!(is_generating_abelian(&[v(&[3, 5]), v(&[2, 3])]).unwrap());
        assert!(!is_generating_abelian::<i64>(&[]).unwrap());
    }

    #[test]
    fn coprime_pairs_generate_z() {
        for a in -6i64..=6 {
            for b in -6i64..=6 {
                let gen = is_generating_abelian(&[v(&[a]), v(&[b])]).unwrap();
                assert_eq!(gen, a.gcd(&b) == 1, "({a},{b})");
            }
        }
    }

    #[test]
    fn three_dimensions_and_redundant_columns() {
        let t = [v(&[2, 0, 0]), v(&[3, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert!(is_generating_abelian(&t).unwrap());
        let t = [v(&[2, 0, 0]), v(&[4, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert!(!is_generating_abelian(&t).unwrap());
    }

    #[test]
    fn rejects_large_dimension_and_short_tuples() {
        let e = v(&[1, 0, 0, 0]);
        assert_eq!(
            is_generating_abelian(&[e.clone(), e.clone(), e.clone(), e]),
            Err(Error::UnsupportedDimension(4))
        );
        assert!(!is_generating_abelian(&[v(&[1, 0])]).unwrap());
    }

    #[test]
    fn works_for_other_scalars() {
        let t: Vec<FreeAbelianElement<i32>> =
            vec![FreeAbelianElement::new(vec![3, 5]), FreeAbelianElement::new(vec![2, 3])];
        assert!(is_generating_abelian(&t).unwrap());
    }

    #[test]
    fn group_laws() {
        let b = FreeAbelian::<i64>::new(2);
        let elems = [v(&[0, 0]), v(&[1, -2]), v(&[3, 5]), v(&[-4, 7])];
        check_group_laws(&b, &elems);
    }
}
