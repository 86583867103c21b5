use serde::{Deserialize, Serialize};

use super::{FiniteBackend, GroupBackend};
use crate::error::{Error, Result};

/// A vector of `(Z_p)^d`; coordinates are kept in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModVectorElement {
    pub coords: Vec<u32>,
    pub p: u32,
}

impl ModVectorElement {
    pub fn new(coords: Vec<i64>, p: u32) -> Self {
        let coords = coords.into_iter().map(|c| c.rem_euclid(p as i64) as u32).collect();
        Self { coords, p }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// `(Z_p)^d` with `p` prime.
#[derive(Clone, Debug)]
pub struct ModVector {
    p: u32,
    dim: usize,
}

impl ModVector {
    pub fn new(p: u32, dim: usize) -> Result<Self> {
        if p < 2 || !(2..p).take_while(|q| q * q <= p).all(|q| !p.is_multiple_of(q)) {
            return Err(Error::Precondition(format!("modulus {p} is not prime")));
        }
        Ok(Self { p, dim })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self) -> Vec<ModVectorElement> {
        (0..self.dim)
            .map(|i| ModVectorElement::new((0..self.dim).map(|j| i64::from(i == j)).collect(), self.p))
            .collect()
    }
}

impl GroupBackend for ModVector {
    type Elem = ModVectorElement;
    type Key = Vec<u32>;

    fn identity(&self) -> Self::Elem {
        ModVectorElement {
            coords: vec![0; self.dim],
            p: self.p,
        }
    }

    fn multiply(&self, x: &Self::Elem, y: &Self::Elem) -> Self::Elem {
        ModVectorElement {
            coords: x
                .coords
                .iter()
                .zip(&y.coords)
                .map(|(&a, &b)| (a + b) % self.p)
                .collect(),
            p: self.p,
        }
    }

    fn invert(&self, x: &Self::Elem) -> Self::Elem {
        ModVectorElement {
            coords: x.coords.iter().map(|&a| (self.p - a) % self.p).collect(),
            p: self.p,
        }
    }

    fn equals(&self, x: &Self::Elem, y: &Self::Elem) -> bool {
        x == y
    }

    fn key(&self, x: &Self::Elem) -> Self::Key {
        x.coords.clone()
    }

    fn is_generating(&self, tuple: &[Self::Elem]) -> Option<bool> {
        if tuple.is_empty() {
            return Some(self.dim == 0);
        }
        is_generating_modvector(tuple).ok()
    }

    fn format(&self, x: &Self::Elem) -> String {
        x.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(",")
    }
}

impl FiniteBackend for ModVector {
    fn order(&self) -> usize {
        (self.p as usize).pow(self.dim as u32)
    }

    fn element(&self, mut index: usize) -> Self::Elem {
        let p = self.p as usize;
        let mut coords = vec![0u32; self.dim];
        for c in coords.iter_mut().rev() {
            *c = (index % p) as u32;
            index /= p;
        }
        ModVectorElement { coords, p: self.p }
    }

    fn index_of(&self, x: &Self::Elem) -> usize {
        x.coords.iter().fold(0, |acc, &c| acc * self.p as usize + c as usize)
    }
}

fn check_uniform(tuple: &[ModVectorElement]) -> Result<(u32, usize)> {
    let first = tuple.first().ok_or_else(|| Error::Precondition("empty tuple".into()))?;
    let (p, d) = (first.p, first.dim());
    if tuple.iter().any(|x| x.p != p || x.dim() != d) {
        return Err(Error::MixedModuli);
    }
    Ok((p, d))
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat: a^(p-2)
    let (mut base, mut e, mut acc) = (a % p, p - 2, 1u64);
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    acc
}

/// Rank of the tuple's vectors over `Z_p` by Gaussian elimination.
pub fn rank_mod_p(tuple: &[ModVectorElement]) -> Result<usize> {
    let (p, d) = check_uniform(tuple)?;
    let p = p as u64;
    let mut rows: Vec<Vec<u64>> = tuple
        .iter()
        .map(|x| x.coords.iter().map(|&c| c as u64).collect())
        .collect();
    let mut rank = 0;
    for col in 0..d {
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = inv_mod(rows[rank][col], p);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && row[col] != 0 {
                let f = row[col] * inv % p;
                for (x, &y) in row.iter_mut().zip(&pivot_row) {
                    *x = (*x + p - f * y % p) % p;
                }
            }
        }
        rank += 1;
    }
    Ok(rank)
}

/// Whether the vectors span `(Z_p)^d`.
pub fn is_generating_modvector(tuple: &[ModVectorElement]) -> Result<bool> {
    let (_, d) = check_uniform(tuple)?;
    Ok(rank_mod_p(tuple)? == d)
}

/// Determinant mod `p` of a square tuple read as a matrix with one row per
/// entry.
pub fn determinant_mod_p(tuple: &[ModVectorElement]) -> Result<u32> {
    let (p, d) = check_uniform(tuple)?;
    if tuple.len() != d {
        return Err(Error::Precondition("determinant needs a square tuple".into()));
    }
    let p = p as u64;
    let mut m: Vec<Vec<u64>> = tuple
        .iter()
        .map(|x| x.coords.iter().map(|&c| c as u64).collect())
        .collect();
    let mut det = 1u64;
    for col in 0..d {
        let Some(pivot) = (col..d).find(|&r| m[r][col] != 0) else {
            return Ok(0);
        };
        if pivot != col {
            m.swap(pivot, col);
            det = (p - det) % p;
        }
        det = det * m[col][col] % p;
        let inv = inv_mod(m[col][col], p);
        let pivot_row = m[col].clone();
        for row in m.iter_mut().skip(col + 1) {
            let f = row[col] * inv % p;
            for (x, &y) in row.iter_mut().zip(&pivot_row) {
                *x = (*x + p - f * y % p) % p;
            }
        }
    }
    Ok(det as u32)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::laws::check_group_laws;

    fn mv(c: &[i64], p: u32) -> ModVectorElement {
        ModVectorElement::new(c.to_vec(), p)
    }

    #[test]
    fn generation_examples() {
        assert!(is_generating_modvector(&[mv(&[1, 0], 3), mv(&[0, 1], 3)]).unwrap());
        assert!(!is_generating_modvector(&[mv(&[1, 1], 3), mv(&[2, 2], 3)]).unwrap());
        assert_eq!(
            is_generating_modvector(&[mv(&[1, 0], 3), mv(&[0, 1], 5)]),
            Err(Error::MixedModuli)
        );
    }

    /// Brute-force count of ordered bases against `∏ (p^n - p^i)`.
    #[test]
    fn ordered_bases_are_counted_by_gl_order() {
        for (p, n) in [(2u32, 2usize), (3, 2), (2, 3)] {
            let g = ModVector::new(p, n).unwrap();
            let q = g.order();
            let mut count = 0usize;
            for idx in 0..q.pow(n as u32) {
                let tuple: Vec<_> = (0..n).map(|i| g.element(idx / q.pow(i as u32) % q)).collect();
                if is_generating_modvector(&tuple).unwrap() {
                    count += 1;
                }
            }
            let expected: usize = (0..n)
                .map(|i| (p as usize).pow(n as u32) - (p as usize).pow(i as u32))
                .product();
            assert_eq!(count, expected, "p={p} n={n}");
        }
    }

    #[test]
    fn all_48_bases_of_z3_squared() {
        let g = ModVector::new(3, 2).unwrap();
        let mut bases = 0;
        for i in 0..9 {
            for j in 0..9 {
                let t = [g.element(i), g.element(j)];
                let det = determinant_mod_p(&t).unwrap();
                assert_eq!(is_generating_modvector(&t).unwrap(), det != 0);
                bases += usize::from(det != 0);
            }
        }
        assert_eq!(bases, 48);
    }

    #[test]
    fn element_index_round_trip() {
        let g = ModVector::new(5, 3).unwrap();
        for i in 0..g.order() {
            assert_eq!(g.index_of(&g.element(i)), i);
        }
    }

    #[test]
    fn rejects_composite_modulus() {
        assert!(ModVector::new(4, 2).is_err());
        assert!(ModVector::new(7, 2).is_ok());
    }

    #[test]
    fn group_laws() {
        let g = ModVector::new(5, 2).unwrap();
        let elems: Vec<_> = (0..25).step_by(4).map(|i| g.element(i)).collect();
        check_group_laws(&g, &elems);
    }
}
