//! Maps σ : n → n, the index set of the substitution operators.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct Transform {
    map: Vec<u8>,
}

impl fmt::Debug for Transform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.map)
    }
}

impl TryFrom<Vec<u8>> for Transform {
    type Error = String;

    fn try_from(map: Vec<u8>) -> Result<Self, String> {
        Transform::new(map)
    }
}

impl From<Transform> for Vec<u8> {
    fn from(t: Transform) -> Vec<u8> {
        t.map
    }
}

impl Transform {
    pub fn new(map: Vec<u8>) -> Result<Self, String> {
        let n = map.len();
        if let Some(&x) = map.iter().find(|&&x| x as usize >= n) {
            return Err(format!("image {x} out of range for dimension {n}"));
        }
        Ok(Transform { map })
    }

    pub fn identity(n: usize) -> Self {
        Transform {
            map: (0..n as u8).collect(),
        }
    }

    /// The transposition exchanging i and j.
    pub fn swap(n: usize, i: usize, j: usize) -> Self {
        let mut t = Self::identity(n);
        t.map.swap(i, j);
        t
    }

    /// The replacement sending i to j and fixing everything else.
    pub fn replace(n: usize, i: usize, j: usize) -> Self {
        let mut t = Self::identity(n);
        t.map[i] = j as u8;
        t
    }

    /// Number of maps n → n.
    pub fn count(n: usize) -> usize {
        n.pow(n as u32)
    }

    /// Position in the lexicographic listing of all maps: the base-n numeral
    /// σ(0) σ(1) … σ(n−1).
    pub fn index(&self) -> usize {
        let n = self.map.len();
        self.map.iter().fold(0, |acc, &x| acc * n + x as usize)
    }

    pub fn from_index(n: usize, mut idx: usize) -> Self {
        let mut map = vec![0u8; n];
        for slot in map.iter_mut().rev() {
            *slot = (idx % n) as u8;
            idx /= n;
        }
        Transform { map }
    }

    /// All maps n → n in index order.
    pub fn all(n: usize) -> impl Iterator<Item = Transform> {
        (0..Self::count(n)).map(move |k| Self::from_index(n, k))
    }

    pub fn n(&self) -> usize {
        self.map.len()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, x: usize) -> usize {
        self.map[x] as usize
    }

    /// (self ∘ inner)(x) = self(inner(x)).
    pub fn compose(&self, inner: &Transform) -> Transform {
        Transform {
            map: inner.map.iter().map(|&x| self.map[x as usize]).collect(),
        }
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = 0u64;
        for &x in &self.map {
            if seen >> x & 1 == 1 {
                return false;
            }
            seen |= 1 << x;
        }
        true
    }

    /// Bit mask of the image of `n \ {skip}` (all of n when `skip` is None).
    pub fn image_mask(&self, skip: Option<usize>) -> u64 {
        self.map
            .iter()
            .enumerate()
            .filter(|&(k, _)| Some(k) != skip)
            .fold(0, |m, (_, &x)| m | 1 << x)
    }

    /// The unique j ∉ σ[n \ {i}], when σ is injective on n \ {i}.
    pub fn missed_outside(&self, i: usize) -> Option<usize> {
        let n = self.n();
        let mask = self.image_mask(Some(i));
        if mask.count_ones() as usize != n - 1 {
            return None;
        }
        (0..n).find(|&j| mask >> j & 1 == 0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_round_trip() {
        for n in 1..=4 {
            let all: Vec<_> = Transform::all(n).collect();
            assert_eq!(all.len(), Transform::count(n));
            for (k, t) in all.iter().enumerate() {
                assert_eq!(t.index(), k);
            }
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn composition_order() {
        let s = Transform::new(vec![1, 2, 0]).unwrap();
        let t = Transform::new(vec![0, 0, 2]).unwrap();
        // (s∘t)(x) = s(t(x))
        assert_eq!(s.compose(&t).as_slice(), &[1, 1, 0]);
        assert_eq!(t.compose(&s).as_slice(), &[0, 2, 0]);
        assert!(s.is_injective());
        assert!(!t.is_injective());
    }

    #[test]
    fn missed_element() {
        let t = Transform::new(vec![0, 0, 2]).unwrap();
        assert_eq!(t.missed_outside(0), Some(1));
        assert_eq!(t.missed_outside(1), Some(1));
        assert_eq!(t.missed_outside(2), None);
        assert_eq!(Transform::identity(3).missed_outside(1), Some(1));
        assert!(Transform::new(vec![0, 3, 1]).is_err());
    }
}
