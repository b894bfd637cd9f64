//! Equivalence relations on {0, …, n−1} as canonical block-index vectors.

use serde::{Deserialize, Serialize};
use std::fmt;

/// A partition of `0..n`, stored as the block index of every element with
/// blocks numbered in order of first occurrence (a restricted growth string).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<u8>", into = "Vec<u8>")]
pub struct EqRel {
    blocks: Vec<u8>,
}

impl fmt::Debug for EqRel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.blocks)
    }
}

impl TryFrom<Vec<u8>> for EqRel {
    type Error = String;

    fn try_from(v: Vec<u8>) -> Result<Self, String> {
        let e = EqRel::canonical(&v);
        if e.blocks != v {
            return Err(format!("partition {v:?} is not in canonical block order"));
        }
        Ok(e)
    }
}

impl From<EqRel> for Vec<u8> {
    fn from(e: EqRel) -> Vec<u8> {
        e.blocks
    }
}

impl EqRel {
    /// Canonicalise an arbitrary labelling: positions with equal labels share a block.
    pub fn canonical<T: PartialEq>(labels: &[T]) -> Self {
        let mut seen: Vec<&T> = Vec::new();
        let blocks = labels
            .iter()
            .map(|l| match seen.iter().position(|s| *s == l) {
                Some(b) => b as u8,
                None => {
                    seen.push(l);
                    (seen.len() - 1) as u8
                }
            })
            .collect();
        EqRel { blocks }
    }

    /// The kernel of a tuple: i ~ j iff v_i = v_j.
    pub fn kernel<T: PartialEq>(tuple: &[T]) -> Self {
        Self::canonical(tuple)
    }

    pub fn identity(n: usize) -> Self {
        EqRel {
            blocks: (0..n as u8).collect(),
        }
    }

    pub fn total(n: usize) -> Self {
        EqRel { blocks: vec![0; n] }
    }

    /// All partitions of `0..n` in lexicographic order of their block vectors.
    pub fn all(n: usize) -> Vec<EqRel> {
        fn rec(cur: &mut Vec<u8>, max: u8, n: usize, out: &mut Vec<EqRel>) {
            if cur.len() == n {
                out.push(EqRel {
                    blocks: cur.clone(),
                });
                return;
            }
            let limit = if cur.is_empty() { 0 } else { max + 1 };
            for b in 0..=limit {
                cur.push(b);
                rec(cur, max.max(b), n, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        rec(&mut Vec::with_capacity(n), 0, n, &mut out);
        out
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn blocks(&self) -> &[u8] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.iter().max().map_or(0, |&m| m as usize + 1)
    }

    #[inline]
    pub fn related(&self, i: usize, j: usize) -> bool {
        self.blocks[i] == self.blocks[j]
    }

    /// The restriction to `n \ {i}`, as a canonical vector over the remaining positions.
    pub fn restrict_without(&self, i: usize) -> EqRel {
        let rest: Vec<u8> = self
            .blocks
            .iter()
            .enumerate()
            .filter(|&(k, _)| k != i)
            .map(|(_, &b)| b)
            .collect();
        Self::canonical(&rest)
    }

    /// No two distinct elements outside `i` are related.
    pub fn is_distinguishing(&self, i: usize) -> bool {
        let n = self.len();
        (0..n).all(|j| j == i || (j + 1..n).all(|k| k == i || !self.related(j, k)))
    }

    /// The relation x ~' y iff map(x) ~ map(y).
    pub fn pullback(&self, map: &[u8]) -> EqRel {
        let labels: Vec<u8> = map.iter().map(|&x| self.blocks[x as usize]).collect();
        Self::canonical(&labels)
    }

    /// The unique two-element class when there are exactly n − 1 blocks.
    pub fn pair_block(&self) -> Option<(usize, usize)> {
        if self.block_count() + 1 != self.len() {
            return None;
        }
        let n = self.len();
        (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .find(|&(i, j)| self.related(i, j))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_numbers() {
        let counts: Vec<usize> = (0..=5).map(|n| EqRel::all(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 15, 52]);
        let all = EqRel::all(4);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn distinguishing_examples() {
        let id = EqRel::identity(3);
        assert!((0..3).all(|i| id.is_distinguishing(i)));
        let e = EqRel::canonical(&[0, 0, 1]);
        assert!(!e.is_distinguishing(2));
        assert!(e.is_distinguishing(0));
        assert!(e.is_distinguishing(1));
        assert!(!EqRel::total(3).is_distinguishing(0));
    }

    #[test]
    fn restriction_and_pullback() {
        let e = EqRel::canonical(&[5, 7, 5]);
        assert_eq!(e.blocks(), &[0, 1, 0]);
        assert_eq!(e.restrict_without(1).blocks(), &[0, 0]);
        assert_eq!(e.restrict_without(0).blocks(), &[0, 1]);
        // sigma = [1, 1, 2]: 0 ~' 1 always; 0 ~' 2 iff 1 ~ 2
        assert_eq!(e.pullback(&[1, 1, 2]).blocks(), &[0, 0, 1]);
        assert_eq!(e.pullback(&[0, 1, 2]), e);
        assert_eq!(e.pair_block(), Some((0, 2)));
        assert_eq!(EqRel::identity(3).pair_block(), None);
    }

    #[test]
    fn json_rejects_non_canonical() {
        let ok: EqRel = serde_json::from_str("[0,1,0]").unwrap();
        assert_eq!(ok.blocks(), &[0, 1, 0]);
        assert!(serde_json::from_str::<EqRel>("[1,0,0]").is_err());
    }
}
