//! Subalgebras generated by finitely many elements, computed by partition
//! refinement: the generated subuniverse is the set of unions of the cells of
//! the coarsest partition that separates the generators and constants and is
//! closed under every operator applied to a cell.

use super::{Bao, FiniteBao, Signature};
use crate::atoms::Transform;
use crate::bits::BitSet;
use std::collections::HashMap;
use thiserror::Error;

/// Subalgebra elements are bit masks over cells.
pub const MAX_SUBALGEBRA_BLOCKS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubalgebraError {
    #[error("generated subalgebra has more than {limit} atoms")]
    TooLarge { limit: usize },
}

#[derive(Clone, Debug)]
pub struct Subalgebra<'a> {
    parent: &'a FiniteBao,
    blocks: Vec<BitSet>,
    cyl: Vec<Vec<u64>>,
    diag: Vec<u64>,
    subst: Vec<Vec<u64>>,
    full: u64,
}

/// Split every cell by membership in `x`. Returns the new cell count.
fn refine(labels: &mut [u32], x: &BitSet) -> usize {
    let mut map: HashMap<(u32, bool), u32> = HashMap::new();
    for (p, l) in labels.iter_mut().enumerate() {
        let next = map.len() as u32;
        *l = *map.entry((*l, x.contains(p))).or_insert(next);
    }
    map.len()
}

fn cells(labels: &[u32], count: usize) -> Vec<BitSet> {
    let mut out = vec![BitSet::new(labels.len()); count];
    for (p, &l) in labels.iter().enumerate() {
        out[l as usize].insert(p);
    }
    out
}

impl<'a> Subalgebra<'a> {
    /// The least subalgebra of `parent` (in its signature) containing `gens`.
    pub fn generate(
        parent: &'a FiniteBao,
        gens: &[BitSet],
        limit: usize,
    ) -> Result<Self, SubalgebraError> {
        let limit = limit.min(MAX_SUBALGEBRA_BLOCKS);
        let size = parent.size();
        let n = parent.dim();
        let sig = parent.signature();
        let mut labels = vec![0u32; size];
        let mut count = usize::from(size > 0);
        let too_large = |c: usize| {
            if c > limit {
                Err(SubalgebraError::TooLarge { limit })
            } else {
                Ok(())
            }
        };
        let mut seeds: Vec<BitSet> = gens.to_vec();
        if sig.has_diagonals() {
            for i in 0..n {
                for j in 0..n {
                    seeds.push(parent.diag(i, j));
                }
            }
        }
        for g in &seeds {
            count = refine(&mut labels, g);
            too_large(count)?;
        }
        let maps: Vec<Transform> = if sig.has_substitutions() {
            Transform::all(n).collect()
        } else {
            Vec::new()
        };
        loop {
            let before = count;
            for cell in cells(&labels, count) {
                for i in 0..n {
                    count = refine(&mut labels, &parent.cyl(i, &cell));
                    too_large(count)?;
                }
                for s in &maps {
                    count = refine(&mut labels, &parent.subst(s, &cell));
                    too_large(count)?;
                }
            }
            if count == before {
                break;
            }
        }
        // number cells by their least point
        let mut order: Vec<(usize, u32)> = Vec::new();
        let mut seen = vec![false; count];
        for (p, &l) in labels.iter().enumerate() {
            if !seen[l as usize] {
                seen[l as usize] = true;
                order.push((p, l));
            }
        }
        let mut renumber = vec![0u32; count];
        for (k, &(_, l)) in order.iter().enumerate() {
            renumber[l as usize] = k as u32;
        }
        for l in labels.iter_mut() {
            *l = renumber[*l as usize];
        }
        let blocks = cells(&labels, count);
        let mask_of = |x: &BitSet| -> u64 {
            let m = x.iter().fold(0u64, |m, p| m | 1 << labels[p]);
            debug_assert!(blocks_union(&blocks, m) == *x, "closure failed");
            m
        };
        let cyl = (0..n)
            .map(|i| blocks.iter().map(|b| mask_of(&parent.cyl(i, b))).collect())
            .collect();
        let diag = if sig.has_diagonals() {
            (0..n * n)
                .map(|k| mask_of(&parent.diag(k / n, k % n)))
                .collect()
        } else {
            Vec::new()
        };
        let subst = maps
            .iter()
            .map(|s| {
                blocks
                    .iter()
                    .map(|b| mask_of(&parent.subst(s, b)))
                    .collect()
            })
            .collect();
        let full = if count == 64 { !0 } else { (1u64 << count) - 1 };
        Ok(Subalgebra {
            parent,
            blocks,
            cyl,
            diag,
            subst,
            full,
        })
    }

    pub fn parent(&self) -> &FiniteBao {
        self.parent
    }

    /// Number of atoms of the subalgebra.
    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn blocks(&self) -> &[BitSet] {
        &self.blocks
    }

    /// The parent element denoted by a mask.
    pub fn embed(&self, mask: u64) -> BitSet {
        blocks_union(&self.blocks, mask)
    }

    /// The mask of a parent element, if it lies in the subalgebra.
    pub fn project(&self, x: &BitSet) -> Option<u64> {
        let mut m = 0u64;
        for (k, b) in self.blocks.iter().enumerate() {
            if b.is_subset(x) {
                m |= 1 << k;
            } else if b.intersects(x) {
                return None;
            }
        }
        Some(m)
    }
}

fn blocks_union(blocks: &[BitSet], mask: u64) -> BitSet {
    let mut out = BitSet::new(blocks.first().map_or(0, BitSet::len));
    for (k, b) in blocks.iter().enumerate() {
        if mask >> k & 1 == 1 {
            out.union_with(b);
        }
    }
    out
}

#[inline]
fn union_over(table: &[u64], mask: u64) -> u64 {
    let mut m = mask;
    let mut out = 0;
    while m != 0 {
        let k = m.trailing_zeros();
        out |= table[k as usize];
        m &= m - 1;
    }
    out
}

impl Bao for Subalgebra<'_> {
    type Elem = u64;

    fn dim(&self) -> usize {
        self.parent.dim()
    }

    fn signature(&self) -> Signature {
        self.parent.signature()
    }

    fn zero(&self) -> u64 {
        0
    }

    fn one(&self) -> u64 {
        self.full
    }

    fn join(&self, a: &u64, b: &u64) -> u64 {
        a | b
    }

    fn meet(&self, a: &u64, b: &u64) -> u64 {
        a & b
    }

    fn complement(&self, a: &u64) -> u64 {
        !a & self.full
    }

    fn leq(&self, a: &u64, b: &u64) -> bool {
        a & !b == 0
    }

    fn cyl(&self, i: usize, a: &u64) -> u64 {
        union_over(&self.cyl[i], *a)
    }

    fn diag(&self, i: usize, j: usize) -> u64 {
        self.diag[i * self.dim() + j]
    }

    fn subst(&self, sigma: &Transform, a: &u64) -> u64 {
        union_over(&self.subst[sigma.index()], *a)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atoms::AtomStructure;
    use crate::graph::Graph;

    fn k1() -> FiniteBao {
        let s = AtomStructure::enumerate(&Graph::complete(1), 3, 5000).unwrap();
        FiniteBao::complex_algebra(&s, Signature::Pea)
    }

    #[test]
    fn constants_generate_the_partition_regions() {
        let a = k1();
        let sub = Subalgebra::generate(&a, &[], 64).unwrap();
        // one cell per partition of 3: the d_∼ elements
        assert_eq!(sub.block_count(), 5);
        for e in crate::atoms::EqRel::all(3) {
            assert!(sub.project(&a.d_partition(&e)).is_some());
        }
    }

    #[test]
    fn operations_agree_with_parent() {
        let a = k1();
        let sub = Subalgebra::generate(&a, &[a.atom(7)], 64).unwrap();
        assert!(sub.project(&a.atom(7)).is_some());
        let all = sub.one();
        let mut m = 0u64;
        for step in 0..40u64 {
            m = (m
                .wrapping_mul(6364136223846793005)
                .wrapping_add(step * 2 + 1))
                & all;
            let x = sub.embed(m);
            for i in 0..3 {
                assert_eq!(sub.embed(sub.cyl(i, &m)), a.cyl(i, &x));
            }
            for s in Transform::all(3) {
                assert_eq!(sub.embed(sub.subst(&s, &m)), a.subst(&s, &x));
            }
            assert_eq!(sub.embed(sub.complement(&m)), x.complement());
        }
    }

    #[test]
    fn limit_is_enforced() {
        let a = k1();
        assert_eq!(
            Subalgebra::generate(&a, &[], 3).unwrap_err(),
            SubalgebraError::TooLarge { limit: 3 }
        );
    }
}
