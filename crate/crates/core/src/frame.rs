//! Abstract finite polyadic-equality frames.
//!
//! A frame is a finite set of points `0..size` with unary diagonal sets
//! `D_ij`, binary cylindric relations `R_i` and a unary substitution map for
//! every `σ : n → n`. Atom structures of graphs and ultrafilter structures of
//! finite algebras are both frames; complex algebras are computed from frames.

use crate::atoms::{Atom, Transform};
use crate::bits::BitSet;
use std::collections::{HashMap, HashSet};
use std::sync::Arc;

#[derive(Clone, PartialEq, Eq)]
pub struct Frame {
    n: usize,
    size: usize,
    /// `diag[i * n + j]` is the set of points in D_ij.
    diag: Vec<BitSet>,
    /// `cyl_list_of[i][p]` names the neighbour list of p under R_i.
    cyl_list_of: Vec<Vec<u32>>,
    /// `cyl_lists[i][id]` is a sorted neighbour list; equivalence classes share one list.
    cyl_lists: Vec<Vec<Arc<[u32]>>>,
    /// `subst[σ.index()][p]` is the image of p under the σ-action.
    subst: Vec<Vec<u32>>,
}

impl std::fmt::Debug for Frame {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Frame")
            .field("n", &self.n)
            .field("size", &self.size)
            .finish_non_exhaustive()
    }
}

impl Frame {
    /// Build from raw tables. `cyl[i][p]` lists the R_i-neighbours of p.
    pub fn from_tables(
        n: usize,
        size: usize,
        diag: Vec<BitSet>,
        cyl: Vec<Vec<Vec<u32>>>,
        subst: Vec<Vec<u32>>,
    ) -> Self {
        assert_eq!(diag.len(), n * n);
        assert_eq!(cyl.len(), n);
        assert_eq!(subst.len(), Transform::count(n));
        let mut cyl_list_of = Vec::with_capacity(n);
        let mut cyl_lists = Vec::with_capacity(n);
        for rows in cyl {
            assert_eq!(rows.len(), size);
            let mut ids: HashMap<Vec<u32>, u32> = HashMap::new();
            let mut lists: Vec<Arc<[u32]>> = Vec::new();
            let mut of = Vec::with_capacity(size);
            for mut row in rows {
                row.sort_unstable();
                row.dedup();
                let id = *ids.entry(row.clone()).or_insert_with(|| {
                    lists.push(row.into());
                    (lists.len() - 1) as u32
                });
                of.push(id);
            }
            cyl_list_of.push(of);
            cyl_lists.push(lists);
        }
        Frame {
            n,
            size,
            diag,
            cyl_list_of,
            cyl_lists,
            subst,
        }
    }

    /// The frame of a sorted, indexed atom list.
    pub fn from_atoms(n: usize, atoms: &[Atom], index: &HashMap<Atom, u32>) -> Self {
        let size = atoms.len();
        let mut diag = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                diag.push(BitSet::from_indices(
                    size,
                    (0..size).filter(|&p| atoms[p].in_diagonal(i, j)),
                ));
            }
        }
        let mut cyl_list_of = Vec::with_capacity(n);
        let mut cyl_lists = Vec::with_capacity(n);
        for i in 0..n {
            let mut classes: HashMap<_, Vec<u32>> = HashMap::new();
            for (p, a) in atoms.iter().enumerate() {
                classes.entry(a.cyl_key(i)).or_default().push(p as u32);
            }
            // number classes by their least member so ids are reproducible
            let mut members: Vec<Vec<u32>> = classes.into_values().collect();
            members.sort_unstable_by_key(|m| m[0]);
            let mut of = vec![0u32; size];
            for (id, m) in members.iter().enumerate() {
                for &p in m {
                    of[p as usize] = id as u32;
                }
            }
            cyl_list_of.push(of);
            cyl_lists.push(members.into_iter().map(Arc::from).collect());
        }
        let subst = Transform::all(n)
            .map(|sigma| {
                atoms
                    .iter()
                    .map(|a| {
                        *index
                            .get(&a.substitute(&sigma))
                            .expect("the substitution action stays inside the atom set")
                    })
                    .collect()
            })
            .collect();
        Frame {
            n,
            size,
            diag,
            cyl_list_of,
            cyl_lists,
            subst,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn diag(&self, i: usize, j: usize) -> &BitSet {
        &self.diag[i * self.n + j]
    }

    pub fn cyl_neighbours(&self, i: usize, p: usize) -> &[u32] {
        &self.cyl_lists[i][self.cyl_list_of[i][p] as usize]
    }

    pub fn cyl_list_id(&self, i: usize, p: usize) -> usize {
        self.cyl_list_of[i][p] as usize
    }

    pub fn cyl_list(&self, i: usize, id: usize) -> &[u32] {
        &self.cyl_lists[i][id]
    }

    pub fn cyl_list_count(&self, i: usize) -> usize {
        self.cyl_lists[i].len()
    }

    pub fn cyl_related(&self, i: usize, p: usize, q: usize) -> bool {
        self.cyl_neighbours(i, p).binary_search(&(q as u32)).is_ok()
    }

    #[inline]
    pub fn subst_point(&self, sigma: usize, p: usize) -> usize {
        self.subst[sigma][p] as usize
    }

    pub fn subst_table(&self, sigma: usize) -> &[u32] {
        &self.subst[sigma]
    }

    /// Replace the R_i-neighbours of one point (fault injection and tests).
    pub fn set_cyl_neighbours(&mut self, i: usize, p: usize, mut row: Vec<u32>) {
        row.sort_unstable();
        row.dedup();
        self.cyl_lists[i].push(row.into());
        self.cyl_list_of[i][p] = (self.cyl_lists[i].len() - 1) as u32;
    }

    /// Redirect the σ-image of one point (fault injection and tests).
    pub fn set_subst_point(&mut self, sigma: usize, p: usize, q: usize) {
        self.subst[sigma][p] = q as u32;
    }

    /// Check that `witness` (a map from the points of `self` to those of
    /// `other`) is an isomorphism of frames. Returns the first discrepancy.
    pub fn check_isomorphism(&self, other: &Frame, witness: &[usize]) -> Result<(), String> {
        if self.n != other.n {
            return Err(format!("dimensions differ: {} vs {}", self.n, other.n));
        }
        if self.size != other.size || witness.len() != self.size {
            return Err(format!(
                "sizes differ: {} points, {} targets, witness of length {}",
                self.size,
                other.size,
                witness.len()
            ));
        }
        let mut hit = vec![false; other.size];
        for (p, &q) in witness.iter().enumerate() {
            if q >= other.size || hit[q] {
                return Err(format!("witness is not a bijection at point {p}"));
            }
            hit[q] = true;
        }
        let n = self.n;
        for i in 0..n {
            for j in 0..n {
                for (p, &q) in witness.iter().enumerate() {
                    if self.diag(i, j).contains(p) != other.diag(i, j).contains(q) {
                        return Err(format!("diagonal D_{i}{j} differs at point {p}"));
                    }
                }
            }
        }
        for i in 0..n {
            let mut checked = HashSet::new();
            for (p, &q) in witness.iter().enumerate() {
                if !checked.insert((self.cyl_list_id(i, p), other.cyl_list_id(i, q))) {
                    continue;
                }
                let mut mapped: Vec<u32> = self
                    .cyl_neighbours(i, p)
                    .iter()
                    .map(|&x| witness[x as usize] as u32)
                    .collect();
                mapped.sort_unstable();
                if mapped != other.cyl_neighbours(i, q) {
                    return Err(format!("relation R_{i} differs at point {p}"));
                }
            }
        }
        for sigma in 0..self.subst.len() {
            for (p, &q) in witness.iter().enumerate() {
                if witness[self.subst_point(sigma, p)] != other.subst_point(sigma, q) {
                    return Err(format!(
                        "substitution {:?} differs at point {p}",
                        Transform::from_index(n, sigma)
                    ));
                }
            }
        }
        Ok(())
    }
}
