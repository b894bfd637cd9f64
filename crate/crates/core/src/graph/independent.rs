//! Maximal independent sets and covers by independent sets.
//!
//! These give a second, colouring-free route to the chromatic number: a graph
//! is k-colourable exactly when its vertices are covered by k independent sets.

use super::Graph;
use crate::bits::BitSet;

/// All maximal independent sets (Bron–Kerbosch with pivoting on the complement graph).
pub fn maximal_independent_sets(g: &Graph) -> Vec<BitSet> {
    let n = g.len();
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    // in the complement, the neighbours of v are the non-adjacent vertices other than v
    let non_adj: Vec<BitSet> = (0..n)
        .map(|v| {
            let mut s = g.neighbours(v).complement();
            s.remove(v);
            s
        })
        .collect();
    extend(
        &non_adj,
        BitSet::new(n),
        BitSet::full(n),
        BitSet::new(n),
        &mut out,
    );
    out.sort();
    out
}

fn extend(non_adj: &[BitSet], chosen: BitSet, cand: BitSet, excl: BitSet, out: &mut Vec<BitSet>) {
    if cand.is_empty() {
        if excl.is_empty() {
            out.push(chosen);
        }
        return;
    }
    let pivot = cand
        .union(&excl)
        .iter()
        .max_by_key(|&u| non_adj[u].intersection(&cand).count())
        .expect("candidate set is non-empty");
    let mut cand = cand;
    let mut excl = excl;
    for v in cand.difference(&non_adj[pivot]).iter() {
        let mut next = chosen.clone();
        next.insert(v);
        extend(
            non_adj,
            next,
            cand.intersection(&non_adj[v]),
            excl.intersection(&non_adj[v]),
            out,
        );
        cand.remove(v);
        excl.insert(v);
    }
}

/// A cover of all vertices by at most `k` independent sets, if one exists.
///
/// Branches on the least uncovered vertex over the maximal independent sets
/// containing it; every cover can be enlarged to one of this shape.
pub fn independent_cover(g: &Graph, k: usize) -> Option<Vec<BitSet>> {
    let sets = maximal_independent_sets(g);
    let mut chosen = Vec::new();
    cover(&sets, &BitSet::full(g.len()), k, &mut chosen).then_some(chosen)
}

fn cover(sets: &[BitSet], uncovered: &BitSet, k: usize, chosen: &mut Vec<BitSet>) -> bool {
    let Some(v) = uncovered.first() else {
        return true;
    };
    if k == 0 {
        return false;
    }
    for s in sets.iter().filter(|s| s.contains(v)) {
        chosen.push(s.clone());
        if cover(sets, &uncovered.difference(s), k - 1, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

/// The least number of independent sets covering the vertices.
pub fn cover_number(g: &Graph) -> usize {
    (0..=g.len())
        .find(|&k| independent_cover(g, k).is_some())
        .expect("singletons always cover")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{chromatic_number, named};

    #[test]
    fn cycle_and_complete() {
        assert_eq!(maximal_independent_sets(&Graph::complete(4)).len(), 4);
        // C5: the five pairs of non-adjacent vertices
        assert_eq!(maximal_independent_sets(&Graph::cycle(5)).len(), 5);
        assert_eq!(maximal_independent_sets(&Graph::empty(3)).len(), 1);
        assert!(maximal_independent_sets(&Graph::empty(0)).is_empty());
    }

    #[test]
    fn sets_are_maximal_and_independent() {
        let g = named::petersen();
        for s in maximal_independent_sets(&g) {
            assert!(g.is_independent(&s));
            for v in s.complement().iter() {
                let mut t = s.clone();
                t.insert(v);
                assert!(!g.is_independent(&t));
            }
        }
    }

    #[test]
    fn cover_number_is_chromatic_number() {
        for g in [
            named::petersen(),
            named::grotzsch(),
            Graph::cycle(7),
            Graph::complete(5),
            Graph::path(4).inflate(3),
            Graph::empty(0),
        ] {
            assert_eq!(cover_number(&g), chromatic_number(&g).0);
            if let Some(c) = independent_cover(&g, cover_number(&g)) {
                assert!(c.iter().all(|s| g.is_independent(s)));
            }
        }
    }
}
