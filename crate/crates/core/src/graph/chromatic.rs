//! Exact vertex colouring: DSATUR branch and bound with a clique lower bound.

use super::Graph;
use crate::bits::BitSet;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Coloring {
    colors: Vec<usize>,
    color_count: usize,
}

impl Coloring {
    pub fn new(colors: Vec<usize>, color_count: usize) -> Self {
        Coloring {
            colors,
            color_count,
        }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color_count(&self) -> usize {
        self.color_count
    }

    /// No monochromatic edge and every colour below `color_count`.
    pub fn is_proper(&self, g: &Graph) -> bool {
        self.colors.len() == g.len()
            && self.colors.iter().all(|&c| c < self.color_count)
            && g.edges()
                .iter()
                .all(|&(u, v)| self.colors[u] != self.colors[v])
    }

    /// Number of distinct colours actually used.
    pub fn used(&self) -> usize {
        let mut seen = vec![false; self.color_count];
        for &c in &self.colors {
            seen[c] = true;
        }
        seen.iter().filter(|&&b| b).count()
    }

    /// The colour classes, each an independent set when the colouring is proper.
    pub fn classes(&self) -> Vec<BitSet> {
        let n = self.colors.len();
        let mut out = vec![BitSet::new(n); self.color_count];
        for (v, &c) in self.colors.iter().enumerate() {
            out[c].insert(v);
        }
        out
    }
}

/// Size of a clique found greedily from every start vertex.
pub fn clique_lower_bound(g: &Graph) -> usize {
    let n = g.len();
    let mut best = usize::from(n > 0);
    for start in 0..n {
        let mut cand = g.neighbours(start).clone();
        let mut size = 1;
        while let Some(v) = cand.iter().max_by_key(|&v| {
            (
                g.neighbours(v).intersection(&cand).count(),
                std::cmp::Reverse(v),
            )
        }) {
            size += 1;
            cand.intersect_with(g.neighbours(v));
        }
        best = best.max(size);
    }
    best
}

struct Dsatur<'a> {
    g: &'a Graph,
    color: Vec<usize>,
    // nbr_count[v][c]: coloured neighbours of v with colour c
    nbr_count: Vec<Vec<u32>>,
    sat: Vec<usize>,
    uncolored_deg: Vec<usize>,
    best: usize,
    best_coloring: Option<Vec<usize>>,
    lower: usize,
}

const NONE: usize = usize::MAX;

impl<'a> Dsatur<'a> {
    fn new(g: &'a Graph, best: usize, lower: usize) -> Self {
        let n = g.len();
        Dsatur {
            g,
            color: vec![NONE; n],
            nbr_count: vec![vec![0; n + 1]; n],
            sat: vec![0; n],
            uncolored_deg: (0..n).map(|v| g.degree(v)).collect(),
            best,
            best_coloring: None,
            lower,
        }
    }

    fn select(&self) -> usize {
        let mut pick = NONE;
        for v in 0..self.g.len() {
            if self.color[v] != NONE {
                continue;
            }
            if pick == NONE
                || (self.sat[v], self.uncolored_deg[v]) > (self.sat[pick], self.uncolored_deg[pick])
            {
                pick = v;
            }
        }
        pick
    }

    fn assign(&mut self, v: usize, c: usize) {
        self.color[v] = c;
        for u in self.g.neighbours(v).iter() {
            self.uncolored_deg[u] -= 1;
            if self.nbr_count[u][c] == 0 {
                self.sat[u] += 1;
            }
            self.nbr_count[u][c] += 1;
        }
    }

    fn unassign(&mut self, v: usize) {
        let c = self.color[v];
        self.color[v] = NONE;
        for u in self.g.neighbours(v).iter() {
            self.uncolored_deg[u] += 1;
            self.nbr_count[u][c] -= 1;
            if self.nbr_count[u][c] == 0 {
                self.sat[u] -= 1;
            }
        }
    }

    fn search(&mut self, colored: usize, used: usize) {
        if colored == self.g.len() {
            if used < self.best {
                self.best = used;
                self.best_coloring = Some(self.color.clone());
            }
            return;
        }
        let v = self.select();
        // v already sees sat[v] distinct colours, so it needs colour number sat[v] + 1
        if self.sat[v] + 1 >= self.best {
            return;
        }
        let limit = (used + 1).min(self.best - 1);
        for c in 0..limit {
            if self.nbr_count[v][c] != 0 {
                continue;
            }
            self.assign(v, c);
            self.search(colored + 1, used.max(c + 1));
            self.unassign(v);
            if self.best <= self.lower {
                return;
            }
        }
    }
}

/// Exact chromatic number with a witness colouring using exactly that many colours.
///
/// The 0-vertex graph has chromatic number 0.
pub fn chromatic_number(g: &Graph) -> (usize, Coloring) {
    let n = g.len();
    if n == 0 {
        return (0, Coloring::new(Vec::new(), 0));
    }
    let lower = clique_lower_bound(g);
    let mut s = Dsatur::new(g, n + 1, lower);
    s.search(0, 0);
    let colors = s.best_coloring.expect("n colours always suffice");
    (s.best, Coloring::new(colors, s.best))
}

/// A colouring with at most `k` colours, if one exists.
pub fn is_colorable(g: &Graph, k: usize) -> Option<Coloring> {
    let n = g.len();
    if n == 0 {
        return Some(Coloring::new(Vec::new(), k));
    }
    if k == 0 {
        return None;
    }
    let lower = clique_lower_bound(g);
    if lower > k {
        return None;
    }
    let mut s = Dsatur::new(g, k + 1, lower);
    s.search(0, 0);
    s.best_coloring.map(|c| Coloring::new(c, k))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::named;

    /// Brute-force oracle: smallest k such that some map V -> k is proper.
    fn brute_chi(g: &Graph) -> usize {
        let n = g.len();
        if n == 0 {
            return 0;
        }
        for k in 1..=n {
            let mut c = vec![0usize; n];
            loop {
                if g.edges().iter().all(|&(u, v)| c[u] != c[v]) {
                    return k;
                }
                let mut i = 0;
                while i < n && c[i] == k - 1 {
                    c[i] = 0;
                    i += 1;
                }
                if i == n {
                    break;
                }
                c[i] += 1;
            }
        }
        unreachable!()
    }

    fn check(g: &Graph) -> usize {
        let (k, col) = chromatic_number(g);
        assert!(col.is_proper(g), "{g:?}");
        assert_eq!(col.used(), k);
        assert_eq!(col.color_count(), k);
        k
    }

    #[test]
    fn small_named_graphs() {
        assert_eq!(check(&Graph::complete(4)), 4);
        assert_eq!(check(&Graph::cycle(5)), 3);
        assert_eq!(check(&Graph::cycle(6)), 2);
        assert_eq!(check(&Graph::empty(3)), 1);
        assert_eq!(check(&Graph::empty(0)), 0);
    }

    #[test]
    fn petersen_is_three_chromatic() {
        let p = named::petersen();
        assert_eq!(check(&p), 3);
        // exhaustive refutation of 2-colourability by the brute enumerator
        assert_eq!(brute_chi(&p), 3);
        assert!(is_colorable(&p, 2).is_none());
        assert!(is_colorable(&p, 3).unwrap().is_proper(&p));
    }

    #[test]
    fn agrees_with_brute_force_on_all_graphs_up_to_five_vertices() {
        for n in 0..=5usize {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                .collect();
            for mask in 0u32..(1 << pairs.len()) {
                let g = Graph::from_edges(
                    n,
                    pairs
                        .iter()
                        .enumerate()
                        .filter(|(i, _)| mask >> i & 1 == 1)
                        .map(|(_, &e)| e),
                )
                .unwrap();
                assert_eq!(check(&g), brute_chi(&g), "{g:?}");
            }
        }
    }

    #[test]
    fn grotzsch_needs_four() {
        let g = named::grotzsch();
        assert_eq!(check(&g), 4);
    }
}
