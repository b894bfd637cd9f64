//! Independent oracles shared by the integration tests: naive atom
//! enumeration and plain backtracking colouring.
#![allow(dead_code)]

use gralg::atoms::AtomStructure;
use gralg::graph::Graph;
use std::collections::BTreeSet;

/// Relation matrix of a partition plus the partial map.
pub type NaiveAtom = (Vec<Vec<bool>>, Vec<Option<usize>>);

/// Every equivalence relation on 0..n, as relation matrices.
pub fn partitions(n: usize) -> BTreeSet<Vec<Vec<bool>>> {
    let mut out = BTreeSet::new();
    let total = n.pow(n as u32);
    for code in 0..total {
        let labels: Vec<usize> = (0..n).map(|k| code / n.pow(k as u32) % n).collect();
        out.insert(
            (0..n)
                .map(|i| (0..n).map(|j| labels[i] == labels[j]).collect())
                .collect(),
        );
    }
    out
}

pub fn naive_atoms(g: &Graph, n: usize) -> BTreeSet<NaiveAtom> {
    let base = g.len();
    let vertices = base * n;
    // (x, i) ~ (y, j) iff different copies or an edge of Γ
    let adjacent = |u: usize, v: usize| {
        let (x, i) = (u % base, u / base);
        let (y, j) = (v % base, v / base);
        i != j || g.has_edge(x, y)
    };
    let mut out = BTreeSet::new();
    for rel in partitions(n) {
        let classes: BTreeSet<Vec<bool>> = rel.iter().cloned().collect();
        let blocks = classes.len();
        let options = vertices + 1;
        for code in 0..options.pow(n as u32) {
            let k: Vec<Option<usize>> = (0..n)
                .map(|c| match code / options.pow(c as u32) % options {
                    0 => None,
                    v => Some(v - 1),
                })
                .collect();
            let ok = if blocks == n {
                k.iter().all(Option::is_some) && {
                    let pts: Vec<usize> = k.iter().map(|p| p.unwrap()).collect();
                    pts.iter()
                        .any(|&u| pts.iter().any(|&v| u != v && adjacent(u, v)))
                }
            } else if blocks == n - 1 {
                let (i, j) = (0..n)
                    .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
                    .find(|&(i, j)| rel[i][j])
                    .unwrap();
                (0..n).all(|c| k[c].is_some() == (c == i || c == j)) && k[i] == k[j]
            } else {
                k.iter().all(Option::is_none)
            };
            if ok {
                out.insert((rel.clone(), k));
            }
        }
    }
    out
}

pub fn enumerated(g: &Graph, n: usize) -> BTreeSet<NaiveAtom> {
    let s = AtomStructure::enumerate(g, n, 1_000_000).unwrap();
    s.atoms()
        .iter()
        .map(|a| {
            let rel = (0..n)
                .map(|i| (0..n).map(|j| a.partition.related(i, j)).collect())
                .collect();
            (
                rel,
                a.points.iter().map(|p| p.map(|v| v as usize)).collect(),
            )
        })
        .collect()
}

/// Plain backtracking: colour vertices in order with colours 0..k.
pub fn naive_colorable(g: &Graph, k: usize) -> bool {
    fn go(g: &Graph, k: usize, v: usize, colors: &mut Vec<usize>) -> bool {
        if v == g.len() {
            return true;
        }
        for c in 0..k {
            if (0..v).all(|u| !g.has_edge(u, v) || colors[u] != c) {
                colors.push(c);
                if go(g, k, v + 1, colors) {
                    return true;
                }
                colors.pop();
            }
        }
        false
    }
    go(g, k, 0, &mut Vec::new())
}

pub fn naive_chromatic(g: &Graph) -> usize {
    (0..=g.len()).find(|&k| naive_colorable(g, k)).unwrap()
}

pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
        .collect();
    let edges = pairs
        .iter()
        .enumerate()
        .filter(|(k, _)| code >> k & 1 == 1)
        .map(|(_, &e)| e);
    Graph::from_edges(n, edges).unwrap()
}
