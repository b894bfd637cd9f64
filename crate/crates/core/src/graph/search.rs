//! Seeded randomized search for graphs whose girth and chromatic number are both large.
//!
//! Each trial draws a sparse random graph G(N, c/N), deletes one vertex on every
//! cycle shorter than the target girth, and, when the girth target is at most 4,
//! applies Mycielski constructions (which preserve triangle-freeness and raise the
//! chromatic number by one) until the colour target is met. Every candidate is
//! certified by the exact girth and chromatic solvers before it is returned.

use super::{chromatic_number, girth, Graph};
use crate::bits::BitSet;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::VecDeque;
use thiserror::Error;

/// Candidates larger than this are not certified (the exact solver is exponential).
pub const MAX_CERTIFIED_VERTICES: usize = 31;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchParams {
    pub min_girth: usize,
    pub min_chi: usize,
    pub budget: usize,
    pub seed: u64,
}

impl SearchParams {
    pub const DEFAULT_BUDGET: usize = 200;

    pub fn new(min_girth: usize, min_chi: usize, seed: u64) -> Self {
        SearchParams {
            min_girth,
            min_chi,
            budget: Self::DEFAULT_BUDGET,
            seed,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchHit {
    pub graph: Graph,
    /// `None` encodes an acyclic graph (infinite girth).
    pub girth: Option<usize>,
    pub chi: usize,
    /// Zero-based trial that produced the graph.
    pub trial: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("min_girth must be at least 3 and min_chi at least 2 (got girth {0}, chi {1})")]
    InvalidParams(usize, usize),
    #[error("no certified graph found within a budget of {0} trials")]
    NotFound(usize),
}

/// A vertex on some cycle shorter than `limit`, if one exists.
///
/// For a non-tree edge uw of a BFS tree, the fundamental cycle through uw has
/// length at most dist(u) + dist(w) + 1 and contains u.
fn vertex_on_short_cycle(g: &Graph, limit: usize) -> Option<usize> {
    let n = g.len();
    let mut dist = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut queue = VecDeque::new();
    for root in 0..n {
        dist.fill(usize::MAX);
        parent.fill(usize::MAX);
        dist[root] = 0;
        queue.clear();
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            if 2 * dist[u] + 1 >= limit {
                break;
            }
            for w in g.neighbours(u).iter() {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w && dist[u] + dist[w] + 1 < limit {
                    return Some(u);
                }
            }
        }
    }
    None
}

fn random_graph(rng: &mut ChaCha8Rng) -> Graph {
    let n = rng.gen_range(6..=14usize);
    let c: f64 = rng.gen_range(1.5..4.0);
    let p = (c / n as f64).min(1.0);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(n, edges).expect("valid random edges")
}

fn remove_short_cycles(mut g: Graph, min_girth: usize) -> Graph {
    while let Some(v) = vertex_on_short_cycle(&g, min_girth) {
        let mut keep = BitSet::full(g.len());
        keep.remove(v);
        g = g.induced(&keep);
    }
    g
}

/// Search for a graph with girth ≥ `min_girth` (acyclic counts as infinite) and
/// chromatic number ≥ `min_chi`. Deterministic for fixed parameters.
pub fn search_high_girth_chromatic(params: &SearchParams) -> Result<SearchHit, SearchError> {
    if params.min_girth < 3 || params.min_chi < 2 {
        return Err(SearchError::InvalidParams(params.min_girth, params.min_chi));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    for trial in 0..params.budget {
        let mut g = remove_short_cycles(random_graph(&mut rng), params.min_girth);
        if g.is_empty() {
            continue;
        }
        let (mut chi, _) = chromatic_number(&g);
        if params.min_girth <= 4 {
            while chi < params.min_chi && 2 * g.len() < MAX_CERTIFIED_VERTICES {
                g = g.mycielskian();
                chi += 1;
            }
        }
        if chi < params.min_chi || g.len() > MAX_CERTIFIED_VERTICES {
            continue;
        }
        // certify from scratch rather than trusting the boost arithmetic
        let gi = girth(&g);
        let (chi, _) = chromatic_number(&g);
        if gi.is_none_or(|x| x >= params.min_girth) && chi >= params.min_chi {
            return Ok(SearchHit {
                graph: g,
                girth: gi,
                chi,
                trial,
            });
        }
    }
    Err(SearchError::NotFound(params.budget))
}
