//! Finite undirected loop-free graphs.
//!
//! Vertices are `0..vertex_count`; adjacency is one [`BitSet`] row per vertex.

mod chromatic;
mod girth;
mod independent;
pub mod named;
mod search;

pub use chromatic::{chromatic_number, clique_lower_bound, is_colorable, Coloring};
pub use girth::girth;
pub use independent::{cover_number, independent_cover, maximal_independent_sets};
pub use search::{
    search_high_girth_chromatic, SearchError, SearchHit, SearchParams, MAX_CERTIFIED_VERTICES,
};

use crate::bits::BitSet;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ({0}, {1}) refers to a vertex outside 0..{2}")]
    VertexOutOfRange(usize, usize, usize),
    #[error("loop at vertex {0}: graphs are loop-free")]
    Loop(usize),
    #[error("vertex map has {got} entries, source has {expected} vertices")]
    MapLength { expected: usize, got: usize },
    #[error("vertex map sends {vertex} to {image}, target has {target_len} vertices")]
    MapImage {
        vertex: usize,
        image: usize,
        target_len: usize,
    },
    #[error("unknown builtin graph {0:?}")]
    UnknownName(String),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<BitSet>,
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "Graph({} vertices, edges {:?})",
            self.len(),
            self.edges()
        )
    }
}

impl Graph {
    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![BitSet::new(n); n],
        }
    }

    pub fn from_edges<I: IntoIterator<Item = (usize, usize)>>(
        n: usize,
        edges: I,
    ) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n);
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            g.adj[u].insert(v);
            g.adj[v].insert(u);
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for u in 0..n {
            g.adj[u] = BitSet::full(n);
            g.adj[u].remove(u);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycles need at least 3 vertices");
        Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
    }

    pub fn path(n: usize) -> Self {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(v)
    }

    #[inline]
    pub fn neighbours(&self, u: usize) -> &BitSet {
        &self.adj[u]
    }

    pub fn degree(&self, u: usize) -> usize {
        self.adj[u].count()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BitSet::count).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.len() {
            out.extend(self.adj[u].iter().filter(|&v| v > u).map(|v| (u, v)));
        }
        out
    }

    /// True when no two members of `set` are adjacent.
    pub fn is_independent(&self, set: &BitSet) -> bool {
        set.iter().all(|u| !self.adj[u].intersects(set))
    }

    /// Independence test for a small list of vertices (repeats allowed).
    pub fn is_independent_slice(&self, vs: &[usize]) -> bool {
        vs.iter()
            .enumerate()
            .all(|(a, &u)| vs[a + 1..].iter().all(|&v| !self.has_edge(u, v)))
    }

    /// The graph on `keep` (in increasing order), renumbered densely.
    pub fn induced(&self, keep: &BitSet) -> Graph {
        let verts = keep.to_vec();
        let mut pos = vec![usize::MAX; self.len()];
        for (i, &v) in verts.iter().enumerate() {
            pos[v] = i;
        }
        let mut g = Graph::empty(verts.len());
        for (i, &v) in verts.iter().enumerate() {
            for w in self.adj[v].iter() {
                if pos[w] != usize::MAX {
                    g.adj[i].insert(pos[w]);
                }
            }
        }
        g
    }

    /// `n` copies of the graph with every cross-copy edge added.
    ///
    /// Vertex `(x, i)` is numbered `i * self.len() + x`.
    pub fn inflate(&self, n: usize) -> Graph {
        assert!(n >= 1, "inflate needs n >= 1");
        let m = self.len();
        let total = m * n;
        let mut g = Graph::empty(total);
        for i in 0..n {
            for x in 0..m {
                let row = &mut g.adj[i * m + x];
                for j in 0..n {
                    if j == i {
                        for y in self.adj[x].iter() {
                            row.insert(j * m + y);
                        }
                    } else {
                        for y in 0..m {
                            row.insert(j * m + y);
                        }
                    }
                }
            }
        }
        g
    }

    /// Copy index of vertex `v` in `self.inflate(n)` where `self` has `base` vertices.
    pub fn copy_of(v: usize, base: usize) -> usize {
        v / base
    }

    /// Disjoint union: `other`'s vertices follow `self`'s, no edges between the parts.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.len();
        let edges = self
            .edges()
            .into_iter()
            .chain(other.edges().into_iter().map(|(u, v)| (u + off, v + off)));
        Graph::from_edges(off + other.len(), edges).unwrap()
    }

    /// Mycielski construction: vertices `0..m` original, `m..2m` shadows, `2m` apex.
    pub fn mycielskian(&self) -> Graph {
        let m = self.len();
        let mut edges = self.edges();
        for (u, v) in self.edges() {
            edges.push((u, m + v));
            edges.push((v, m + u));
        }
        for i in 0..m {
            edges.push((m + i, 2 * m));
        }
        Graph::from_edges(2 * m + 1, edges).unwrap()
    }

    /// Brute-force canonical form: the lexicographically least upper-triangle
    /// adjacency string over all vertex orders. Only for tiny graphs.
    /// A vertex bijection `f` with `u ~ v` iff `f(u) ~ f(v)`, found by
    /// backtracking with degree pruning.
    pub fn find_isomorphism(&self, other: &Graph) -> Option<Vec<usize>> {
        let n = self.len();
        if n != other.len() || self.edge_count() != other.edge_count() {
            return None;
        }
        let ours: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let theirs: Vec<usize> = (0..n).map(|v| other.degree(v)).collect();
        let (mut a, mut b) = (ours.clone(), theirs.clone());
        a.sort_unstable();
        b.sort_unstable();
        if a != b {
            return None;
        }
        // map high-degree vertices first: they constrain the most
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| std::cmp::Reverse(ours[v]));
        fn extend(
            g: &Graph,
            h: &Graph,
            order: &[usize],
            deg: (&[usize], &[usize]),
            map: &mut Vec<Option<usize>>,
            used: &mut Vec<bool>,
            k: usize,
        ) -> bool {
            let Some(&v) = order.get(k) else {
                return true;
            };
            for w in 0..h.len() {
                if used[w] || deg.0[v] != deg.1[w] {
                    continue;
                }
                let consistent = order[..k].iter().all(|&u| {
                    let fu = map[u].expect("earlier vertices are mapped");
                    g.has_edge(u, v) == h.has_edge(fu, w)
                });
                if consistent {
                    map[v] = Some(w);
                    used[w] = true;
                    if extend(g, h, order, deg, map, used, k + 1) {
                        return true;
                    }
                    map[v] = None;
                    used[w] = false;
                }
            }
            false
        }
        let mut map = vec![None; n];
        let mut used = vec![false; n];
        let found = extend(
            self,
            other,
            &order,
            (&ours, &theirs),
            &mut map,
            &mut used,
            0,
        );
        found.then(|| map.into_iter().map(|x| x.expect("complete map")).collect())
    }

    pub fn is_isomorphic(&self, other: &Graph) -> bool {
        self.find_isomorphism(other).is_some()
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.len(),
            edges: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<Graph, GraphError> {
        Graph::from_edges(j.vertices, j.edges.iter().map(|e| (e[0], e[1])))
    }

    pub fn to_dot(&self, name: &str) -> String {
        let mut s = format!("graph {name} {{\n");
        for v in 0..self.len() {
            if self.degree(v) == 0 {
                let _ = writeln!(s, "  {v};");
            }
        }
        for (u, v) in self.edges() {
            let _ = writeln!(s, "  {u} -- {v};");
        }
        s.push_str("}\n");
        s
    }
}

/// External JSON shape: `{"vertices": N, "edges": [[u, v], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphJson {
    pub vertices: usize,
    pub edges: Vec<[usize; 2]>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let j = GraphJson::deserialize(d)?;
        Graph::from_json(&j).map_err(serde::de::Error::custom)
    }
}

/// A total function between the vertex sets of two graphs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexMap {
    source: Graph,
    target: Graph,
    map: Vec<usize>,
}

impl VertexMap {
    pub fn new(source: Graph, target: Graph, map: Vec<usize>) -> Result<Self, GraphError> {
        if map.len() != source.len() {
            return Err(GraphError::MapLength {
                expected: source.len(),
                got: map.len(),
            });
        }
        if let Some((vertex, &image)) = map.iter().enumerate().find(|(_, &t)| t >= target.len()) {
            return Err(GraphError::MapImage {
                vertex,
                image,
                target_len: target.len(),
            });
        }
        Ok(VertexMap {
            source,
            target,
            map,
        })
    }

    pub fn identity(g: &Graph) -> Self {
        VertexMap {
            source: g.clone(),
            target: g.clone(),
            map: (0..g.len()).collect(),
        }
    }

    pub fn source(&self) -> &Graph {
        &self.source
    }

    pub fn target(&self) -> &Graph {
        &self.target
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    #[inline]
    pub fn apply(&self, v: usize) -> usize {
        self.map[v]
    }

    pub fn image_of(&self, set: &BitSet) -> BitSet {
        BitSet::from_indices(self.target.len(), set.iter().map(|v| self.map[v]))
    }

    pub fn is_surjective(&self) -> bool {
        self.image_of(&BitSet::full(self.source.len())).is_full()
    }

    /// Homomorphism plus neighbour-surjectivity: `f[N(x)] = N(f(x))` for every `x`.
    pub fn is_p_morphism(&self) -> bool {
        (0..self.source.len()).all(|x| {
            self.image_of(self.source.neighbours(x)) == *self.target.neighbours(self.map[x])
        })
    }

    /// `self ∘ inner`: first `inner`, then `self`.
    pub fn compose(&self, inner: &VertexMap) -> Result<VertexMap, GraphError> {
        if inner.target.len() != self.source.len() {
            return Err(GraphError::MapLength {
                expected: self.source.len(),
                got: inner.target.len(),
            });
        }
        VertexMap::new(
            inner.source.clone(),
            self.target.clone(),
            inner.map.iter().map(|&v| self.map[v]).collect(),
        )
    }

    /// Pull a colouring of the target back along the map.
    pub fn pull_back(&self, c: &Coloring) -> Coloring {
        Coloring::new(
            self.map.iter().map(|&v| c.colors()[v]).collect(),
            c.color_count(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inflate_single_vertex_is_triangle() {
        let g = Graph::empty(1).inflate(3);
        assert_eq!(g, Graph::complete(3));
    }

    #[test]
    fn inflate_k2_is_k6_by_enumeration() {
        let k2 = Graph::complete(2);
        let g = k2.inflate(3);
        assert_eq!(g.len(), 6);
        for a in 0..6 {
            for b in 0..6 {
                let (x, i) = (a % 2, a / 2);
                let (y, j) = (b % 2, b / 2);
                let expect = a != b && (i != j || k2.has_edge(x, y));
                assert_eq!(g.has_edge(a, b), expect);
            }
        }
        assert_eq!(g, Graph::complete(6));
    }

    #[test]
    fn inflate_layout_and_copy_swaps() {
        let g = Graph::path(3);
        let big = g.inflate(3);
        assert_eq!(big.len(), 9);
        // (x=0, i=0) and (x=1, i=0) adjacent inside the copy
        assert!(big.has_edge(0, 1));
        assert!(!big.has_edge(0, 2));
        assert!(big.has_edge(0, 3 + 2));
        // swapping copies 0 and 2 is an automorphism
        let swap = |v: usize| {
            let (x, i) = (v % 3, v / 3);
            let j = match i {
                0 => 2,
                2 => 0,
                k => k,
            };
            j * 3 + x
        };
        for (u, v) in big.edges() {
            assert!(big.has_edge(swap(u), swap(v)));
        }
    }

    #[test]
    fn union_of_points() {
        let u = Graph::empty(1).disjoint_union(&Graph::empty(1));
        assert_eq!(u.len(), 2);
        assert_eq!(u.edge_count(), 0);
    }

    #[test]
    fn loops_and_range_rejected() {
        assert_eq!(Graph::from_edges(2, [(1, 1)]), Err(GraphError::Loop(1)));
        assert!(matches!(
            Graph::from_edges(2, [(0, 2)]),
            Err(GraphError::VertexOutOfRange(..))
        ));
    }

    #[test]
    fn json_roundtrip_is_sorted() {
        let g = Graph::from_edges(4, [(3, 1), (0, 2), (1, 0)]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"vertices":4,"edges":[[0,1],[0,2],[1,3]]}"#);
        let back: Graph = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(serde_json::from_str::<Graph>(r#"{"vertices":2,"edges":[[0,0]]}"#).is_err());
    }

    #[test]
    fn mycielskian_of_k2_is_c5() {
        let m = Graph::complete(2).mycielskian();
        assert_eq!(m.len(), 5);
        assert!(m.is_isomorphic(&Graph::cycle(5)));
        assert!(!m.is_isomorphic(&Graph::path(5)));
    }

    #[test]
    fn p_morphism_examples() {
        let c6 = Graph::cycle(6);
        let c3 = Graph::cycle(3);
        let wrap = VertexMap::new(c6.clone(), c3.clone(), (0..6).map(|i| i % 3).collect()).unwrap();
        assert!(wrap.is_p_morphism());
        assert!(wrap.is_surjective());
        // both directions of the neighbour condition, by hand
        for x in 0..6 {
            let img: Vec<usize> = c6.neighbours(x).iter().map(|y| y % 3).collect();
            for y in img.iter() {
                assert!(c3.has_edge(x % 3, *y));
            }
            for z in c3.neighbours(x % 3).iter() {
                assert!(img.contains(&z));
            }
        }
        assert!(VertexMap::identity(&c6).is_p_morphism());
        let k2 = Graph::complete(2);
        let constant = VertexMap::new(k2.clone(), k2, vec![0, 0]).unwrap();
        assert!(!constant.is_p_morphism());
    }

    #[test]
    fn vertex_map_validation() {
        let g = Graph::empty(2);
        assert!(matches!(
            VertexMap::new(g.clone(), g.clone(), vec![0]),
            Err(GraphError::MapLength { .. })
        ));
        assert!(matches!(
            VertexMap::new(g.clone(), g, vec![0, 2]),
            Err(GraphError::MapImage { .. })
        ));
    }

    #[test]
    fn dot_export() {
        let d = Graph::path(2).disjoint_union(&Graph::empty(1)).to_dot("g");
        assert_eq!(d, "graph g {\n  2;\n  0 -- 1;\n}\n");
    }
}
