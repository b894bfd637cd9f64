//! Ultrafilter networks, patch systems and the representation game.
//!
//! All algebras here are finite, so every ultrafilter is principal: the
//! ultrafilters of the algebra sort are its atoms and those of the boolean
//! sort are vertices of the inflated graph. A network labels every n-tuple of
//! its nodes with an atom.

mod game;
mod oracle;
mod patch;

pub use game::{
    exists_survives, forall_moves, GameOptions, GameReport, GameStrategy, GameVerdict, Move,
    MoveKind, TraceStep, DEFAULT_STEP_BUDGET,
};
pub use oracle::naive_survives;
pub use patch::{
    boundary, coherent_by_atoms, first_incoherent, is_coherent, network_from_patch,
    ultrafilter_for_tuple, PatchSystem, SymmetryChoice,
};

use crate::ags::AgsModel;
use crate::atoms::{EqRel, Transform};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

/// Which network conditions apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Diagonal and cylindric conditions.
    Cylindric,
    /// Additionally N(v∘σ) = N(v)^σ for every σ : n → n.
    Polyadic,
}

/// The first violated network condition.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "condition", rename_all = "lowercase")]
pub enum Violation {
    /// The label is not an atom of the algebra.
    Label { tuple: Vec<usize>, label: u32 },
    /// d_ij ∈ N(v) disagrees with v_i = v_j.
    Diagonal {
        tuple: Vec<usize>,
        i: usize,
        j: usize,
    },
    /// v ≡_i w but N(v) and N(w) are not ≡_i-related.
    Cylindric {
        tuple: Vec<usize>,
        other: Vec<usize>,
        i: usize,
    },
    /// N(v∘σ) ≠ N(v)^σ.
    Polyadic { tuple: Vec<usize>, sigma: Vec<u8> },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum NetworkError {
    #[error("network over {nodes} nodes needs {expected} labels, got {got}")]
    LabelCount {
        nodes: usize,
        expected: usize,
        got: usize,
    },
    #[error("network dimension {got} does not match the model dimension {expected}")]
    Dimension { expected: usize, got: usize },
    #[error("invalid network: {}", serde_json::to_string(.0).unwrap_or_default())]
    Invalid(Violation),
    #[error("patch on {set:?} is not well defined: {first} vs {second}")]
    IllDefined {
        set: Vec<usize>,
        first: String,
        second: String,
    },
    #[error("no patch assigned to {0:?}")]
    MissingPatch(Vec<usize>),
    #[error("patch set {0:?} is not an (n-1)-subset of the nodes")]
    BadPatchSet(Vec<usize>),
    #[error("patch point {point} is not a vertex of the graph sort")]
    BadPoint { point: u32 },
    #[error("node set {0:?} is not coherent")]
    Incoherent(Vec<usize>),
    #[error("no atom satisfies the constraints for tuple {0:?}")]
    NoAtom(Vec<usize>),
    #[error("{0}")]
    Other(String),
}

impl NetworkError {
    pub fn to_json(&self) -> Value {
        match self {
            NetworkError::Invalid(v) => serde_json::to_value(v).unwrap_or(Value::Null),
            e => Value::String(e.to_string()),
        }
    }
}

/// The tuple with base-`nodes` index `idx`, coordinate 0 most significant.
pub fn tuple_at(n: usize, nodes: usize, mut idx: usize) -> Vec<usize> {
    let mut t = vec![0; n];
    for k in (0..n).rev() {
        t[k] = idx % nodes;
        idx /= nodes;
    }
    t
}

/// Inverse of [`tuple_at`].
pub fn tuple_index(nodes: usize, t: &[usize]) -> usize {
    t.iter().fold(0, |acc, &x| acc * nodes + x)
}

/// A network labelling every n-tuple of `0..nodes` with an atom index.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct UfNetwork {
    n: usize,
    nodes: usize,
    /// Labels in lexicographic tuple order.
    labels: Vec<u32>,
}

impl UfNetwork {
    pub fn new(n: usize, nodes: usize, labels: Vec<u32>) -> Result<Self, NetworkError> {
        let expected = nodes.pow(n as u32);
        if labels.len() != expected {
            return Err(NetworkError::LabelCount {
                nodes,
                expected,
                got: labels.len(),
            });
        }
        Ok(UfNetwork { n, nodes, labels })
    }

    /// The one-point network, its only tuple labelled by the atom with one class.
    pub fn initial(m: &AgsModel) -> Self {
        UfNetwork {
            n: m.n(),
            nodes: 1,
            labels: vec![m.structure().bottom_atom() as u32],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn tuple_count(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, t: &[usize]) -> usize {
        self.labels[tuple_index(self.nodes, t)] as usize
    }

    pub fn tuple(&self, idx: usize) -> Vec<usize> {
        tuple_at(self.n, self.nodes, idx)
    }

    /// Labels re-indexed for a network over `nodes ≥ self.nodes` nodes;
    /// tuples using new nodes are unlabelled.
    pub(crate) fn embed_labels(&self, nodes: usize) -> Vec<Option<u32>> {
        let mut out = vec![None; nodes.pow(self.n as u32)];
        for (idx, &l) in self.labels.iter().enumerate() {
            out[tuple_index(nodes, &self.tuple(idx))] = Some(l);
        }
        out
    }

    /// Whether `self` is the restriction of `other` to this network's nodes.
    pub fn is_subnetwork_of(&self, other: &UfNetwork) -> bool {
        self.n == other.n
            && self.nodes <= other.nodes
            && (0..self.tuple_count())
                .all(|idx| other.label(&self.tuple(idx)) == self.labels[idx] as usize)
    }
}

/// Check the network conditions on the labelled tuples of a partial labelling.
///
/// A condition relating two tuples is checked only when both are labelled.
pub fn validate_labels(
    m: &AgsModel,
    n: usize,
    nodes: usize,
    labels: &[Option<u32>],
    mode: Mode,
) -> Result<(), Violation> {
    let s = m.structure();
    let frame = m.algebra().frame();
    let size = s.len();
    for (idx, l) in labels.iter().enumerate() {
        let Some(l) = *l else { continue };
        let v = tuple_at(n, nodes, idx);
        if l as usize >= size {
            return Err(Violation::Label { tuple: v, label: l });
        }
        let atom = s.atom(l as usize);
        for i in 0..n {
            for j in i + 1..n {
                if atom.in_diagonal(i, j) != (v[i] == v[j]) {
                    return Err(Violation::Diagonal { tuple: v, i, j });
                }
            }
        }
        for i in 0..n {
            let mut w = v.clone();
            for x in 0..nodes {
                w[i] = x;
                if let Some(lw) = labels[tuple_index(nodes, &w)] {
                    if !frame.cyl_related(i, l as usize, lw as usize) {
                        return Err(Violation::Cylindric {
                            tuple: v,
                            other: w,
                            i,
                        });
                    }
                }
            }
        }
        if mode == Mode::Polyadic {
            for sigma in Transform::all(n) {
                let vs: Vec<usize> = (0..n).map(|k| v[sigma.apply(k)]).collect();
                if let Some(ls) = labels[tuple_index(nodes, &vs)] {
                    if frame.subst_point(sigma.index(), l as usize) != ls as usize {
                        return Err(Violation::Polyadic {
                            tuple: v,
                            sigma: sigma.as_slice().to_vec(),
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

/// Check every condition of `mode` over all tuples (and all maps in polyadic mode).
pub fn validate_network(m: &AgsModel, net: &UfNetwork, mode: Mode) -> Result<(), Violation> {
    let labels: Vec<Option<u32>> = net.labels.iter().map(|&l| Some(l)).collect();
    validate_labels(m, net.n, net.nodes, &labels, mode)
}

/// The kernel partition of a tuple: i ∼ j iff v_i = v_j.
pub(crate) fn kernel(v: &[usize]) -> EqRel {
    EqRel::kernel(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn k1() -> AgsModel {
        AgsModel::build(&Graph::complete(1), 3, 5000).unwrap()
    }

    #[test]
    fn tuple_indexing_roundtrips() {
        for idx in 0..64 {
            assert_eq!(tuple_index(4, &tuple_at(3, 4, idx)), idx);
        }
        assert_eq!(tuple_at(3, 2, 6), vec![1, 1, 0]);
    }

    #[test]
    fn initial_network_is_valid() {
        let m = k1();
        let net = UfNetwork::initial(&m);
        assert_eq!(validate_network(&m, &net, Mode::Polyadic), Ok(()));
    }

    #[test]
    fn wrong_label_on_constant_tuple_is_a_diagonal_violation() {
        let m = k1();
        let full = (0..m.algebra().size())
            .find(|&p| m.structure().atom(p).partition.block_count() == 3)
            .unwrap();
        let net = UfNetwork::new(3, 1, vec![full as u32]).unwrap();
        assert!(matches!(
            validate_network(&m, &net, Mode::Cylindric),
            Err(Violation::Diagonal { .. })
        ));
        assert!(matches!(
            UfNetwork::new(3, 2, vec![0; 7]),
            Err(NetworkError::LabelCount { expected: 8, .. })
        ));
    }
}
