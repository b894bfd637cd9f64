//! Patch systems: points of the graph sort assigned to (n−1)-sets of nodes.

use super::{kernel, tuple_at, validate_network, Mode, NetworkError, UfNetwork};
use crate::ags::{AgsModel, Projection};
use crate::atoms::{Atom, EqRel, Transform};
use crate::bao::Bao;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A patch system over nodes `0..nodes`. Principal ultrafilters of the
/// boolean sort are identified with their generating vertices.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PatchSystemJson", into = "PatchSystemJson")]
pub struct PatchSystem {
    n: usize,
    nodes: usize,
    patches: BTreeMap<Vec<usize>, u32>,
}

#[derive(Serialize, Deserialize)]
struct PatchEntry {
    set: Vec<usize>,
    point: u32,
}

#[derive(Serialize, Deserialize)]
struct PatchSystemJson {
    n: usize,
    nodes: usize,
    patches: Vec<PatchEntry>,
}

impl TryFrom<PatchSystemJson> for PatchSystem {
    type Error = NetworkError;

    fn try_from(j: PatchSystemJson) -> Result<Self, NetworkError> {
        let mut p = PatchSystem::new(j.n, j.nodes);
        for e in j.patches {
            p.set(&e.set, e.point)?;
        }
        Ok(p)
    }
}

impl From<PatchSystem> for PatchSystemJson {
    fn from(p: PatchSystem) -> Self {
        PatchSystemJson {
            n: p.n,
            nodes: p.nodes,
            patches: p
                .patches
                .into_iter()
                .map(|(set, point)| PatchEntry { set, point })
                .collect(),
        }
    }
}

/// All k-subsets of `0..nodes`, each sorted, in lexicographic order.
pub(crate) fn subsets(nodes: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, nodes: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for x in start..nodes {
            cur.push(x);
            go(x + 1, nodes, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, nodes, k, &mut Vec::new(), &mut out);
    out
}

fn sorted(set: &[usize]) -> Vec<usize> {
    let mut s = set.to_vec();
    s.sort_unstable();
    s
}

impl PatchSystem {
    pub fn new(n: usize, nodes: usize) -> Self {
        PatchSystem {
            n,
            nodes,
            patches: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> usize {
        self.nodes
    }

    /// Assign `point` to the (n−1)-set `set` (in any order).
    pub fn set(&mut self, set: &[usize], point: u32) -> Result<(), NetworkError> {
        let s = sorted(set);
        let distinct = s.windows(2).all(|w| w[0] < w[1]);
        if s.len() + 1 != self.n || !distinct || s.iter().any(|&x| x >= self.nodes) {
            return Err(NetworkError::BadPatchSet(set.to_vec()));
        }
        self.patches.insert(s, point);
        Ok(())
    }

    pub fn get(&self, set: &[usize]) -> Option<u32> {
        self.patches.get(&sorted(set)).copied()
    }

    fn require(&self, set: &[usize]) -> Result<u32, NetworkError> {
        self.get(set)
            .ok_or_else(|| NetworkError::MissingPatch(sorted(set)))
    }

    pub fn patches(&self) -> impl Iterator<Item = (&Vec<usize>, u32)> {
        self.patches.iter().map(|(k, &v)| (k, v))
    }

    /// The first (n−1)-set without a patch.
    pub fn missing(&self) -> Option<Vec<usize>> {
        subsets(self.nodes, self.n - 1)
            .into_iter()
            .find(|s| !self.patches.contains_key(s))
    }

    fn check_points(&self, m: &AgsModel) -> Result<(), NetworkError> {
        match self
            .patches
            .values()
            .find(|&&p| p as usize >= m.vertex_count())
        {
            Some(&point) => Err(NetworkError::BadPoint { point }),
            None => Ok(()),
        }
    }
}

/// The boundary ∂N: P({v_k : k ≠ i}) = N(v)(i) for i-distinguishing v.
///
/// Every choice of (v, i) is compared, so a violation of well-definedness is
/// reported rather than silently overwritten.
pub fn boundary(m: &AgsModel, net: &UfNetwork) -> Result<PatchSystem, NetworkError> {
    let n = net.n();
    let mut p = PatchSystem::new(n, net.nodes());
    let mut witness: BTreeMap<Vec<usize>, (Vec<usize>, usize)> = BTreeMap::new();
    for idx in 0..net.tuple_count() {
        let v = net.tuple(idx);
        for i in 0..n {
            let rest: Vec<usize> = (0..n).filter(|&k| k != i).map(|k| v[k]).collect();
            let set = sorted(&rest);
            if set.windows(2).any(|w| w[0] == w[1]) {
                continue;
            }
            let point = match m.projection(i, net.labels()[idx] as usize) {
                Projection::Ultra(x) => x,
                other => {
                    return Err(NetworkError::Other(format!(
                        "projection {i} of the label of {v:?} is {other:?}, not an ultrafilter"
                    )))
                }
            };
            match p.get(&set) {
                Some(q) if q != point => {
                    let (w, j) = &witness[&set];
                    return Err(NetworkError::IllDefined {
                        set,
                        first: format!("N({w:?})({j}) = {q}"),
                        second: format!("N({v:?})({i}) = {point}"),
                    });
                }
                Some(_) => {}
                None => {
                    p.set(&set, point)?;
                    witness.insert(set, (v.clone(), i));
                }
            }
        }
    }
    Ok(p)
}

fn faces(m: &AgsModel, p: &PatchSystem, set: &[usize]) -> Result<Vec<u32>, NetworkError> {
    let v = sorted(set);
    let distinct = v.windows(2).all(|w| w[0] < w[1]);
    if v.len() != m.n() || !distinct || v.iter().any(|&x| x >= p.nodes()) {
        return Err(NetworkError::Other(format!(
            "{set:?} is not an n-set of nodes"
        )));
    }
    p.check_points(m)?;
    (0..v.len())
        .map(|i| {
            let face: Vec<usize> = (0..v.len()).filter(|&k| k != i).map(|k| v[k]).collect();
            p.require(&face)
        })
        .collect()
}

/// Point-level coherence of an n-set V: the points assigned to its faces
/// V ∖ {v_i} do not form an independent set of the graph sort.
pub fn is_coherent(m: &AgsModel, p: &PatchSystem, set: &[usize]) -> Result<bool, NetworkError> {
    let points: Vec<usize> = faces(m, p, set)?.into_iter().map(|x| x as usize).collect();
    Ok(!m.graph().is_independent_slice(&points))
}

/// Coherence by its ultrafilter characterisation: some atom is
/// i-distinguishing with i-th projection P(V ∖ {v_i}) for every i.
pub fn coherent_by_atoms(
    m: &AgsModel,
    p: &PatchSystem,
    set: &[usize],
) -> Result<bool, NetworkError> {
    let points = faces(m, p, set)?;
    Ok((0..m.algebra().size()).any(|mu| {
        points
            .iter()
            .enumerate()
            .all(|(i, &x)| m.f(i).contains(mu) && m.projection(i, mu) == Projection::Ultra(x))
    }))
}

/// The first incoherent n-set, if any; errors if a patch is missing.
pub fn first_incoherent(m: &AgsModel, p: &PatchSystem) -> Result<Option<Vec<usize>>, NetworkError> {
    for set in subsets(p.nodes(), p.n()) {
        if !is_coherent(m, p, &set)? {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

/// An atom μ with d_ij ∈ μ iff v_i = v_j and μ(i) = P({v_k : k ≠ i}) whenever
/// v is i-distinguishing, following the three cases on |im v|.
pub fn ultrafilter_for_tuple(
    m: &AgsModel,
    p: &PatchSystem,
    v: &[usize],
) -> Result<usize, NetworkError> {
    let n = m.n();
    let s = m.structure();
    let alg = m.algebra();
    let e = kernel(v);
    if e.block_count() == n {
        // the atom is determined by its points; it exists iff im v is coherent
        let points = (0..n)
            .map(|i| {
                let face: Vec<usize> = (0..n).filter(|&k| k != i).map(|k| v[k]).collect();
                p.require(&face).map(Some)
            })
            .collect::<Result<Vec<_>, _>>()?;
        let atom = Atom {
            partition: EqRel::identity(n),
            points,
        };
        s.index_of(&atom)
            .ok_or_else(|| NetworkError::Incoherent(sorted(v)))
    } else if e.block_count() + 1 == n {
        let (i, j) = e.pair_block().expect("n - 1 classes");
        let image: Vec<usize> = (0..n).filter(|&k| k != j).map(|k| v[k]).collect();
        let beta = p.require(&image)? as usize;
        // α = { a : R_i(a·d_ij) ∈ β } is principal at the atoms q with β ∈ R_i({q}·d_ij)
        let d = alg.diag(i, j);
        let gens: Vec<usize> = d
            .iter()
            .filter(|&q| m.r(i, &alg.atom(q)).contains(beta))
            .collect();
        match gens.as_slice() {
            [q] => Ok(*q),
            _ => Err(NetworkError::NoAtom(v.to_vec())),
        }
    } else {
        let d = alg.d_partition(&e);
        match (d.count(), d.first()) {
            (1, Some(q)) => Ok(q),
            _ => Err(NetworkError::NoAtom(v.to_vec())),
        }
    }
}

/// How representatives of permutation classes of one-one tuples are chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SymmetryChoice {
    /// The lexicographically least tuple.
    Lexicographic,
    /// A seeded random member.
    Seeded(u64),
}

/// Label the unlabelled tuples of `fixed` from a patch system: one-one tuples
/// through a representative of their permutation class (a fixed member if the
/// class has one), the rest tuple by tuple.
pub(crate) fn label_from_patch(
    m: &AgsModel,
    p: &PatchSystem,
    mut labels: Vec<Option<u32>>,
    choice: SymmetryChoice,
) -> Result<UfNetwork, NetworkError> {
    let n = m.n();
    let nodes = p.nodes();
    let frame = m.algebra().frame();
    let mut rng = match choice {
        SymmetryChoice::Seeded(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        SymmetryChoice::Lexicographic => None,
    };
    let mut classes: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    for (idx, slot) in labels.iter_mut().enumerate() {
        let v = tuple_at(n, nodes, idx);
        if kernel(&v).block_count() == n {
            classes.entry(sorted(&v)).or_default().push(idx);
        } else if slot.is_none() {
            *slot = Some(ultrafilter_for_tuple(m, p, &v)? as u32);
        }
    }
    for members in classes.values() {
        if members.iter().all(|&idx| labels[idx].is_some()) {
            continue;
        }
        let rep = match members.iter().find(|&&idx| labels[idx].is_some()) {
            Some(&idx) => idx,
            None => match rng.as_mut() {
                Some(r) => members[r.gen_range(0..members.len())],
                None => members[0],
            },
        };
        let rep_tuple = tuple_at(n, nodes, rep);
        let rep_label = match labels[rep] {
            Some(l) => l as usize,
            None => ultrafilter_for_tuple(m, p, &rep_tuple)?,
        };
        labels[rep] = Some(rep_label as u32);
        for &idx in members {
            if labels[idx].is_some() {
                continue;
            }
            let u = tuple_at(n, nodes, idx);
            // u = rep ∘ σ
            let sigma: Vec<u8> = u
                .iter()
                .map(|x| rep_tuple.iter().position(|y| y == x).unwrap() as u8)
                .collect();
            let sigma = Transform::new(sigma).map_err(NetworkError::Other)?;
            labels[idx] = Some(frame.subst_point(sigma.index(), rep_label) as u32);
        }
    }
    let labels = labels
        .into_iter()
        .map(|l| l.expect("every tuple labelled"))
        .collect();
    UfNetwork::new(n, nodes, labels)
}

/// The polyadic network of a coherent patch system.
pub fn network_from_patch(
    m: &AgsModel,
    p: &PatchSystem,
    choice: SymmetryChoice,
) -> Result<UfNetwork, NetworkError> {
    if p.n() != m.n() {
        return Err(NetworkError::Dimension {
            expected: m.n(),
            got: p.n(),
        });
    }
    if let Some(set) = p.missing() {
        return Err(NetworkError::MissingPatch(set));
    }
    if let Some(set) = first_incoherent(m, p)? {
        return Err(NetworkError::Incoherent(set));
    }
    let unlabelled = vec![None; p.nodes().pow(m.n() as u32)];
    let net = label_from_patch(m, p, unlabelled, choice)?;
    validate_network(m, &net, Mode::Polyadic).map_err(NetworkError::Invalid)?;
    Ok(net)
}
